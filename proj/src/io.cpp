#include "nuexpr/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nuexpr/errors.hpp"
#include "nuexpr/rational.hpp"

namespace nuexpr {

using json = nlohmann::ordered_json;

namespace {

const json& require(const json& doc, const std::string& key) {
    if (!doc.contains(key))
        throw Error("missing field '" + key + "'");
    return doc.at(key);
}

std::string string_field(const json& value, const std::string& what) {
    if (!value.is_string())
        throw Error(what + " must be a string");
    return value.get<std::string>();
}

std::vector<std::string> string_list(const json& value, const std::string& what) {
    if (!value.is_array())
        throw Error(what + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto& item : value)
        out.push_back(string_field(item, what + " entry"));
    return out;
}

Value read_value(const json& entry, Functor functor, const FunctorConfig& config,
                 const CarrierRef& carrier, const std::string& state) {
    auto state_index = [&](const json& j, const std::string& what) {
        return carrier->index_of(string_field(j, what));
    };
    const std::string where = "transitions for '" + state + "'";
    switch (functor) {
    case Functor::Dfa: {
        if (!entry.is_object())
            throw Error(where + " must be an object with 'out' and 'next'");
        const json& out_field = require(entry, "out");
        if (!out_field.is_number_integer())
            throw Error(where + ": 'out' must be 0 or 1");
        int output = out_field.get<int>();
        const json& next_field = require(entry, "next");
        if (!next_field.is_object())
            throw Error(where + ": 'next' must be an object keyed by letters");
        std::vector<int> next;
        for (const auto& letter : config.alphabet) {
            if (!next_field.contains(letter))
                throw Error(where + ": missing successor for letter '" + letter + "'");
            next.push_back(state_index(next_field.at(letter), where + " successor"));
        }
        if (next_field.size() != config.alphabet.size())
            throw Error(where + ": unknown letter in 'next'");
        return Value::dfa(carrier, output, std::move(next));
    }
    case Functor::Lts: {
        if (!entry.is_array())
            throw Error(where + " must be a list of [label, state] pairs");
        std::vector<std::pair<std::string, int>> successors;
        for (const auto& pair : entry) {
            if (!pair.is_array() || pair.size() != 2)
                throw Error(where + ": each entry must be a [label, state] pair");
            successors.emplace_back(string_field(pair.at(0), where + " label"),
                                    state_index(pair.at(1), where + " successor"));
        }
        return Value::lts(carrier, std::move(successors));
    }
    case Functor::Dist: {
        if (!entry.is_array())
            throw Error(where + " must be a list of [rational, state] pairs");
        std::vector<std::pair<int, Rational>> weights;
        for (const auto& pair : entry) {
            if (!pair.is_array() || pair.size() != 2)
                throw Error(where + ": each entry must be a [rational, state] pair");
            Rational w;
            try {
                w = parse_rational(string_field(pair.at(0), where + " weight"));
            } catch (const Error& err) {
                throw Error(where + ": " + err.what());
            }
            weights.emplace_back(state_index(pair.at(1), where + " target"), w);
        }
        try {
            return Value::dist(carrier, std::move(weights));
        } catch (const Error& err) {
            throw Error(where + ": " + err.what());
        }
    }
    case Functor::Mon: {
        if (!entry.is_array())
            throw Error(where + " must be a list of state lists");
        std::vector<std::vector<int>> sets;
        for (const auto& set : entry) {
            if (!set.is_array())
                throw Error(where + ": each neighbourhood must be a list of states");
            std::vector<int> members;
            for (const auto& s : set)
                members.push_back(state_index(s, where + " member"));
            sets.push_back(std::move(members));
        }
        return Value::mon(carrier, std::move(sets));
    }
    }
    throw Error("corrupt functor tag");
}

} // namespace

Coalgebra read_coalgebra(std::istream& in) {
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& err) {
        throw Error(std::string("invalid JSON: ") + err.what());
    }
    if (!doc.is_object())
        throw Error("coalgebra file must be a JSON object");

    Functor functor = functor_from_name(string_field(require(doc, "functor"), "'functor'"));
    FunctorConfig config{functor, {}};
    if (functor == Functor::Dfa)
        config.alphabet = string_list(require(doc, "alphabet"), "'alphabet'");

    std::vector<std::string> states = string_list(require(doc, "states"), "'states'");
    CarrierRef carrier = make_carrier(states);

    std::vector<std::string> declared_labels;
    bool has_declared_labels = functor == Functor::Lts && doc.contains("labels");
    if (has_declared_labels)
        declared_labels = string_list(doc.at("labels"), "'labels'");

    const json& transitions = require(doc, "transitions");
    if (!transitions.is_object())
        throw Error("'transitions' must be an object keyed by state");
    for (const auto& [key, entry] : transitions.items()) {
        (void)entry;
        if (!carrier->find(key))
            throw Error("transitions mention unknown state '" + key + "'");
    }

    std::vector<Value> structure;
    for (const auto& name : carrier->names()) {
        if (!transitions.contains(name))
            throw Error("missing transitions for state '" + name + "'");
        structure.push_back(read_value(transitions.at(name), functor, config, carrier, name));
    }

    if (has_declared_labels)
        for (const auto& value : structure)
            for (const auto& [label, target] : value.as_lts().successors) {
                (void)target;
                if (std::find(declared_labels.begin(), declared_labels.end(), label) ==
                    declared_labels.end())
                    throw Error("label '" + label + "' not in the declared label list");
            }

    std::optional<int> initial;
    if (doc.contains("initial"))
        initial = carrier->index_of(string_field(doc.at("initial"), "'initial'"));

    Coalgebra c{config, carrier, std::move(structure), initial};
    validate_coalgebra(c);
    return c;
}

Coalgebra read_coalgebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    try {
        return read_coalgebra(in);
    } catch (const Error& err) {
        throw Error(path + ": " + err.what());
    }
}

namespace {

// json-escaped string literal
std::string quoted(const std::string& text) {
    return json(text).dump();
}

std::string name_list(const CarrierRef& carrier, const std::vector<int>& members) {
    std::string out = "[";
    for (size_t i = 0; i < members.size(); ++i) {
        if (i)
            out += ", ";
        out += quoted(carrier->name(members[i]));
    }
    return out + "]";
}

std::string transition_entry(const Coalgebra& c, int state) {
    const Value& v = c.at(state);
    switch (c.config.functor) {
    case Functor::Dfa: {
        std::string out = "{\"out\": " + std::to_string(v.as_dfa().output) + ", \"next\": {";
        for (size_t i = 0; i < c.config.alphabet.size(); ++i) {
            if (i)
                out += ", ";
            out += quoted(c.config.alphabet[i]) + ": " +
                   quoted(c.carrier->name(v.as_dfa().next[i]));
        }
        return out + "}}";
    }
    case Functor::Lts: {
        std::string out = "[";
        const auto& succ = v.as_lts().successors;
        for (size_t i = 0; i < succ.size(); ++i) {
            if (i)
                out += ", ";
            out += "[" + quoted(succ[i].first) + ", " + quoted(c.carrier->name(succ[i].second)) +
                   "]";
        }
        return out + "]";
    }
    case Functor::Dist: {
        std::string out = "[";
        const auto& weights = v.as_dist().weights;
        for (size_t i = 0; i < weights.size(); ++i) {
            if (i)
                out += ", ";
            out += "[" + quoted(rational_to_string(weights[i].second)) + ", " +
                   quoted(c.carrier->name(weights[i].first)) + "]";
        }
        return out + "]";
    }
    case Functor::Mon: {
        std::string out = "[";
        const auto& sets = v.as_mon().minimal_sets;
        for (size_t i = 0; i < sets.size(); ++i) {
            if (i)
                out += ", ";
            out += name_list(c.carrier, sets[i]);
        }
        return out + "]";
    }
    }
    throw Error("corrupt functor tag");
}

} // namespace

std::string coalgebra_to_string(const Coalgebra& c) {
    validate_coalgebra(c);
    std::string out = "{\n";
    out += "  \"functor\": " + quoted(functor_name(c.config.functor)) + ",\n";
    if (c.config.functor == Functor::Dfa) {
        out += "  \"alphabet\": [";
        for (size_t i = 0; i < c.config.alphabet.size(); ++i) {
            if (i)
                out += ", ";
            out += quoted(c.config.alphabet[i]);
        }
        out += "],\n";
    }
    std::vector<int> all;
    for (int x = 0; x < c.carrier->size(); ++x)
        all.push_back(x);
    out += "  \"states\": " + name_list(c.carrier, all) + ",\n";
    out += "  \"transitions\": {";
    for (int x = 0; x < c.carrier->size(); ++x) {
        out += x ? ",\n    " : "\n    ";
        out += quoted(c.carrier->name(x)) + ": " + transition_entry(c, x);
    }
    out += c.carrier->size() ? "\n  }" : "}";
    if (c.initial)
        out += ",\n  \"initial\": " + quoted(c.carrier->name(*c.initial));
    out += "\n}\n";
    return out;
}

void write_coalgebra_file(const Coalgebra& c, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    out << coalgebra_to_string(c);
    if (!out)
        throw Error("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace nuexpr
