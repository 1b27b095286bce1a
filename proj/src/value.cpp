#include "nuexpr/value.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "nuexpr/errors.hpp"

namespace nuexpr {

std::string functor_name(Functor functor) {
    switch (functor) {
    case Functor::Dfa: return "dfa";
    case Functor::Lts: return "lts";
    case Functor::Dist: return "dist";
    case Functor::Mon: return "mon";
    }
    throw Error("corrupt functor tag");
}

Functor functor_from_name(const std::string& name) {
    if (name == "dfa")
        return Functor::Dfa;
    if (name == "lts")
        return Functor::Lts;
    if (name == "dist")
        return Functor::Dist;
    if (name == "mon")
        return Functor::Mon;
    throw Error("unknown functor '" + name + "' (expected dfa, lts, dist or mon)");
}

namespace {

void check_state(const CarrierRef& carrier, int index) {
    if (index < 0 || index >= carrier->size())
        throw Error("state index " + std::to_string(index) + " out of range");
}

} // namespace

Value Value::dfa(CarrierRef carrier, int output, std::vector<int> next) {
    if (output != 0 && output != 1)
        throw Error("dfa output must be 0 or 1");
    for (int s : next)
        check_state(carrier, s);
    return Value(Functor::Dfa, std::move(carrier), DfaValue{output, std::move(next)});
}

Value Value::lts(CarrierRef carrier, std::vector<std::pair<std::string, int>> successors) {
    for (auto& [label, s] : successors) {
        if (label.empty())
            throw Error("empty transition label");
        check_state(carrier, s);
    }
    std::sort(successors.begin(), successors.end());
    successors.erase(std::unique(successors.begin(), successors.end()), successors.end());
    return Value(Functor::Lts, std::move(carrier), LtsValue{std::move(successors)});
}

Value Value::dist(CarrierRef carrier, std::vector<std::pair<int, Rational>> weights) {
    std::vector<Rational> mass(carrier->size(), Rational(0));
    for (auto& [s, w] : weights) {
        check_state(carrier, s);
        if (w < 0)
            throw Error("negative probability " + rational_to_string(w));
        mass[s] += w;
    }
    Rational total = std::accumulate(mass.begin(), mass.end(), Rational(0));
    if (total != 1)
        throw Error("distribution weights sum to " + rational_to_string(total) + ", not 1");
    std::vector<std::pair<int, Rational>> canon;
    for (int s = 0; s < carrier->size(); ++s)
        if (mass[s] != 0)
            canon.emplace_back(s, mass[s]);
    return Value(Functor::Dist, std::move(carrier), DistValue{std::move(canon)});
}

Value Value::mon(CarrierRef carrier, std::vector<std::vector<int>> sets) {
    for (auto& set : sets) {
        for (int s : set)
            check_state(carrier, s);
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    return Value(Functor::Mon, std::move(carrier), MonValue{minimize_antichain(std::move(sets))});
}

std::vector<std::vector<int>> minimize_antichain(std::vector<std::vector<int>> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    auto contains_all = [](const std::vector<int>& big, const std::vector<int>& small) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    std::vector<std::vector<int>> minimal;
    for (size_t i = 0; i < sets.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < sets.size() && !dominated; ++j)
            if (j != i && contains_all(sets[i], sets[j]) && sets[i] != sets[j])
                dominated = true;
        if (!dominated)
            minimal.push_back(sets[i]);
    }
    return minimal;
}

const DfaValue& Value::as_dfa() const {
    if (functor_ != Functor::Dfa)
        throw Error("value is not a dfa value");
    return std::get<DfaValue>(payload_);
}

const LtsValue& Value::as_lts() const {
    if (functor_ != Functor::Lts)
        throw Error("value is not an lts value");
    return std::get<LtsValue>(payload_);
}

const DistValue& Value::as_dist() const {
    if (functor_ != Functor::Dist)
        throw Error("value is not a dist value");
    return std::get<DistValue>(payload_);
}

const MonValue& Value::as_mon() const {
    if (functor_ != Functor::Mon)
        throw Error("value is not a mon value");
    return std::get<MonValue>(payload_);
}

bool Value::operator==(const Value& other) const {
    if (functor_ != other.functor_)
        return false;
    if (carrier_ != other.carrier_ && !(carrier_->names() == other.carrier_->names()))
        throw Error("comparing values over different carriers");
    return payload_ == other.payload_;
}

std::string Value::to_string() const {
    const auto& c = *carrier_;
    switch (functor_) {
    case Functor::Dfa: {
        const auto& v = as_dfa();
        std::string out = "(" + std::to_string(v.output);
        for (int s : v.next)
            out += ", " + c.name(s);
        return out + ")";
    }
    case Functor::Lts: {
        const auto& v = as_lts();
        std::string out = "{";
        for (size_t i = 0; i < v.successors.size(); ++i) {
            if (i)
                out += ", ";
            out += "(" + v.successors[i].first + ", " + c.name(v.successors[i].second) + ")";
        }
        return out + "}";
    }
    case Functor::Dist: {
        const auto& v = as_dist();
        std::string out = "{";
        for (size_t i = 0; i < v.weights.size(); ++i) {
            if (i)
                out += ", ";
            out += c.name(v.weights[i].first) + ": " + rational_to_string(v.weights[i].second);
        }
        return out + "}";
    }
    case Functor::Mon: {
        const auto& v = as_mon();
        std::string out = "{";
        for (size_t i = 0; i < v.minimal_sets.size(); ++i) {
            if (i)
                out += ", ";
            out += "{";
            for (size_t j = 0; j < v.minimal_sets[i].size(); ++j) {
                if (j)
                    out += ", ";
                out += c.name(v.minimal_sets[i][j]);
            }
            out += "}";
        }
        return out + "}";
    }
    }
    throw Error("corrupt functor tag");
}

Modality Modality::dfa(int output, int arity) {
    if (output != 0 && output != 1)
        throw Error("dfa modality output must be 0 or 1");
    if (arity < 0)
        throw Error("negative arity");
    return Modality(Functor::Dfa, DfaOp{output, arity});
}

Modality Modality::lts(std::vector<std::string> labels) {
    for (const auto& label : labels)
        if (label.empty())
            throw Error("empty label in lts modality");
    return Modality(Functor::Lts, LtsOp{std::move(labels)});
}

Modality Modality::dist(std::vector<Rational> weights) {
    Rational total(0);
    for (const auto& w : weights) {
        if (w <= 0)
            throw Error("dist modality weights must be positive");
        total += w;
    }
    if (total != 1)
        throw Error("dist modality weights sum to " + rational_to_string(total) + ", not 1");
    return Modality(Functor::Dist, DistOp{std::move(weights)});
}

Modality Modality::mon(std::vector<int> group_sizes) {
    for (int k : group_sizes)
        if (k < 0)
            throw Error("negative group size in mon modality");
    return Modality(Functor::Mon, MonOp{std::move(group_sizes)});
}

int Modality::arity() const {
    switch (functor_) {
    case Functor::Dfa: return as_dfa().arity;
    case Functor::Lts: return static_cast<int>(as_lts().labels.size());
    case Functor::Dist: return static_cast<int>(as_dist().weights.size());
    case Functor::Mon: {
        const auto& sizes = as_mon().group_sizes;
        return std::accumulate(sizes.begin(), sizes.end(), 0);
    }
    }
    throw Error("corrupt functor tag");
}

const DfaOp& Modality::as_dfa() const {
    if (functor_ != Functor::Dfa)
        throw Error("modality is not a dfa modality");
    return std::get<DfaOp>(payload_);
}

const LtsOp& Modality::as_lts() const {
    if (functor_ != Functor::Lts)
        throw Error("modality is not an lts modality");
    return std::get<LtsOp>(payload_);
}

const DistOp& Modality::as_dist() const {
    if (functor_ != Functor::Dist)
        throw Error("modality is not a dist modality");
    return std::get<DistOp>(payload_);
}

const MonOp& Modality::as_mon() const {
    if (functor_ != Functor::Mon)
        throw Error("modality is not a mon modality");
    return std::get<MonOp>(payload_);
}

bool Modality::operator==(const Modality& other) const {
    return functor_ == other.functor_ && payload_ == other.payload_;
}

std::string Modality::to_string() const {
    std::string body;
    switch (functor_) {
    case Functor::Dfa:
        body = std::to_string(as_dfa().output);
        break;
    case Functor::Lts: {
        const auto& labels = as_lts().labels;
        for (size_t i = 0; i < labels.size(); ++i) {
            if (i)
                body += ",";
            body += labels[i];
        }
        break;
    }
    case Functor::Dist: {
        const auto& ws = as_dist().weights;
        for (size_t i = 0; i < ws.size(); ++i) {
            if (i)
                body += ",";
            body += rational_to_string(ws[i]);
        }
        break;
    }
    case Functor::Mon: {
        const auto& sizes = as_mon().group_sizes;
        for (size_t i = 0; i < sizes.size(); ++i) {
            if (i)
                body += ",";
            body += std::to_string(sizes[i]);
        }
        break;
    }
    }
    return "[" + body + "]";
}

} // namespace nuexpr
