#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nuexpr/equivalence.hpp"
#include "nuexpr/errors.hpp"
#include "nuexpr/expr.hpp"
#include "nuexpr/io.hpp"
#include "nuexpr/kleene.hpp"
#include "nuexpr/semantics.hpp"
#include "nuexpr/signature.hpp"

namespace {

using namespace nuexpr;

struct ConfigFlags {
    std::string functor;
    std::string alphabet;
    std::string labels;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
    cmd->add_option("-f,--functor", flags.functor, "Behaviour functor: dfa, lts, dist or mon")
        ->required();
    cmd->add_option("-a,--alphabet", flags.alphabet,
                    "Comma-separated dfa alphabet (fixes modality arity)");
    cmd->add_option("--labels", flags.labels,
                    "Comma-separated lts label declaration (validation only)");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

FunctorConfig make_config(const ConfigFlags& flags) {
    FunctorConfig config{functor_from_name(flags.functor), {}};
    if (config.functor == Functor::Dfa)
        config.alphabet = split_list(flags.alphabet);
    else if (!flags.alphabet.empty())
        throw Error("--alphabet only applies to the dfa functor");
    return config;
}

ExprPtr load_expression(const std::string& path, const FunctorConfig& config) {
    std::string text = read_text_file(path);
    try {
        return parse_expr(text, config);
    } catch (const ParseError& err) {
        throw Error(path + ":" + err.what());
    }
}

ExprPtr load_admissible(const std::string& path, const FunctorConfig& config) {
    ExprPtr e = load_expression(path, config);
    auto wf = check_wellformed(e);
    if (!wf.ok())
        throw Error(path + ": " + wf.diagnostic);
    return e;
}

void check_labels(const ExprPtr& e, const FunctorConfig& config, const std::string& labels) {
    if (config.functor != Functor::Lts || labels.empty())
        return;
    auto declared = split_list(labels);
    std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& node) {
        if (const auto* nu = node->as_nu()) {
            walk(nu->body);
        } else if (const auto* m = node->as_modal()) {
            for (const auto& label : m->op.as_lts().labels)
                if (std::find(declared.begin(), declared.end(), label) == declared.end())
                    throw Error("label '" + label + "' not in the declared label list");
            for (const auto& a : m->args)
                walk(a);
        }
    };
    walk(e);
}

void print_states(const StateSet& satisfied) {
    for (int x : satisfied.members())
        std::cout << satisfied.carrier()->name(x) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Behaviour expressions over dfa/lts/dist/mon coalgebras"};
    app.require_subcommand(1);

    // parse
    ConfigFlags parse_flags;
    std::string parse_file;
    bool parse_flat = false, parse_closure = false;
    auto* cmd_parse = app.add_subcommand("parse", "Check and normalize an expression");
    add_config_flags(cmd_parse, parse_flags);
    cmd_parse->add_option("expr-file", parse_file, "Expression file")->required();
    cmd_parse->add_flag("--flat", parse_flat, "Also print the flat equation system");
    cmd_parse->add_flag("--closure", parse_closure, "Also print the closure members");

    // eval
    std::string eval_expr_file, eval_coalg_file;
    bool eval_flat = false, eval_oracle = false;
    auto* cmd_eval = app.add_subcommand("eval", "Evaluate an expression over a coalgebra file");
    cmd_eval->add_option("expr-file", eval_expr_file, "Expression file")->required();
    cmd_eval->add_option("coalgebra-file", eval_coalg_file, "Coalgebra file")->required();
    cmd_eval->add_flag("--flat", eval_flat, "Print every component of the flat-system gfp");
    cmd_eval->add_flag("--oracle", eval_oracle,
                       "Cross-check the result against the flat-system gfp");

    // synthesize
    ConfigFlags synth_flags;
    std::string synth_file, synth_out;
    auto* cmd_synth = app.add_subcommand("synthesize", "Build a coalgebra from an expression");
    add_config_flags(cmd_synth, synth_flags);
    cmd_synth->add_option("expr-file", synth_file, "Expression file")->required();
    cmd_synth->add_option("-o,--output", synth_out, "Output file (stdout when omitted)");

    // extract
    std::string extract_coalg, extract_state, extract_out;
    auto* cmd_extract = app.add_subcommand("extract", "Characteristic expression of a state");
    cmd_extract->add_option("coalgebra-file", extract_coalg, "Coalgebra file")->required();
    cmd_extract->add_option("state", extract_state, "State name")->required();
    cmd_extract->add_option("-o,--output", extract_out, "Output file (stdout when omitted)");

    // equiv
    ConfigFlags equiv_flags;
    std::string equiv_e1, equiv_e2;
    bool equiv_oracle = false;
    auto* cmd_equiv = app.add_subcommand("equiv", "Decide equivalence of two expressions");
    add_config_flags(cmd_equiv, equiv_flags);
    cmd_equiv->add_option("expr-file-1", equiv_e1, "First expression file")->required();
    cmd_equiv->add_option("expr-file-2", equiv_e2, "Second expression file")->required();
    cmd_equiv->add_flag("--oracle", equiv_oracle,
                        "Cross-check with the brute-force bisimulation oracle");

    CLI11_PARSE(app, argc, argv);

    if (cmd_parse->parsed()) {
        FunctorConfig config = make_config(parse_flags);
        ExprPtr e = load_expression(parse_file, config);
        auto wf = check_wellformed(e);
        if (!wf.ok())
            throw Error(parse_file + ": " + wf.diagnostic);
        check_labels(e, config, parse_flags.labels);
        std::cout << print_expr(alpha_canonicalize(e)) << "\n";
        if (parse_flat)
            std::cout << print_system(flatten(e));
        if (parse_closure)
            for (const auto& member : fischer_ladner_closure(e))
                std::cout << print_expr(member) << "\n";
        return 0;
    }

    if (cmd_eval->parsed()) {
        Coalgebra c = read_coalgebra_file(eval_coalg_file);
        ExprPtr e = load_admissible(eval_expr_file, c.config);
        StateSet satisfied = eval(e, c);
        if (eval_flat || eval_oracle) {
            FlatSystem system = flatten(e);
            auto components = eval_system(system, c);
            if (eval_oracle && components.front() != satisfied)
                throw Error("direct evaluation disagrees with the flat-system gfp");
            if (eval_flat) {
                for (size_t i = 0; i < components.size(); ++i)
                    std::cout << system.equations[i].var << " = "
                              << components[i].to_string() << "\n";
                return 0;
            }
        }
        print_states(satisfied);
        return 0;
    }

    if (cmd_synth->parsed()) {
        FunctorConfig config = make_config(synth_flags);
        ExprPtr e = load_admissible(synth_file, config);
        check_labels(e, config, synth_flags.labels);
        PointedCoalgebra result = synthesize(e, config);
        if (synth_out.empty())
            std::cout << coalgebra_to_string(result.coalgebra);
        else
            write_coalgebra_file(result.coalgebra, synth_out);
        return 0;
    }

    if (cmd_extract->parsed()) {
        Coalgebra c = read_coalgebra_file(extract_coalg);
        auto index = c.carrier->find(extract_state);
        if (!index)
            throw Error(extract_coalg + ": unknown state '" + extract_state + "'");
        std::string text = print_expr(extract(c, *index)) + "\n";
        if (extract_out.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(extract_out);
            if (!out)
                throw Error("cannot open '" + extract_out + "' for writing");
            out << text;
        }
        return 0;
    }

    FunctorConfig config = make_config(equiv_flags);
    ExprPtr e1 = load_admissible(equiv_e1, config);
    ExprPtr e2 = load_admissible(equiv_e2, config);
    check_labels(e1, config, equiv_flags.labels);
    check_labels(e2, config, equiv_flags.labels);
    bool equivalent = expr_equiv(e1, e2, config);
    if (equiv_oracle) {
        PointedCoalgebra m1 = synthesize(e1, config);
        PointedCoalgebra m2 = synthesize(e2, config);
        Relation bisim = largest_lambda_bisimulation(m1.coalgebra, m2.coalgebra);
        bool oracle_verdict = bisim.count({m1.state, m2.state}) > 0;
        if (oracle_verdict != equivalent)
            throw Error("bisimulation oracle disagrees with the model-checking reduction");
    }
    std::cout << (equivalent ? "equivalent" : "inequivalent") << "\n";
    return equivalent ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
}
