#include "nuexpr/kleene.hpp"

#include <deque>
#include <unordered_map>

#include "nuexpr/errors.hpp"
#include "nuexpr/signature.hpp"

namespace nuexpr {

namespace {

void check_op_config(const Modality& op, const FunctorConfig& config) {
    if (op.functor() != config.functor)
        throw Error("modality " + op.to_string() + " is for functor " +
                    functor_name(op.functor()) + ", requested functor is " +
                    functor_name(config.functor));
    if (op.functor() == Functor::Dfa &&
        op.as_dfa().arity != static_cast<int>(config.alphabet.size()))
        throw Error("dfa modality arity " + std::to_string(op.as_dfa().arity) +
                    " does not match alphabet size " + std::to_string(config.alphabet.size()));
}

// Peels fixpoints off the head of an admissible closed expression until a
// modal application appears. Each unfolding shortens the binder prefix.
ExprPtr resolve_head(ExprPtr e) {
    while (e->as_nu())
        e = unfold(e);
    if (!e->as_modal())
        throw Error("expression has no modal head (not closed and guarded?)");
    return e;
}

} // namespace

PointedCoalgebra synthesize_system(const FlatSystem& system, const FunctorConfig& config) {
    if (system.equations.empty())
        throw Error("empty equation system");
    std::vector<std::string> names;
    std::unordered_map<std::string, int> index;
    for (const auto& eq : system.equations) {
        if (!index.emplace(eq.var, static_cast<int>(names.size())).second)
            throw Error("duplicate system variable '" + eq.var + "'");
        names.push_back(eq.var);
    }
    CarrierRef carrier = make_carrier(names);
    std::vector<Value> structure;
    for (const auto& eq : system.equations) {
        check_op_config(eq.op, config);
        std::vector<int> args;
        for (const auto& name : eq.args) {
            auto it = index.find(name);
            if (it == index.end())
                throw Error("undefined variable '" + name + "' in system");
            args.push_back(it->second);
        }
        structure.push_back(singleton_apply(eq.op, args, carrier));
    }
    Coalgebra c{config, carrier, std::move(structure), 0};
    validate_coalgebra(c);
    return PointedCoalgebra{std::move(c), 0};
}

PointedCoalgebra synthesize(const ExprPtr& e, const FunctorConfig& config) {
    return synthesize_system(flatten(e), config);
}

ExprPtr extract(const Coalgebra& c, int state) {
    validate_coalgebra(c);
    if (state < 0 || state >= c.carrier->size())
        throw Error("state index out of range");

    // declaration order: the requested state first, the rest in carrier order
    std::vector<int> order{state};
    for (int x = 0; x < c.carrier->size(); ++x)
        if (x != state)
            order.push_back(x);

    std::vector<std::string> vars;
    std::vector<ExprPtr> rhs;
    for (int x : order) {
        vars.push_back(c.carrier->name(x));
        auto [op, args] = decompose(c.at(x));
        std::vector<ExprPtr> arg_exprs;
        for (int a : args)
            arg_exprs.push_back(make_var(c.carrier->name(a)));
        rhs.push_back(make_modal(std::move(op), std::move(arg_exprs)));
    }

    // Gaussian elimination in reverse declaration order; binding is only
    // needed when the variable recurs in its own equation
    for (int j = static_cast<int>(order.size()) - 1; j >= 1; --j) {
        ExprPtr replacement =
            free_vars(rhs[j]).count(vars[j]) ? make_nu(vars[j], rhs[j]) : rhs[j];
        for (int i = 0; i < j; ++i)
            rhs[i] = substitute(rhs[i], vars[j], replacement);
    }
    return free_vars(rhs[0]).count(vars[0]) ? make_nu(vars[0], rhs[0]) : rhs[0];
}

Value epsilon_step(const ExprPtr& e, const FunctorConfig& config) {
    auto closure = fischer_ladner_closure(e);
    std::unordered_map<std::string, int> index;
    std::vector<std::string> names;
    for (const auto& member : closure) {
        index.emplace(alpha_key(member), static_cast<int>(names.size()));
        names.push_back(print_expr(member));
    }
    CarrierRef carrier = make_carrier(names);

    auto head = resolve_head(closure.front());
    const auto* m = head->as_modal();
    check_op_config(m->op, config);
    std::vector<int> args;
    for (const auto& a : m->args) {
        auto it = index.find(alpha_key(alpha_canonicalize(a)));
        if (it == index.end())
            throw Error("argument escaped the closure");
        args.push_back(it->second);
    }
    return singleton_apply(m->op, args, carrier);
}

PointedCoalgebra generate_subcoalgebra(const ExprPtr& e, const FunctorConfig& config) {
    std::vector<ExprPtr> states;
    std::vector<std::pair<Modality, std::vector<int>>> steps;
    std::unordered_map<std::string, int> index;
    std::deque<int> pending;

    auto intern = [&](const ExprPtr& candidate) {
        auto canon = alpha_canonicalize(candidate);
        auto [it, fresh] = index.emplace(alpha_key(canon), static_cast<int>(states.size()));
        if (fresh) {
            states.push_back(canon);
            pending.push_back(it->second);
        }
        return it->second;
    };

    intern(e);
    // pending indices arrive in order, so steps grows in lockstep
    while (!pending.empty()) {
        int current = pending.front();
        pending.pop_front();
        auto head = resolve_head(states[current]);
        const auto* m = head->as_modal();
        check_op_config(m->op, config);
        std::vector<int> args;
        for (const auto& a : m->args)
            args.push_back(intern(a));
        steps.emplace_back(m->op, std::move(args));
        if (states.size() > 100000)
            throw Error("reachable expression set did not stabilize");
    }

    std::vector<std::string> names;
    for (const auto& s : states)
        names.push_back(print_expr(s));
    CarrierRef carrier = make_carrier(names);
    std::vector<Value> structure;
    for (const auto& [op, args] : steps)
        structure.push_back(singleton_apply(op, args, carrier));
    Coalgebra c{config, carrier, std::move(structure), 0};
    validate_coalgebra(c);
    return PointedCoalgebra{std::move(c), 0};
}

} // namespace nuexpr
