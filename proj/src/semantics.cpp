#include "nuexpr/semantics.hpp"

#include <unordered_map>
#include <unordered_set>

#include "nuexpr/errors.hpp"
#include "nuexpr/signature.hpp"

namespace nuexpr {

namespace {

void check_op_compatible(const Modality& op, const FunctorConfig& config) {
    if (op.functor() != config.functor)
        throw Error("modality " + op.to_string() + " is for functor " +
                    functor_name(op.functor()) + ", coalgebra is for " +
                    functor_name(config.functor));
    if (op.functor() == Functor::Dfa &&
        op.as_dfa().arity != static_cast<int>(config.alphabet.size()))
        throw Error("dfa modality arity " + std::to_string(op.as_dfa().arity) +
                    " does not match alphabet size " + std::to_string(config.alphabet.size()));
}

struct EvalEngine {
    const Coalgebra& c;
    FreeVarTable free_of;
    // keyed by node pointer plus the relevant part of the valuation; safe
    // because evaluation is a pure function of those
    std::unordered_map<std::string, StateSet> memo;

    std::string cache_key(const ExprPtr& e, const Valuation& valuation) {
        std::string key = std::to_string(reinterpret_cast<uintptr_t>(e.get()));
        for (const auto& name : free_of(e)) {
            auto it = valuation.find(name);
            if (it == valuation.end())
                throw Error("unbound variable '" + name + "'");
            key += ";" + name + "=";
            for (int x = 0; x < c.carrier->size(); ++x)
                key += it->second.contains(x) ? '1' : '0';
        }
        return key;
    }

    StateSet run(const ExprPtr& e, const Valuation& valuation) {
        if (const auto* v = e->as_var()) {
            auto it = valuation.find(v->name);
            if (it == valuation.end())
                throw Error("unbound variable '" + v->name + "'");
            return it->second;
        }
        std::string key = cache_key(e, valuation);
        auto hit = memo.find(key);
        if (hit != memo.end())
            return hit->second;

        StateSet result(c.carrier);
        if (const auto* nu = e->as_nu()) {
            StateSet current = StateSet::full(c.carrier);
            bool stable = false;
            // downward iteration stabilizes within |X| + 1 rounds
            for (int round = 0; !stable && round <= c.carrier->size() + 2; ++round) {
                Valuation inner = valuation;
                inner.insert_or_assign(nu->var, current);
                StateSet next = run(nu->body, inner);
                stable = next == current;
                current = next;
            }
            if (!stable)
                throw Error("fixpoint iteration did not stabilize");
            result = current;
        } else {
            const auto* m = e->as_modal();
            check_op_compatible(m->op, c.config);
            std::vector<StateSet> arg_sets;
            for (const auto& a : m->args)
                arg_sets.push_back(run(a, valuation));
            for (int x = 0; x < c.carrier->size(); ++x)
                if (lifting_contains(m->op, c.at(x), arg_sets))
                    result.insert(x);
        }
        memo.emplace(std::move(key), result);
        return result;
    }
};

} // namespace

StateSet eval(const ExprPtr& e, const Coalgebra& c, const Valuation& valuation) {
    EvalEngine engine{c, {}, {}};
    return engine.run(e, valuation);
}

// --- flattening --------------------------------------------------------

namespace {

void collect_binders(const ExprPtr& e, std::unordered_set<const Expr*>& visited,
                     std::unordered_map<std::string, const Expr*>& owner, bool& duplicate) {
    if (!visited.insert(e.get()).second)
        return;
    if (const auto* nu = e->as_nu()) {
        auto [it, fresh] = owner.emplace(nu->var, e.get());
        if (!fresh && it->second != e.get())
            duplicate = true;
        collect_binders(nu->body, visited, owner, duplicate);
    } else if (const auto* m = e->as_modal()) {
        for (const auto& a : m->args)
            collect_binders(a, visited, owner, duplicate);
    }
}

bool has_duplicate_binders(const ExprPtr& e) {
    std::unordered_set<const Expr*> visited;
    std::unordered_map<std::string, const Expr*> owner;
    bool duplicate = false;
    collect_binders(e, visited, owner, duplicate);
    return duplicate;
}

ExprPtr freshen_binders(const ExprPtr& e, std::set<std::string>& used) {
    if (e->as_var())
        return e;
    if (const auto* nu = e->as_nu()) {
        std::string name = nu->var;
        while (used.count(name))
            name += "'";
        used.insert(name);
        ExprPtr body = nu->body;
        if (name != nu->var)
            body = substitute(body, nu->var, make_var(name));
        return make_nu(name, freshen_binders(body, used));
    }
    const auto* m = e->as_modal();
    std::vector<ExprPtr> args;
    for (const auto& a : m->args)
        args.push_back(freshen_binders(a, used));
    return make_modal(m->op, std::move(args));
}

// Collapses binder chains (nu x. nu y. b becomes nu x. b[y:=x], sound because
// both describe the diagonal of the same two-argument fixpoint) and drops
// constant binders (nu x. u with u another variable). Afterwards every
// fixpoint body is a modal application. Assumes distinct binder names.
// Memoized by node so that subtrees shared by substitution stay shared;
// the builder below relies on that to emit one equation per shared binder.
ExprPtr simplify_fixpoints(const ExprPtr& e,
                           std::unordered_map<const Expr*, ExprPtr>& memo) {
    if (e->as_var())
        return e;
    auto hit = memo.find(e.get());
    if (hit != memo.end())
        return hit->second;
    ExprPtr result;
    if (const auto* m = e->as_modal()) {
        std::vector<ExprPtr> args;
        for (const auto& a : m->args)
            args.push_back(simplify_fixpoints(a, memo));
        result = make_modal(m->op, std::move(args));
    } else {
        const auto* nu = e->as_nu();
        ExprPtr body = simplify_fixpoints(nu->body, memo);
        while (const auto* inner = body->as_nu())
            body = substitute(inner->body, inner->var, make_var(nu->var));
        if (const auto* v = body->as_var()) {
            if (v->name == nu->var)
                throw Error("unguarded occurrence of '" + v->name + "'");
            result = body;
        } else {
            result = make_nu(nu->var, body);
        }
    }
    memo.emplace(e.get(), result);
    return result;
}

struct FlattenBuilder {
    std::vector<FlatEquation> equations;
    std::set<std::string> used;
    std::unordered_map<const Expr*, std::string> emitted;
    int counter = 0;

    std::string fresh_name() {
        std::string name;
        do {
            name = "_" + std::to_string(counter++);
        } while (used.count(name));
        used.insert(name);
        return name;
    }

    std::string emit(const ExprPtr& e) {
        if (const auto* v = e->as_var())
            return v->name;
        auto hit = emitted.find(e.get());
        if (hit != emitted.end())
            return hit->second;

        std::string var;
        const ModalExpr* m = nullptr;
        if (const auto* nu = e->as_nu()) {
            var = nu->var;
            m = nu->body->as_modal();
            if (!m)
                throw Error("fixpoint body is not a modal application after simplification");
        } else {
            var = fresh_name();
            m = e->as_modal();
        }
        size_t index = equations.size();
        equations.push_back(FlatEquation{var, m->op, {}});
        emitted.emplace(e.get(), var);
        std::vector<std::string> args;
        for (const auto& a : m->args)
            args.push_back(emit(a));
        equations[index].args = std::move(args);
        return var;
    }
};

void collect_binder_names(const ExprPtr& e, std::unordered_set<const Expr*>& visited,
                          std::set<std::string>& names) {
    if (!visited.insert(e.get()).second)
        return;
    if (const auto* nu = e->as_nu()) {
        names.insert(nu->var);
        collect_binder_names(nu->body, visited, names);
    } else if (const auto* m = e->as_modal()) {
        for (const auto& a : m->args)
            collect_binder_names(a, visited, names);
    }
}

} // namespace

FlatSystem flatten(const ExprPtr& e) {
    auto wf = check_wellformed(e);
    if (!wf.ok())
        throw Error("expression not admissible: " + wf.diagnostic);

    ExprPtr prepared = e;
    if (has_duplicate_binders(prepared)) {
        std::set<std::string> used;
        prepared = freshen_binders(prepared, used);
    }
    std::unordered_map<const Expr*, ExprPtr> simplify_memo;
    prepared = simplify_fixpoints(prepared, simplify_memo);

    FlattenBuilder builder;
    std::unordered_set<const Expr*> visited;
    collect_binder_names(prepared, visited, builder.used);
    builder.emit(prepared);
    return FlatSystem{std::move(builder.equations)};
}

std::vector<StateSet> eval_system(const FlatSystem& system, const Coalgebra& c) {
    if (system.equations.empty())
        throw Error("empty equation system");
    std::unordered_map<std::string, int> index;
    for (size_t i = 0; i < system.equations.size(); ++i)
        if (!index.emplace(system.equations[i].var, static_cast<int>(i)).second)
            throw Error("duplicate system variable '" + system.equations[i].var + "'");

    std::vector<std::vector<int>> arg_indices;
    for (const auto& eq : system.equations) {
        check_op_compatible(eq.op, c.config);
        if (static_cast<size_t>(eq.op.arity()) != eq.args.size())
            throw Error("equation for '" + eq.var + "' has wrong arity");
        std::vector<int> ids;
        for (const auto& name : eq.args) {
            auto it = index.find(name);
            if (it == index.end())
                throw Error("undefined variable '" + name + "' in system");
            ids.push_back(it->second);
        }
        arg_indices.push_back(std::move(ids));
    }

    size_t k = system.equations.size();
    std::vector<StateSet> current(k, StateSet::full(c.carrier));
    // the iterate can only shrink, so it stabilizes within k * |X| + 1 rounds
    size_t budget = k * static_cast<size_t>(c.carrier->size()) + 2;
    for (size_t round = 0; round <= budget; ++round) {
        std::vector<StateSet> next;
        next.reserve(k);
        for (size_t i = 0; i < k; ++i) {
            std::vector<StateSet> args;
            for (int j : arg_indices[i])
                args.push_back(current[j]);
            StateSet out(c.carrier);
            for (int x = 0; x < c.carrier->size(); ++x)
                if (lifting_contains(system.equations[i].op, c.at(x), args))
                    out.insert(x);
            next.push_back(std::move(out));
        }
        if (next == current)
            return current;
        current = std::move(next);
    }
    throw Error("system iteration did not stabilize");
}

std::string print_system(const FlatSystem& system) {
    std::string out;
    for (const auto& eq : system.equations) {
        out += eq.var + " = " + eq.op.to_string();
        if (!eq.args.empty()) {
            out += "(";
            for (size_t i = 0; i < eq.args.size(); ++i) {
                if (i)
                    out += ", ";
                out += eq.args[i];
            }
            out += ")";
        }
        out += "\n";
    }
    return out;
}

} // namespace nuexpr
