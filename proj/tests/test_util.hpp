#ifndef NUEXPR_TEST_UTIL_HPP
#define NUEXPR_TEST_UTIL_HPP

// Shared test machinery: bounded enumeration of values and modality
// instances, independent re-implementations of the lifting formulas (used as
// oracles against the library), exhaustive lattice fixpoint scans, and seeded
// random generators for values, coalgebras, expressions and flat systems.

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nuexpr/carrier.hpp"
#include "nuexpr/coalgebra.hpp"
#include "nuexpr/expr.hpp"
#include "nuexpr/io.hpp"
#include "nuexpr/rational.hpp"
#include "nuexpr/semantics.hpp"
#include "nuexpr/signature.hpp"
#include "nuexpr/value.hpp"

namespace nuexpr::test {

using Rng = std::mt19937;

inline std::string data_path(const std::string& name) {
    return std::string(NUEXPR_TEST_DATA_DIR) + "/" + name;
}

inline Coalgebra load_model(const std::string& name) {
    return read_coalgebra_file(data_path(name));
}

inline std::string load_text(const std::string& name) {
    return read_text_file(data_path(name));
}

inline int rand_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// runs fn, returns the thrown message (empty when nothing was thrown)
template <typename Fn>
inline std::string error_message(Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

// true iff fn throws and the message mentions `needle`
template <typename Fn>
inline bool throws_with(Fn&& fn, const std::string& needle) {
    return error_message(std::forward<Fn>(fn)).find(needle) != std::string::npos;
}

inline Rational make_rational(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline CarrierRef small_carrier(int size) {
    std::vector<std::string> names;
    for (int i = 0; i < size; ++i)
        names.push_back("s" + std::to_string(i));
    return make_carrier(std::move(names));
}

inline StateSet mask_to_set(const CarrierRef& carrier, unsigned mask) {
    StateSet set(carrier);
    for (int i = 0; i < carrier->size(); ++i)
        if (mask & (1u << i))
            set.insert(i);
    return set;
}

inline unsigned set_to_mask(const StateSet& set) {
    unsigned mask = 0;
    for (int x : set.members())
        mask |= 1u << x;
    return mask;
}

inline std::vector<StateSet> all_subsets(const CarrierRef& carrier) {
    std::vector<StateSet> out;
    for (unsigned mask = 0; mask < (1u << carrier->size()); ++mask)
        out.push_back(mask_to_set(carrier, mask));
    return out;
}

// all maps [size_from] -> [size_to], each as a vector of images
inline std::vector<std::vector<int>> all_maps(int size_from, int size_to) {
    std::vector<std::vector<int>> out;
    std::vector<int> f(size_from, 0);
    for (;;) {
        out.push_back(f);
        int i = 0;
        for (; i < size_from; ++i) {
            if (++f[i] < size_to)
                break;
            f[i] = 0;
        }
        if (i == size_from)
            break;
    }
    return out;
}

// --- bounded value enumeration ---------------------------------------------

inline std::vector<Value> all_dfa_values(const CarrierRef& carrier, const FunctorConfig& config) {
    std::vector<Value> out;
    int m = carrier->size();
    int k = static_cast<int>(config.alphabet.size());
    if (m == 0)
        return out;
    for (int output = 0; output <= 1; ++output) {
        std::vector<int> next(k, 0);
        for (;;) {
            out.push_back(Value::dfa(carrier, output, next));
            int i = 0;
            for (; i < k; ++i) {
                if (++next[i] < m)
                    break;
                next[i] = 0;
            }
            if (i == k)
                break;
        }
    }
    return out;
}

inline std::vector<Value> all_lts_values(const CarrierRef& carrier,
                                         const std::vector<std::string>& labels) {
    std::vector<std::pair<std::string, int>> pairs;
    for (const auto& label : labels)
        for (int x = 0; x < carrier->size(); ++x)
            pairs.emplace_back(label, x);
    if (pairs.size() > 16)
        throw std::runtime_error("lts enumeration too large");
    std::vector<Value> out;
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
        std::vector<std::pair<std::string, int>> successors;
        for (size_t i = 0; i < pairs.size(); ++i)
            if (mask & (1u << i))
                successors.push_back(pairs[i]);
        out.push_back(Value::lts(carrier, std::move(successors)));
    }
    return out;
}

// every distribution whose weights can be written with one denominator <= max_den
inline std::vector<Value> all_dist_values(const CarrierRef& carrier, int max_den) {
    std::vector<Value> out;
    std::set<std::string> seen;
    int m = carrier->size();
    std::vector<int> parts(m, 0);
    for (int den = 1; den <= max_den; ++den) {
        std::fill(parts.begin(), parts.end(), 0);
        // enumerate nonnegative integer vectors summing to den
        std::function<void(int, int)> fill = [&](int index, int remaining) {
            if (index == m - 1) {
                parts[index] = remaining;
                std::vector<std::pair<int, Rational>> weights;
                for (int i = 0; i < m; ++i)
                    if (parts[i] > 0)
                        weights.emplace_back(i, make_rational(parts[i], den));
                Value v = Value::dist(carrier, std::move(weights));
                if (seen.insert(v.to_string()).second)
                    out.push_back(std::move(v));
                return;
            }
            for (int k = 0; k <= remaining; ++k) {
                parts[index] = k;
                fill(index + 1, remaining - k);
            }
        };
        if (m > 0)
            fill(0, den);
    }
    return out;
}

// every neighbourhood system over the carrier (as minimal antichains)
inline std::vector<Value> all_mon_values(const CarrierRef& carrier) {
    int m = carrier->size();
    if (m > 3)
        throw std::runtime_error("mon enumeration too large");
    int subsets = 1 << m;
    std::vector<Value> out;
    std::set<std::string> seen;
    for (unsigned family = 0; family < (1u << subsets); ++family) {
        std::vector<std::vector<int>> sets;
        for (int s = 0; s < subsets; ++s) {
            if (!(family & (1u << s)))
                continue;
            std::vector<int> members;
            for (int i = 0; i < m; ++i)
                if (s & (1 << i))
                    members.push_back(i);
            sets.push_back(std::move(members));
        }
        Value v = Value::mon(carrier, std::move(sets));
        if (seen.insert(v.to_string()).second)
            out.push_back(std::move(v));
    }
    return out;
}

struct EnumBounds {
    std::vector<std::string> lts_labels = {"a", "b"};
    int dist_max_den = 4;
};

inline std::vector<Value> all_values(const FunctorConfig& config, const CarrierRef& carrier,
                                     const EnumBounds& bounds = {}) {
    switch (config.functor) {
    case Functor::Dfa: return all_dfa_values(carrier, config);
    case Functor::Lts: return all_lts_values(carrier, bounds.lts_labels);
    case Functor::Dist: return all_dist_values(carrier, bounds.dist_max_den);
    case Functor::Mon: return all_mon_values(carrier);
    }
    return {};
}

// --- bounded modality families ----------------------------------------------

inline std::vector<Modality> dfa_ops(const FunctorConfig& config) {
    int k = static_cast<int>(config.alphabet.size());
    return {Modality::dfa(0, k), Modality::dfa(1, k)};
}

inline std::vector<Modality> lts_ops(const std::vector<std::string>& labels, int max_arity) {
    std::vector<Modality> out;
    std::vector<std::vector<std::string>> level = {{}};
    out.push_back(Modality::lts({}));
    for (int len = 1; len <= max_arity; ++len) {
        std::vector<std::vector<std::string>> next;
        for (const auto& tuple : level)
            for (const auto& label : labels) {
                auto extended = tuple;
                extended.push_back(label);
                out.push_back(Modality::lts(extended));
                next.push_back(std::move(extended));
            }
        level = std::move(next);
    }
    return out;
}

// positive rational tuples summing to 1, written over one denominator <= max_den
inline std::vector<Modality> dist_ops(int max_den, int max_arity) {
    std::vector<Modality> out;
    std::set<std::string> seen;
    for (int den = 1; den <= max_den; ++den) {
        for (int n = 1; n <= std::min(max_arity, den); ++n) {
            std::vector<int> parts(n, 1);
            std::function<void(int, int)> fill = [&](int index, int remaining) {
                if (index == n - 1) {
                    parts[index] = remaining;
                    std::vector<Rational> weights;
                    for (int k : parts)
                        weights.push_back(make_rational(k, den));
                    Modality op = Modality::dist(std::move(weights));
                    if (seen.insert(op.to_string() + "/" + std::to_string(n)).second)
                        out.push_back(std::move(op));
                    return;
                }
                for (int k = 1; k + (n - index - 1) <= remaining; ++k) {
                    parts[index] = k;
                    fill(index + 1, remaining - k);
                }
            };
            fill(0, den);
        }
    }
    return out;
}

inline std::vector<Modality> mon_ops(int max_groups, int max_group_size, int max_arity) {
    std::vector<Modality> out;
    std::vector<int> sizes;
    std::function<void(int)> build = [&](int total) {
        out.push_back(Modality::mon(sizes));
        if (static_cast<int>(sizes.size()) == max_groups)
            return;
        for (int k = 0; k <= max_group_size && total + k <= max_arity; ++k) {
            sizes.push_back(k);
            build(total + k);
            sizes.pop_back();
        }
    };
    build(0);
    return out;
}

inline std::vector<Modality> op_family(const FunctorConfig& config, const EnumBounds& bounds = {}) {
    switch (config.functor) {
    case Functor::Dfa: return dfa_ops(config);
    case Functor::Lts: return lts_ops(bounds.lts_labels, 3);
    case Functor::Dist: return dist_ops(3, 3);
    case Functor::Mon: return mon_ops(2, 2, 3);
    }
    return {};
}

// --- independent oracles -----------------------------------------------------

// Literal re-evaluation of the four lifting formulas, written independently of
// the library: sets are materialized, the Dist case uses the Gale feasibility
// condition (every index subset fits inside the mass of its joint range)
// instead of a flow computation, and the Mon case quantifies over the whole
// materialized upward closure instead of the minimal sets.
inline bool oracle_contains(const Modality& op, const Value& t, const std::vector<StateSet>& args) {
    switch (op.functor()) {
    case Functor::Dfa: {
        const auto& o = op.as_dfa();
        const auto& v = t.as_dfa();
        if (v.output != o.output)
            return false;
        for (size_t i = 0; i < v.next.size(); ++i)
            if (!args.at(i).contains(v.next[i]))
                return false;
        return true;
    }
    case Functor::Lts: {
        const auto& labels = op.as_lts().labels;
        std::set<std::pair<std::string, int>> allowed;
        for (size_t i = 0; i < labels.size(); ++i)
            for (int x : args[i].members())
                allowed.emplace(labels[i], x);
        for (const auto& succ : t.as_lts().successors)
            if (!allowed.count(succ))
                return false;
        for (size_t i = 0; i < labels.size(); ++i) {
            bool hit = false;
            for (const auto& succ : t.as_lts().successors)
                if (succ.first == labels[i] && args[i].contains(succ.second)) {
                    hit = true;
                    break;
                }
            if (!hit)
                return false;
        }
        return true;
    }
    case Functor::Dist: {
        const auto& supplies = op.as_dist().weights;
        const auto& mu = t.as_dist().weights;
        int n = static_cast<int>(supplies.size());
        for (unsigned subset = 0; subset < (1u << n); ++subset) {
            Rational supply(0);
            StateSet range(t.carrier());
            for (int i = 0; i < n; ++i)
                if (subset & (1u << i)) {
                    supply += supplies[i];
                    range = range.union_with(args[i]);
                }
            Rational mass(0);
            for (const auto& [x, w] : mu)
                if (range.contains(x))
                    mass += w;
            if (supply > mass)
                return false;
        }
        return true;
    }
    case Functor::Mon: {
        int m = t.carrier()->size();
        std::vector<unsigned> min_masks;
        for (const auto& set : t.as_mon().minimal_sets) {
            unsigned mask = 0;
            for (int x : set)
                mask |= 1u << x;
            min_masks.push_back(mask);
        }
        std::vector<unsigned> closure; // every neighbourhood, as a mask
        for (unsigned b = 0; b < (1u << m); ++b)
            for (unsigned mm : min_masks)
                if ((mm & b) == mm) {
                    closure.push_back(b);
                    break;
                }
        const auto& sizes = op.as_mon().group_sizes;
        std::vector<std::pair<int, int>> groups; // (first arg index, count)
        int offset = 0;
        for (int k : sizes) {
            groups.emplace_back(offset, k);
            offset += k;
        }
        for (auto [begin, count] : groups) {
            unsigned joint = 0;
            for (int j = 0; j < count; ++j)
                joint |= set_to_mask(args[begin + j]);
            if (std::find(closure.begin(), closure.end(), joint) == closure.end())
                return false;
        }
        for (unsigned b : closure) {
            bool witnessed = false;
            for (auto [begin, count] : groups) {
                bool meets_all = true;
                for (int j = 0; j < count && meets_all; ++j)
                    if ((b & set_to_mask(args[begin + j])) == 0)
                        meets_all = false;
                if (meets_all) {
                    witnessed = true;
                    break;
                }
            }
            if (!witnessed)
                return false;
        }
        return true;
    }
    }
    return false;
}

// the paper's n=2 simplification of the Dist lifting
inline bool dist_n2_closed_form(const Rational& p1, const Rational& p2, const Value& t,
                                const StateSet& a1, const StateSet& a2) {
    auto mass = [&](const StateSet& set) {
        Rational total(0);
        for (const auto& [x, w] : t.as_dist().weights)
            if (set.contains(x))
                total += w;
        return total;
    };
    return mass(a1) >= p1 && mass(a2) >= p2 && mass(a1.union_with(a2)) == 1;
}

inline std::vector<std::vector<int>> minimize_sets_oracle(std::vector<std::vector<int>> sets) {
    for (auto& set : sets) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<std::vector<int>> kept;
    for (const auto& candidate : sets) {
        bool has_proper_subset = false;
        for (const auto& other : sets)
            if (other != candidate &&
                std::includes(candidate.begin(), candidate.end(), other.begin(), other.end()))
                has_proper_subset = true;
        if (!has_proper_subset)
            kept.push_back(candidate);
    }
    return kept;
}

// one application of the simultaneous system map at the given tuple
inline std::vector<StateSet> system_step(const FlatSystem& system, const Coalgebra& c,
                                         const std::vector<StateSet>& current) {
    std::map<std::string, int> index;
    for (size_t i = 0; i < system.equations.size(); ++i)
        index[system.equations[i].var] = static_cast<int>(i);
    std::vector<StateSet> next;
    for (const auto& eq : system.equations) {
        std::vector<StateSet> args;
        for (const auto& arg : eq.args)
            args.push_back(current.at(index.at(arg)));
        StateSet component(c.carrier);
        for (int x = 0; x < c.carrier->size(); ++x)
            if (lifting_contains(eq.op, c.at(x), args))
                component.insert(x);
        next.push_back(std::move(component));
    }
    return next;
}

// every fixpoint of the system map, by scanning the whole product lattice
inline std::vector<std::vector<StateSet>> all_system_fixpoints(const FlatSystem& system,
                                                               const Coalgebra& c) {
    int m = c.carrier->size();
    int k = static_cast<int>(system.equations.size());
    if (k * m > 16)
        throw std::runtime_error("lattice scan too large");
    std::vector<std::vector<StateSet>> fixpoints;
    std::vector<unsigned> masks(k, 0);
    for (;;) {
        std::vector<StateSet> tuple;
        for (int i = 0; i < k; ++i)
            tuple.push_back(mask_to_set(c.carrier, masks[i]));
        if (system_step(system, c, tuple) == tuple)
            fixpoints.push_back(std::move(tuple));
        int i = 0;
        for (; i < k; ++i) {
            if (++masks[i] < (1u << m))
                break;
            masks[i] = 0;
        }
        if (i == k)
            break;
    }
    return fixpoints;
}

// Exhaustive greatest-fixpoint semantics straight from the Knaster-Tarski
// characterization: the gfp is the union of all post-fixpoints. Exponential,
// independent of the library's downward iteration.
inline StateSet eval_oracle(const ExprPtr& e, const Coalgebra& c, const Valuation& valuation = {}) {
    if (const auto* var = e->as_var())
        return valuation.at(var->name);
    if (const auto* modal = e->as_modal()) {
        std::vector<StateSet> args;
        for (const auto& arg : modal->args)
            args.push_back(eval_oracle(arg, c, valuation));
        StateSet out(c.carrier);
        for (int x = 0; x < c.carrier->size(); ++x)
            if (oracle_contains(modal->op, c.at(x), args))
                out.insert(x);
        return out;
    }
    const auto* nu = e->as_nu();
    StateSet result(c.carrier);
    for (unsigned mask = 0; mask < (1u << c.carrier->size()); ++mask) {
        StateSet candidate = mask_to_set(c.carrier, mask);
        Valuation inner = valuation;
        inner.insert_or_assign(nu->var, candidate);
        if (candidate.subset_of(eval_oracle(nu->body, c, inner)))
            result = result.union_with(candidate);
    }
    return result;
}

// --- random generators -------------------------------------------------------

struct ValueBounds {
    std::vector<std::string> lts_labels = {"a", "b"};
    int lts_max_succ = 3;
    int dist_max_den = 6;
    int dist_max_support = 3;
    int mon_max_sets = 2;
    int mon_max_set_size = 2;
};

inline Value random_value(const FunctorConfig& config, const CarrierRef& carrier, Rng& rng,
                          const ValueBounds& bounds = {}) {
    int m = carrier->size();
    switch (config.functor) {
    case Functor::Dfa: {
        std::vector<int> next;
        for (size_t i = 0; i < config.alphabet.size(); ++i)
            next.push_back(rand_int(rng, 0, m - 1));
        return Value::dfa(carrier, rand_int(rng, 0, 1), std::move(next));
    }
    case Functor::Lts: {
        int count = rand_int(rng, 0, bounds.lts_max_succ);
        std::vector<std::pair<std::string, int>> successors;
        for (int i = 0; i < count; ++i)
            successors.emplace_back(
                bounds.lts_labels[rand_int(rng, 0, static_cast<int>(bounds.lts_labels.size()) - 1)],
                rand_int(rng, 0, m - 1));
        return Value::lts(carrier, std::move(successors));
    }
    case Functor::Dist: {
        int support = rand_int(rng, 1, std::min(m, bounds.dist_max_support));
        std::vector<int> states(m);
        for (int i = 0; i < m; ++i)
            states[i] = i;
        std::shuffle(states.begin(), states.end(), rng);
        states.resize(support);
        int den = rand_int(rng, support, std::max(support, bounds.dist_max_den));
        // a random composition of den into `support` positive parts
        std::vector<int> cuts = {0};
        if (support > 1) {
            std::vector<int> inner(den - 1);
            for (int i = 0; i < den - 1; ++i)
                inner[i] = i + 1;
            std::shuffle(inner.begin(), inner.end(), rng);
            inner.resize(support - 1);
            std::sort(inner.begin(), inner.end());
            cuts.insert(cuts.end(), inner.begin(), inner.end());
        }
        cuts.push_back(den);
        std::vector<std::pair<int, Rational>> weights;
        for (int i = 0; i < support; ++i)
            weights.emplace_back(states[i], make_rational(cuts[i + 1] - cuts[i], den));
        return Value::dist(carrier, std::move(weights));
    }
    case Functor::Mon: {
        int count = rand_int(rng, 0, bounds.mon_max_sets);
        std::vector<std::vector<int>> sets;
        for (int i = 0; i < count; ++i) {
            int size = rand_int(rng, 1, std::min(m, bounds.mon_max_set_size));
            std::vector<int> members;
            for (int j = 0; j < size; ++j)
                members.push_back(rand_int(rng, 0, m - 1));
            sets.push_back(std::move(members));
        }
        return Value::mon(carrier, std::move(sets));
    }
    }
    throw std::runtime_error("corrupt functor tag");
}

inline Coalgebra random_coalgebra(const FunctorConfig& config, int size, Rng& rng,
                                  const ValueBounds& bounds = {}) {
    CarrierRef carrier = small_carrier(size);
    std::vector<Value> structure;
    for (int x = 0; x < size; ++x)
        structure.push_back(random_value(config, carrier, rng, bounds));
    return Coalgebra{config, carrier, std::move(structure), std::nullopt};
}

inline Modality random_modality(const FunctorConfig& config, Rng& rng,
                                const ValueBounds& bounds = {}) {
    switch (config.functor) {
    case Functor::Dfa:
        return Modality::dfa(rand_int(rng, 0, 1), static_cast<int>(config.alphabet.size()));
    case Functor::Lts: {
        int arity = rand_int(rng, 0, 3);
        std::vector<std::string> labels;
        for (int i = 0; i < arity; ++i)
            labels.push_back(
                bounds.lts_labels[rand_int(rng, 0, static_cast<int>(bounds.lts_labels.size()) - 1)]);
        return Modality::lts(std::move(labels));
    }
    case Functor::Dist: {
        int arity = rand_int(rng, 1, 3);
        int den = rand_int(rng, arity, std::max(arity, 4));
        std::vector<int> cuts = {0};
        if (arity > 1) {
            std::vector<int> inner(den - 1);
            for (int i = 0; i < den - 1; ++i)
                inner[i] = i + 1;
            std::shuffle(inner.begin(), inner.end(), rng);
            inner.resize(arity - 1);
            std::sort(inner.begin(), inner.end());
            cuts.insert(cuts.end(), inner.begin(), inner.end());
        }
        cuts.push_back(den);
        std::vector<Rational> weights;
        for (int i = 0; i < arity; ++i)
            weights.push_back(make_rational(cuts[i + 1] - cuts[i], den));
        return Modality::dist(std::move(weights));
    }
    case Functor::Mon: {
        int groups = rand_int(rng, 0, 2);
        std::vector<int> sizes;
        int total = 0;
        for (int i = 0; i < groups; ++i) {
            int k = rand_int(rng, 0, std::min(2, 3 - total));
            sizes.push_back(k);
            total += k;
        }
        return Modality::mon(std::move(sizes));
    }
    }
    throw std::runtime_error("corrupt functor tag");
}

// Random members of the admissible class: closed (variables are only drawn
// from enclosing binders) and guarded (only binders already separated by a
// modality are eligible as leaves).
class ExprGen {
public:
    ExprGen(const FunctorConfig& config, Rng& rng, int max_binders, int max_depth,
            ValueBounds bounds = {})
        : config_(config), rng_(rng), binders_left_(max_binders), max_depth_(max_depth),
          bounds_(std::move(bounds)) {}

    ExprPtr generate() { return gen({}, 0); }

private:
    const FunctorConfig& config_;
    Rng& rng_;
    int binders_left_;
    int max_depth_;
    ValueBounds bounds_;
    int fresh_ = 0;

    std::string fresh_name() { return "z" + std::to_string(fresh_++); }

    ExprPtr ground() {
        switch (config_.functor) {
        case Functor::Lts:
            return make_modal(Modality::lts({}), {});
        case Functor::Mon:
            return make_modal(Modality::mon({}), {});
        case Functor::Dfa: {
            std::string z = fresh_name();
            int k = static_cast<int>(config_.alphabet.size());
            std::vector<ExprPtr> args(k, make_var(z));
            return make_nu(z, make_modal(Modality::dfa(rand_int(rng_, 0, 1), k), std::move(args)));
        }
        case Functor::Dist: {
            std::string z = fresh_name();
            return make_nu(z, make_modal(Modality::dist({Rational(1)}), {make_var(z)}));
        }
        }
        throw std::runtime_error("corrupt functor tag");
    }

    ExprPtr gen(std::vector<std::pair<std::string, bool>> env, int depth) {
        std::vector<std::string> usable;
        for (const auto& [name, guarded] : env)
            if (guarded)
                usable.push_back(name);
        if (depth >= max_depth_) {
            if (!usable.empty())
                return make_var(usable[rand_int(rng_, 0, static_cast<int>(usable.size()) - 1)]);
            return ground();
        }
        int roll = rand_int(rng_, 0, 9);
        if (binders_left_ > 0 && roll < 3) {
            --binders_left_;
            std::string z = fresh_name();
            auto inner = env;
            inner.emplace_back(z, false);
            return make_nu(z, gen(std::move(inner), depth));
        }
        if (!usable.empty() && roll >= 8)
            return make_var(usable[rand_int(rng_, 0, static_cast<int>(usable.size()) - 1)]);
        Modality op = random_modality(config_, rng_, bounds_);
        for (auto& entry : env)
            entry.second = true;
        std::vector<ExprPtr> args;
        for (int i = 0; i < op.arity(); ++i)
            args.push_back(gen(env, depth + 1));
        return make_modal(op, std::move(args));
    }
};

inline ExprPtr random_expr(const FunctorConfig& config, Rng& rng, int max_binders = 3,
                           int max_depth = 4, const ValueBounds& bounds = {}) {
    ExprPtr e = ExprGen(config, rng, max_binders, max_depth, bounds).generate();
    auto wf = check_wellformed(e);
    if (!wf.ok())
        throw std::runtime_error("generator produced an inadmissible expression: " + wf.diagnostic);
    return e;
}

inline FlatSystem random_flat_system(const FunctorConfig& config, int k, Rng& rng,
                                     const ValueBounds& bounds = {}) {
    std::vector<std::string> vars;
    for (int i = 0; i < k; ++i)
        vars.push_back("z" + std::to_string(i));
    FlatSystem system;
    for (int i = 0; i < k; ++i) {
        Modality op = random_modality(config, rng, bounds);
        std::vector<std::string> args;
        for (int j = 0; j < op.arity(); ++j)
            args.push_back(vars[rand_int(rng, 0, k - 1)]);
        system.equations.push_back({vars[i], std::move(op), std::move(args)});
    }
    return system;
}

// --- shared configurations and corpus ----------------------------------------

inline FunctorConfig dfa_config() { return FunctorConfig{Functor::Dfa, {"a", "b"}}; }
inline FunctorConfig lts_config() { return FunctorConfig{Functor::Lts, {}}; }
inline FunctorConfig dist_config() { return FunctorConfig{Functor::Dist, {}}; }
inline FunctorConfig mon_config() { return FunctorConfig{Functor::Mon, {}}; }

inline std::vector<FunctorConfig> all_configs() {
    return {dfa_config(), lts_config(), dist_config(), mon_config()};
}

struct CorpusCase {
    FunctorConfig config;
    ExprPtr expr;
};

// fixed expressions (worked examples and edge shapes) plus seeded random ones
inline std::vector<CorpusCase> expression_corpus(int random_per_functor = 10) {
    std::vector<CorpusCase> corpus;
    auto add = [&](const FunctorConfig& config, const std::string& text) {
        corpus.push_back({config, parse_expr(text, config)});
    };
    add(dfa_config(), "nu x1. [1](x1, nu x2. [0](x2, x1))");
    add(dfa_config(), "nu v. [0](v, v)");
    add(dfa_config(), "nu v. [1](v, v)");
    add(lts_config(), "nu x. [a]([a,b,a](x, [], []))");
    add(lts_config(), "[]");
    add(lts_config(), "nu x. [a](x)");
    add(lts_config(), "nu x. [a,b](x, [])");
    add(dist_config(), "nu x. [2/3,1/3](x, nu y. [1/6,1/3,1/2](x, y, nu z. [1/4,3/4](x, z)))");
    add(dist_config(), "nu z. [1](z)");
    add(dist_config(), "nu x. [1/2,1/2](x, nu y. [1](y))");
    add(mon_config(), "nu x. [1](x)");
    add(mon_config(), "nu x. [2,1](x, x, x)");
    add(mon_config(), "[]");
    add(mon_config(), "nu x. [1,1](x, nu y. [2](y, x))");
    for (const auto& config : all_configs()) {
        Rng rng(1000 + static_cast<int>(config.functor));
        for (int i = 0; i < random_per_functor; ++i)
            corpus.push_back({config, random_expr(config, rng)});
    }
    return corpus;
}

} // namespace nuexpr::test

#endif
