#ifndef NUEXPR_SEMANTICS_HPP
#define NUEXPR_SEMANTICS_HPP

#include <map>
#include <string>
#include <vector>

#include "nuexpr/coalgebra.hpp"
#include "nuexpr/expr.hpp"

namespace nuexpr {

/// Assigns a set of states to each free variable.
using Valuation = std::map<std::string, StateSet>;

/// The set of states satisfying e: modalities via lifting membership,
/// fixpoints as greatest fixpoints computed by downward iteration from the
/// full carrier. Free variables must be covered by the valuation.
StateSet eval(const ExprPtr& e, const Coalgebra& c, const Valuation& valuation = {});

/// One equation of a flat system: var = op(arg variables).
struct FlatEquation {
    std::string var;
    Modality op;
    std::vector<std::string> args;
};

/// A simultaneous greatest-fixpoint system. The first equation's variable is
/// the distinguished one.
struct FlatSystem {
    std::vector<FlatEquation> equations;

    const std::string& distinguished() const { return equations.front().var; }
};

/// Rewrites a closed guarded expression into an equivalent flat equation
/// system: one equation per fixpoint binder plus fresh variables (_0, _1, ..)
/// for modalities not directly under a binder, in preorder. Nested binder
/// chains (nu x. nu y. ..) are collapsed onto a single variable first.
FlatSystem flatten(const ExprPtr& e);

/// The greatest solution of the system over c, iterated simultaneously from
/// the full carrier; one component per equation, in system order.
std::vector<StateSet> eval_system(const FlatSystem& system, const Coalgebra& c);

/// "x = [1](x, _0)" lines, one per equation, in system order.
std::string print_system(const FlatSystem& system);

} // namespace nuexpr

#endif
