#ifndef NUEXPR_KLEENE_HPP
#define NUEXPR_KLEENE_HPP

#include "nuexpr/coalgebra.hpp"
#include "nuexpr/expr.hpp"
#include "nuexpr/semantics.hpp"

namespace nuexpr {

/// A coalgebra together with a distinguished state index.
struct PointedCoalgebra {
    Coalgebra coalgebra;
    int state = 0;
};

/// Builds the coalgebra of a flat system: one state per equation (named by
/// its variable, in system order), each mapped to the modality applied to its
/// argument states. The distinguished state is the first equation's.
PointedCoalgebra synthesize_system(const FlatSystem& system, const FunctorConfig& config);

/// flatten + synthesize_system: a finite model whose distinguished state
/// realizes the behaviour the expression describes.
PointedCoalgebra synthesize(const ExprPtr& e, const FunctorConfig& config);

/// The converse direction: a closed guarded expression for the behaviour of
/// the given state. Every state is decomposed into modality + successor
/// variables and the resulting system is solved by eliminating variables in
/// reverse declaration order (declaration order: the target state first, the
/// rest in carrier order), binding each eliminated variable with a fixpoint
/// when it occurs in its own right-hand side.
ExprPtr extract(const Coalgebra& c, int state);

/// The canonical coalgebra structure on expressions, sampled at e: the value
/// over the closure of e (states named by their canonical printed form, in
/// closure discovery order) obtained by resolving fixpoints and applying the
/// head modality to the argument expressions.
Value epsilon_step(const ExprPtr& e, const FunctorConfig& config);

/// The reachable part of the expression coalgebra from e: states are the
/// alpha-canonical expressions reachable from e by resolving heads, with
/// their epsilon values restricted to that carrier. e itself is the
/// distinguished state.
PointedCoalgebra generate_subcoalgebra(const ExprPtr& e, const FunctorConfig& config);

} // namespace nuexpr

#endif
