#ifndef NUEXPR_EQUIVALENCE_HPP
#define NUEXPR_EQUIVALENCE_HPP

#include <set>
#include <utility>

#include "nuexpr/coalgebra.hpp"
#include "nuexpr/expr.hpp"

namespace nuexpr {

/// Blocks of behaviourally equivalent states. Block ids are assigned by first
/// occurrence in carrier order, so equal partitions have equal vectors.
struct Partition {
    CarrierRef carrier;
    std::vector<int> block_of;
    int block_count = 0;

    bool same_block(int x, int y) const { return block_of.at(x) == block_of.at(y); }
};

/// Coarsest partition whose blocks have equal one-step behaviour up to the
/// partition itself: refine from the trivial partition, each round grouping
/// states by map_value of their behaviour into the current block carrier,
/// until stable.
Partition behavioural_equivalence(const Coalgebra& c);

using Relation = std::set<std::pair<int, int>>;

/// Disjoint union; states renamed "l:x" / "r:y", left states first. Functors
/// (and for dfa the alphabets) must agree.
Coalgebra coproduct(const Coalgebra& a, const Coalgebra& b);

/// Behavioural equivalence of states of two coalgebras, decided by partition
/// refinement on the coproduct.
bool equivalent_states(const Coalgebra& a, int x, const Coalgebra& b, int y);

/// Brute-force transfer check: for every pair (x,y) of the relation, every
/// modality instance arising from decompose of a value in either coalgebra,
/// and every tuple of argument subsets, membership of x's behaviour implies
/// membership of y's behaviour in the relational images (and conversely).
/// Exhaustive in the subsets, hence guarded: throws unless
/// |X|+|Y| <= size_guard and every instance keeps the tuple space small.
/// Oracle-grade only; the instance bounding is not claimed complete.
bool check_lambda_bisimulation(const Coalgebra& c1, const Coalgebra& c2, const Relation& relation,
                               int size_guard = 9);

/// Greatest fixpoint of the transfer condition above, starting from the full
/// relation. Same guards and caveats as check_lambda_bisimulation.
Relation largest_lambda_bisimulation(const Coalgebra& c1, const Coalgebra& c2,
                                     int size_guard = 9);

/// Expression equivalence by the model-checking reduction: e2 must hold at
/// the distinguished state of a model synthesized from e1, and symmetrically.
bool expr_equiv(const ExprPtr& e1, const ExprPtr& e2, const FunctorConfig& config);

} // namespace nuexpr

#endif
