#ifndef NUEXPR_SIGNATURE_HPP
#define NUEXPR_SIGNATURE_HPP

#include <vector>

#include "nuexpr/carrier.hpp"
#include "nuexpr/value.hpp"

namespace nuexpr {

/// The value a modality denotes on a tuple of single states: the unique
/// element of T{x_1,..,x_n} (seen in TX) whose behaviour is exactly
/// "op applied to those states".
///   dfa  [b]        -> output b, letter i goes to args[i]
///   lts  [a_1..a_n] -> {(a_i, args[i])}
///   dist [p_1..p_n] -> sum of p_i on args[i] (repeats merge)
///   mon  [k_1..k_m] -> minimal sets {args in group i} (then minimized)
Value singleton_apply(const Modality& op, const std::vector<int>& args, CarrierRef carrier);

/// Membership t in op(A_1,..,A_n): the n-ary predicate lifting the modality
/// names, applied to subsets of the carrier of t.
///   dfa:  t.output = b and next(a_i) in A_i for every alphabet position i
///   lts:  every successor (a,x) has some i with a = a_i, x in A_i, and every
///         i has such a successor
///   dist: the mass of t can be split into pieces w_i with |w_i| = p_i and
///         support(w_i) contained in A_i (decided by exact max-flow)
///   mon:  every group union is a neighbourhood, and every neighbourhood
///         meets all argument sets of some group
bool lifting_contains(const Modality& op, const Value& t, const std::vector<StateSet>& args);

/// Inverse of singleton_apply on arbitrary values: the canonical
/// (modality, flat argument list) presentation of t. Argument order follows
/// the value's canonical payload order.
std::pair<Modality, std::vector<int>> decompose(const Value& t);

/// Functorial action T(f): relabels t along the state map f into the target
/// carrier, renormalizing (lts dedup, dist merge, mon re-minimization).
/// f is given as a vector indexed by the source carrier.
Value map_value(const Value& t, const std::vector<int>& f, CarrierRef target);

/// Feasibility of the transportation problem at the heart of the dist
/// lifting: can supplies p_i (summing to 1) be shipped to the states so that
/// supply i only reaches nodes enabled in allowed[i] and state x receives
/// exactly demand[x]? Exposed for testing; runs Edmonds-Karp on rationals.
bool transport_feasible(const std::vector<Rational>& supplies,
                        const std::vector<std::vector<bool>>& allowed,
                        const std::vector<Rational>& demands);

} // namespace nuexpr

#endif
