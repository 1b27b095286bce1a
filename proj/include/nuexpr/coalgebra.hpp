#ifndef NUEXPR_COALGEBRA_HPP
#define NUEXPR_COALGEBRA_HPP

#include <optional>
#include <vector>

#include "nuexpr/carrier.hpp"
#include "nuexpr/value.hpp"

namespace nuexpr {

/// A finite coalgebra: a carrier plus one behaviour value per state.
struct Coalgebra {
    FunctorConfig config;
    CarrierRef carrier;
    std::vector<Value> structure; // indexed like the carrier
    std::optional<int> initial;

    const Value& at(int state) const { return structure.at(state); }
};

/// Checks internal consistency (one value per state, matching functor,
/// dfa arity = alphabet size, initial in range). Throws Error on violation.
void validate_coalgebra(const Coalgebra& c);

} // namespace nuexpr

#endif
