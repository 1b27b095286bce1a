#include "nuexpr/coalgebra.hpp"

#include "nuexpr/errors.hpp"

namespace nuexpr {

void validate_coalgebra(const Coalgebra& c) {
    if (!c.carrier)
        throw Error("coalgebra without carrier");
    if (static_cast<int>(c.structure.size()) != c.carrier->size())
        throw Error("coalgebra has " + std::to_string(c.structure.size()) + " values for " +
                    std::to_string(c.carrier->size()) + " states");
    for (int i = 0; i < c.carrier->size(); ++i) {
        const Value& v = c.structure[i];
        if (v.functor() != c.config.functor)
            throw Error("state '" + c.carrier->name(i) + "' carries a " +
                        functor_name(v.functor()) + " value in a " +
                        functor_name(c.config.functor) + " coalgebra");
        if (v.carrier() != c.carrier && !(v.carrier()->names() == c.carrier->names()))
            throw Error("state '" + c.carrier->name(i) + "' carries a value over a different carrier");
        if (c.config.functor == Functor::Dfa &&
            v.as_dfa().next.size() != c.config.alphabet.size())
            throw Error("state '" + c.carrier->name(i) + "' has " +
                        std::to_string(v.as_dfa().next.size()) + " successors for an alphabet of size " +
                        std::to_string(c.config.alphabet.size()));
    }
    if (c.initial && (*c.initial < 0 || *c.initial >= c.carrier->size()))
        throw Error("initial state index out of range");
    if (c.config.functor == Functor::Dfa) {
        for (size_t i = 0; i < c.config.alphabet.size(); ++i)
            for (size_t j = i + 1; j < c.config.alphabet.size(); ++j)
                if (c.config.alphabet[i] == c.config.alphabet[j])
                    throw Error("duplicate alphabet letter '" + c.config.alphabet[i] + "'");
    }
}

} // namespace nuexpr
