#ifndef NUEXPR_IO_HPP
#define NUEXPR_IO_HPP

#include <iosfwd>
#include <string>

#include "nuexpr/coalgebra.hpp"

namespace nuexpr {

/// Reads the JSON coalgebra format (see README). Validates shape, state
/// references, rationals and the functor-specific invariants; normalizes
/// payloads (lts dedup, dist merge, mon antichain minimization) on load.
Coalgebra read_coalgebra(std::istream& in);
Coalgebra read_coalgebra_file(const std::string& path);

/// Canonical serialization: fixed key order, two-space indent, entries in
/// carrier/payload-canonical order, trailing newline. Identical coalgebras
/// serialize byte-identically.
std::string coalgebra_to_string(const Coalgebra& c);
void write_coalgebra_file(const Coalgebra& c, const std::string& path);

/// Reads a whole file (for expression sources). Throws Error when unreadable.
std::string read_text_file(const std::string& path);

} // namespace nuexpr

#endif
