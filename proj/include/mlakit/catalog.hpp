#pragma once

#include <string>
#include <vector>

#include "mlakit/algebra.hpp"

namespace mlakit {

/// Builders for the standard test algebras.  All group-family entries carry
/// the trivial bracket (groups embed as the trivial-bracket case); the
/// Lie-ring family has an abelian group reduct and, except for the zero
/// rings, a nontrivial bracket.  Every builder yields identity at index 0.
FiniteMLA cyclic(int n);
FiniteMLA klein4();
FiniteMLA dihedral(int n);
FiniteMLA sym3();
FiniteMLA lie_ring_zero(const std::vector<int>& orders);
FiniteMLA heisenberg_lie_ring(int p);

/// Parses a catalog key such as "cyclic(4)", "klein4", "sym(3)",
/// "lie_ring_zero(2,4)", "heisenberg_lie_ring(3)", or a nested
/// "product(cyclic(2),heisenberg_lie_ring(3))".  Throws std::invalid_argument
/// on unknown keys and SearchBoundError past size ceilings.
FiniteMLA build_catalog(const std::string& key, const SearchLimits& limits = {});

/// The key grammar, one pattern per line, for the CLI listing.
std::vector<std::string> catalog_key_patterns();

/// The fixed roster of catalog instances the test and acceptance suites
/// quantify over ("every catalog entry" always means this list).
std::vector<std::string> standard_entries();

}  // namespace mlakit
