#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mlakit {

/// Ceilings for the exhaustive computations.  Every enumeration that could
/// blow up consults one of these and throws SearchBoundError instead of
/// running away; callers surface that as a resource condition, never as a
/// mathematical verdict.
struct SearchLimits {
  /// validate_algebra refuses tables larger than this outright.
  int hard_order = 256;
  /// Default ceiling for enumeration-heavy helpers (quotients, products).
  int soft_order = 64;
  /// Ceiling for ideal-lattice enumeration.
  int ideal_enum_order = 64;
  /// Ceiling for full automorphism-group enumeration.
  int aut_enum_order = 24;
  /// Ceiling on candidate maps h: Q -> I explored by equivalence searches.
  std::uint64_t map_search_candidates = 10'000'000;
  /// Ceiling on |Aut I| * |Aut Q| when filtering automorphism pairs.
  std::uint64_t pair_candidates = 1'000'000;
  /// Ceiling on the backtracking frontier of the cocycle census.
  std::uint64_t census_candidates = 10'000'000;
  /// Worker count for partitionable scans; results never depend on it.
  int threads = 1;
};

/// Thrown when an exhaustive search or construction would exceed its
/// configured ceiling.  Carries the frontier size that was about to be
/// explored so reports can state exactly what was refused.
class SearchBoundError : public std::runtime_error {
 public:
  SearchBoundError(const std::string& what, std::uint64_t frontier)
      : std::runtime_error(what), frontier_(frontier) {}

  std::uint64_t frontier() const { return frontier_; }

 private:
  std::uint64_t frontier_;
};

/// base^exp, saturating just above `cap` so frontier estimates can be
/// compared against a ceiling without overflow.
inline std::uint64_t saturating_power(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t v = 1;
  for (int k = 0; k < exp; ++k) {
    if (v > cap / (base > 0 ? base : 1)) return cap + 1;
    v *= base;
  }
  return v;
}

}  // namespace mlakit
