#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mlakit/limits.hpp"

namespace mlakit {

/// A finite multiplicative Lie algebra: a group together with a second binary
/// operation (the bracket), both given by dense n-by-n lookup tables over
/// element indices 0..n-1.  Index 0 is always the group identity.  Instances
/// are immutable after construction and safe to share across threads.
class FiniteMLA {
 public:
  FiniteMLA() = default;

  /// Wraps tables without running the law checker.  Callers must guarantee
  /// the tables already satisfy every law — either because they came out of
  /// validate_algebra or because the construction is correct by design (and
  /// covered by a test that validates the result).
  static FiniteMLA unchecked(int order, std::vector<int> mul, std::vector<int> bracket,
                             std::string name = {});

  int order() const { return n_; }
  const std::string& name() const { return name_; }

  int mul(int a, int b) const { return mul_[a * n_ + b]; }
  int bracket(int a, int b) const { return bracket_[a * n_ + b]; }
  int inv(int a) const { return inv_[a]; }

  /// Conjugation a^z = z·a·z⁻¹.  Every module must use this one helper so the
  /// left/right convention cannot drift.
  int conj(int a, int z) const { return mul(mul(z, a), inv(z)); }

  /// Group commutator [a,b] = a·b·a⁻¹·b⁻¹.
  int comm(int a, int b) const { return mul(mul(a, b), mul(inv(a), inv(b))); }

  /// a^e with e possibly negative.
  int pow(int a, long long e) const;

  /// Multiplicative order of the element.
  int element_order(int a) const;

  bool group_abelian() const;
  bool bracket_trivial() const;
  /// Abelian in the algebra sense: commutative group and trivial bracket.
  bool is_abelian_algebra() const { return group_abelian() && bracket_trivial(); }

  const std::vector<int>& mul_table() const { return mul_; }
  const std::vector<int>& bracket_table() const { return bracket_; }
  const std::vector<int>& inv_table() const { return inv_; }

 private:
  int n_ = 0;
  std::string name_;
  std::vector<int> mul_;
  std::vector<int> bracket_;
  std::vector<int> inv_;
};

/// One violated law together with the first offending tuple found (in
/// lexicographic scan order) and a message that shows the instantiated left
/// side, to aid debugging of hand-entered tables.
struct LawViolation {
  std::string law;
  std::vector<int> witness;
  std::string message;
  std::uint64_t occurrences = 0;  ///< how many tuples violate this law in total
};

struct LawReport {
  std::vector<LawViolation> violations;  ///< one entry per violated law
  std::uint64_t tuples_checked = 0;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

struct ValidationResult {
  std::optional<FiniteMLA> algebra;  ///< present iff report.ok()
  LawReport report;

  bool ok() const { return algebra.has_value(); }
};

/// Exhaustively checks that (mul, bracket) defines a multiplicative Lie
/// algebra: mul is a group table with identity at index 0, and the bracket
/// satisfies the five defining laws (alternating, the two product-expansion
/// laws, the conjugated Jacobi law, and conjugation equivariance) over all
/// triples.  O(n³); refuses orders beyond limits.hard_order.
ValidationResult validate_algebra(int order, const std::vector<int>& mul,
                                  const std::vector<int>& bracket, std::string name = {},
                                  const SearchLimits& limits = {});

/// Exhaustively checks the derived consequences of the defining laws
/// (mutual inverses, conjugation-by-bracket vs by-commutator, the
/// commutator/bracket interchange, inverted arguments, identity absorption,
/// the swap-via-conjugate identity, the three-factor expansion, and the
/// cancellation implication).  A valid algebra must pass all of them; this is
/// a consistency oracle for the validator itself.  O(n⁴) on two of the laws.
LawReport check_derived_identities(const FiniteMLA& a, const SearchLimits& limits = {});

/// True iff f (a total map on indices of `a`) sends identity to identity and
/// respects both operations pointwise.
bool is_homomorphism(const std::vector<int>& f, const FiniteMLA& a, const FiniteMLA& b);

/// Searches for a bijective homomorphism a -> b by backtracking over
/// generator images with order-profile pruning.  Returns the witness map or
/// nullopt.
std::optional<std::vector<int>> find_isomorphism(const FiniteMLA& a, const FiniteMLA& b);

/// Enumerates the full automorphism group (bijective self-maps respecting
/// both operations).  Refuses orders beyond limits.aut_enum_order.  The
/// result is sorted lexicographically, identity first.
std::vector<std::vector<int>> all_automorphisms(const FiniteMLA& a,
                                                const SearchLimits& limits = {});

/// Componentwise product on index pairs (a,b) -> a*|B|+b.  The result of a
/// product of valid algebras is valid by construction.
FiniteMLA direct_product(const FiniteMLA& a, const FiniteMLA& b,
                         const SearchLimits& limits = {});

}  // namespace mlakit
