#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlakit/extension.hpp"
#include "mlakit/subset.hpp"

namespace mlakit {

/// Raised when an operation of the abelian-kernel theory is handed a kernel
/// that is not abelian (commutative group with trivial bracket).
class NotAbelianKernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Action terms χ = {σ, τ, ν} for a datum (Q, I): the conjugation action and
/// the two bracket actions, i.e. a 2-cocycle stripped of its factor sets.
struct ActionTerms {
  FiniteMLA Q;
  FiniteMLA I;
  std::vector<std::vector<int>> sigma;  ///< Q-index → permutation table of I
  std::vector<int> tau;                 ///< Q×I → I, row-major
  std::vector<int> nu;                  ///< Q×I → I, row-major

  int sig(int x, int a) const { return sigma[x][a]; }
  int tv(int x, int a) const { return tau[x * I.order() + a]; }
  int nv(int x, int a) const { return nu[x * I.order() + a]; }

  /// σ, τ, ν concatenated; the canonical comparison key.
  std::vector<int> flat() const;
};

ActionTerms trivial_action(const FiniteMLA& q, const FiniteMLA& i);
ActionTerms action_terms_of(const Cocycle2& c);

/// The two factor sets of the abelian theory, with fixed action terms kept
/// alongside in the datum's ActionTerms.  Pointwise addition in I makes the
/// compatible ones an abelian group.
struct FactorSet {
  std::vector<int> T;   ///< Q×Q → I, row-major
  std::vector<int> Tf;  ///< Q×Q → I, row-major

  /// T ++ Tf; the canonical comparison key.
  std::vector<int> flat() const;

  bool operator==(const FactorSet&) const = default;
};

FactorSet zero_factor_set(int q_order);
FactorSet factor_set_from_flat(const std::vector<int>& flat, int q_order);
FactorSet add_factor_sets(const FactorSet& a, const FactorSet& b, const FiniteMLA& i);
FactorSet negate_factor_set(const FactorSet& a, const FiniteMLA& i);

/// Reassembles a full 2-cocycle from action terms and factor sets.
Cocycle2 cocycle_with_factor_sets(const ActionTerms& chi, const FactorSet& fs);

/// χ is compatible iff the semidirect product I ⋊_χ Q (zero factor sets)
/// validates.  Throws NotAbelianKernelError when I is not abelian.
bool check_action_compatibility(const ActionTerms& chi, LawReport* report = nullptr,
                                const SearchLimits& limits = {});

/// The 2-coboundary of h: Q → I (h(1) = 1 required):
///   G(x,y)   = h(x) + σ_x(h(y)) − h(x·y)
///   G_f(x,y) = τ_x(h(y)) + h(x) + h(y) + σ_{{x,y}}(ν_y(h(x)) − h(x) − h(y)) − h({x,y})
FactorSet coboundary_from(const ActionTerms& chi, const std::vector<int>& h);

/// Reference oracle: scans every normalized table pair outright and keeps
/// those whose crossed product validates.  Exponential; the correctness
/// baseline for the pruned enumerator below.
std::vector<FactorSet> scan_compatible_factor_sets(const ActionTerms& chi,
                                                   const SearchLimits& limits = {});

/// Production enumerator: backtracks over T cells with the group-layer
/// propagation rule T(x,y) + T(xy,z) = σ_x(T(y,z)) + T(x,yz) applied as soon
/// as an instance is fully determined, then over T_f cells, validating
/// leaves by construction.  Same output as the scan, in the same order.
std::vector<FactorSet> enumerate_compatible_factor_sets(const ActionTerms& chi,
                                                        const SearchLimits& limits = {});

/// A finite abelian group presented on canonical class representatives.
struct AbelianGroupPresentation {
  std::vector<std::vector<int>> elements;  ///< sorted canonical representatives
  std::vector<int> add;                    ///< order×order table of element indices
  int zero = 0;                            ///< index of the identity class
  std::vector<int> invariant_factors;      ///< ascending divisibility chain

  int order() const { return static_cast<int>(elements.size()); }
};

/// Quotient of a finite abelian group (given by its member list, closed under
/// `add_fn` — asserted) by a subgroup of it.  Class representatives are the
/// lexicographically least coset members; invariant factors come from
/// repeated extraction of a maximal-order element.
AbelianGroupPresentation present_quotient(
    const std::vector<std::vector<int>>& members,
    const std::vector<std::vector<int>>& subgroup,
    const std::function<std::vector<int>(const std::vector<int>&, const std::vector<int>&)>&
        add_fn);

struct H2Result {
  AbelianGroupPresentation group;     ///< elements are flat factor sets
  std::vector<FactorSet> class_reps;  ///< aligned with group.elements
};

/// H²(Q, I, χ): compatible factor sets modulo coboundaries.
H2Result h2_group(const ActionTerms& chi, const SearchLimits& limits = {});

/// A 1-cocycle d: Q → I of the datum, witnessing the null 2-coboundary:
///   d(x·y) = d(x) + σ_x(d(y))
///   d({x,y}) = τ_x(d(y)) + d(x) + d(y) + σ_{{x,y}}(ν_y(d(x)) − d(x) − d(y))
struct Derivation {
  std::vector<int> d;  ///< Q → I

  bool operator==(const Derivation&) const = default;
};

bool is_derivation(const ActionTerms& chi, const std::vector<int>& d);

/// Exhaustive scan over maps with d(1) = 1; sorted lexicographically.
std::vector<Derivation> derivations(const ActionTerms& chi, const SearchLimits& limits = {});

/// {d_a : a ∈ I} with d_a(x) = a − σ_x(a), deduplicated and sorted.
std::vector<Derivation> principal_derivations(const ActionTerms& chi);

/// H¹(Q, I, χ) = Der/PDer.
AbelianGroupPresentation h1_group(const ActionTerms& chi, const SearchLimits& limits = {});

/// H⁰(Q, I, χ) = {a ∈ I : σ_x(a) = a for all x}, as a subset of I.
Subset h0_set(const ActionTerms& chi);

/// A total-algebra automorphism γ with (id_I, γ, id_Q) an automorphism of
/// the exact sequence, together with the map d_γ defined by
/// γ(a, x) = ⟨a + d_γ(x), x⟩.
struct StabilizingAutomorphism {
  std::vector<int> phi;  ///< permutation of the total algebra
  std::vector<int> d;    ///< Q → I
};

/// All stabilizing automorphisms of an abelian-kernel extension in
/// crossed-product coordinates (kernel embedded as ⟨a,1⟩ = a·|Q|, projection
/// onto the second coordinate); sorted by d.  The d tables are exactly the
/// derivations of the extracted action terms.
std::vector<StabilizingAutomorphism> stabilizing_automorphisms(const Extension& e,
                                                               const SearchLimits& limits = {});

}  // namespace mlakit
