#pragma once

#include <vector>

#include "mlakit/correspondence.hpp"

namespace mlakit {

/// A kernel automorphism ω and a quotient automorphism κ, acting jointly on
/// action terms and cocycles.  Pairs kept by compatible_pairs satisfy the
/// membership condition of C(Q, I, χ): the twisted terms χ^{(ω,κ)} are
/// equivalent to χ.
struct CompatiblePair {
  std::vector<int> omega;  ///< permutation of kernel indices
  std::vector<int> kappa;  ///< permutation of quotient indices

  bool operator==(const CompatiblePair&) const = default;
  auto operator<=>(const CompatiblePair&) const = default;
};

CompatiblePair identity_pair(const FiniteMLA& q, const FiniteMLA& i);

/// The (ω,κ)-twist of action terms:
///   σ^{(ω,κ)}(x) = ω ∘ σ(κ⁻¹(x)) ∘ ω⁻¹
/// and the same conjugation for τ and ν.  Throws std::invalid_argument
/// unless ω and κ are automorphisms of the right algebras.
ActionTerms pair_action_on_terms(const ActionTerms& chi, const CompatiblePair& p);

/// The (ω,κ)-twist of a full cocycle: action terms as above plus
///   T^{(ω,κ)}(x,y) = ω(T(κ⁻¹(x), κ⁻¹(y)))
/// and likewise for the bracket factor set.  Twisting a compatible cocycle
/// yields a compatible cocycle; that is re-validated through the crossed
/// product and a violation raises std::logic_error.
Cocycle2 pair_action_on_cocycle(const Cocycle2& t, const CompatiblePair& p,
                                const SearchLimits& limits = {});

/// C(Q, I, χ): every (ω, κ) in Aut I × Aut Q whose twist of χ stays in the
/// equivalence class of χ.  Sorted lexicographically (identity pair first);
/// closure under composition is asserted.  Throws SearchBoundError when
/// |Aut I| · |Aut Q| exceeds limits.pair_candidates, or when either
/// automorphism group itself refuses to enumerate.
std::vector<CompatiblePair> compatible_pairs(const ActionTerms& chi,
                                             const SearchLimits& limits = {});

/// W_T(ω,κ) = [T − T^{(ω,κ)}] in H²(Q, ζ(I), χ_ζ), returned as an index into
/// h2_group(restriction of χ to ζ(I)).class_reps.  T is first re-sectioned
/// through the equivalence witness h (section t(x) = h(x)·l(x)) so that the
/// minuend carries exactly the twisted action terms; factor sets are never
/// subtracted across mismatched terms.  Throws std::invalid_argument when
/// the pair is not compatible with χ or the cocycle does not validate, and
/// ImageNotCentralError if a difference entry escapes ζ(I).
int wells_map(const Cocycle2& t, const CompatiblePair& p, const SearchLimits& limits = {});

/// One automorphism of the total algebra preserving the embedded kernel
/// setwise, together with its induced pair (φ|_I, φ_t) where φ_t = π ∘ φ ∘ t.
struct KernelPreservingAutomorphism {
  std::vector<int> phi;  ///< permutation of total-algebra indices
  CompatiblePair pair;   ///< (φ|_I, φ_t) in kernel/quotient coordinates
};

/// Aut_I A: enumerates the full automorphism group of the total algebra
/// (ceiling limits.aut_enum_order) and keeps the maps sending the embedded
/// kernel onto itself.  φ_t is computed through the canonical section and
/// re-computed through a second section; disagreement would raise
/// std::logic_error (the induced map is section-independent).  Sorted by
/// permutation table, identity first.
std::vector<KernelPreservingAutomorphism> aut_I_group(const Extension& e,
                                                      const SearchLimits& limits = {});

/// Executable content of the four-node exact sequence
///   1 → Der(Q, ζ(I), χ_ζ) →ⁱ Aut_I A →^ψ C(Q, I, χ) →^{W_T} H²(Q, ζ(I), χ_ζ)
/// for one extension: node cardinalities, one verdict per junction, and the
/// constructive certificates around the last junction.
struct WellsReport {
  int der_order = 0;    ///< |Der(Q, ζ(I), χ_ζ)|
  int aut_i_order = 0;  ///< |Aut_I A|
  int pair_order = 0;   ///< |C(Q, I, χ)|
  int h2_order = 0;     ///< |H²(Q, ζ(I), χ_ζ)|

  bool i_injective = false;              ///< d ↦ φ_d has no collisions
  bool im_i_equals_ker_psi = false;      ///< {φ_d} = ψ⁻¹(identity pair)
  bool im_psi_equals_ker_wells = false;  ///< ψ-images = pairs with W_T = 0
  bool psi_is_homomorphism = false;      ///< ψ(φ∘φ′) = ψ(φ)∘ψ(φ′) throughout
  bool kernel_pairs_lift = false;        ///< ⟨ω(a)·h(x), κ(x)⟩ rebuilt and verified per kernel pair
  bool wells_section_independent = false;  ///< W_T values agree across base sections

  bool ok() const {
    return i_injective && im_i_equals_ker_psi && im_psi_equals_ker_wells &&
           psi_is_homomorphism && kernel_pairs_lift && wells_section_independent;
  }
};

/// Normalizes E to crossed-product coordinates through its canonical
/// cocycle, builds all four nodes and all three maps, and checks exactness
/// junction by junction — exhaustively, never by sampling.  For every pair
/// in ker W_T the lift φ(a,x) = ⟨ω(a)·h(x), κ(x)⟩ is reconstructed from the
/// equivalence witnesses and verified to be a kernel-preserving automorphism
/// inducing that pair.
WellsReport verify_wells(const Extension& e, const SearchLimits& limits = {});

/// Stabilizer of a strictly descending ideal chain A = A₀ ▷ … ▷ A_n = 1:
/// the automorphisms moving each element of each A_k only within its
/// A_{k+1}-coset.  Such a group is nilpotent of class at most n−1.
struct SeriesStabilizerReport {
  std::vector<std::vector<int>> stabilizer;  ///< permutations, identity first
  int series_length = 0;                     ///< n
  int nilpotency_class = 0;                  ///< of the stabilizer under composition
  bool within_bound = false;                 ///< nilpotency_class ≤ max(n−1, 0)

  bool ok() const { return within_bound; }
};

/// Enumerates the stabilizer directly by generator-image backtracking with
/// every image confined to the coset the stabilizer condition allows (so the
/// search stays tractable even when the full automorphism group would not),
/// computes the lower central series of the resulting permutation group, and
/// checks the class bound.  Throws std::invalid_argument unless the chain
/// descends strictly through ideals from A to 1, and SearchBoundError when
/// the algebra order exceeds limits.soft_order or the constrained frontier
/// exceeds limits.map_search_candidates.
SeriesStabilizerReport series_stabilizer_nilpotency(const FiniteMLA& a,
                                                    const std::vector<Subset>& series,
                                                    const SearchLimits& limits = {});

}  // namespace mlakit
