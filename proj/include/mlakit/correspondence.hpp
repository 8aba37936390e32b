#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mlakit/cohomology.hpp"
#include "mlakit/substructures.hpp"

namespace mlakit {

/// Raised when a factor set that must take values in the algebraic center of
/// the kernel has an entry outside it.
class ImageNotCentralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True iff S (a flattened Q×Q → I table) witnesses the three defining
/// axioms of an action datum:
///   σ_x(σ_y(a))·S(x,y) = S(x,y)·σ_{xy}(a)
///   S(x,y)·τ_{xy}(a)   = σ_x(τ_y(a))·τ_x(a)·{S(x,y)⁻¹, a^{S(x,y)}}·S(x,y)
///   S(x,y)·ν_{xy}(a)   = {a^{S(x,y)⁻¹}, S(x,y)⁻¹}·ν_x(a)·σ_x(ν_y(a))·S(x,y)
bool action_witness_ok(const ActionTerms& chi, const std::vector<int>& s);

/// Searches for a witness table cell by cell (the axioms constrain each
/// S(x,y) independently); nullopt when some cell admits no value.
std::optional<std::vector<int>> find_action_witness(const ActionTerms& chi);

/// Action terms together with a witness table certifying the axioms.
struct ActionClass {
  ActionTerms representative;
  std::optional<std::vector<int>> witness_S;  ///< flattened Q×Q → I
};

/// From a full 2-cocycle: the witness is the group-layer factor set itself.
ActionClass action_class_of(const Cocycle2& c);

/// From raw tables: witness found by search, nullopt if none exists.
std::optional<ActionClass> action_class_from_tables(const ActionTerms& chi);

/// Result of the equivalence search between two action terms on one datum.
/// `h` uses the bracket form of the middle condition,
///   τ_x(a) = τ'_x(a)^{h(x)}·{h(x),a},
/// which is the authoritative reading; `h_commutator` replaces the bracket
/// by the group commutator [h(x),a], a variant the source material leaves
/// unreconciled.  Downstream logic uses `h`; a disagreement between the two
/// readings is surfaced for diagnostics only.
struct ActionEquivalence {
  std::optional<std::vector<int>> h;
  std::optional<std::vector<int>> h_commutator;

  bool readings_agree() const { return h.has_value() == h_commutator.has_value(); }
};

/// Witness h: Q → I with σ_x(a) = h(x)·σ'_x(a)·h(x)⁻¹ plus the τ/ν shift
/// conditions; the conditions factor per x, so the search is cell by cell.
ActionEquivalence actions_equivalent(const ActionTerms& chi, const ActionTerms& chi_prime);

/// True iff the subalgebra B is closed under σ_x, τ_x and ν_x for every x.
bool closure_check(const ActionTerms& chi, const Subset& b);

/// Restriction of χ to a closed subalgebra B.  `global_of_local`, when
/// non-null, receives the index embedding of the restricted kernel into I.
ActionTerms restrict_action(const ActionTerms& chi, const Subset& b,
                            std::vector<int>* global_of_local = nullptr);

/// Re-index a factor set over a restricted kernel into parent coordinates.
FactorSet embed_factor_set(const FactorSet& s, const std::vector<int>& global_of_local);

/// (T∗S): multiply both factor-set layers pointwise, keeping the action
/// terms of T.  S is given in I coordinates and must take values in the
/// algebraic center of I (else ImageNotCentralError); the combined cocycle
/// is validated by constructing its crossed product.
Cocycle2 act_h2_on_extension(const Cocycle2& t, const FactorSet& s,
                             const SearchLimits& limits = {});

/// Executable content of the sharply-transitive-action theorem on one datum.
struct CorrespondenceReport {
  bool realized = false;                ///< some census class realizes [χ]
  std::vector<Cocycle2> ext_classes;    ///< census classes with terms ~ χ
  H2Result h2;                          ///< over (Q, ζ(I), χ_ζ)
  std::vector<std::vector<int>> orbit;  ///< orbit[c][s] → index in ext_classes

  bool identity_fixes = false;       ///< [A]∗0 = [A]
  bool addition_composes = false;    ///< ([A]∗[S])∗[S'] = [A]∗([S]+[S'])
  bool well_defined = false;         ///< coboundary shifts and member choice don't move the target
  bool central_differences = false;  ///< re-sectioned pair differences land in ζ(I) and connect
  bool free_action = false;          ///< [A]∗[S] = [A] ⇒ [S] = 0
  bool transitive = false;           ///< every orbit row covers all classes
  bool cardinalities_match = false;  ///< |Ext_χ| = |H²(Q, ζ(I), χ_ζ)|

  bool ok() const {
    return realized && identity_fixes && addition_composes && well_defined &&
           central_differences && free_action && transitive && cardinalities_match;
  }
};

/// Enumerates the extension classes realizing [χ], computes H² over the
/// center-restricted datum, and checks that ∗ is a sharply transitive group
/// action connecting the two.
CorrespondenceReport verify_correspondence(const FiniteMLA& q, const FiniteMLA& i,
                                           const ActionTerms& chi,
                                           const SearchLimits& limits = {});

}  // namespace mlakit
