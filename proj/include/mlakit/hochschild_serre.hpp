#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlakit/cohomology.hpp"
#include "mlakit/extension.hpp"
#include "mlakit/subset.hpp"

namespace mlakit {

/// Raised when a value that must lie in the fixed subalgebra lands outside
/// it.  Genuine square-condition certificates never trigger this; it signals
/// a corrupted witness or inconsistent tables.
class ImageEscapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a construction that must not depend on the choice of coset
/// representative gives different answers for two representatives of the
/// same quotient element.  Only possible on incompatible action tables.
class IllDefinedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by verify_five_term when the fixed points of the whole algebra
/// acting on the coefficients are nontrivial; the exactness statement
/// assumes they vanish.
class HypothesisFailedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The inputs of this module are an exact sequence 1 → I → M → Q → 1 (an
/// Extension e with e.total = M) together with action terms χ for the datum
/// (M, A): chi.Q is M and chi.I is the abelian coefficient algebra A.

/// A^I = {a ∈ A : σ_n(a) = a, τ_n(a) = 1, ν_n(a) = 1 for all n in the
/// ideal}, as a subset of A.  The ideal is given by its member set inside
/// chi.Q; it must be an ideal (std::invalid_argument otherwise) and A must
/// be abelian (NotAbelianKernelError).  The result is always closed under
/// the operations of A; a failure of closure is reported as a logic error.
Subset fixed_subalgebra(const ActionTerms& chi, const Subset& ideal);

/// The action of the quotient on the fixed subalgebra, with the bookkeeping
/// needed to move between A-labels and A^I-labels.
struct InducedAction {
  ActionTerms chi_hat;               ///< datum (Q, A^I)
  Subset fixed;                      ///< A^I as a subset of A
  std::vector<int> global_of_local;  ///< A^I-index → A-index, increasing
  std::vector<int> local_of_global;  ///< A-index → A^I-index, −1 outside
};

/// χ̂ for the datum (Q, A^I): each table entry is read through an arbitrary
/// preimage of the quotient element, and every other preimage is checked to
/// agree on A^I (IllDefinedError with a witness message when one does not,
/// or when a table value escapes A^I).
InducedAction induced_action(const ActionTerms& chi, const Extension& e);

/// χ restricted to the ideal: the datum (I, A) whose tables are those of χ
/// read through the kernel embedding.
ActionTerms restricted_action(const ActionTerms& chi, const Extension& e);

/// Derivation table for (Q, A^I) pushed through the projection: the result
/// sends m to the A-label of d(π(m)), a derivation for (M, A, χ).
std::vector<int> inflate_derivation(const InducedAction& ind, const Extension& e,
                                    const std::vector<int>& d);

/// Factor set over Q with A^I-labelled entries pulled back along the
/// projection to a factor set over M with A-labelled entries.  Pullback
/// preserves compatibility.
FactorSet inflate_factor_set(const InducedAction& ind, const Extension& e, const FactorSet& fs);

/// Derivation table for (M, A) restricted to the ideal: values unchanged,
/// domain reindexed through the kernel embedding.
std::vector<int> restrict_derivation(const Extension& e, const std::vector<int>& d);

/// Index of the class of a derivation table in a presentation produced by
/// h1_group for the same datum: the lexicographically least member of
/// d + principal derivations is looked up among the representatives.
int h1_class_of(const ActionTerms& chi, const AbelianGroupPresentation& h1,
                const std::vector<int>& d);

/// Index of the class of a compatible factor set in a presentation produced
/// by h2_group for the same datum, decided by searching for an equivalence
/// witness against each class representative.
int h2_class_of(const ActionTerms& chi, const H2Result& h2, const FactorSet& fs,
                const SearchLimits& limits = {});

/// A certificate that a derivation d of (I, A, χ_I) extends across M: η
/// assigns to every element m of M a coefficient with η(1) = 1 and η = d on
/// the embedded ideal, such that for all m in M and n in I
///   (S1)  σ_m(d(m⁻¹·n·m)) − d(n) = σ_n(η(m)) − η(m)
///   (S2)  d({m,n}) − τ_m(d(n)) + σ_{{m,n}}(d(n)) − d(n)
///           = η(m) + σ_{{m,n}}(ν_n(η(m)) − η(m))
/// (written additively in the abelian coefficients; σ, τ, ν are the tables
/// of χ at elements of M, and {m,n} is the bracket of M).  Equivalently,
/// ⟨η(m), m⟩ normalizes the graph of d inside the semidirect product A ⋊ M
/// for every m.
struct SquareWitness {
  std::vector<int> d;    ///< I-index → A-index, the certified derivation
  std::vector<int> eta;  ///< M-index → A-index, η(1) = 1, η ∘ embed = d
};

/// For each m, the set of coefficients a such that ⟨a, m⟩ satisfies
/// (S1)–(S2) against d — the fibre of the normalizer of the graph of d over
/// m.  The fibre over the identity is exactly the fixed subalgebra.  d must
/// be a derivation of (I, A, χ_I) (std::invalid_argument otherwise).
std::vector<Subset> square_solution_sets(const ActionTerms& chi, const Extension& e,
                                         const std::vector<int>& d,
                                         const SearchLimits& limits = {});

/// Decides the square condition: each element of M constrains η(m)
/// independently, so the witness takes d on the embedded ideal and the
/// least admissible coefficient elsewhere (the lexicographically first
/// witness extending d).  Returns std::nullopt when some fibre is empty.
std::optional<SquareWitness> square_condition(const ActionTerms& chi, const Extension& e,
                                              const std::vector<int>& d,
                                              const SearchLimits& limits = {});

/// The transgression tables over Q for a certified derivation, with entries
/// in A^I-labels.  With l the canonical section of e and (T, T_f) the factor
/// sets it extracts,
///   ∂(x,y)   = η(l(x)) + σ_{l(x)}(η(l(y))) − σ_{T(x,y)}(η(l(x·y))) − d(T(x,y))
///   ∂_f(x,y) = η(l(x)) + η(l(y)) + τ_{l(x)}(η(l(y)))
///            + σ_{{l(x),l(y)}}(ν_{l(y)}(η(l(x))) − η(l(x)) − η(l(y)))
///            − σ_{T_f(x,y)}(η(l({x,y}))) − d(T_f(x,y))
/// where factor-set subscripts stand for the embedded kernel elements.
/// Entries must land in the fixed subalgebra (ImageEscapeError otherwise;
/// only possible when the witness does not actually certify d).  The
/// witness must extend d with η(1) = 1 (std::invalid_argument).
FactorSet transgression_factor_set(const ActionTerms& chi, const Extension& e,
                                   const InducedAction& ind, const SquareWitness& w);

/// Class of the transgression of a certified derivation inside the
/// presentation of H²(Q, A^I, χ̂).  Independent of the choice of witness.
int transgression_class(const ActionTerms& chi, const Extension& e, const InducedAction& ind,
                        const H2Result& h2_hat, const SquareWitness& w,
                        const SearchLimits& limits = {});

/// Node orders and junction verdicts for the five-term exact sequence
///   1 → H¹(Q, A^I, χ̂) → H¹(M, A, χ) → H¹(I, A, χ_I)^□ → H²(Q, A^I, χ̂)
///     → H²(M, A, χ)
/// where the maps are inflation, restriction, transgression and inflation,
/// and H¹(I, A, χ_I)^□ is the subgroup of classes satisfying the square
/// condition.
struct FiveTermReport {
  int h1_quotient = 0;      ///< |H¹(Q, A^I, χ̂)|
  int h1_total = 0;         ///< |H¹(M, A, χ)|
  int h1_ideal_square = 0;  ///< |H¹(I, A, χ_I)^□|
  int h2_quotient = 0;      ///< |H²(Q, A^I, χ̂)|
  int h2_total = 0;         ///< |H²(M, A, χ)|
  int h1_ideal_full = 0;    ///< |H¹(I, A, χ_I)| before certification

  bool inflation_injective = false;   ///< ker σ̌ = 1 on H¹(Q, A^I, χ̂)
  bool exact_at_h1_total = false;     ///< im σ̌ = ker ř
  bool exact_at_h1_ideal = false;     ///< im ř = ker ∂ inside the certified part
  bool exact_at_h2_quotient = false;  ///< im ∂ = ker σ̌ on H²(Q, A^I, χ̂)
  std::string counterexample;         ///< first violation; empty when exact

  bool ok() const {
    return inflation_injective && exact_at_h1_total && exact_at_h1_ideal && exact_at_h2_quotient;
  }
};

/// Checks exactness at the four junctions, exhaustively over class
/// representatives.  Requires χ compatible for (M, A) with abelian A and the
/// extension consistent with χ (std::invalid_argument), and trivial fixed
/// points of M on A (HypothesisFailedError with a witness otherwise).
FiveTermReport verify_five_term(const ActionTerms& chi, const Extension& e,
                                const SearchLimits& limits = {});

}  // namespace mlakit
