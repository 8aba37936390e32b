#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mlakit/algebra.hpp"
#include "mlakit/subset.hpp"

namespace mlakit {

/// Raised when an operation requiring an ideal receives a subset that is not
/// one.  A mathematical verdict, not a resource condition.
class NotAnIdealError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an operation requiring a subalgebra receives a subset that is
/// not closed under the operations.
class NotASubalgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A subset that has been checked to be an ideal: a normal subgroup of the
/// group reduct whose members bracket into it against arbitrary elements on
/// both sides.  Construct via make_ideal or the closure/enumeration helpers.
struct IdealHandle {
  Subset members;
};

struct QuotientResult {
  FiniteMLA quotient;             ///< induced algebra on cosets
  std::vector<int> projection;    ///< element index -> coset index
  std::vector<int> coset_reps;    ///< coset index -> least member; coset_reps[0] == 0
};

struct Centers {
  Subset group_center;         ///< elements commuting with everything
  Subset lie_center;           ///< elements whose bracket against everything is 1
  Subset null_ideal;           ///< elements bracketing to 1 on both sides
  IdealHandle algebraic_center;  ///< group_center ∩ null_ideal, always an ideal
};

struct SeriesReport {
  std::optional<int> nilpotent_class;
  std::optional<int> solvable_length;
  std::vector<Subset> lower_central;  ///< γ₁ = A, γ_{k+1} = C(γ_k, A)
  std::vector<Subset> derived;        ///< A⁰ = A, A^{k+1} = C(A^k, A^k)
};

bool is_subalgebra(const FiniteMLA& a, const Subset& s);
bool is_ideal(const FiniteMLA& a, const Subset& s);

/// Checks and wraps; throws NotAnIdealError otherwise.
IdealHandle make_ideal(const FiniteMLA& a, const Subset& s);

/// The algebra induced on a subalgebra, relabelled to 0..|S|-1 in increasing
/// order of global index (so the identity stays at 0).  If global_of_local is
/// non-null it receives the relabelling.
FiniteMLA restrict_algebra(const FiniteMLA& a, const Subset& s,
                           std::vector<int>* global_of_local = nullptr);

/// Smallest ideal containing the seed: fixpoint closure under products,
/// inverses, conjugation by arbitrary elements, and brackets with arbitrary
/// elements on both sides.
IdealHandle ideal_closure(const FiniteMLA& a, Subset seed);

/// Every ideal, via closures of singletons followed by join saturation.
/// Sorted by size, then lexicographically by member list.  Refuses orders
/// beyond limits.ideal_enum_order.
std::vector<IdealHandle> all_ideals(const FiniteMLA& a, const SearchLimits& limits = {});

/// Quotient by an ideal with minimum-representative coset labelling (coset k
/// is named by coset_reps[k], these are increasing, and the ideal itself is
/// coset 0).  The induced tables are validated before returning.
QuotientResult quotient(const FiniteMLA& a, const IdealHandle& ideal);

Centers centers(const FiniteMLA& a);

/// N_A(H) = {a : aH = Ha and {a,h} ∈ H for all h ∈ H}: the largest subalgebra
/// containing H as an ideal.  Both closure facts are re-checked before
/// returning.
Subset normalizer(const FiniteMLA& a, const Subset& h);

/// C(I,J): smallest ideal containing all group commutators [a,b] and all
/// brackets {a,b}, {b,a} with a ∈ I, b ∈ J.  Symmetric in I and J.
IdealHandle commutator_ideal(const FiniteMLA& a, const IdealHandle& i, const IdealHandle& j);

/// Lower central and derived series with the nilpotency class / solvable
/// length read off where they reach the trivial ideal.
SeriesReport classify_series(const FiniteMLA& a);

/// True iff the group operation commutes on I×I and the bracket vanishes
/// there; equivalent to C(I,I) being trivial.
bool abelian_ideal_check(const FiniteMLA& a, const IdealHandle& ideal);

}  // namespace mlakit
