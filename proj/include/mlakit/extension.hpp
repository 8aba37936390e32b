#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlakit/algebra.hpp"
#include "mlakit/subset.hpp"

namespace mlakit {

/// Raised when a value that must lie in the embedded kernel does not.  Only
/// possible on corrupted inputs; exact sequences never trigger it.
class KernelEscapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact sequence 1 → I → A → Q → 1 presented concretely: the total
/// algebra, the kernel and quotient algebras, the injective embedding of the
/// kernel and the surjection onto the quotient.
struct Extension {
  FiniteMLA total;
  FiniteMLA kernel;    ///< I
  FiniteMLA quotient;  ///< Q
  std::vector<int> kernel_embed;  ///< I-index → total-index, injective homomorphism
  std::vector<int> proj;          ///< total-index → Q-index, surjective homomorphism
};

/// Builds the exact-sequence view of `total` around an ideal given by its
/// member set.  Throws NotAnIdealError if the subset is not an ideal.
Extension extension_from_kernel(const FiniteMLA& total, const Subset& kernel);

/// A right-inverse of the projection with lift(0) = 0.
struct Section {
  std::vector<int> lift;  ///< Q-index → total-index
};

/// The deterministic section: each quotient element lifts to the least total
/// index in its fibre (which puts 0 over 0).
Section canonical_section(const Extension& e);

bool is_section(const Extension& e, const Section& s);

/// The five tables carried by a nonabelian 2-cocycle for datum (Q, I):
/// factor sets T and T_f on Q×Q, an automorphism σ_x of I per quotient
/// element, and the bracket action terms τ, ν on Q×I.
struct Cocycle2 {
  FiniteMLA Q;
  FiniteMLA I;
  std::vector<int> T;                   ///< Q×Q → I, row-major
  std::vector<int> Tf;                  ///< Q×Q → I, row-major
  std::vector<std::vector<int>> sigma;  ///< Q-index → permutation table of I
  std::vector<int> tau;                 ///< Q×I → I, row-major
  std::vector<int> nu;                  ///< Q×I → I, row-major

  int t(int x, int y) const { return T[x * Q.order() + y]; }
  int tf(int x, int y) const { return Tf[x * Q.order() + y]; }
  int sig(int x, int a) const { return sigma[x][a]; }
  int tv(int x, int a) const { return tau[x * I.order() + a]; }
  int nv(int x, int a) const { return nu[x * I.order() + a]; }

  /// All five tables concatenated; the canonical comparison key.
  std::vector<int> flat() const;

  /// Shape check: table sizes, value ranges, each σ_x bijective.  Whether σ_x
  /// respects the operations is left to compatibility checking, so that bad
  /// actions surface as axiom violations rather than input errors.
  bool well_formed(std::string* why = nullptr) const;

  /// Normalization: T(x,1)=T(1,x)=1, T_f(x,x)=T_f(x,1)=T_f(1,x)=1,
  /// τ_x(1)=ν_x(1)=1.
  bool normalized(std::string* why = nullptr) const;
};

/// The cocycle of the direct product: trivial factor sets and actions.
Cocycle2 trivial_cocycle(const FiniteMLA& q, const FiniteMLA& i);

/// Index of ⟨a, x⟩ in the crossed-product labelling.
inline int pair_index(int a, int x, int q_order) { return a * q_order + x; }

/// Reads the five tables off an extension along a section:
///   T(x,y) = i⁻¹(l(x)·l(y)·l(x·y)⁻¹)      T_f(x,y) = i⁻¹({l(x),l(y)}·l({x,y})⁻¹)
///   σ_x(a) = i⁻¹(i(a)^{l(x)})   τ_x(a) = i⁻¹({l(x),i(a)})   ν_x(a) = i⁻¹({i(a),l(x)})
/// Throws KernelEscapeError if a value is not in the embedded kernel.
Cocycle2 extract_cocycle(const Extension& e, const Section& l);

struct CrossedProduct {
  std::optional<Extension> extension;  ///< present iff the tables validate
  LawReport report;
  bool ok() const { return extension.has_value(); }
};

/// Constructs I ⋊_T Q on the pair set:
///   ⟨a,x⟩·⟨b,y⟩ = ⟨a·σ_x(b)·T(x,y), x·y⟩
///   {⟨a,x⟩,⟨b,y⟩} = ⟨τ_x(b)^a·{a,b}·(b·a)·T_f(x,y)·σ_{{x,y}}(a⁻¹·ν_y(a)·b⁻¹), {x,y}⟩
/// then validates.  Compatibility of the cocycle is *defined* by that
/// validation succeeding; on success the canonical extension (i(a)=⟨a,1⟩,
/// projection onto the second coordinate) is returned, and the printed
/// inverse formula ⟨a,x⟩⁻¹ = ⟨σ_{x⁻¹}(T(x,x⁻¹)⁻¹·a⁻¹), x⁻¹⟩ is cross-checked
/// against the group inverse.
CrossedProduct build_crossed_product(const Cocycle2& c, const SearchLimits& limits = {});

/// True iff build_crossed_product validates; the violation report can be
/// captured through `report`.
bool check_compatibility(const Cocycle2& c, LawReport* report = nullptr,
                         const SearchLimits& limits = {});

/// A map h: Q → I with h(1) = 1 witnessing a morphism (id, id, h) between two
/// cocycles of the same datum.
struct EquivalenceWitness {
  std::vector<int> h;
};

/// Exhaustive search over maps h with h(1)=1 in lexicographic order; first
/// witness wins.  Throws SearchBoundError when |I|^(|Q|-1) exceeds the map
/// search ceiling, and std::invalid_argument if the datum differs.
std::optional<EquivalenceWitness> cocycles_equivalent(const Cocycle2& from, const Cocycle2& to,
                                                      const SearchLimits& limits = {});

struct ExtensionClass {
  Cocycle2 representative;  ///< lexicographically least member (by flat())
  int members_found = 0;    ///< compatible cocycles in the class
};

/// Enumerates every compatible cocycle for datum (Q, I) by backtracking over
/// the five tables (σ over Aut I with σ_1 = id; T cells constrained per pair
/// by σ-composition and pruned by the product-cocycle identity; τ cells by
/// the expansion law, with ν forced to the pointwise inverse of τ; T_f cells
/// free), validating each complete candidate by construction, then partitions
/// the survivors into equivalence classes.  Deterministic: classes are sorted
/// by their representative's tables.
std::vector<ExtensionClass> classify_extensions(const FiniteMLA& q, const FiniteMLA& i,
                                                const SearchLimits& limits = {});

/// True iff the two algebras have identical order and tables (names ignored).
bool same_tables(const FiniteMLA& a, const FiniteMLA& b);

}  // namespace mlakit
