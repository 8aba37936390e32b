#include "mlakit/substructures.hpp"

#include <algorithm>
#include <unordered_set>

namespace mlakit {

bool is_subalgebra(const FiniteMLA& a, const Subset& s) {
  if (!s.test(0)) return false;
  const auto mem = s.members();
  for (int x : mem) {
    if (!s.test(a.inv(x))) return false;
    for (int y : mem) {
      if (!s.test(a.mul(x, y))) return false;
      if (!s.test(a.bracket(x, y))) return false;
    }
  }
  return true;
}

bool is_ideal(const FiniteMLA& a, const Subset& s) {
  if (!is_subalgebra(a, s)) return false;
  for (int h : s.members())
    for (int x = 0; x < a.order(); ++x) {
      if (!s.test(a.conj(h, x))) return false;
      if (!s.test(a.bracket(h, x))) return false;
      if (!s.test(a.bracket(x, h))) return false;
    }
  return true;
}

IdealHandle make_ideal(const FiniteMLA& a, const Subset& s) {
  if (!is_ideal(a, s)) throw NotAnIdealError("subset is not an ideal");
  return IdealHandle{s};
}

FiniteMLA restrict_algebra(const FiniteMLA& a, const Subset& s,
                           std::vector<int>* global_of_local) {
  if (!is_subalgebra(a, s)) throw NotASubalgebraError("subset is not a subalgebra");
  const auto mem = s.members();  // increasing, so local 0 is global 0
  const int m = static_cast<int>(mem.size());
  std::vector<int> local(a.order(), -1);
  for (int k = 0; k < m; ++k) local[mem[k]] = k;
  std::vector<int> mul(m * m), bracket(m * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      mul[x * m + y] = local[a.mul(mem[x], mem[y])];
      bracket[x * m + y] = local[a.bracket(mem[x], mem[y])];
    }
  if (global_of_local) *global_of_local = mem;
  return FiniteMLA::unchecked(m, std::move(mul), std::move(bracket), a.name() + "|sub");
}

IdealHandle ideal_closure(const FiniteMLA& a, Subset seed) {
  const int n = a.order();
  Subset s(n);
  s.add(0);
  std::vector<int> work;
  auto push = [&](int v) {
    if (!s.test(v)) {
      s.add(v);
      work.push_back(v);
    }
  };
  for (int v : seed.members()) push(v);
  while (!work.empty()) {
    const int x = work.back();
    work.pop_back();
    push(a.inv(x));
    // Products with every current member; pairs with members added later are
    // covered when those members are processed.
    for (int y : s.members()) {
      push(a.mul(x, y));
      push(a.mul(y, x));
    }
    for (int t = 0; t < n; ++t) {
      push(a.conj(x, t));
      push(a.bracket(x, t));
      push(a.bracket(t, x));
    }
  }
  return IdealHandle{s};
}

std::vector<IdealHandle> all_ideals(const FiniteMLA& a, const SearchLimits& limits) {
  const int n = a.order();
  if (n > limits.ideal_enum_order)
    throw SearchBoundError("ideal enumeration refused at order " + std::to_string(n) +
                               " (ceiling " + std::to_string(limits.ideal_enum_order) + ")",
                           static_cast<std::uint64_t>(n));
  std::unordered_set<Subset, SubsetHash> seen;
  std::vector<Subset> found;
  auto record = [&](const Subset& s) {
    if (seen.insert(s).second) found.push_back(s);
  };
  record(ideal_closure(a, Subset(n)).members);
  for (int x = 1; x < n; ++x) record(ideal_closure(a, Subset::singleton(n, x)).members);
  // Saturate under joins; every ideal is the join of the principal ideals of
  // its members, so this reaches the whole lattice.
  for (std::size_t i = 0; i < found.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const Subset u = found[i].unite(found[j]);
      if (seen.count(u)) continue;
      record(ideal_closure(a, u).members);
    }
  std::sort(found.begin(), found.end(), Subset::canonical_less);
  std::vector<IdealHandle> out;
  out.reserve(found.size());
  for (auto& s : found) out.push_back(IdealHandle{s});
  return out;
}

QuotientResult quotient(const FiniteMLA& a, const IdealHandle& ideal) {
  if (!is_ideal(a, ideal.members)) throw NotAnIdealError("quotient requires an ideal");
  const int n = a.order();
  const auto mem = ideal.members.members();
  // Least member of each coset x·I names the coset.
  std::vector<int> rep_of(n);
  for (int x = 0; x < n; ++x) {
    int least = x;
    for (int h : mem) least = std::min(least, a.mul(x, h));
    rep_of[x] = least;
  }
  std::vector<int> reps;
  for (int x = 0; x < n; ++x)
    if (rep_of[x] == x) reps.push_back(x);
  std::vector<int> coset_index(n, -1);
  for (std::size_t k = 0; k < reps.size(); ++k) coset_index[reps[k]] = static_cast<int>(k);
  std::vector<int> proj(n);
  for (int x = 0; x < n; ++x) proj[x] = coset_index[rep_of[x]];

  const int m = static_cast<int>(reps.size());
  std::vector<int> mul(m * m), bracket(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      mul[i * m + j] = proj[a.mul(reps[i], reps[j])];
      bracket[i * m + j] = proj[a.bracket(reps[i], reps[j])];
    }
  auto checked = validate_algebra(m, mul, bracket, a.name() + "/I");
  if (!checked.ok())
    throw NotAnIdealError("induced coset tables are not a valid algebra: " +
                          checked.report.summary());
  if (!is_homomorphism(proj, a, *checked.algebra))
    throw NotAnIdealError("coset projection is not a homomorphism");
  return QuotientResult{std::move(*checked.algebra), std::move(proj), std::move(reps)};
}

Centers centers(const FiniteMLA& a) {
  const int n = a.order();
  Subset zg(n), lz(n), null(n);
  for (int x = 0; x < n; ++x) {
    bool central = true, left = true, both = true;
    for (int y = 0; y < n; ++y) {
      if (a.mul(x, y) != a.mul(y, x)) central = false;
      if (a.bracket(x, y) != 0) left = false;
      if (a.bracket(x, y) != 0 || a.bracket(y, x) != 0) both = false;
    }
    if (central) zg.add(x);
    if (left) lz.add(x);
    if (both) null.add(x);
  }
  const Subset zeta = zg.intersect(null);
  if (!is_ideal(a, zeta))
    throw std::logic_error("algebraic center failed its ideal check");  // impossible in a valid algebra
  return Centers{zg, lz, null, IdealHandle{zeta}};
}

Subset normalizer(const FiniteMLA& a, const Subset& h) {
  if (!is_subalgebra(a, h)) throw NotASubalgebraError("normalizer requires a subalgebra");
  const int n = a.order();
  const auto mem = h.members();
  Subset result(n);
  for (int x = 0; x < n; ++x) {
    Subset left(n), right(n);
    bool brackets_in = true;
    for (int hh : mem) {
      left.add(a.mul(x, hh));
      right.add(a.mul(hh, x));
      if (!h.test(a.bracket(x, hh))) brackets_in = false;
    }
    if (left == right && brackets_in) result.add(x);
  }
  if (!is_subalgebra(a, result) || !result.contains(h))
    throw std::logic_error("normalizer failed its closure checks");
  return result;
}

IdealHandle commutator_ideal(const FiniteMLA& a, const IdealHandle& i, const IdealHandle& j) {
  Subset seed(a.order());
  for (int x : i.members.members())
    for (int y : j.members.members()) {
      seed.add(a.comm(x, y));
      seed.add(a.bracket(x, y));
      seed.add(a.bracket(y, x));
    }
  return ideal_closure(a, seed);
}

SeriesReport classify_series(const FiniteMLA& a) {
  SeriesReport r;
  const int n = a.order();
  const IdealHandle whole{Subset::full(n)};
  const Subset trivial = Subset::singleton(n, 0);

  r.lower_central.push_back(whole.members);
  while (r.lower_central.back() != trivial) {
    const IdealHandle last{r.lower_central.back()};
    const Subset next = commutator_ideal(a, last, whole).members;
    if (next == r.lower_central.back()) break;  // stabilised above the trivial ideal
    r.lower_central.push_back(next);
  }
  if (r.lower_central.back() == trivial)
    r.nilpotent_class = static_cast<int>(r.lower_central.size()) - 1;

  r.derived.push_back(whole.members);
  while (r.derived.back() != trivial) {
    const IdealHandle last{r.derived.back()};
    const Subset next = commutator_ideal(a, last, last).members;
    if (next == r.derived.back()) break;
    r.derived.push_back(next);
  }
  if (r.derived.back() == trivial)
    r.solvable_length = static_cast<int>(r.derived.size()) - 1;
  return r;
}

bool abelian_ideal_check(const FiniteMLA& a, const IdealHandle& ideal) {
  const auto mem = ideal.members.members();
  for (int x : mem)
    for (int y : mem) {
      if (a.mul(x, y) != a.mul(y, x)) return false;
      if (a.bracket(x, y) != 0) return false;
    }
  return true;
}

}  // namespace mlakit
