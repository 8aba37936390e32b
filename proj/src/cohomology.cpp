#include "mlakit/cohomology.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace mlakit {

std::vector<int> ActionTerms::flat() const {
  std::vector<int> out;
  for (const auto& row : sigma) out.insert(out.end(), row.begin(), row.end());
  out.insert(out.end(), tau.begin(), tau.end());
  out.insert(out.end(), nu.begin(), nu.end());
  return out;
}

ActionTerms trivial_action(const FiniteMLA& q, const FiniteMLA& i) {
  const int nq = q.order(), ni = i.order();
  ActionTerms chi;
  chi.Q = q;
  chi.I = i;
  std::vector<int> id(ni);
  std::iota(id.begin(), id.end(), 0);
  chi.sigma.assign(nq, id);
  chi.tau.assign(nq * ni, 0);
  chi.nu.assign(nq * ni, 0);
  return chi;
}

ActionTerms action_terms_of(const Cocycle2& c) {
  return ActionTerms{c.Q, c.I, c.sigma, c.tau, c.nu};
}

std::vector<int> FactorSet::flat() const {
  std::vector<int> out = T;
  out.insert(out.end(), Tf.begin(), Tf.end());
  return out;
}

FactorSet zero_factor_set(int q_order) {
  return FactorSet{std::vector<int>(q_order * q_order, 0),
                   std::vector<int>(q_order * q_order, 0)};
}

FactorSet factor_set_from_flat(const std::vector<int>& flat, int q_order) {
  const std::size_t cells = static_cast<std::size_t>(q_order) * q_order;
  if (flat.size() != 2 * cells) throw std::invalid_argument("factor-set table has wrong shape");
  return FactorSet{std::vector<int>(flat.begin(), flat.begin() + cells),
                   std::vector<int>(flat.begin() + cells, flat.end())};
}

FactorSet add_factor_sets(const FactorSet& a, const FactorSet& b, const FiniteMLA& i) {
  FactorSet out = a;
  for (std::size_t k = 0; k < out.T.size(); ++k) out.T[k] = i.mul(a.T[k], b.T[k]);
  for (std::size_t k = 0; k < out.Tf.size(); ++k) out.Tf[k] = i.mul(a.Tf[k], b.Tf[k]);
  return out;
}

FactorSet negate_factor_set(const FactorSet& a, const FiniteMLA& i) {
  FactorSet out = a;
  for (auto& v : out.T) v = i.inv(v);
  for (auto& v : out.Tf) v = i.inv(v);
  return out;
}

Cocycle2 cocycle_with_factor_sets(const ActionTerms& chi, const FactorSet& fs) {
  Cocycle2 c;
  c.Q = chi.Q;
  c.I = chi.I;
  c.T = fs.T;
  c.Tf = fs.Tf;
  c.sigma = chi.sigma;
  c.tau = chi.tau;
  c.nu = chi.nu;
  return c;
}

namespace {

void require_abelian(const FiniteMLA& i) {
  if (!i.is_abelian_algebra())
    throw NotAbelianKernelError("kernel " + i.name() +
                                " is not abelian (commutative group, trivial bracket)");
}

}  // namespace

bool check_action_compatibility(const ActionTerms& chi, LawReport* report,
                                const SearchLimits& limits) {
  require_abelian(chi.I);
  return check_compatibility(cocycle_with_factor_sets(chi, zero_factor_set(chi.Q.order())),
                             report, limits);
}

FactorSet coboundary_from(const ActionTerms& chi, const std::vector<int>& h) {
  const FiniteMLA& q = chi.Q;
  const FiniteMLA& i = chi.I;
  const int nq = q.order();
  if (h.size() != static_cast<std::size_t>(nq) || h[0] != 0)
    throw std::invalid_argument("coboundary map must be defined on Q with h(1) = 1");
  for (int v : h)
    if (v < 0 || v >= i.order()) throw std::invalid_argument("coboundary map value out of range");
  FactorSet g = zero_factor_set(nq);
  for (int x = 0; x < nq; ++x)
    for (int y = 0; y < nq; ++y) {
      g.T[x * nq + y] =
          i.mul(i.mul(h[x], chi.sig(x, h[y])), i.inv(h[q.mul(x, y)]));
      const int qb = q.bracket(x, y);
      int v = chi.tv(x, h[y]);
      v = i.mul(v, h[x]);
      v = i.mul(v, h[y]);
      v = i.mul(v, chi.sig(qb, i.mul(i.mul(chi.nv(y, h[x]), i.inv(h[x])), i.inv(h[y]))));
      v = i.mul(v, i.inv(h[qb]));
      g.Tf[x * nq + y] = v;
    }
  return g;
}

namespace {

/// Free cells of a normalized factor set, in enumeration order: the T cells
/// over nonidentity pairs, then the off-diagonal nonidentity T_f cells.
struct FreeCells {
  std::vector<std::pair<int, int>> t, tf;
};

FreeCells free_cells(int nq) {
  FreeCells cells;
  for (int x = 1; x < nq; ++x)
    for (int y = 1; y < nq; ++y) {
      cells.t.emplace_back(x, y);
      if (x != y) cells.tf.emplace_back(x, y);
    }
  return cells;
}

}  // namespace

std::vector<FactorSet> scan_compatible_factor_sets(const ActionTerms& chi,
                                                   const SearchLimits& limits) {
  require_abelian(chi.I);
  const int nq = chi.Q.order(), ni = chi.I.order();
  const FreeCells cells = free_cells(nq);
  const int total_cells = static_cast<int>(cells.t.size() + cells.tf.size());
  const std::uint64_t frontier =
      saturating_power(static_cast<std::uint64_t>(ni), total_cells, limits.census_candidates);
  if (frontier > limits.census_candidates)
    throw SearchBoundError("factor-set scan over " + std::to_string(ni) + "^" +
                               std::to_string(total_cells) + " tables exceeds ceiling",
                           frontier);
  std::vector<FactorSet> out;
  std::vector<int> digits(total_cells, 0);
  Cocycle2 c = cocycle_with_factor_sets(chi, zero_factor_set(nq));
  while (true) {
    for (std::size_t k = 0; k < cells.t.size(); ++k)
      c.T[cells.t[k].first * nq + cells.t[k].second] = digits[k];
    for (std::size_t k = 0; k < cells.tf.size(); ++k)
      c.Tf[cells.tf[k].first * nq + cells.tf[k].second] = digits[cells.t.size() + k];
    if (build_crossed_product(c, limits).ok()) out.push_back(FactorSet{c.T, c.Tf});
    int pos = total_cells - 1;
    while (pos >= 0 && digits[pos] == ni - 1) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];
  }
  return out;
}

std::vector<FactorSet> enumerate_compatible_factor_sets(const ActionTerms& chi,
                                                        const SearchLimits& limits) {
  require_abelian(chi.I);
  const FiniteMLA& q = chi.Q;
  const FiniteMLA& i = chi.I;
  const int nq = q.order(), ni = i.order();
  const FreeCells cells = free_cells(nq);
  // The bracket layer is filled exhaustively below every group-layer
  // solution, and the zero tables always reach it when χ is compatible, so
  // the ceiling is provably exceeded whenever that layer alone is too wide.
  // Bail out before paying for per-leaf validation in that case.
  const std::uint64_t tf_frontier = saturating_power(
      static_cast<std::uint64_t>(ni), static_cast<int>(cells.tf.size()),
      limits.census_candidates);
  if (tf_frontier > limits.census_candidates)
    throw SearchBoundError("factor-set enumeration over " + std::to_string(ni) + "^" +
                               std::to_string(cells.tf.size()) +
                               " bracket tables exceeds ceiling",
                           tf_frontier);
  std::uint64_t explored = 0;
  auto tick = [&]() {
    if (++explored > limits.census_candidates)
      throw SearchBoundError("factor-set enumeration frontier exceeded", explored);
  };
  std::vector<FactorSet> out;
  Cocycle2 c = cocycle_with_factor_sets(chi, zero_factor_set(nq));
  std::fill(c.T.begin(), c.T.end(), -1);
  for (int x = 0; x < nq; ++x) c.T[x * nq] = c.T[x] = 0;

  auto t_known = [&](int x, int y) { return c.T[x * nq + y] >= 0; };
  auto t_at = [&](int x, int y) { return c.T[x * nq + y]; };
  auto propagation_ok = [&]() {
    for (int x = 0; x < nq; ++x)
      for (int y = 0; y < nq; ++y)
        for (int z = 0; z < nq; ++z) {
          const int xy = q.mul(x, y), yz = q.mul(y, z);
          if (!t_known(x, y) || !t_known(xy, z) || !t_known(y, z) || !t_known(x, yz)) continue;
          if (i.mul(t_at(x, y), t_at(xy, z)) !=
              i.mul(chi.sig(x, t_at(y, z)), t_at(x, yz)))
            return false;
        }
    return true;
  };

  std::function<void(std::size_t)> fill_tf = [&](std::size_t k) {
    if (k == cells.tf.size()) {
      tick();
      if (build_crossed_product(c, limits).ok()) out.push_back(FactorSet{c.T, c.Tf});
      return;
    }
    const auto [x, y] = cells.tf[k];
    for (int v = 0; v < ni; ++v) {
      tick();
      c.Tf[x * nq + y] = v;
      fill_tf(k + 1);
    }
    c.Tf[x * nq + y] = 0;
  };
  std::function<void(std::size_t)> fill_t = [&](std::size_t k) {
    if (k == cells.t.size()) {
      fill_tf(0);
      return;
    }
    const auto [x, y] = cells.t[k];
    for (int v = 0; v < ni; ++v) {
      tick();
      c.T[x * nq + y] = v;
      if (propagation_ok()) fill_t(k + 1);
    }
    c.T[x * nq + y] = -1;
  };
  fill_t(0);
  return out;
}

namespace {

/// Invariant factors of a finite abelian group given by an index add-table,
/// by repeatedly splitting off a maximal-order cyclic summand.
std::vector<int> invariant_factors_of(int n, const std::vector<int>& add, int zero) {
  if (n <= 1) return {};
  int best = zero, best_ord = 1;
  for (int e = 0; e < n; ++e) {
    int k = e, o = 1;
    while (k != zero) {
      k = add[k * n + e];
      ++o;
    }
    if (e == zero) o = 1;
    if (o > best_ord) {
      best_ord = o;
      best = e;
    }
  }
  std::vector<int> gen;
  int k = zero;
  do {
    gen.push_back(k);
    k = add[k * n + best];
  } while (k != zero);

  // Quotient by the cyclic subgroup: least coset member as representative.
  std::vector<int> rep(n);
  for (int e = 0; e < n; ++e) {
    int least = e;
    for (int s : gen) least = std::min(least, add[e * n + s]);
    rep[e] = least;
  }
  std::vector<int> reps;
  for (int e = 0; e < n; ++e)
    if (rep[e] == e) reps.push_back(e);
  std::vector<int> index_of(n, -1);
  for (std::size_t c = 0; c < reps.size(); ++c) index_of[reps[c]] = static_cast<int>(c);
  const int m = static_cast<int>(reps.size());
  std::vector<int> qadd(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) qadd[a * m + b] = index_of[rep[add[reps[a] * n + reps[b]]]];
  std::vector<int> factors = invariant_factors_of(m, qadd, index_of[rep[zero]]);
  factors.push_back(best_ord);
  return factors;
}

}  // namespace

AbelianGroupPresentation present_quotient(
    const std::vector<std::vector<int>>& members,
    const std::vector<std::vector<int>>& subgroup,
    const std::function<std::vector<int>(const std::vector<int>&, const std::vector<int>&)>&
        add_fn) {
  std::vector<std::vector<int>> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const int n = static_cast<int>(sorted.size());
  if (n == 0) throw std::invalid_argument("empty member list");
  std::map<std::vector<int>, int> index;
  for (int k = 0; k < n; ++k) index[sorted[k]] = k;
  auto find = [&](const std::vector<int>& v, const char* role) {
    auto it = index.find(v);
    if (it == index.end())
      throw std::logic_error(std::string(role) + " escapes the member set: not closed");
    return it->second;
  };

  std::vector<int> add(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) add[a * n + b] = find(add_fn(sorted[a], sorted[b]), "sum");

  std::vector<int> sub;
  for (const auto& s : subgroup) sub.push_back(find(s, "subgroup element"));
  std::sort(sub.begin(), sub.end());
  sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
  for (int a : sub)
    for (int b : sub)
      if (!std::binary_search(sub.begin(), sub.end(), add[a * n + b]))
        throw std::logic_error("subgroup is not closed under addition");

  // identity member
  int zero_member = -1;
  for (int e = 0; e < n && zero_member < 0; ++e) {
    bool id = true;
    for (int m = 0; m < n && id; ++m)
      if (add[e * n + m] != m) id = false;
    if (id) zero_member = e;
  }
  if (zero_member < 0) throw std::logic_error("member set has no identity");
  if (sub.empty()) sub.push_back(zero_member);

  // cosets: least member index (== lexicographically least table) represents
  std::vector<int> rep(n);
  for (int e = 0; e < n; ++e) {
    int least = n;
    for (int s : sub) least = std::min(least, add[e * n + s]);
    rep[e] = least;
  }
  std::vector<int> reps;
  for (int e = 0; e < n; ++e)
    if (rep[e] == e) reps.push_back(e);
  std::vector<int> class_of(n, -1);
  for (std::size_t c = 0; c < reps.size(); ++c) class_of[reps[c]] = static_cast<int>(c);

  AbelianGroupPresentation out;
  const int m = static_cast<int>(reps.size());
  out.elements.reserve(m);
  for (int r : reps) out.elements.push_back(sorted[r]);
  out.add.resize(m * m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) out.add[a * m + b] = class_of[rep[add[reps[a] * n + reps[b]]]];
  out.zero = class_of[rep[zero_member]];
  out.invariant_factors = invariant_factors_of(m, out.add, out.zero);
  return out;
}

H2Result h2_group(const ActionTerms& chi, const SearchLimits& limits) {
  require_abelian(chi.I);
  const FiniteMLA& i = chi.I;
  const int nq = chi.Q.order(), ni = i.order();
  std::vector<FactorSet> compatible = enumerate_compatible_factor_sets(chi, limits);

  const std::uint64_t frontier =
      saturating_power(static_cast<std::uint64_t>(ni), nq - 1, limits.map_search_candidates);
  if (frontier > limits.map_search_candidates)
    throw SearchBoundError("coboundary scan exceeds ceiling", frontier);
  std::set<std::vector<int>> coboundaries;
  std::vector<int> h(nq, 0);
  while (true) {
    coboundaries.insert(coboundary_from(chi, h).flat());
    int pos = nq - 1;
    while (pos >= 1 && h[pos] == ni - 1) h[pos--] = 0;
    if (pos < 1) break;
    ++h[pos];
  }

  std::vector<std::vector<int>> members;
  members.reserve(compatible.size());
  for (const auto& fs : compatible) members.push_back(fs.flat());
  AbelianGroupPresentation group = present_quotient(
      members, std::vector<std::vector<int>>(coboundaries.begin(), coboundaries.end()),
      [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> s(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) s[k] = i.mul(a[k], b[k]);
        return s;
      });
  H2Result out;
  out.class_reps.reserve(group.elements.size());
  for (const auto& e : group.elements) out.class_reps.push_back(factor_set_from_flat(e, nq));
  out.group = std::move(group);
  return out;
}

bool is_derivation(const ActionTerms& chi, const std::vector<int>& d) {
  const FiniteMLA& q = chi.Q;
  const FiniteMLA& i = chi.I;
  const int nq = q.order();
  if (d.size() != static_cast<std::size_t>(nq) || d[0] != 0) return false;
  for (int x = 0; x < nq; ++x)
    for (int y = 0; y < nq; ++y) {
      if (d[q.mul(x, y)] != i.mul(d[x], chi.sig(x, d[y]))) return false;
      const int qb = q.bracket(x, y);
      int rhs = chi.tv(x, d[y]);
      rhs = i.mul(rhs, d[x]);
      rhs = i.mul(rhs, d[y]);
      rhs = i.mul(rhs, chi.sig(qb, i.mul(i.mul(chi.nv(y, d[x]), i.inv(d[x])), i.inv(d[y]))));
      if (d[qb] != rhs) return false;
    }
  return true;
}

std::vector<Derivation> derivations(const ActionTerms& chi, const SearchLimits& limits) {
  require_abelian(chi.I);
  const int nq = chi.Q.order(), ni = chi.I.order();
  const std::uint64_t frontier =
      saturating_power(static_cast<std::uint64_t>(ni), nq - 1, limits.map_search_candidates);
  if (frontier > limits.map_search_candidates)
    throw SearchBoundError("derivation scan over " + std::to_string(ni) + "^" +
                               std::to_string(nq - 1) + " maps exceeds ceiling",
                           frontier);
  std::vector<Derivation> out;
  std::vector<int> d(nq, 0);
  while (true) {
    if (is_derivation(chi, d)) out.push_back(Derivation{d});
    int pos = nq - 1;
    while (pos >= 1 && d[pos] == ni - 1) d[pos--] = 0;
    if (pos < 1) break;
    ++d[pos];
  }
  return out;
}

std::vector<Derivation> principal_derivations(const ActionTerms& chi) {
  const FiniteMLA& i = chi.I;
  const int nq = chi.Q.order(), ni = i.order();
  std::set<std::vector<int>> seen;
  for (int a = 0; a < ni; ++a) {
    std::vector<int> d(nq);
    for (int x = 0; x < nq; ++x) d[x] = i.mul(a, i.inv(chi.sig(x, a)));
    seen.insert(std::move(d));
  }
  std::vector<Derivation> out;
  for (const auto& d : seen) out.push_back(Derivation{d});
  return out;
}

AbelianGroupPresentation h1_group(const ActionTerms& chi, const SearchLimits& limits) {
  const FiniteMLA& i = chi.I;
  std::vector<std::vector<int>> members;
  for (const auto& d : derivations(chi, limits)) members.push_back(d.d);
  std::vector<std::vector<int>> principal;
  for (const auto& d : principal_derivations(chi)) principal.push_back(d.d);
  return present_quotient(members, principal,
                          [&](const std::vector<int>& a, const std::vector<int>& b) {
                            std::vector<int> s(a.size());
                            for (std::size_t k = 0; k < a.size(); ++k) s[k] = i.mul(a[k], b[k]);
                            return s;
                          });
}

Subset h0_set(const ActionTerms& chi) {
  const int nq = chi.Q.order(), ni = chi.I.order();
  Subset fixed(ni);
  for (int a = 0; a < ni; ++a) {
    bool keep = true;
    for (int x = 0; x < nq && keep; ++x)
      if (chi.sig(x, a) != a) keep = false;
    if (keep) fixed.add(a);
  }
  return fixed;
}

std::vector<StabilizingAutomorphism> stabilizing_automorphisms(const Extension& e,
                                                               const SearchLimits& limits) {
  require_abelian(e.kernel);
  const int nq = e.quotient.order(), ni = e.kernel.order(), nt = e.total.order();
  for (int a = 0; a < ni; ++a)
    if (e.kernel_embed[a] != pair_index(a, 0, nq))
      throw std::invalid_argument("extension is not in crossed-product coordinates");
  for (int p = 0; p < nt; ++p)
    if (e.proj[p] != p % nq)
      throw std::invalid_argument("extension is not in crossed-product coordinates");
  const std::uint64_t frontier =
      saturating_power(static_cast<std::uint64_t>(ni), nq - 1, limits.map_search_candidates);
  if (frontier > limits.map_search_candidates)
    throw SearchBoundError("stabilizer scan exceeds ceiling", frontier);

  std::vector<StabilizingAutomorphism> out;
  std::vector<int> g(nq, 0);
  std::vector<int> phi(nt);
  while (true) {
    for (int a = 0; a < ni; ++a)
      for (int x = 0; x < nq; ++x)
        phi[pair_index(a, x, nq)] =
            e.total.mul(pair_index(a, 0, nq), pair_index(g[x], x, nq));
    bool ok = is_homomorphism(phi, e.total, e.total);
    if (ok) {
      std::vector<char> seen(nt, 0);
      for (int v : phi)
        if (seen[v]++) {
          ok = false;
          break;
        }
    }
    if (ok) out.push_back(StabilizingAutomorphism{phi, g});
    int pos = nq - 1;
    while (pos >= 1 && g[pos] == ni - 1) g[pos--] = 0;
    if (pos < 1) break;
    ++g[pos];
  }
  return out;
}

}  // namespace mlakit
