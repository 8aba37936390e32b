#include "mlakit/extension.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "mlakit/substructures.hpp"

namespace mlakit {

bool same_tables(const FiniteMLA& a, const FiniteMLA& b) {
  return a.order() == b.order() && a.mul_table() == b.mul_table() &&
         a.bracket_table() == b.bracket_table();
}

Extension extension_from_kernel(const FiniteMLA& total, const Subset& kernel) {
  const IdealHandle ideal = make_ideal(total, kernel);
  std::vector<int> embed;
  FiniteMLA i = restrict_algebra(total, kernel, &embed);
  QuotientResult q = quotient(total, ideal);
  return Extension{total, std::move(i), std::move(q.quotient), std::move(embed),
                   std::move(q.projection)};
}

Section canonical_section(const Extension& e) {
  std::vector<int> lift(e.quotient.order(), -1);
  for (int t = 0; t < e.total.order(); ++t)
    if (lift[e.proj[t]] < 0) lift[e.proj[t]] = t;
  return Section{std::move(lift)};
}

bool is_section(const Extension& e, const Section& s) {
  if (s.lift.size() != static_cast<std::size_t>(e.quotient.order())) return false;
  if (s.lift[0] != 0) return false;
  for (int x = 0; x < e.quotient.order(); ++x) {
    if (s.lift[x] < 0 || s.lift[x] >= e.total.order()) return false;
    if (e.proj[s.lift[x]] != x) return false;
  }
  return true;
}

std::vector<int> Cocycle2::flat() const {
  std::vector<int> out = T;
  out.insert(out.end(), Tf.begin(), Tf.end());
  for (const auto& row : sigma) out.insert(out.end(), row.begin(), row.end());
  out.insert(out.end(), tau.begin(), tau.end());
  out.insert(out.end(), nu.begin(), nu.end());
  return out;
}

bool Cocycle2::well_formed(std::string* why) const {
  const int nq = Q.order(), ni = I.order();
  auto fail = [&](const char* m) {
    if (why) *why = m;
    return false;
  };
  if (nq < 1 || ni < 1) return fail("empty datum");
  auto table_ok = [&](const std::vector<int>& t, std::size_t want) {
    if (t.size() != want) return false;
    for (int v : t)
      if (v < 0 || v >= ni) return false;
    return true;
  };
  if (!table_ok(T, static_cast<std::size_t>(nq) * nq)) return fail("factor-set table T");
  if (!table_ok(Tf, static_cast<std::size_t>(nq) * nq)) return fail("factor-set table T_f");
  if (!table_ok(tau, static_cast<std::size_t>(nq) * ni)) return fail("action table tau");
  if (!table_ok(nu, static_cast<std::size_t>(nq) * ni)) return fail("action table nu");
  if (sigma.size() != static_cast<std::size_t>(nq)) return fail("sigma row count");
  for (const auto& row : sigma) {
    if (!table_ok(row, static_cast<std::size_t>(ni))) return fail("sigma row shape");
    std::vector<char> seen(ni, 0);
    for (int v : row)
      if (seen[v]++) return fail("sigma row is not a permutation");
  }
  return true;
}

bool Cocycle2::normalized(std::string* why) const {
  const int nq = Q.order();
  auto fail = [&](const char* m) {
    if (why) *why = m;
    return false;
  };
  for (int x = 0; x < nq; ++x) {
    if (t(x, 0) != 0 || t(0, x) != 0) return fail("T not normalized at the identity");
    if (tf(x, 0) != 0 || tf(0, x) != 0 || tf(x, x) != 0)
      return fail("T_f not normalized at the identity/diagonal");
    if (tv(x, 0) != 0 || nv(x, 0) != 0) return fail("tau/nu not normalized at 1");
  }
  return true;
}

Cocycle2 trivial_cocycle(const FiniteMLA& q, const FiniteMLA& i) {
  const int nq = q.order(), ni = i.order();
  Cocycle2 c;
  c.Q = q;
  c.I = i;
  c.T.assign(nq * nq, 0);
  c.Tf.assign(nq * nq, 0);
  std::vector<int> id(ni);
  std::iota(id.begin(), id.end(), 0);
  c.sigma.assign(nq, id);
  c.tau.assign(nq * ni, 0);
  c.nu.assign(nq * ni, 0);
  return c;
}

Cocycle2 extract_cocycle(const Extension& e, const Section& l) {
  if (!is_section(e, l)) throw std::invalid_argument("lift table is not a section");
  const FiniteMLA& a = e.total;
  const FiniteMLA& q = e.quotient;
  const int nq = q.order(), ni = e.kernel.order();
  std::vector<int> into(a.order(), -1);
  for (int k = 0; k < ni; ++k) into[e.kernel_embed[k]] = k;
  auto pull = [&](int t) {
    if (into[t] < 0)
      throw KernelEscapeError("total element " + std::to_string(t) +
                              " escapes the embedded kernel");
    return into[t];
  };
  Cocycle2 c;
  c.Q = q;
  c.I = e.kernel;
  c.T.resize(nq * nq);
  c.Tf.resize(nq * nq);
  c.sigma.assign(nq, std::vector<int>(ni));
  c.tau.resize(nq * ni);
  c.nu.resize(nq * ni);
  for (int x = 0; x < nq; ++x) {
    const int lx = l.lift[x];
    for (int y = 0; y < nq; ++y) {
      const int ly = l.lift[y];
      c.T[x * nq + y] = pull(a.mul(a.mul(lx, ly), a.inv(l.lift[q.mul(x, y)])));
      c.Tf[x * nq + y] = pull(a.mul(a.bracket(lx, ly), a.inv(l.lift[q.bracket(x, y)])));
    }
    for (int k = 0; k < ni; ++k) {
      const int ik = e.kernel_embed[k];
      c.sigma[x][k] = pull(a.conj(ik, lx));
      c.tau[x * ni + k] = pull(a.bracket(lx, ik));
      c.nu[x * ni + k] = pull(a.bracket(ik, lx));
    }
  }
  return c;
}

namespace {

// Shared by the public entry point and the census, which has already shaped
// its candidates and skips the redundant well-formedness pass.
CrossedProduct build_crossedproduct_impl(const Cocycle2& c, const SearchLimits& limits) {
  const FiniteMLA& q = c.Q;
  const FiniteMLA& i = c.I;
  const int nq = q.order(), ni = i.order();
  const long long n = static_cast<long long>(nq) * ni;
  if (n > limits.hard_order)
    throw SearchBoundError("crossed product order " + std::to_string(n) + " exceeds ceiling",
                           static_cast<std::uint64_t>(n));
  const int nn = static_cast<int>(n);
  auto pair = [&](int a, int x) { return pair_index(a, x, nq); };
  std::vector<int> mul(nn * nn), bracket(nn * nn);
  for (int a = 0; a < ni; ++a)
    for (int x = 0; x < nq; ++x) {
      const int u = pair(a, x);
      for (int b = 0; b < ni; ++b)
        for (int y = 0; y < nq; ++y) {
          const int v = pair(b, y);
          mul[u * nn + v] = pair(i.mul(i.mul(a, c.sig(x, b)), c.t(x, y)), q.mul(x, y));
          const int qb = q.bracket(x, y);
          int f = i.conj(c.tv(x, b), a);
          f = i.mul(f, i.bracket(a, b));
          f = i.mul(f, i.mul(b, a));
          f = i.mul(f, c.tf(x, y));
          f = i.mul(f, c.sig(qb, i.mul(i.mul(i.inv(a), c.nv(y, a)), i.inv(b))));
          bracket[u * nn + v] = pair(f, qb);
        }
    }
  CrossedProduct out;
  auto checked = validate_algebra(nn, mul, bracket,
                                  "crossed(" + i.name() + "," + q.name() + ")", limits);
  out.report = std::move(checked.report);
  if (!checked.algebra) return out;

  // The printed inverse formula must agree with the group inverse the
  // validated table already determines.
  const FiniteMLA& total = *checked.algebra;
  for (int a = 0; a < ni; ++a)
    for (int x = 0; x < nq; ++x) {
      const int xi = q.inv(x);
      const int by_formula = pair(c.sig(xi, i.mul(i.inv(c.t(x, xi)), i.inv(a))), xi);
      if (total.inv(pair(a, x)) != by_formula)
        throw std::logic_error("crossed-product inverse formula disagrees with the table");
    }

  Extension e;
  e.kernel = i;
  e.quotient = q;
  e.kernel_embed.resize(ni);
  for (int a = 0; a < ni; ++a) e.kernel_embed[a] = pair(a, 0);
  e.proj.resize(nn);
  for (int p = 0; p < nn; ++p) e.proj[p] = p % nq;
  e.total = std::move(*checked.algebra);
  out.extension = std::move(e);
  return out;
}

}  // namespace

CrossedProduct build_crossed_product(const Cocycle2& c, const SearchLimits& limits) {
  std::string why;
  if (!c.well_formed(&why)) throw std::invalid_argument("malformed cocycle: " + why);
  return build_crossedproduct_impl(c, limits);
}

bool check_compatibility(const Cocycle2& c, LawReport* report, const SearchLimits& limits) {
  CrossedProduct p = build_crossed_product(c, limits);
  if (report) *report = p.report;
  return p.ok();
}

namespace {

bool morphism_conditions_hold(const Cocycle2& from, const Cocycle2& to,
                              const std::vector<int>& h) {
  const FiniteMLA& q = from.Q;
  const FiniteMLA& i = from.I;
  const int nq = q.order(), ni = i.order();
  for (int x = 0; x < nq; ++x) {
    const int hx = h[x];
    for (int a = 0; a < ni; ++a) {
      if (from.sig(x, a) != i.conj(to.sig(x, a), hx)) return false;
      if (from.tv(x, a) != i.mul(i.conj(to.tv(x, a), hx), i.bracket(hx, a))) return false;
      if (from.nv(x, a) != i.mul(i.bracket(a, hx), i.conj(to.nv(x, a), hx))) return false;
    }
  }
  for (int x = 0; x < nq; ++x)
    for (int y = 0; y < nq; ++y) {
      if (i.mul(from.t(x, y), h[q.mul(x, y)]) !=
          i.mul(i.mul(h[x], to.sig(x, h[y])), to.t(x, y)))
        return false;
      const int qb = q.bracket(x, y);
      int rhs = i.conj(to.tv(x, h[y]), h[x]);
      rhs = i.mul(rhs, i.bracket(h[x], h[y]));
      rhs = i.mul(rhs, i.mul(h[y], h[x]));
      rhs = i.mul(rhs, to.tf(x, y));
      rhs = i.mul(rhs, to.sig(qb, i.mul(i.mul(i.inv(h[x]), to.nv(y, h[x])), i.inv(h[y]))));
      if (i.mul(from.tf(x, y), h[qb]) != rhs) return false;
    }
  return true;
}

}  // namespace

std::optional<EquivalenceWitness> cocycles_equivalent(const Cocycle2& from, const Cocycle2& to,
                                                      const SearchLimits& limits) {
  if (!same_tables(from.Q, to.Q) || !same_tables(from.I, to.I))
    throw std::invalid_argument("cocycles are for different datum");
  const int nq = from.Q.order(), ni = from.I.order();
  const std::uint64_t frontier =
      saturating_power(static_cast<std::uint64_t>(ni), nq - 1, limits.map_search_candidates);
  if (frontier > limits.map_search_candidates)
    throw SearchBoundError("witness search over " + std::to_string(ni) + "^" +
                               std::to_string(nq - 1) + " maps exceeds ceiling",
                           frontier);
  std::vector<int> h(nq, 0);
  while (true) {
    if (morphism_conditions_hold(from, to, h)) return EquivalenceWitness{h};
    int pos = nq - 1;  // rightmost digit varies fastest: lexicographic order
    while (pos >= 1 && h[pos] == ni - 1) h[pos--] = 0;
    if (pos < 1) return std::nullopt;
    ++h[pos];
  }
}

namespace {

/// All maps t: I → I with t(1) = 1 satisfying the expansion law
/// t(b·c) = t(b)·t(c)^b, enumerated in lexicographic table order.  These are
/// the only shapes a bracket-action row can take.
std::vector<std::vector<int>> expansion_maps(const FiniteMLA& i,
                                             const std::function<void()>& tick) {
  const int n = i.order();
  std::vector<std::vector<int>> out;
  std::vector<int> t(n, -1);
  t[0] = 0;
  auto consistent_at = [&](int k) {
    for (int b = 0; b <= k; ++b) {
      if (t[b] < 0) continue;
      for (int c = 0; c <= k; ++c) {
        if (t[c] < 0) continue;
        const int bc = i.mul(b, c);
        if (bc <= k && t[bc] >= 0 && t[bc] != i.mul(t[b], i.conj(t[c], b))) return false;
      }
    }
    return true;
  };
  std::function<void(int)> rec = [&](int k) {
    if (k == n) {
      out.push_back(t);
      return;
    }
    // A product of two earlier elements forces the value outright.
    int forced = -1;
    for (int b = 0; b < k && forced < 0; ++b)
      for (int c = 0; c < k; ++c)
        if (i.mul(b, c) == k) {
          forced = i.mul(t[b], i.conj(t[c], b));
          break;
        }
    for (int v = 0; v < n; ++v) {
      if (forced >= 0 && v != forced) continue;
      tick();
      t[k] = v;
      if (consistent_at(k)) rec(k + 1);
      t[k] = -1;
    }
  };
  if (n == 1)
    out.push_back(t);
  else
    rec(1);
  return out;
}

}  // namespace

std::vector<ExtensionClass> classify_extensions(const FiniteMLA& q, const FiniteMLA& i,
                                                const SearchLimits& limits) {
  const int nq = q.order(), ni = i.order();
  if (static_cast<long long>(nq) * ni > limits.soft_order)
    throw SearchBoundError("census refused at product order " + std::to_string(nq * ni),
                           static_cast<std::uint64_t>(nq) * ni);
  std::uint64_t explored = 0;
  auto tick = [&]() {
    if (++explored > limits.census_candidates)
      throw SearchBoundError("census frontier exceeded", explored);
  };

  const auto auts = all_automorphisms(i, limits);  // sorted, identity first
  const auto action_rows = expansion_maps(i, tick);

  std::vector<Cocycle2> found;
  Cocycle2 c = trivial_cocycle(q, i);

  // Inverse of each automorphism, for the σ-composition constraint.
  std::vector<std::vector<int>> aut_inv(auts.size(), std::vector<int>(ni));
  for (std::size_t k = 0; k < auts.size(); ++k)
    for (int a = 0; a < ni; ++a) aut_inv[k][auts[k][a]] = a;

  std::vector<int> sig_ix(nq, 0);

  // Stage 4: free T_f cells (x ≠ y, both nonidentity), then validate.
  std::vector<std::pair<int, int>> tf_cells;
  for (int x = 1; x < nq; ++x)
    for (int y = 1; y < nq; ++y)
      if (x != y) tf_cells.emplace_back(x, y);
  std::function<void(std::size_t)> fill_tf = [&](std::size_t k) {
    if (k == tf_cells.size()) {
      tick();
      if (build_crossedproduct_impl(c, limits).ok()) found.push_back(c);
      return;
    }
    const auto [x, y] = tf_cells[k];
    for (int v = 0; v < ni; ++v) {
      tick();
      c.Tf[x * nq + y] = v;
      fill_tf(k + 1);
    }
    c.Tf[x * nq + y] = 0;
  };

  // Stage 3: one expansion-law row of τ per nonidentity quotient element;
  // ν is the pointwise inverse (forced by the alternating law downstairs).
  std::function<void(int)> fill_tau = [&](int x) {
    if (x == nq) {
      fill_tf(0);
      return;
    }
    for (const auto& row : action_rows) {
      tick();
      for (int a = 0; a < ni; ++a) {
        c.tau[x * ni + a] = row[a];
        c.nu[x * ni + a] = i.inv(row[a]);
      }
      fill_tau(x + 1);
    }
    for (int a = 0; a < ni; ++a) c.tau[x * ni + a] = c.nu[x * ni + a] = 0;
  };

  // Stage 2: T cells over the per-pair candidate sets, pruning with the
  // product-cocycle identity T(x,y)·T(xy,z) = σ_x(T(y,z))·T(x,yz) as soon as
  // all four cells of an instance are known.
  std::vector<std::vector<int>> t_candidates(nq * nq);
  std::vector<std::pair<int, int>> t_cells;
  for (int x = 1; x < nq; ++x)
    for (int y = 1; y < nq; ++y) t_cells.emplace_back(x, y);
  auto t_known = [&](int x, int y) { return x == 0 || y == 0 || c.T[x * nq + y] >= 0; };
  auto t_at = [&](int x, int y) { return (x == 0 || y == 0) ? 0 : c.T[x * nq + y]; };
  auto cocycle_identity_ok = [&]() {
    for (int x = 0; x < nq; ++x)
      for (int y = 0; y < nq; ++y)
        for (int z = 0; z < nq; ++z) {
          const int xy = q.mul(x, y), yz = q.mul(y, z);
          if (!t_known(x, y) || !t_known(xy, z) || !t_known(y, z) || !t_known(x, yz)) continue;
          if (i.mul(t_at(x, y), t_at(xy, z)) !=
              i.mul(auts[sig_ix[x]][t_at(y, z)], t_at(x, yz)))
            return false;
        }
    return true;
  };
  std::function<void(std::size_t)> fill_t = [&](std::size_t k) {
    if (k == t_cells.size()) {
      fill_tau(1);
      return;
    }
    const auto [x, y] = t_cells[k];
    for (int v : t_candidates[x * nq + y]) {
      tick();
      c.T[x * nq + y] = v;
      if (cocycle_identity_ok()) fill_t(k + 1);
    }
    c.T[x * nq + y] = -1;
  };

  // Stage 1: σ over Aut(I) with σ at the identity fixed to id.  For every
  // pair, T(x,y) must conjugate σ_{xy} to σ_x∘σ_y; empty candidate sets prune
  // the assignment.
  std::function<void(int)> fill_sigma = [&](int x) {
    if (x == nq) {
      for (int a = 0; a < nq; ++a) c.sigma[a] = auts[sig_ix[a]];
      bool feasible = true;
      for (int a = 0; a < nq && feasible; ++a)
        for (int b = 0; b < nq && feasible; ++b) {
          auto& cand = t_candidates[a * nq + b];
          cand.clear();
          const auto& sa = auts[sig_ix[a]];
          const auto& sb = auts[sig_ix[b]];
          const auto& sab = auts[sig_ix[q.mul(a, b)]];
          for (int v = 0; v < ni; ++v) {
            bool match = true;
            for (int e = 0; e < ni && match; ++e)
              if (sa[sb[e]] != i.conj(sab[e], v)) match = false;
            if (match) cand.push_back(v);
          }
          if (cand.empty()) feasible = false;
          if (a == 0 || b == 0) {
            // Normalized cells carry value 1; prune σ choices that cannot
            // host it (only possible when σ at the identity drifted).
            if (std::find(cand.begin(), cand.end(), 0) == cand.end()) feasible = false;
          }
        }
      if (!feasible) return;
      std::fill(c.T.begin(), c.T.end(), -1);
      for (int a = 0; a < nq; ++a) c.T[a * nq] = c.T[a] = 0;
      fill_t(0);
      std::fill(c.T.begin(), c.T.end(), 0);
      return;
    }
    for (std::size_t k = 0; k < auts.size(); ++k) {
      tick();
      sig_ix[x] = static_cast<int>(k);
      fill_sigma(x + 1);
    }
    sig_ix[x] = 0;
  };

  fill_sigma(1);

  // Partition into equivalence classes anchored at the first-found member.
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t k = 0; k < found.size(); ++k) {
    bool placed = false;
    for (auto& g : groups) {
      if (cocycles_equivalent(found[k], found[g.front()], limits)) {
        g.push_back(k);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({k});
  }
  std::vector<ExtensionClass> classes;
  for (const auto& g : groups) {
    std::size_t best = g.front();
    for (std::size_t idx : g)
      if (found[idx].flat() < found[best].flat()) best = idx;
    classes.push_back(ExtensionClass{found[best], static_cast<int>(g.size())});
  }
  std::sort(classes.begin(), classes.end(), [](const ExtensionClass& a, const ExtensionClass& b) {
    return a.representative.flat() < b.representative.flat();
  });
  return classes;
}

}  // namespace mlakit
