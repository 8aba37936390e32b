#include "mlakit/wells.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace mlakit {

namespace {

std::vector<int> identity_perm(int n) {
  std::vector<int> f(n);
  for (int k = 0; k < n; ++k) f[k] = k;
  return f;
}

bool is_permutation(const std::vector<int>& f, int n) {
  if (static_cast<int>(f.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (int v : f) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

std::vector<int> inverse_perm(const std::vector<int>& f) {
  std::vector<int> g(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) g[f[k]] = static_cast<int>(k);
  return g;
}

/// f ∘ g, i.e. apply g first.
std::vector<int> compose_perm(const std::vector<int>& f, const std::vector<int>& g) {
  std::vector<int> r(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) r[k] = f[g[k]];
  return r;
}

void require_pair(const CompatiblePair& p, const FiniteMLA& q, const FiniteMLA& i) {
  if (!is_permutation(p.omega, i.order()) || !is_homomorphism(p.omega, i, i))
    throw std::invalid_argument("omega is not an automorphism of the kernel");
  if (!is_permutation(p.kappa, q.order()) || !is_homomorphism(p.kappa, q, q))
    throw std::invalid_argument("kappa is not an automorphism of the quotient");
}

/// Index of the class of `local` (a factor set over the restricted datum) in
/// `h2`, decided by membership of the difference in the coboundary set.
int class_index_of(const FactorSet& local, const ActionTerms& chiz, const H2Result& h2,
                   const std::set<std::vector<int>>& coboundary_flats) {
  for (int s = 0; s < h2.group.order(); ++s) {
    const FactorSet diff =
        add_factor_sets(local, negate_factor_set(h2.class_reps[s], chiz.I), chiz.I);
    if (coboundary_flats.count(diff.flat())) return s;
  }
  return -1;
}

std::set<std::vector<int>> all_coboundary_flats(const ActionTerms& chiz,
                                                const SearchLimits& limits) {
  const int nq = chiz.Q.order(), nz = chiz.I.order();
  if (saturating_power(static_cast<std::uint64_t>(nz), nq - 1, limits.map_search_candidates) >
      limits.map_search_candidates)
    throw SearchBoundError("coboundary scan frontier exceeded", limits.map_search_candidates);
  std::set<std::vector<int>> out;
  std::vector<int> h(nq, 0);
  while (true) {
    out.insert(coboundary_from(chiz, h).flat());
    int pos = nq - 1;
    while (pos >= 1 && h[pos] == nz - 1) h[pos--] = 0;
    if (pos < 1) break;
    ++h[pos];
  }
  return out;
}

}  // namespace

CompatiblePair identity_pair(const FiniteMLA& q, const FiniteMLA& i) {
  return CompatiblePair{identity_perm(i.order()), identity_perm(q.order())};
}

ActionTerms pair_action_on_terms(const ActionTerms& chi, const CompatiblePair& p) {
  require_pair(p, chi.Q, chi.I);
  const int nq = chi.Q.order(), ni = chi.I.order();
  const std::vector<int> winv = inverse_perm(p.omega);
  const std::vector<int> kinv = inverse_perm(p.kappa);
  ActionTerms out;
  out.Q = chi.Q;
  out.I = chi.I;
  out.sigma.assign(nq, std::vector<int>(ni));
  out.tau.resize(nq * ni);
  out.nu.resize(nq * ni);
  for (int x = 0; x < nq; ++x)
    for (int a = 0; a < ni; ++a) {
      out.sigma[x][a] = p.omega[chi.sig(kinv[x], winv[a])];
      out.tau[x * ni + a] = p.omega[chi.tv(kinv[x], winv[a])];
      out.nu[x * ni + a] = p.omega[chi.nv(kinv[x], winv[a])];
    }
  return out;
}

Cocycle2 pair_action_on_cocycle(const Cocycle2& t, const CompatiblePair& p,
                                const SearchLimits& limits) {
  const ActionTerms twisted = pair_action_on_terms(action_terms_of(t), p);
  const int nq = t.Q.order();
  const std::vector<int> kinv = inverse_perm(p.kappa);
  Cocycle2 out = t;
  out.sigma = twisted.sigma;
  out.tau = twisted.tau;
  out.nu = twisted.nu;
  for (int x = 0; x < nq; ++x)
    for (int y = 0; y < nq; ++y) {
      out.T[x * nq + y] = p.omega[t.t(kinv[x], kinv[y])];
      out.Tf[x * nq + y] = p.omega[t.tf(kinv[x], kinv[y])];
    }
  if (check_compatibility(t, nullptr, limits) && !check_compatibility(out, nullptr, limits))
    throw std::logic_error("twist of a compatible cocycle failed to validate");
  return out;
}

std::vector<CompatiblePair> compatible_pairs(const ActionTerms& chi, const SearchLimits& limits) {
  const auto auts_i = all_automorphisms(chi.I, limits);
  const auto auts_q = all_automorphisms(chi.Q, limits);
  const std::uint64_t frontier =
      static_cast<std::uint64_t>(auts_i.size()) * static_cast<std::uint64_t>(auts_q.size());
  if (frontier > limits.pair_candidates)
    throw SearchBoundError("automorphism pair frontier " + std::to_string(frontier) +
                               " exceeds ceiling",
                           frontier);
  std::vector<CompatiblePair> out;
  for (const auto& omega : auts_i)
    for (const auto& kappa : auts_q) {
      CompatiblePair p{omega, kappa};
      if (actions_equivalent(pair_action_on_terms(chi, p), chi).h) out.push_back(std::move(p));
    }
  std::sort(out.begin(), out.end());
  // C(Q,I,χ) is a subgroup of Aut I × Aut Q; a gap here is a logic error.
  for (const auto& p : out)
    for (const auto& p2 : out) {
      const CompatiblePair composed{compose_perm(p.omega, p2.omega),
                                    compose_perm(p.kappa, p2.kappa)};
      if (!std::binary_search(out.begin(), out.end(), composed))
        throw std::logic_error("compatible pairs are not closed under composition");
    }
  return out;
}

int wells_map(const Cocycle2& t, const CompatiblePair& p, const SearchLimits& limits) {
  const ActionTerms chi = action_terms_of(t);
  require_pair(p, chi.Q, chi.I);
  const ActionTerms chip = pair_action_on_terms(chi, p);
  const auto eq = actions_equivalent(chip, chi);
  if (!eq.h) throw std::invalid_argument("pair does not preserve the action class");

  CrossedProduct cp = build_crossed_product(t, limits);
  if (!cp.ok())
    throw std::invalid_argument("cocycle is not compatible: " + cp.report.summary());
  const Extension& e = *cp.extension;
  const FiniteMLA& i = t.I;
  const int nq = t.Q.order(), ni = i.order();

  // Re-section by the witness so the minuend carries the twisted terms.
  Section sec;
  sec.lift.resize(nq);
  for (int x = 0; x < nq; ++x) sec.lift[x] = pair_index((*eq.h)[x], x, nq);
  const Cocycle2 shifted = extract_cocycle(e, sec);
  if (action_terms_of(shifted).flat() != chip.flat())
    throw std::logic_error("re-sectioned terms do not match the twisted terms");

  const Cocycle2 twisted = pair_action_on_cocycle(t, p, limits);

  const Subset zeta = centers(i).algebraic_center.members;
  std::vector<int> g2l;
  const ActionTerms chiz = restrict_action(chi, zeta, &g2l);
  std::vector<int> into(ni, -1);
  for (std::size_t k = 0; k < g2l.size(); ++k) into[g2l[k]] = static_cast<int>(k);

  FactorSet local;
  local.T.resize(nq * nq);
  local.Tf.resize(nq * nq);
  for (int k = 0; k < nq * nq; ++k) {
    const int dt = i.mul(shifted.T[k], i.inv(twisted.T[k]));
    const int df = i.mul(shifted.Tf[k], i.inv(twisted.Tf[k]));
    if (!zeta.test(dt) || !zeta.test(df))
      throw ImageNotCentralError("cocycle difference leaves the algebraic center of the kernel");
    local.T[k] = into[dt];
    local.Tf[k] = into[df];
  }

  const H2Result h2 = h2_group(chiz, limits);
  const auto coboundary_flats = all_coboundary_flats(chiz, limits);
  const int s = class_index_of(local, chiz, h2, coboundary_flats);
  if (s < 0) throw std::logic_error("cocycle difference is not a central 2-cocycle");
  return s;
}

std::vector<KernelPreservingAutomorphism> aut_I_group(const Extension& e,
                                                      const SearchLimits& limits) {
  const auto auts = all_automorphisms(e.total, limits);
  const int nn = e.total.order(), ni = e.kernel.order(), nq = e.quotient.order();

  std::vector<int> embed_inv(nn, -1);
  for (int b = 0; b < ni; ++b) embed_inv[e.kernel_embed[b]] = b;

  const Section s1 = canonical_section(e);
  Section s2;
  s2.lift.assign(nq, -1);
  for (int p = 0; p < nn; ++p) s2.lift[e.proj[p]] = p;  // greatest preimage wins

  std::vector<KernelPreservingAutomorphism> out;
  for (const auto& phi : auts) {
    bool preserves = true;
    std::vector<int> omega(ni);
    for (int b = 0; b < ni && preserves; ++b) {
      const int img = embed_inv[phi[e.kernel_embed[b]]];
      if (img < 0)
        preserves = false;
      else
        omega[b] = img;
    }
    if (!preserves) continue;
    std::vector<int> kappa(nq), kappa2(nq);
    for (int x = 0; x < nq; ++x) {
      kappa[x] = e.proj[phi[s1.lift[x]]];
      kappa2[x] = e.proj[phi[s2.lift[x]]];
    }
    if (kappa != kappa2) throw std::logic_error("induced quotient map depends on the section");
    if (!is_homomorphism(omega, e.kernel, e.kernel) ||
        !is_homomorphism(kappa, e.quotient, e.quotient))
      throw std::logic_error("restriction of a kernel-preserving automorphism is not one");
    out.push_back({phi, CompatiblePair{std::move(omega), std::move(kappa)}});
  }
  return out;  // auts is sorted, so out is sorted by phi with identity first
}

WellsReport verify_wells(const Extension& e, const SearchLimits& limits) {
  const Cocycle2 base = extract_cocycle(e, canonical_section(e));
  CrossedProduct cp = build_crossed_product(base, limits);
  if (!cp.ok())
    throw std::invalid_argument("extension does not validate in crossed coordinates: " +
                                cp.report.summary());
  const Extension& cx = *cp.extension;
  const FiniteMLA& i = base.I;
  const int nq = base.Q.order(), ni = i.order(), nn = cx.total.order();
  const ActionTerms chi = action_terms_of(base);

  WellsReport r;

  const Subset zeta = centers(i).algebraic_center.members;
  std::vector<int> g2l;
  const ActionTerms chiz = restrict_action(chi, zeta, &g2l);
  const auto ders = derivations(chiz, limits);
  const auto auts = aut_I_group(cx, limits);
  const auto pairs = compatible_pairs(chi, limits);
  const H2Result h2 = h2_group(chiz, limits);

  r.der_order = static_cast<int>(ders.size());
  r.aut_i_order = static_cast<int>(auts.size());
  r.pair_order = static_cast<int>(pairs.size());
  r.h2_order = h2.group.order();

  // i : d ↦ φ_d with φ_d⟨a,x⟩ = ⟨a·d(x), x⟩.
  std::set<std::vector<int>> im_i;
  for (const Derivation& d : ders) {
    std::vector<int> phi(nn);
    for (int a = 0; a < ni; ++a)
      for (int x = 0; x < nq; ++x)
        phi[pair_index(a, x, nq)] = pair_index(i.mul(a, g2l[d.d[x]]), x, nq);
    im_i.insert(std::move(phi));
  }
  r.i_injective = im_i.size() == ders.size();

  const CompatiblePair idp = identity_pair(base.Q, i);
  std::set<std::vector<int>> ker_psi;
  for (const auto& ka : auts)
    if (ka.pair == idp) ker_psi.insert(ka.phi);
  r.im_i_equals_ker_psi = im_i == ker_psi;

  // ψ respects composition: the pair of φ∘φ′ is the composite of pairs.
  std::map<std::vector<int>, const CompatiblePair*> pair_of;
  for (const auto& ka : auts) pair_of[ka.phi] = &ka.pair;
  r.psi_is_homomorphism = true;
  for (const auto& f : auts)
    for (const auto& g : auts) {
      const auto it = pair_of.find(compose_perm(f.phi, g.phi));
      if (it == pair_of.end()) throw std::logic_error("automorphism group is not closed");
      const CompatiblePair expect{compose_perm(f.pair.omega, g.pair.omega),
                                  compose_perm(f.pair.kappa, g.pair.kappa)};
      if (!(*it->second == expect)) r.psi_is_homomorphism = false;
    }

  // The Wells map on every pair, from the canonical base section.
  std::vector<int> wt(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) wt[k] = wells_map(base, pairs[k], limits);

  std::set<CompatiblePair> im_psi, ker_wt;
  for (const auto& ka : auts) im_psi.insert(ka.pair);
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (wt[k] == h2.group.zero) ker_wt.insert(pairs[k]);
  r.im_psi_equals_ker_wells = im_psi == ker_wt;

  // Constructive direction at the last junction: rebuild the lift
  // φ⟨a,x⟩ = ⟨ω(a)·h(x), κ(x)⟩ for every kernel pair and verify it.
  r.kernel_pairs_lift = true;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (wt[k] != h2.group.zero) continue;
    const CompatiblePair& p = pairs[k];
    bool lifted = false;
    const ActionTerms chip = pair_action_on_terms(chi, p);
    if (const auto eq = actions_equivalent(chip, chi); eq.h) {
      Section sec;
      sec.lift.resize(nq);
      for (int x = 0; x < nq; ++x) sec.lift[x] = pair_index((*eq.h)[x], x, nq);
      const Cocycle2 shifted = extract_cocycle(cx, sec);
      const Cocycle2 twisted = pair_action_on_cocycle(base, p, limits);
      if (const auto u = cocycles_equivalent(shifted, twisted, limits); u) {
        std::vector<int> phi(nn);
        for (int a = 0; a < ni; ++a)
          for (int x = 0; x < nq; ++x) {
            const int kx = p.kappa[x];
            const int hx = i.mul(i.inv(u->h[kx]), (*eq.h)[kx]);
            phi[pair_index(a, x, nq)] = pair_index(i.mul(p.omega[a], hx), kx, nq);
          }
        if (is_permutation(phi, nn) && is_homomorphism(phi, cx.total, cx.total)) {
          bool induces = true;
          for (int b = 0; b < ni && induces; ++b)
            induces = phi[cx.kernel_embed[b]] == cx.kernel_embed[p.omega[b]];
          const Section cs = canonical_section(cx);
          for (int x = 0; x < nq && induces; ++x)
            induces = cx.proj[phi[cs.lift[x]]] == p.kappa[x];
          lifted = induces;
        }
      }
    }
    if (!lifted) r.kernel_pairs_lift = false;
  }

  // The class [T − T^{(ω,κ)}] must not depend on which section presented T.
  Section alt;
  alt.lift.resize(nq);
  for (int x = 0; x < nq; ++x) alt.lift[x] = pair_index(x == 0 || ni == 1 ? 0 : 1, x, nq);
  const Cocycle2 base2 = extract_cocycle(cx, alt);
  r.wells_section_independent = true;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (wells_map(base2, pairs[k], limits) != wt[k]) r.wells_section_independent = false;

  return r;
}

namespace {

/// How one element of the discovery order gets its image: fixed identity,
/// free generator choice, or forced by an operation on earlier elements.
struct ElementDefn {
  enum Kind { kIdentity, kGenerator, kMul, kBracket, kInv } kind = kIdentity;
  int u = -1;
  int v = -1;
};

/// All automorphisms whose image of each element e lies in candidates[e],
/// by backtracking over generator images only; forced elements are derived
/// through their defining operation and checked against the candidate mask.
std::vector<std::vector<int>> constrained_automorphisms(
    const FiniteMLA& a, const std::vector<std::vector<int>>& candidates,
    const SearchLimits& limits) {
  const int n = a.order();
  std::vector<int> discovery;
  std::vector<ElementDefn> defn(n);
  std::vector<char> known(n, 0);
  std::vector<int> gens;
  auto close = [&]() {
    bool grew = true;
    while (grew) {
      grew = false;
      for (int u = 0; u < n; ++u) {
        if (!known[u]) continue;
        const int iu = a.inv(u);
        if (!known[iu]) {
          known[iu] = 1;
          defn[iu] = {ElementDefn::kInv, u, -1};
          discovery.push_back(iu);
          grew = true;
        }
        for (int v = 0; v < n; ++v) {
          if (!known[v]) continue;
          const int m = a.mul(u, v);
          if (!known[m]) {
            known[m] = 1;
            defn[m] = {ElementDefn::kMul, u, v};
            discovery.push_back(m);
            grew = true;
          }
          const int b = a.bracket(u, v);
          if (!known[b]) {
            known[b] = 1;
            defn[b] = {ElementDefn::kBracket, u, v};
            discovery.push_back(b);
            grew = true;
          }
        }
      }
    }
  };
  known[0] = 1;
  defn[0] = {ElementDefn::kIdentity, -1, -1};
  discovery.push_back(0);
  close();
  for (int x = 0; x < n; ++x)
    if (!known[x]) {
      known[x] = 1;
      defn[x] = {ElementDefn::kGenerator, -1, -1};
      gens.push_back(x);
      discovery.push_back(x);
      close();
    }

  std::uint64_t frontier = 1;
  for (int g : gens) {
    const std::uint64_t c = candidates[g].empty() ? 1 : candidates[g].size();
    if (frontier > limits.map_search_candidates / c) {
      frontier = limits.map_search_candidates + 1;
      break;
    }
    frontier *= c;
  }
  if (frontier > limits.map_search_candidates)
    throw SearchBoundError("constrained automorphism frontier exceeds ceiling", frontier);

  std::vector<Subset> mask(n, Subset(n));
  for (int e = 0; e < n; ++e)
    for (int m : candidates[e]) mask[e].add(m);

  std::vector<int> f(n, -1);
  std::vector<char> used(n, 0);
  std::vector<std::vector<int>> out;
  auto full_homomorphism = [&]() {
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (f[a.mul(u, v)] != a.mul(f[u], f[v])) return false;
        if (f[a.bracket(u, v)] != a.bracket(f[u], f[v])) return false;
      }
    return true;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == discovery.size()) {
      if (full_homomorphism()) out.push_back(f);
      return;
    }
    const int e = discovery[k];
    auto attempt = [&](int img) {
      if (img < 0 || used[img] || !mask[e].test(img)) return;
      f[e] = img;
      used[img] = 1;
      rec(k + 1);
      used[img] = 0;
      f[e] = -1;
    };
    switch (defn[e].kind) {
      case ElementDefn::kIdentity:
        attempt(0);
        break;
      case ElementDefn::kGenerator:
        for (int img : candidates[e]) attempt(img);
        break;
      case ElementDefn::kMul:
        attempt(a.mul(f[defn[e].u], f[defn[e].v]));
        break;
      case ElementDefn::kBracket:
        attempt(a.bracket(f[defn[e].u], f[defn[e].v]));
        break;
      case ElementDefn::kInv:
        attempt(a.inv(f[defn[e].u]));
        break;
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

/// Nilpotency class of a composition-closed permutation group via its lower
/// central series; -1 if the series stalls before reaching the identity.
int perm_group_nilpotency_class(const std::vector<std::vector<int>>& group, int degree) {
  const std::vector<int> id = identity_perm(degree);
  const std::set<std::vector<int>> whole(group.begin(), group.end());
  auto commutator = [&](const std::vector<int>& f, const std::vector<int>& g) {
    return compose_perm(compose_perm(f, g), compose_perm(inverse_perm(f), inverse_perm(g)));
  };
  auto generated = [&](std::set<std::vector<int>> s) {
    std::vector<std::vector<int>> queue(s.begin(), s.end());
    while (!queue.empty()) {
      const std::vector<int> f = std::move(queue.back());
      queue.pop_back();
      const std::vector<std::vector<int>> snapshot(s.begin(), s.end());
      for (const auto& g : snapshot) {
        for (auto&& h : {compose_perm(f, g), compose_perm(g, f)})
          if (s.insert(h).second) queue.push_back(h);
      }
    }
    return s;
  };
  std::set<std::vector<int>> cur = whole;
  const std::set<std::vector<int>> trivial{id};
  int cls = 0;
  while (cur != trivial) {
    std::set<std::vector<int>> gens{id};
    for (const auto& f : whole)
      for (const auto& g : cur) gens.insert(commutator(f, g));
    auto next = generated(std::move(gens));
    if (next == cur || cls > static_cast<int>(whole.size())) return -1;
    cur = std::move(next);
    ++cls;
  }
  return cls;
}

}  // namespace

SeriesStabilizerReport series_stabilizer_nilpotency(const FiniteMLA& a,
                                                    const std::vector<Subset>& series,
                                                    const SearchLimits& limits) {
  const int n = a.order();
  if (n > limits.soft_order)
    throw SearchBoundError("series stabilizer refused for order " + std::to_string(n),
                           static_cast<std::uint64_t>(n));
  if (series.empty() || series.front() != Subset::full(n))
    throw std::invalid_argument("series must start at the whole algebra");
  if (series.back().count() != 1 || !series.back().test(0))
    throw std::invalid_argument("series must end at the trivial ideal");
  for (std::size_t k = 0; k + 1 < series.size(); ++k)
    if (!series[k].contains(series[k + 1]) || series[k] == series[k + 1])
      throw std::invalid_argument("series must descend strictly");
  for (const Subset& s : series)
    if (!is_ideal(a, s)) throw std::invalid_argument("every series term must be an ideal");

  const int len = static_cast<int>(series.size()) - 1;

  // φ may move a member of A_k only within its A_{k+1}-coset; the binding
  // constraint for e is the deepest term containing it.
  std::vector<std::vector<int>> candidates(n);
  for (int e = 0; e < n; ++e) {
    int level = 0;
    while (level + 1 < static_cast<int>(series.size()) && series[level + 1].test(e)) ++level;
    if (level == len) {
      candidates[e] = {e};
      continue;
    }
    for (int m = 0; m < n; ++m)
      if (series[level + 1].test(a.mul(m, a.inv(e)))) candidates[e].push_back(m);
  }

  SeriesStabilizerReport r;
  r.series_length = len;
  r.stabilizer = constrained_automorphisms(a, candidates, limits);

  for (const auto& f : r.stabilizer)
    for (const auto& g : r.stabilizer)
      if (!std::binary_search(r.stabilizer.begin(), r.stabilizer.end(), compose_perm(f, g)))
        throw std::logic_error("series stabilizer is not closed under composition");

  r.nilpotency_class = perm_group_nilpotency_class(r.stabilizer, n);
  r.within_bound = r.nilpotency_class >= 0 && r.nilpotency_class <= std::max(len - 1, 0);
  return r;
}

}  // namespace mlakit
