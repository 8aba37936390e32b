#include "mlakit/correspondence.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "mlakit/limits.hpp"

namespace mlakit {

namespace {

void require_same_datum(const ActionTerms& chi, const ActionTerms& chi_prime) {
  if (!same_tables(chi.Q, chi_prime.Q) || !same_tables(chi.I, chi_prime.I))
    throw std::invalid_argument("action terms live over different datum");
}

}  // namespace

bool action_witness_ok(const ActionTerms& chi, const std::vector<int>& s) {
  const FiniteMLA& q = chi.Q;
  const FiniteMLA& i = chi.I;
  const int nq = q.order(), ni = i.order();
  if (static_cast<int>(s.size()) != nq * nq) return false;
  for (int v : s)
    if (v < 0 || v >= ni) return false;
  for (int x = 0; x < nq; ++x)
    for (int y = 0; y < nq; ++y) {
      const int v = s[x * nq + y];
      const int xy = q.mul(x, y);
      for (int a = 0; a < ni; ++a) {
        if (i.mul(chi.sig(x, chi.sig(y, a)), v) != i.mul(v, chi.sig(xy, a))) return false;
        int rhs = i.mul(chi.sig(x, chi.tv(y, a)), chi.tv(x, a));
        rhs = i.mul(rhs, i.bracket(i.inv(v), i.conj(a, v)));
        rhs = i.mul(rhs, v);
        if (i.mul(v, chi.tv(xy, a)) != rhs) return false;
        rhs = i.bracket(i.conj(a, i.inv(v)), i.inv(v));
        rhs = i.mul(rhs, chi.nv(x, a));
        rhs = i.mul(rhs, chi.sig(x, chi.nv(y, a)));
        rhs = i.mul(rhs, v);
        if (i.mul(v, chi.nv(xy, a)) != rhs) return false;
      }
    }
  return true;
}

std::optional<std::vector<int>> find_action_witness(const ActionTerms& chi) {
  const FiniteMLA& q = chi.Q;
  const FiniteMLA& i = chi.I;
  const int nq = q.order(), ni = i.order();
  std::vector<int> s(static_cast<std::size_t>(nq) * nq, -1);
  // each axiom instance constrains a single cell, so solve cells independently
  for (int x = 0; x < nq; ++x)
    for (int y = 0; y < nq; ++y) {
      const int xy = q.mul(x, y);
      int found = -1;
      for (int v = 0; v < ni && found < 0; ++v) {
        bool all = true;
        for (int a = 0; a < ni && all; ++a) {
          if (i.mul(chi.sig(x, chi.sig(y, a)), v) != i.mul(v, chi.sig(xy, a))) all = false;
          if (all) {
            int rhs = i.mul(chi.sig(x, chi.tv(y, a)), chi.tv(x, a));
            rhs = i.mul(rhs, i.bracket(i.inv(v), i.conj(a, v)));
            rhs = i.mul(rhs, v);
            if (i.mul(v, chi.tv(xy, a)) != rhs) all = false;
          }
          if (all) {
            int rhs = i.bracket(i.conj(a, i.inv(v)), i.inv(v));
            rhs = i.mul(rhs, chi.nv(x, a));
            rhs = i.mul(rhs, chi.sig(x, chi.nv(y, a)));
            rhs = i.mul(rhs, v);
            if (i.mul(v, chi.nv(xy, a)) != rhs) all = false;
          }
        }
        if (all) found = v;
      }
      if (found < 0) return std::nullopt;
      s[x * nq + y] = found;
    }
  return s;
}

ActionClass action_class_of(const Cocycle2& c) {
  ActionClass out{action_terms_of(c), c.T};
  if (!action_witness_ok(out.representative, c.T))
    throw std::logic_error("factor set of a 2-cocycle must witness the action axioms");
  return out;
}

std::optional<ActionClass> action_class_from_tables(const ActionTerms& chi) {
  auto s = find_action_witness(chi);
  if (!s) return std::nullopt;
  return ActionClass{chi, std::move(s)};
}

namespace {

/// Per-x witness search shared by the two readings of the middle condition.
/// `commutator_middle` swaps {h(x),a} for the group commutator [h(x),a].
std::optional<std::vector<int>> equivalence_search(const ActionTerms& from,
                                                   const ActionTerms& to,
                                                   bool commutator_middle) {
  const FiniteMLA& i = from.I;
  const int nq = from.Q.order(), ni = i.order();
  std::vector<int> h(nq, -1);
  for (int x = 0; x < nq; ++x) {
    int found = -1;
    for (int v = 0; v < ni && found < 0; ++v) {
      bool all = true;
      for (int a = 0; a < ni && all; ++a) {
        if (from.sig(x, a) != i.conj(to.sig(x, a), v)) all = false;
        if (all) {
          const int middle =
              commutator_middle ? i.mul(i.conj(a, v), i.inv(a)) : i.bracket(v, a);
          if (from.tv(x, a) != i.mul(i.conj(to.tv(x, a), v), middle)) all = false;
        }
        if (all && from.nv(x, a) != i.mul(i.bracket(a, v), i.conj(to.nv(x, a), v)))
          all = false;
      }
      if (all) found = v;
    }
    if (found < 0) return std::nullopt;
    h[x] = found;
  }
  return h;
}

}  // namespace

ActionEquivalence actions_equivalent(const ActionTerms& chi, const ActionTerms& chi_prime) {
  require_same_datum(chi, chi_prime);
  ActionEquivalence out;
  out.h = equivalence_search(chi, chi_prime, /*commutator_middle=*/false);
  out.h_commutator = equivalence_search(chi, chi_prime, /*commutator_middle=*/true);
  return out;
}

bool closure_check(const ActionTerms& chi, const Subset& b) {
  if (!is_subalgebra(chi.I, b)) throw std::invalid_argument("subset is not a subalgebra");
  const int nq = chi.Q.order(), ni = chi.I.order();
  for (int x = 0; x < nq; ++x)
    for (int a = 0; a < ni; ++a) {
      if (!b.test(a)) continue;
      if (!b.test(chi.sig(x, a)) || !b.test(chi.tv(x, a)) || !b.test(chi.nv(x, a)))
        return false;
    }
  return true;
}

ActionTerms restrict_action(const ActionTerms& chi, const Subset& b,
                            std::vector<int>* global_of_local) {
  if (!closure_check(chi, b))
    throw std::invalid_argument("subset is not closed under the action terms");
  std::vector<int> g2l;
  FiniteMLA local = restrict_algebra(chi.I, b, &g2l);
  std::vector<int> into(chi.I.order(), -1);
  for (int k = 0; k < local.order(); ++k) into[g2l[k]] = k;

  const int nq = chi.Q.order(), nb = local.order();
  ActionTerms out{chi.Q, local, {}, {}, {}};
  out.sigma.assign(nq, std::vector<int>(nb));
  out.tau.assign(static_cast<std::size_t>(nq) * nb, 0);
  out.nu.assign(static_cast<std::size_t>(nq) * nb, 0);
  for (int x = 0; x < nq; ++x)
    for (int k = 0; k < nb; ++k) {
      out.sigma[x][k] = into[chi.sig(x, g2l[k])];
      out.tau[x * nb + k] = into[chi.tv(x, g2l[k])];
      out.nu[x * nb + k] = into[chi.nv(x, g2l[k])];
    }
  if (global_of_local) *global_of_local = std::move(g2l);
  return out;
}

FactorSet embed_factor_set(const FactorSet& s, const std::vector<int>& global_of_local) {
  FactorSet out = s;
  for (int& v : out.T) v = global_of_local.at(v);
  for (int& v : out.Tf) v = global_of_local.at(v);
  return out;
}

Cocycle2 act_h2_on_extension(const Cocycle2& t, const FactorSet& s,
                             const SearchLimits& limits) {
  const FiniteMLA& i = t.I;
  const int nq = t.Q.order();
  const std::size_t cells = static_cast<std::size_t>(nq) * nq;
  if (s.T.size() != cells || s.Tf.size() != cells)
    throw std::invalid_argument("factor set tables must be |Q|×|Q|");
  const Subset zeta = centers(i).algebraic_center.members;
  for (const auto* table : {&s.T, &s.Tf})
    for (int v : *table)
      if (v < 0 || v >= i.order() || !zeta.test(v))
        throw ImageNotCentralError("factor set value " + std::to_string(v) +
                                   " is outside the algebraic center of the kernel");
  Cocycle2 out = t;
  for (std::size_t k = 0; k < cells; ++k) {
    out.T[k] = i.mul(t.T[k], s.T[k]);
    out.Tf[k] = i.mul(t.Tf[k], s.Tf[k]);
  }
  LawReport report;
  if (!check_compatibility(out, &report, limits))
    throw std::invalid_argument("combined cocycle fails validation: " + report.summary());
  return out;
}

CorrespondenceReport verify_correspondence(const FiniteMLA& q, const FiniteMLA& i,
                                           const ActionTerms& chi,
                                           const SearchLimits& limits) {
  if (!same_tables(chi.Q, q) || !same_tables(chi.I, i))
    throw std::invalid_argument("action terms do not match the datum");
  CorrespondenceReport rep;

  for (const ExtensionClass& cls : classify_extensions(q, i, limits))
    if (actions_equivalent(action_terms_of(cls.representative), chi).h)
      rep.ext_classes.push_back(cls.representative);
  rep.realized = !rep.ext_classes.empty();
  if (!rep.realized) return rep;

  std::vector<int> g2l;
  const Subset zeta = centers(i).algebraic_center.members;
  const ActionTerms chiz = restrict_action(chi, zeta, &g2l);
  rep.h2 = h2_group(chiz, limits);

  const int nq = q.order();
  const int nz = chiz.I.order();
  const int nc = static_cast<int>(rep.ext_classes.size());
  const int ns = rep.h2.group.order();
  std::vector<int> into(i.order(), -1);
  for (int k = 0; k < nz; ++k) into[g2l[k]] = k;

  // all coboundaries over the restricted datum, for class membership tests
  std::vector<FactorSet> coboundaries;
  std::set<std::vector<int>> coboundary_flats;
  {
    if (saturating_power(static_cast<std::uint64_t>(nz), nq - 1,
                         limits.map_search_candidates) > limits.map_search_candidates)
      throw SearchBoundError("coboundary scan frontier exceeded",
                             limits.map_search_candidates);
    std::vector<int> h(nq, 0);
    while (true) {
      FactorSet g = coboundary_from(chiz, h);
      if (coboundary_flats.insert(g.flat()).second) coboundaries.push_back(g);
      int pos = nq - 1;
      while (pos >= 1 && h[pos] == nz - 1) h[pos--] = 0;
      if (pos < 1) break;
      ++h[pos];
    }
  }
  auto h2_class_of = [&](const FactorSet& local) -> int {
    for (int s = 0; s < ns; ++s) {
      FactorSet diff =
          add_factor_sets(local, negate_factor_set(rep.h2.class_reps[s], chiz.I), chiz.I);
      if (coboundary_flats.count(diff.flat())) return s;
    }
    return -1;
  };
  auto census_class_of = [&](const Cocycle2& u) -> int {
    for (int c = 0; c < nc; ++c)
      if (cocycles_equivalent(u, rep.ext_classes[c], limits)) return c;
    return -1;
  };
  auto try_act = [&](const Cocycle2& t, const FactorSet& local) -> std::optional<Cocycle2> {
    try {
      return act_h2_on_extension(t, embed_factor_set(local, g2l), limits);
    } catch (const ImageNotCentralError&) {
      return std::nullopt;
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  };

  rep.orbit.assign(nc, std::vector<int>(ns, -1));
  rep.identity_fixes = rep.addition_composes = rep.well_defined = true;
  rep.central_differences = rep.free_action = rep.transitive = true;

  const int zero = rep.h2.group.zero;
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < ns; ++s) {
      const auto u = try_act(rep.ext_classes[c], rep.h2.class_reps[s]);
      if (!u) {
        rep.central_differences = false;
        continue;
      }
      rep.orbit[c][s] = census_class_of(*u);
      // the moved cocycle differs from the original by exactly the applied
      // central factor set
      const FactorSet embedded = embed_factor_set(rep.h2.class_reps[s], g2l);
      for (std::size_t k = 0; k < u->T.size(); ++k) {
        const int dt = i.mul(i.inv(rep.ext_classes[c].T[k]), u->T[k]);
        const int df = i.mul(i.inv(rep.ext_classes[c].Tf[k]), u->Tf[k]);
        if (dt != embedded.T[k] || df != embedded.Tf[k] || !zeta.test(dt) ||
            !zeta.test(df))
          rep.central_differences = false;
      }
    }

  for (int c = 0; c < nc; ++c) {
    if (rep.orbit[c][zero] != c) rep.identity_fixes = false;
    std::set<int> row;
    for (int s = 0; s < ns; ++s) {
      row.insert(rep.orbit[c][s]);
      if (rep.orbit[c][s] == c && s != zero) rep.free_action = false;
      if (rep.orbit[c][s] < 0) rep.free_action = rep.transitive = false;
    }
    for (int c2 = 0; c2 < nc; ++c2)
      if (!row.count(c2)) rep.transitive = false;
  }

  // fixing a class certifies a trivial cohomology class: any equivalence
  // witness between T∗S and T takes central values, and its coboundary
  // rebuilds S exactly
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < ns; ++s) {
      if (rep.orbit[c][s] != c) continue;
      const auto u = try_act(rep.ext_classes[c], rep.h2.class_reps[s]);
      std::optional<EquivalenceWitness> w;
      if (u) w = cocycles_equivalent(*u, rep.ext_classes[c], limits);
      if (!w) {
        rep.free_action = false;
        continue;
      }
      std::vector<int> h_local(nq, -1);
      bool central = true;
      for (int x = 0; x < nq; ++x) {
        if (!zeta.test(w->h[x])) {
          central = false;
          break;
        }
        h_local[x] = into[w->h[x]];
      }
      if (!central || coboundary_from(chiz, h_local) != rep.h2.class_reps[s])
        rep.free_action = false;
    }

  // action laws on classes, exercised through members rather than class reps
  for (int c = 0; c < nc; ++c)
    for (int s = 0; s < ns; ++s) {
      const auto u1 = try_act(rep.ext_classes[c], rep.h2.class_reps[s]);
      if (!u1) {
        rep.addition_composes = rep.well_defined = false;
        continue;
      }
      for (int s2 = 0; s2 < ns; ++s2) {
        const auto u12 = try_act(*u1, rep.h2.class_reps[s2]);
        const int target = u12 ? census_class_of(*u12) : -1;
        if (target < 0 || target != rep.orbit[c][rep.h2.group.add[s * ns + s2]])
          rep.addition_composes = false;
        if (rep.orbit[c][s] < 0 || target < 0 || target != rep.orbit[rep.orbit[c][s]][s2])
          rep.well_defined = false;
      }
      // shifting the acting factor set by any coboundary keeps the target
      for (const FactorSet& g : coboundaries) {
        const FactorSet shifted = add_factor_sets(rep.h2.class_reps[s], g, chiz.I);
        const auto u = try_act(rep.ext_classes[c], shifted);
        if (!u || census_class_of(*u) != rep.orbit[c][s]) rep.well_defined = false;
      }
    }

  // constructive transitivity: re-section the target so both cocycles carry
  // identical action terms, then their pointwise difference is a central
  // factor set connecting the pair
  for (int c = 0; c < nc; ++c)
    for (int c2 = 0; c2 < nc; ++c2) {
      const Cocycle2& from = rep.ext_classes[c];
      const Cocycle2& to = rep.ext_classes[c2];
      auto h = actions_equivalent(action_terms_of(from), action_terms_of(to)).h;
      if (!h) {
        rep.central_differences = false;
        continue;
      }
      CrossedProduct p = build_crossed_product(to, limits);
      if (!p.ok()) {
        rep.central_differences = false;
        continue;
      }
      Section t;
      t.lift.resize(nq);
      for (int x = 0; x < nq; ++x) t.lift[x] = pair_index((*h)[x], x, nq);
      const Cocycle2 resectioned = extract_cocycle(*p.extension, t);
      if (resectioned.sigma != from.sigma || resectioned.tau != from.tau ||
          resectioned.nu != from.nu) {
        rep.central_differences = false;
        continue;
      }
      FactorSet local;
      local.T.assign(from.T.size(), -1);
      local.Tf.assign(from.Tf.size(), -1);
      bool central = true;
      for (std::size_t k = 0; k < from.T.size(); ++k) {
        const int dt = i.mul(i.inv(from.T[k]), resectioned.T[k]);
        const int df = i.mul(i.inv(from.Tf[k]), resectioned.Tf[k]);
        if (!zeta.test(dt) || !zeta.test(df)) {
          central = false;
          break;
        }
        local.T[k] = into[dt];
        local.Tf[k] = into[df];
      }
      if (!central) {
        rep.central_differences = false;
        continue;
      }
      const int s = h2_class_of(local);
      if (s < 0 || rep.orbit[c][s] != c2) rep.central_differences = false;
    }

  rep.cardinalities_match = nc == ns;
  return rep;
}

}  // namespace mlakit
