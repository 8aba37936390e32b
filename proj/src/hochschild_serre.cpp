#include "mlakit/hochschild_serre.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mlakit/substructures.hpp"

namespace mlakit {

namespace {

void require_datum(const ActionTerms& chi, const Extension& e) {
  if (!same_tables(chi.Q, e.total))
    throw std::invalid_argument("action terms and extension disagree on the total algebra");
}

void require_abelian_coefficients(const FiniteMLA& a) {
  if (!a.is_abelian_algebra())
    throw NotAbelianKernelError("coefficient algebra must be abelian");
}

/// total-index → kernel-local index, −1 off the embedded kernel.
std::vector<int> kernel_locals(const Extension& e) {
  std::vector<int> loc(e.total.order(), -1);
  for (int n = 0; n < e.kernel.order(); ++n) loc[e.kernel_embed[n]] = n;
  return loc;
}

Subset ideal_members(const Extension& e) {
  Subset s(e.total.order());
  for (int n = 0; n < e.kernel.order(); ++n) s.add(e.kernel_embed[n]);
  return s;
}

void require_derivation_on_ideal(const ActionTerms& chi_ideal, const std::vector<int>& d) {
  if (static_cast<int>(d.size()) != chi_ideal.Q.order())
    throw std::invalid_argument("derivation table has the wrong domain size");
  for (int v : d)
    if (v < 0 || v >= chi_ideal.I.order())
      throw std::invalid_argument("derivation table value out of range");
  if (!is_derivation(chi_ideal, d))
    throw std::invalid_argument("table is not a derivation of the restricted datum");
}

}  // namespace

Subset fixed_subalgebra(const ActionTerms& chi, const Subset& ideal) {
  require_abelian_coefficients(chi.I);
  if (ideal.universe() != chi.Q.order())
    throw std::invalid_argument("ideal lives in a different algebra than the action terms");
  if (!is_ideal(chi.Q, ideal)) throw std::invalid_argument("member set is not an ideal");
  const FiniteMLA& a = chi.I;
  const std::vector<int> members = ideal.members();
  Subset fixed(a.order());
  for (int v = 0; v < a.order(); ++v) {
    bool keep = true;
    for (int n : members) {
      if (chi.sig(n, v) != v || chi.tv(n, v) != 0 || chi.nv(n, v) != 0) {
        keep = false;
        break;
      }
    }
    if (keep) fixed.add(v);
  }
  if (!fixed.test(0)) throw std::logic_error("fixed subalgebra misses the identity");
  for (int u : fixed.members()) {
    if (!fixed.test(a.inv(u))) throw std::logic_error("fixed subalgebra not closed under inverse");
    for (int v : fixed.members())
      if (!fixed.test(a.mul(u, v)))
        throw std::logic_error("fixed subalgebra not closed under multiplication");
  }
  return fixed;
}

InducedAction induced_action(const ActionTerms& chi, const Extension& e) {
  require_datum(chi, e);
  require_abelian_coefficients(chi.I);
  InducedAction out;
  out.fixed = fixed_subalgebra(chi, ideal_members(e));
  FiniteMLA ai = restrict_algebra(chi.I, out.fixed, &out.global_of_local);
  out.local_of_global.assign(chi.I.order(), -1);
  for (int k = 0; k < ai.order(); ++k) out.local_of_global[out.global_of_local[k]] = k;

  const FiniteMLA& q = e.quotient;
  const int nq = q.order(), nl = ai.order();
  Section sec = canonical_section(e);
  ActionTerms hat;
  hat.Q = q;
  hat.I = ai;
  hat.sigma.assign(nq, std::vector<int>(nl, 0));
  hat.tau.assign(nq * nl, 0);
  hat.nu.assign(nq * nl, 0);
  auto read = [&](int m, int local, const char* table) {
    const int glob = out.global_of_local[local];
    const int value = table[0] == 's'   ? chi.sig(m, glob)
                      : table[0] == 't' ? chi.tv(m, glob)
                                        : chi.nv(m, glob);
    const int vl = out.local_of_global[value];
    if (vl < 0) {
      std::ostringstream msg;
      msg << table << " at representative " << m << " sends fixed element " << glob
          << " outside the fixed subalgebra (to " << value << ")";
      throw IllDefinedError(msg.str());
    }
    return vl;
  };
  for (int x = 0; x < nq; ++x) {
    const int m0 = sec.lift[x];
    for (int k = 0; k < nl; ++k) {
      hat.sigma[x][k] = read(m0, k, "sigma");
      hat.tau[x * nl + k] = read(m0, k, "tau");
      hat.nu[x * nl + k] = read(m0, k, "nu");
    }
    for (int m = 0; m < e.total.order(); ++m) {
      if (e.proj[m] != x || m == m0) continue;
      for (int k = 0; k < nl; ++k) {
        const char* offending = nullptr;
        if (read(m, k, "sigma") != hat.sigma[x][k]) offending = "sigma";
        if (!offending && read(m, k, "tau") != hat.tau[x * nl + k]) offending = "tau";
        if (!offending && read(m, k, "nu") != hat.nu[x * nl + k]) offending = "nu";
        if (offending) {
          std::ostringstream msg;
          msg << offending << " disagrees on fixed element " << out.global_of_local[k]
              << " between representatives " << m0 << " and " << m << " of quotient element "
              << x;
          throw IllDefinedError(msg.str());
        }
      }
    }
  }
  out.chi_hat = std::move(hat);
  return out;
}

ActionTerms restricted_action(const ActionTerms& chi, const Extension& e) {
  require_datum(chi, e);
  const int ni = e.kernel.order(), na = chi.I.order();
  ActionTerms out;
  out.Q = e.kernel;
  out.I = chi.I;
  out.sigma.assign(ni, std::vector<int>(na, 0));
  out.tau.assign(ni * na, 0);
  out.nu.assign(ni * na, 0);
  for (int n = 0; n < ni; ++n) {
    const int m = e.kernel_embed[n];
    for (int a = 0; a < na; ++a) {
      out.sigma[n][a] = chi.sig(m, a);
      out.tau[n * na + a] = chi.tv(m, a);
      out.nu[n * na + a] = chi.nv(m, a);
    }
  }
  return out;
}

std::vector<int> inflate_derivation(const InducedAction& ind, const Extension& e,
                                    const std::vector<int>& d) {
  const int nq = e.quotient.order();
  if (static_cast<int>(d.size()) != nq)
    throw std::invalid_argument("derivation table has the wrong domain size");
  std::vector<int> out(e.total.order());
  for (int m = 0; m < e.total.order(); ++m) {
    const int v = d[e.proj[m]];
    if (v < 0 || v >= static_cast<int>(ind.global_of_local.size()))
      throw std::invalid_argument("derivation table value out of range");
    out[m] = ind.global_of_local[v];
  }
  return out;
}

FactorSet inflate_factor_set(const InducedAction& ind, const Extension& e, const FactorSet& fs) {
  const int nq = e.quotient.order(), nt = e.total.order();
  if (static_cast<int>(fs.T.size()) != nq * nq || static_cast<int>(fs.Tf.size()) != nq * nq)
    throw std::invalid_argument("factor set has the wrong shape for the quotient");
  const int nl = static_cast<int>(ind.global_of_local.size());
  for (int v : fs.T)
    if (v < 0 || v >= nl) throw std::invalid_argument("factor set value out of range");
  for (int v : fs.Tf)
    if (v < 0 || v >= nl) throw std::invalid_argument("factor set value out of range");
  FactorSet out;
  out.T.resize(nt * nt);
  out.Tf.resize(nt * nt);
  for (int m = 0; m < nt; ++m)
    for (int m2 = 0; m2 < nt; ++m2) {
      const int k = e.proj[m] * nq + e.proj[m2];
      out.T[m * nt + m2] = ind.global_of_local[fs.T[k]];
      out.Tf[m * nt + m2] = ind.global_of_local[fs.Tf[k]];
    }
  return out;
}

std::vector<int> restrict_derivation(const Extension& e, const std::vector<int>& d) {
  if (static_cast<int>(d.size()) != e.total.order())
    throw std::invalid_argument("derivation table has the wrong domain size");
  std::vector<int> out(e.kernel.order());
  for (int n = 0; n < e.kernel.order(); ++n) out[n] = d[e.kernel_embed[n]];
  return out;
}

int h1_class_of(const ActionTerms& chi, const AbelianGroupPresentation& h1,
                const std::vector<int>& d) {
  const FiniteMLA& i = chi.I;
  if (static_cast<int>(d.size()) != chi.Q.order())
    throw std::invalid_argument("derivation table has the wrong domain size");
  for (int v : d)
    if (v < 0 || v >= i.order())
      throw std::invalid_argument("derivation table value out of range");
  std::vector<int> best;
  for (const Derivation& p : principal_derivations(chi)) {
    std::vector<int> member(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) member[k] = i.mul(d[k], p.d[k]);
    if (best.empty() || member < best) best = std::move(member);
  }
  auto it = std::lower_bound(h1.elements.begin(), h1.elements.end(), best);
  if (it == h1.elements.end() || *it != best)
    throw std::logic_error("derivation does not belong to the presented group");
  return static_cast<int>(it - h1.elements.begin());
}

int h2_class_of(const ActionTerms& chi, const H2Result& h2, const FactorSet& fs,
                const SearchLimits& limits) {
  for (int k = 0; k < h2.group.order(); ++k) {
    if (cocycles_equivalent(cocycle_with_factor_sets(chi, h2.class_reps[k]),
                            cocycle_with_factor_sets(chi, fs), limits))
      return k;
  }
  throw std::logic_error("factor set is not equivalent to any class representative");
}

std::vector<Subset> square_solution_sets(const ActionTerms& chi, const Extension& e,
                                         const std::vector<int>& d, const SearchLimits& limits) {
  require_datum(chi, e);
  require_abelian_coefficients(chi.I);
  require_derivation_on_ideal(restricted_action(chi, e), d);
  const FiniteMLA& t = e.total;
  const FiniteMLA& a = chi.I;
  const int nt = t.order(), na = a.order(), ni = e.kernel.order();
  // The search space of candidate tables is |A|^(|M|-1); the per-element
  // fibre decomposition below explores it in |M|·|A|·|I| steps.
  const std::uint64_t frontier =
      saturating_power(static_cast<std::uint64_t>(na), nt - 1, limits.map_search_candidates);
  if (frontier > limits.map_search_candidates)
    throw SearchBoundError("square-condition search over " + std::to_string(na) + "^" +
                               std::to_string(nt - 1) + " tables exceeds ceiling",
                           frontier);
  const std::vector<int> loc = kernel_locals(e);

  std::vector<Subset> fibres(nt, Subset(na));
  for (int m = 0; m < nt; ++m) {
    for (int v = 0; v < na; ++v) {
      bool admissible = true;
      for (int n = 0; n < ni && admissible; ++n) {
        const int en = e.kernel_embed[n];
        const int cl = loc[t.mul(t.mul(t.inv(m), en), m)];
        if (cl < 0) throw std::invalid_argument("kernel is not normal in the total algebra");
        const int lhs1 = a.mul(chi.sig(m, d[cl]), a.inv(d[n]));
        const int rhs1 = a.mul(chi.sig(en, v), a.inv(v));
        if (lhs1 != rhs1) {
          admissible = false;
          break;
        }
        const int br = t.bracket(m, en);
        const int brl = loc[br];
        if (brl < 0) throw std::invalid_argument("kernel does not absorb brackets");
        const int lhs2 = a.mul(a.mul(a.mul(d[brl], a.inv(chi.tv(m, d[n]))), chi.sig(br, d[n])),
                               a.inv(d[n]));
        const int rhs2 = a.mul(v, chi.sig(br, a.mul(chi.nv(en, v), a.inv(v))));
        if (lhs2 != rhs2) admissible = false;
      }
      if (admissible) fibres[m].add(v);
    }
  }
  return fibres;
}

std::optional<SquareWitness> square_condition(const ActionTerms& chi, const Extension& e,
                                              const std::vector<int>& d,
                                              const SearchLimits& limits) {
  const std::vector<Subset> fibres = square_solution_sets(chi, e, d, limits);
  const std::vector<int> loc = kernel_locals(e);
  SquareWitness w;
  w.d = d;
  w.eta.assign(e.total.order(), 0);
  for (int m = 0; m < e.total.order(); ++m) {
    if (loc[m] >= 0) {
      if (!fibres[m].test(d[loc[m]]))
        throw std::logic_error("derivation does not solve its own fibre on the ideal");
      w.eta[m] = d[loc[m]];
      continue;
    }
    if (fibres[m].empty()) return std::nullopt;
    w.eta[m] = fibres[m].members().front();
  }
  return w;
}

FactorSet transgression_factor_set(const ActionTerms& chi, const Extension& e,
                                   const InducedAction& ind, const SquareWitness& w) {
  require_datum(chi, e);
  if (!same_tables(ind.chi_hat.Q, e.quotient))
    throw std::invalid_argument("induced action belongs to a different quotient");
  const FiniteMLA& a = chi.I;
  const int nq = e.quotient.order(), ni = e.kernel.order();
  if (static_cast<int>(w.d.size()) != ni || static_cast<int>(w.eta.size()) != e.total.order())
    throw std::invalid_argument("witness tables have the wrong shape");
  if (w.eta[0] != 0) throw std::invalid_argument("witness is not normalized at the identity");
  for (int n = 0; n < ni; ++n)
    if (w.eta[e.kernel_embed[n]] != w.d[n])
      throw std::invalid_argument("witness does not extend the derivation");

  Section sec = canonical_section(e);
  Cocycle2 c = extract_cocycle(e, sec);
  auto fixed_local = [&](int value, int x, int y, const char* part) {
    const int vl = ind.local_of_global[value];
    if (vl < 0) {
      std::ostringstream msg;
      msg << "transgression " << part << " entry at (" << x << "," << y << ") = " << value
          << " lies outside the fixed subalgebra";
      throw ImageEscapeError(msg.str());
    }
    return vl;
  };
  FactorSet out;
  out.T.resize(nq * nq);
  out.Tf.resize(nq * nq);
  for (int x = 0; x < nq; ++x)
    for (int y = 0; y < nq; ++y) {
      const int lx = sec.lift[x], ly = sec.lift[y];
      const int txy = c.t(x, y);
      const int exy = e.kernel_embed[txy];
      const int lxy = sec.lift[e.quotient.mul(x, y)];
      const int val = a.mul(a.mul(w.eta[lx], chi.sig(lx, w.eta[ly])),
                            a.inv(a.mul(chi.sig(exy, w.eta[lxy]), w.d[txy])));
      out.T[x * nq + y] = fixed_local(val, x, y, "group");

      const int tfxy = c.tf(x, y);
      const int efxy = e.kernel_embed[tfxy];
      const int lbr = sec.lift[e.quotient.bracket(x, y)];
      const int br = e.total.bracket(lx, ly);
      const int inner = a.mul(chi.nv(ly, w.eta[lx]), a.inv(a.mul(w.eta[lx], w.eta[ly])));
      const int pos = a.mul(a.mul(a.mul(w.eta[lx], w.eta[ly]), chi.tv(lx, w.eta[ly])),
                            chi.sig(br, inner));
      const int neg = a.mul(chi.sig(efxy, w.eta[lbr]), w.d[tfxy]);
      out.Tf[x * nq + y] = fixed_local(a.mul(pos, a.inv(neg)), x, y, "bracket");
    }
  return out;
}

int transgression_class(const ActionTerms& chi, const Extension& e, const InducedAction& ind,
                        const H2Result& h2_hat, const SquareWitness& w,
                        const SearchLimits& limits) {
  FactorSet fs = transgression_factor_set(chi, e, ind, w);
  if (!check_compatibility(cocycle_with_factor_sets(ind.chi_hat, fs), nullptr, limits))
    throw std::logic_error("transgression produced an incompatible factor set");
  return h2_class_of(ind.chi_hat, h2_hat, fs, limits);
}

FiveTermReport verify_five_term(const ActionTerms& chi, const Extension& e,
                                const SearchLimits& limits) {
  require_datum(chi, e);
  require_abelian_coefficients(chi.I);
  if (!check_action_compatibility(chi, nullptr, limits))
    throw std::invalid_argument("action terms are not compatible for the total datum");
  {
    const Subset h0 = h0_set(chi);
    if (h0.count() > 1) {
      std::ostringstream msg;
      msg << "fixed points of the total action are nontrivial: element " << h0.members()[1]
          << " is fixed by every conjugation term";
      throw HypothesisFailedError(msg.str());
    }
  }

  const InducedAction ind = induced_action(chi, e);
  const ActionTerms chi_ideal = restricted_action(chi, e);
  const AbelianGroupPresentation h1q = h1_group(ind.chi_hat, limits);
  const AbelianGroupPresentation h1m = h1_group(chi, limits);
  const AbelianGroupPresentation h1i = h1_group(chi_ideal, limits);
  const H2Result h2q = h2_group(ind.chi_hat, limits);
  const H2Result h2m = h2_group(chi, limits);

  FiveTermReport report;
  report.h1_quotient = h1q.order();
  report.h1_total = h1m.order();
  report.h2_quotient = h2q.group.order();
  report.h2_total = h2m.group.order();
  report.h1_ideal_full = h1i.order();

  auto complain = [&report](const std::string& text) {
    if (report.counterexample.empty()) report.counterexample = text;
  };

  // Certify each ideal class and transgress the certified ones.
  std::vector<std::optional<SquareWitness>> witness(h1i.order());
  std::vector<int> trans_class_of(h1i.order(), -1);
  for (int k = 0; k < h1i.order(); ++k) {
    witness[k] = square_condition(chi, e, h1i.elements[k], limits);
    if (witness[k]) {
      ++report.h1_ideal_square;
      trans_class_of[k] = transgression_class(chi, e, ind, h2q, *witness[k], limits);
    }
  }
  if (!witness[h1i.zero])
    throw std::logic_error("zero class fails the square condition");
  for (int u = 0; u < h1i.order(); ++u)
    for (int v = 0; v < h1i.order(); ++v)
      if (witness[u] && witness[v] && !witness[h1i.add[u * h1i.order() + v]])
        throw std::logic_error("certified classes are not closed under addition");

  // Junction 1: inflation into H¹(M, A, χ) is injective.
  std::vector<int> inflated_class(h1q.order());
  for (int k = 0; k < h1q.order(); ++k) {
    const std::vector<int> dm = inflate_derivation(ind, e, h1q.elements[k]);
    if (!is_derivation(chi, dm))
      throw std::logic_error("inflated table is not a derivation of the total datum");
    inflated_class[k] = h1_class_of(chi, h1m, dm);
  }
  report.inflation_injective = true;
  for (int u = 0; u < h1q.order() && report.inflation_injective; ++u)
    for (int v = u + 1; v < h1q.order(); ++v)
      if (inflated_class[u] == inflated_class[v]) {
        report.inflation_injective = false;
        std::ostringstream msg;
        msg << "inflation identifies distinct classes " << u << " and " << v;
        complain(msg.str());
        break;
      }
  for (int u = 0; u < h1q.order(); ++u)
    for (int v = 0; v < h1q.order(); ++v)
      if (h1m.add[inflated_class[u] * h1m.order() + inflated_class[v]] !=
          inflated_class[h1q.add[u * h1q.order() + v]])
        throw std::logic_error("inflation does not respect addition of classes");

  // Junction 2: image of inflation = kernel of restriction.
  std::vector<int> restricted_class(h1m.order());
  for (int k = 0; k < h1m.order(); ++k)
    restricted_class[k] = h1_class_of(chi_ideal, h1i, restrict_derivation(e, h1m.elements[k]));
  const std::set<int> im_inflation(inflated_class.begin(), inflated_class.end());
  std::set<int> ker_restriction;
  for (int k = 0; k < h1m.order(); ++k)
    if (restricted_class[k] == h1i.zero) ker_restriction.insert(k);
  report.exact_at_h1_total = im_inflation == ker_restriction;
  if (!report.exact_at_h1_total) {
    std::ostringstream msg;
    msg << "image of inflation and kernel of restriction differ inside H1 of the total datum ("
        << im_inflation.size() << " vs " << ker_restriction.size() << " classes)";
    complain(msg.str());
  }

  // Junction 3: image of restriction = kernel of transgression, inside the
  // certified subgroup.
  const std::set<int> im_restriction(restricted_class.begin(), restricted_class.end());
  bool image_certified = true;
  for (int c : im_restriction)
    if (!witness[c]) {
      image_certified = false;
      std::ostringstream msg;
      msg << "restricted class " << c << " has no square-condition certificate";
      complain(msg.str());
      break;
    }
  std::set<int> ker_transgression;
  for (int k = 0; k < h1i.order(); ++k)
    if (witness[k] && trans_class_of[k] == h2q.group.zero) ker_transgression.insert(k);
  report.exact_at_h1_ideal = image_certified && im_restriction == ker_transgression;
  if (image_certified && !report.exact_at_h1_ideal) {
    std::ostringstream msg;
    msg << "image of restriction and kernel of transgression differ inside the certified part ("
        << im_restriction.size() << " vs " << ker_transgression.size() << " classes)";
    complain(msg.str());
  }

  // Transgression respects addition on certified classes.
  for (int u = 0; u < h1i.order(); ++u)
    for (int v = 0; v < h1i.order(); ++v) {
      if (!witness[u] || !witness[v]) continue;
      const int sum = h1i.add[u * h1i.order() + v];
      if (h2q.group.add[trans_class_of[u] * h2q.group.order() + trans_class_of[v]] !=
          trans_class_of[sum])
        throw std::logic_error("transgression does not respect addition of classes");
    }

  // Junction 4: image of transgression = kernel of inflation into H²(M, A, χ).
  std::set<int> im_transgression;
  for (int k = 0; k < h1i.order(); ++k)
    if (witness[k]) im_transgression.insert(trans_class_of[k]);
  std::set<int> ker_inflation2;
  for (int k = 0; k < h2q.group.order(); ++k) {
    const FactorSet lifted = inflate_factor_set(ind, e, h2q.class_reps[k]);
    if (!check_compatibility(cocycle_with_factor_sets(chi, lifted), nullptr, limits))
      throw std::logic_error("inflated factor set is not compatible for the total datum");
    if (h2_class_of(chi, h2m, lifted, limits) == h2m.group.zero) ker_inflation2.insert(k);
  }
  report.exact_at_h2_quotient = im_transgression == ker_inflation2;
  if (!report.exact_at_h2_quotient) {
    std::ostringstream msg;
    msg << "image of transgression and kernel of inflation differ inside H2 of the quotient ("
        << im_transgression.size() << " vs " << ker_inflation2.size() << " classes)";
    complain(msg.str());
  }
  return report;
}

}  // namespace mlakit
