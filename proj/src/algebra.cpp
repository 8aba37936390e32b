#include "mlakit/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "mlakit/parallel.hpp"

namespace mlakit {

namespace {

std::string tuple_str(const std::vector<int>& w) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ",";
    os << w[i];
  }
  os << ")";
  return os.str();
}

/// Accumulates at most one witness per law (the lexicographically first one
/// in scan order) plus the total violation count for that law.
class ViolationSink {
 public:
  void add(const std::string& law, std::vector<int> witness, const std::string& message) {
    auto it = first_.find(law);
    if (it == first_.end()) {
      order_.push_back(law);
      first_.emplace(law, LawViolation{law, std::move(witness), message, 1});
    } else {
      it->second.occurrences += 1;
    }
  }

  void merge(const ViolationSink& later) {
    // `later` scanned a strictly higher index range, so our witness wins ties.
    for (const auto& law : later.order_) {
      const LawViolation& v = later.first_.at(law);
      auto it = first_.find(law);
      if (it == first_.end()) {
        order_.push_back(law);
        first_.emplace(law, v);
      } else {
        it->second.occurrences += v.occurrences;
      }
    }
  }

  void drain_into(LawReport& report) {
    for (const auto& law : order_) report.violations.push_back(first_.at(law));
  }

  bool clean() const { return order_.empty(); }

 private:
  std::vector<std::string> order_;
  std::map<std::string, LawViolation> first_;
};

struct ScanResult {
  ViolationSink sink;
  std::uint64_t tuples = 0;
};

}  // namespace

FiniteMLA FiniteMLA::unchecked(int order, std::vector<int> mul, std::vector<int> bracket,
                               std::string name) {
  FiniteMLA a;
  a.n_ = order;
  a.name_ = std::move(name);
  a.mul_ = std::move(mul);
  a.bracket_ = std::move(bracket);
  a.inv_.assign(order, 0);
  for (int x = 0; x < order; ++x) {
    for (int y = 0; y < order; ++y) {
      if (a.mul(x, y) == 0) {
        a.inv_[x] = y;
        break;
      }
    }
  }
  return a;
}

int FiniteMLA::pow(int a, long long e) const {
  int base = e < 0 ? inv(a) : a;
  unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e)
                               : static_cast<unsigned long long>(e);
  int acc = 0;
  while (k) {
    if (k & 1) acc = mul(acc, base);
    base = mul(base, base);
    k >>= 1;
  }
  return acc;
}

int FiniteMLA::element_order(int a) const {
  int k = 1;
  int x = a;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

bool FiniteMLA::group_abelian() const {
  for (int x = 0; x < n_; ++x)
    for (int y = x + 1; y < n_; ++y)
      if (mul(x, y) != mul(y, x)) return false;
  return true;
}

bool FiniteMLA::bracket_trivial() const {
  for (int v : bracket_)
    if (v != 0) return false;
  return true;
}

std::string LawReport::summary() const {
  if (ok()) return "all laws hold";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    const auto& v = violations[i];
    os << v.law << " at " << tuple_str(v.witness);
    if (v.occurrences > 1) os << " (+" << (v.occurrences - 1) << " more)";
  }
  return os.str();
}

ValidationResult validate_algebra(int order, const std::vector<int>& mul,
                                  const std::vector<int>& bracket, std::string name,
                                  const SearchLimits& limits) {
  ValidationResult result;
  LawReport& report = result.report;
  const int n = order;

  if (n < 1 || n > limits.hard_order) {
    throw SearchBoundError("algebra order " + std::to_string(n) + " outside [1, " +
                               std::to_string(limits.hard_order) + "]",
                           static_cast<std::uint64_t>(n < 1 ? 0 : n));
  }

  // Shape layer: without well-formed tables nothing else can be indexed.
  auto shape_ok = [&](const std::vector<int>& t, const char* which) {
    if (t.size() != static_cast<std::size_t>(n) * n) {
      report.violations.push_back({"table_shape",
                                   {static_cast<int>(t.size())},
                                   std::string(which) + " table has " + std::to_string(t.size()) +
                                       " entries, expected " + std::to_string(n * n),
                                   1});
      return false;
    }
    for (int i = 0; i < n * n; ++i) {
      if (t[i] < 0 || t[i] >= n) {
        report.violations.push_back({"table_range",
                                     {i / n, i % n},
                                     std::string(which) + "[" + std::to_string(i / n) + "][" +
                                         std::to_string(i % n) + "] = " + std::to_string(t[i]) +
                                         " is outside [0, " + std::to_string(n) + ")",
                                     1});
        return false;
      }
    }
    return true;
  };
  if (!shape_ok(mul, "mul") || !shape_ok(bracket, "bracket")) return result;

  auto M = [&](int a, int b) { return mul[a * n + b]; };
  auto B = [&](int a, int b) { return bracket[a * n + b]; };

  // Group layer.
  ViolationSink group_sink;
  for (int x = 0; x < n; ++x) {
    if (M(0, x) != x)
      group_sink.add("identity_element", {x},
                     "1·" + std::to_string(x) + " = " + std::to_string(M(0, x)) +
                         ", expected " + std::to_string(x));
    if (M(x, 0) != x)
      group_sink.add("identity_element", {x},
                     std::to_string(x) + "·1 = " + std::to_string(M(x, 0)) + ", expected " +
                         std::to_string(x));
  }
  // Rows and columns must be permutations (cancellation); together with
  // associativity and identity this pins down inverses.
  for (int x = 0; x < n; ++x) {
    std::vector<char> seen_row(n, 0), seen_col(n, 0);
    for (int y = 0; y < n; ++y) {
      if (seen_row[M(x, y)]++)
        group_sink.add("cancellation", {x, y},
                       "row " + std::to_string(x) + " repeats value " + std::to_string(M(x, y)));
      if (seen_col[M(y, x)]++)
        group_sink.add("cancellation", {y, x},
                       "column " + std::to_string(x) + " repeats value " +
                           std::to_string(M(y, x)));
    }
  }
  std::vector<int> inv(n, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (M(x, y) == 0 && M(y, x) == 0) {
        inv[x] = y;
        break;
      }
    }
    if (inv[x] < 0)
      group_sink.add("inverses", {x}, "no two-sided inverse for " + std::to_string(x));
  }

  auto assoc_scan = [&](int lo, int hi) {
    ScanResult r;
    for (int x = lo; x < hi; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          ++r.tuples;
          const int lhs = M(M(x, y), z);
          const int rhs = M(x, M(y, z));
          if (lhs != rhs)
            r.sink.add("associativity", {x, y, z},
                       "(" + std::to_string(x) + "·" + std::to_string(y) + ")·" +
                           std::to_string(z) + " = " + std::to_string(lhs) + " but " +
                           std::to_string(x) + "·(" + std::to_string(y) + "·" +
                           std::to_string(z) + ") = " + std::to_string(rhs));
        }
    return r;
  };
  for (auto& chunk : run_chunked<ScanResult>(n, limits.threads, assoc_scan)) {
    group_sink.merge(chunk.sink);
    report.tuples_checked += chunk.tuples;
  }

  if (!group_sink.clean()) {
    group_sink.drain_into(report);
    return result;  // bracket laws need a working group (conjugation) to state
  }

  // Bracket layer: the five defining laws, checked over all triples.
  FiniteMLA a = FiniteMLA::unchecked(n, mul, bracket, name);
  auto bracket_scan = [&](int lo, int hi) {
    ScanResult r;
    for (int x = lo; x < hi; ++x) {
      ++r.tuples;
      if (B(x, x) != 0)
        r.sink.add("alternating", {x},
                   "{" + std::to_string(x) + "," + std::to_string(x) + "} = " +
                       std::to_string(B(x, x)) + ", expected 0");
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          ++r.tuples;
          {
            const int lhs = B(x, a.mul(y, z));
            const int rhs = a.mul(B(x, y), a.conj(B(x, z), y));
            if (lhs != rhs)
              r.sink.add("right_product_expansion", {x, y, z},
                         "{" + std::to_string(x) + "," + std::to_string(y) + "·" +
                             std::to_string(z) + "} = {" + std::to_string(x) + "," +
                             std::to_string(a.mul(y, z)) + "} = " + std::to_string(lhs) +
                             " but {x,y}·{x,z}^y = " + std::to_string(rhs));
          }
          {
            const int lhs = B(a.mul(x, y), z);
            const int rhs = a.mul(a.conj(B(y, z), x), B(x, z));
            if (lhs != rhs)
              r.sink.add("left_product_expansion", {x, y, z},
                         "{" + std::to_string(x) + "·" + std::to_string(y) + "," +
                             std::to_string(z) + "} = {" + std::to_string(a.mul(x, y)) + "," +
                             std::to_string(z) + "} = " + std::to_string(lhs) +
                             " but {y,z}^x·{x,z} = " + std::to_string(rhs));
          }
          {
            const int t1 = B(B(x, y), a.conj(z, y));
            const int t2 = B(B(y, z), a.conj(x, z));
            const int t3 = B(B(z, x), a.conj(y, x));
            const int lhs = a.mul(a.mul(t1, t2), t3);
            if (lhs != 0)
              r.sink.add("jacobi_conjugated", {x, y, z},
                         "{{x,y},z^y}·{{y,z},x^z}·{{z,x},y^x} at (" + std::to_string(x) + "," +
                             std::to_string(y) + "," + std::to_string(z) + ") = " +
                             std::to_string(t1) + "·" + std::to_string(t2) + "·" +
                             std::to_string(t3) + " = " + std::to_string(lhs) +
                             ", expected 0");
          }
          {
            const int lhs = a.conj(B(x, y), z);
            const int rhs = B(a.conj(x, z), a.conj(y, z));
            if (lhs != rhs)
              r.sink.add("conjugation_equivariance", {x, y, z},
                         "{" + std::to_string(x) + "," + std::to_string(y) + "}^" +
                             std::to_string(z) + " = " + std::to_string(lhs) +
                             " but {x^z,y^z} = " + std::to_string(rhs));
          }
        }
    }
    return r;
  };
  ViolationSink bracket_sink;
  for (auto& chunk : run_chunked<ScanResult>(n, limits.threads, bracket_scan)) {
    bracket_sink.merge(chunk.sink);
    report.tuples_checked += chunk.tuples;
  }
  if (!bracket_sink.clean()) {
    bracket_sink.drain_into(report);
    return result;
  }

  result.algebra = std::move(a);
  return result;
}

LawReport check_derived_identities(const FiniteMLA& a, const SearchLimits& limits) {
  LawReport report;
  const int n = a.order();

  // Pair- and triple-indexed laws.
  auto scan3 = [&](int lo, int hi) {
    ScanResult r;
    for (int x = lo; x < hi; ++x) {
      if (a.bracket(0, x) != 0 || a.bracket(x, 0) != 0) {
        ++r.tuples;
        r.sink.add("identity_absorbing", {x},
                   "{1," + std::to_string(x) + "} = " + std::to_string(a.bracket(0, x)) +
                       ", {" + std::to_string(x) + ",1} = " + std::to_string(a.bracket(x, 0)) +
                       ", expected both 0");
      }
      for (int y = 0; y < n; ++y) {
        ++r.tuples;
        if (a.mul(a.bracket(x, y), a.bracket(y, x)) != 0)
          r.sink.add("mutual_inverse", {x, y},
                     "{" + std::to_string(x) + "," + std::to_string(y) + "}·{" +
                         std::to_string(y) + "," + std::to_string(x) + "} = " +
                         std::to_string(a.mul(a.bracket(x, y), a.bracket(y, x))) +
                         ", expected 0");
        {
          const int lhs = a.bracket(a.inv(x), y);
          const int rhs = a.conj(a.inv(a.bracket(x, y)), a.inv(x));
          if (lhs != rhs)
            r.sink.add("inverted_left_argument", {x, y},
                       "{" + std::to_string(a.inv(x)) + "," + std::to_string(y) + "} = " +
                           std::to_string(lhs) + " but ({x,y}⁻¹)^(x⁻¹) = " +
                           std::to_string(rhs));
        }
        {
          const int lhs = a.bracket(x, y);
          const int rhs = a.bracket(a.inv(y), a.conj(x, y));
          if (lhs != rhs)
            r.sink.add("swap_via_conjugate", {x, y},
                       "{" + std::to_string(x) + "," + std::to_string(y) + "} = " +
                           std::to_string(lhs) + " but {y⁻¹,x^y} = " + std::to_string(rhs));
        }
        for (int z = 0; z < n; ++z) {
          ++r.tuples;
          {
            const int lhs = a.comm(a.bracket(x, y), z);
            const int rhs = a.bracket(a.comm(x, y), z);
            if (lhs != rhs)
              r.sink.add("commutator_bracket_interchange", {x, y, z},
                         "[{" + std::to_string(x) + "," + std::to_string(y) + "}," +
                             std::to_string(z) + "] = " + std::to_string(lhs) +
                             " but {[x,y],z} = " + std::to_string(rhs));
          }
          if (a.bracket(x, y) == a.bracket(x, z)) {
            const int val = a.bracket(x, a.mul(a.inv(y), z));
            if (val != 0)
              r.sink.add("equal_values_cancel", {x, y, z},
                         "{x,y} = {x,z} = " + std::to_string(a.bracket(x, y)) + " but {" +
                             std::to_string(x) + "," + std::to_string(a.mul(a.inv(y), z)) +
                             "} = " + std::to_string(val) + ", expected 0");
          }
        }
      }
    }
    return r;
  };

  // Quadruple-indexed laws.
  auto scan4 = [&](int lo, int hi) {
    ScanResult r;
    for (int u = lo; u < hi; ++u)
      for (int v = 0; v < n; ++v)
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y) {
            ++r.tuples;
            {
              const int lhs = a.conj(a.bracket(u, v), a.bracket(x, y));
              const int rhs = a.conj(a.bracket(u, v), a.comm(x, y));
              if (lhs != rhs)
                r.sink.add("bracket_conjugation_matches_commutator", {u, v, x, y},
                           "{u,v}^{{x,y}} = " + std::to_string(lhs) + " but {u,v}^{[x,y]} = " +
                               std::to_string(rhs) + " at " + tuple_str({u, v, x, y}));
            }
            {
              // Three-factor instance of the iterated right expansion.
              const int lhs = a.bracket(u, a.mul(a.mul(v, x), y));
              const int rhs = a.mul(
                  a.mul(a.bracket(u, v), a.conj(a.bracket(u, x), v)),
                  a.conj(a.bracket(u, y), a.mul(v, x)));
              if (lhs != rhs)
                r.sink.add("right_expansion_three_factors", {u, v, x, y},
                           "{u,v·x·y} = " + std::to_string(lhs) +
                               " but {u,v}·{u,x}^v·{u,y}^(v·x) = " + std::to_string(rhs) +
                               " at " + tuple_str({u, v, x, y}));
            }
          }
    return r;
  };

  ViolationSink sink;
  for (auto& chunk : run_chunked<ScanResult>(n, limits.threads, scan3)) {
    sink.merge(chunk.sink);
    report.tuples_checked += chunk.tuples;
  }
  for (auto& chunk : run_chunked<ScanResult>(n, limits.threads, scan4)) {
    sink.merge(chunk.sink);
    report.tuples_checked += chunk.tuples;
  }
  sink.drain_into(report);
  return report;
}

bool is_homomorphism(const std::vector<int>& f, const FiniteMLA& a, const FiniteMLA& b) {
  const int n = a.order();
  if (f.size() != static_cast<std::size_t>(n)) return false;
  for (int v : f)
    if (v < 0 || v >= b.order()) return false;
  if (f[0] != 0) return false;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (f[a.mul(x, y)] != b.mul(f[x], f[y])) return false;
      if (f[a.bracket(x, y)] != b.bracket(f[x], f[y])) return false;
    }
  return true;
}

namespace {

/// Per-element profile invariant under isomorphism: (group order, centralizer
/// size, bracket-annihilator sizes both ways).
std::vector<std::array<int, 4>> element_profiles(const FiniteMLA& a) {
  const int n = a.order();
  std::vector<std::array<int, 4>> prof(n);
  for (int x = 0; x < n; ++x) {
    int cent = 0, left0 = 0, right0 = 0;
    for (int y = 0; y < n; ++y) {
      if (a.mul(x, y) == a.mul(y, x)) ++cent;
      if (a.bracket(x, y) == 0) ++left0;
      if (a.bracket(y, x) == 0) ++right0;
    }
    prof[x] = {a.element_order(x), cent, left0, right0};
  }
  return prof;
}

/// Backtracking over generator images shared by find_isomorphism and
/// all_automorphisms.  Partial maps are grown by product/bracket/inverse
/// closure so conflicts surface long before a full candidate map exists.
class IsoSearch {
 public:
  IsoSearch(const FiniteMLA& a, const FiniteMLA& b) : a_(a), b_(b) {
    profile_a_ = element_profiles(a);
    profile_b_ = element_profiles(b);
    // Greedy generating sequence: repeatedly adjoin the least element outside
    // the subalgebra generated so far.
    std::vector<char> closed(a.order(), 0);
    close_set(closed, {0});
    for (int x = 0; x < a.order(); ++x) {
      if (!closed[x]) {
        gens_.push_back(x);
        close_set(closed, {x});
      }
    }
  }

  /// Runs the search.  `emit` receives each completed map; return false from
  /// it to stop the whole search (used by find-first).
  template <class Emit>
  void run(Emit emit) {
    std::vector<int> f(a_.order(), -1);
    std::vector<char> used(b_.order(), 0);
    f[0] = 0;
    used[0] = 1;
    stop_ = false;
    extend(0, f, used, emit);
  }

 private:
  void close_set(std::vector<char>& closed, std::vector<int> frontier) const {
    for (int x : frontier) closed[x] = 1;
    while (!frontier.empty()) {
      const int x = frontier.back();
      frontier.pop_back();
      auto visit = [&](int v) {
        if (!closed[v]) {
          closed[v] = 1;
          frontier.push_back(v);
        }
      };
      visit(a_.inv(x));
      for (int y = 0; y < a_.order(); ++y) {
        if (!closed[y]) continue;
        visit(a_.mul(x, y));
        visit(a_.mul(y, x));
        visit(a_.bracket(x, y));
        visit(a_.bracket(y, x));
      }
    }
  }

  /// Defines f[x] = y and propagates all consequences; returns false on
  /// conflict.  `trail` records assignments for undo.
  bool assign(int x, int y, std::vector<int>& f, std::vector<char>& used,
              std::vector<int>& trail) {
    std::vector<int> queue;
    auto set = [&](int from, int to) {
      if (f[from] != -1) return f[from] == to;
      if (to < 0) return false;
      if (used[to]) return false;  // injectivity
      if (profile_a_[from] != profile_b_[to]) return false;
      f[from] = to;
      used[to] = 1;
      trail.push_back(from);
      queue.push_back(from);
      return true;
    };
    if (!set(x, y)) return false;
    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      if (!set(a_.inv(u), b_.inv(f[u]))) return false;
      for (int w = 0; w < a_.order(); ++w) {
        if (f[w] == -1) continue;
        if (!set(a_.mul(u, w), b_.mul(f[u], f[w]))) return false;
        if (!set(a_.mul(w, u), b_.mul(f[w], f[u]))) return false;
        if (!set(a_.bracket(u, w), b_.bracket(f[u], f[w]))) return false;
        if (!set(a_.bracket(w, u), b_.bracket(f[w], f[u]))) return false;
      }
    }
    return true;
  }

  template <class Emit>
  void extend(std::size_t gen_idx, std::vector<int>& f, std::vector<char>& used, Emit emit) {
    if (stop_) return;
    if (gen_idx == gens_.size()) {
      // Generators generate everything, so f is total; the propagation rules
      // enforce only pointwise consequences, so confirm the full laws once.
      if (is_homomorphism(f, a_, b_) && !emit(f)) stop_ = true;
      return;
    }
    const int g = gens_[gen_idx];
    if (f[g] != -1) {
      extend(gen_idx + 1, f, used, emit);
      return;
    }
    for (int img = 0; img < b_.order(); ++img) {
      if (used[img] || profile_a_[g] != profile_b_[img]) continue;
      std::vector<int> trail;
      if (assign(g, img, f, used, trail)) extend(gen_idx + 1, f, used, emit);
      for (int x : trail) {
        used[f[x]] = 0;
        f[x] = -1;
      }
      if (stop_) return;
    }
  }

  const FiniteMLA& a_;
  const FiniteMLA& b_;
  std::vector<std::array<int, 4>> profile_a_, profile_b_;
  std::vector<int> gens_;
  bool stop_ = false;
};

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const FiniteMLA& a, const FiniteMLA& b) {
  if (a.order() != b.order()) return std::nullopt;
  {
    // Cheap global screen: the multisets of element profiles must agree.
    auto pa = element_profiles(a);
    auto pb = element_profiles(b);
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) return std::nullopt;
  }
  std::optional<std::vector<int>> found;
  IsoSearch search(a, b);
  search.run([&](const std::vector<int>& f) {
    found = f;
    return false;  // first witness suffices
  });
  return found;
}

std::vector<std::vector<int>> all_automorphisms(const FiniteMLA& a, const SearchLimits& limits) {
  if (a.order() > limits.aut_enum_order)
    throw SearchBoundError("automorphism enumeration refused for order " +
                               std::to_string(a.order()) + " > " +
                               std::to_string(limits.aut_enum_order),
                           static_cast<std::uint64_t>(a.order()));
  std::vector<std::vector<int>> out;
  IsoSearch search(a, a);
  search.run([&](const std::vector<int>& f) {
    out.push_back(f);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

FiniteMLA direct_product(const FiniteMLA& a, const FiniteMLA& b, const SearchLimits& limits) {
  const long long n = static_cast<long long>(a.order()) * b.order();
  if (n > limits.hard_order)
    throw SearchBoundError("direct product order " + std::to_string(n) + " exceeds ceiling " +
                               std::to_string(limits.hard_order),
                           static_cast<std::uint64_t>(n));
  const int nb = b.order(), nn = static_cast<int>(n);
  std::vector<int> mul(nn * nn), bracket(nn * nn);
  for (int x = 0; x < nn; ++x)
    for (int y = 0; y < nn; ++y) {
      const int ax = x / nb, bx = x % nb, ay = y / nb, by = y % nb;
      mul[x * nn + y] = a.mul(ax, ay) * nb + b.mul(bx, by);
      bracket[x * nn + y] = a.bracket(ax, ay) * nb + b.bracket(bx, by);
    }
  std::string name;
  if (!a.name().empty() && !b.name().empty()) name = a.name() + "x" + b.name();
  return FiniteMLA::unchecked(nn, std::move(mul), std::move(bracket), std::move(name));
}

}  // namespace mlakit
