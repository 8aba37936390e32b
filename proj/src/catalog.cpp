#include "mlakit/catalog.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mlakit {

namespace {

int mod(int a, int m) {
  int r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

FiniteMLA cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic order must be >= 1");
  std::vector<int> mul(n * n), bracket(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mul[i * n + j] = (i + j) % n;
  return FiniteMLA::unchecked(n, std::move(mul), std::move(bracket),
                              "cyclic(" + std::to_string(n) + ")");
}

FiniteMLA klein4() {
  const int n = 4;
  std::vector<int> mul(n * n), bracket(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mul[i * n + j] = i ^ j;  // two independent Z2 bits
  return FiniteMLA::unchecked(n, std::move(mul), std::move(bracket), "klein4");
}

FiniteMLA dihedral(int n) {
  if (n < 1) throw std::invalid_argument("dihedral parameter must be >= 1");
  // Elements s^e r^i with index e*n + i; relations r^n = s^2 = 1, r s = s r^-1.
  const int order = 2 * n;
  std::vector<int> mul(order * order), bracket(order * order, 0);
  for (int e1 = 0; e1 < 2; ++e1)
    for (int i1 = 0; i1 < n; ++i1)
      for (int e2 = 0; e2 < 2; ++e2)
        for (int i2 = 0; i2 < n; ++i2) {
          const int e = (e1 + e2) % 2;
          const int i = mod((e2 ? -i1 : i1) + i2, n);
          mul[(e1 * n + i1) * order + (e2 * n + i2)] = e * n + i;
        }
  return FiniteMLA::unchecked(order, std::move(mul), std::move(bracket),
                              "dihedral(" + std::to_string(n) + ")");
}

FiniteMLA sym3() {
  // Permutations of {0,1,2} in lexicographic order; (p·q)(i) = p(q(i)).
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const int n = 6;
  auto index_of = [&](const int p[3]) {
    for (int k = 0; k < n; ++k)
      if (perms[k][0] == p[0] && perms[k][1] == p[1] && perms[k][2] == p[2]) return k;
    return -1;
  };
  std::vector<int> mul(n * n), bracket(n * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int comp[3];
      for (int i = 0; i < 3; ++i) comp[i] = perms[a][perms[b][i]];
      mul[a * n + b] = index_of(comp);
    }
  return FiniteMLA::unchecked(n, std::move(mul), std::move(bracket), "sym(3)");
}

FiniteMLA lie_ring_zero(const std::vector<int>& orders) {
  if (orders.empty()) throw std::invalid_argument("lie_ring_zero needs at least one order");
  long long n = 1;
  for (int o : orders) {
    if (o < 1) throw std::invalid_argument("lie_ring_zero orders must be >= 1");
    n *= o;
    if (n > 256) throw SearchBoundError("lie_ring_zero order exceeds ceiling", n);
  }
  const int nn = static_cast<int>(n);
  // Mixed-radix digits, first order most significant.
  auto decode = [&](int x, std::vector<int>& digits) {
    for (int k = static_cast<int>(orders.size()) - 1; k >= 0; --k) {
      digits[k] = x % orders[k];
      x /= orders[k];
    }
  };
  auto encode = [&](const std::vector<int>& digits) {
    int x = 0;
    for (std::size_t k = 0; k < orders.size(); ++k) x = x * orders[k] + digits[k];
    return x;
  };
  std::vector<int> mul(nn * nn), bracket(nn * nn, 0);
  std::vector<int> da(orders.size()), db(orders.size()), dc(orders.size());
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nn; ++b) {
      decode(a, da);
      decode(b, db);
      for (std::size_t k = 0; k < orders.size(); ++k) dc[k] = (da[k] + db[k]) % orders[k];
      mul[a * nn + b] = encode(dc);
    }
  std::ostringstream name;
  name << "lie_ring_zero(";
  for (std::size_t k = 0; k < orders.size(); ++k) name << (k ? "," : "") << orders[k];
  name << ")";
  return FiniteMLA::unchecked(nn, std::move(mul), std::move(bracket), name.str());
}

FiniteMLA heisenberg_lie_ring(int p) {
  if (p < 2) throw std::invalid_argument("heisenberg_lie_ring parameter must be >= 2");
  const long long n = static_cast<long long>(p) * p * p;
  if (n > 256) throw SearchBoundError("heisenberg_lie_ring order exceeds ceiling", n);
  const int nn = static_cast<int>(n);
  // Index (a1,a2,a3) -> a1*p^2 + a2*p + a3; addition componentwise mod p,
  // bracket {(a),(b)} = (0, 0, a1*b2 - a2*b1).
  std::vector<int> mul(nn * nn), bracket(nn * nn);
  for (int a = 0; a < nn; ++a) {
    const int a1 = a / (p * p), a2 = (a / p) % p, a3 = a % p;
    for (int b = 0; b < nn; ++b) {
      const int b1 = b / (p * p), b2 = (b / p) % p, b3 = b % p;
      mul[a * nn + b] = ((a1 + b1) % p) * p * p + ((a2 + b2) % p) * p + (a3 + b3) % p;
      bracket[a * nn + b] = mod(a1 * b2 - a2 * b1, p);
    }
  }
  return FiniteMLA::unchecked(nn, std::move(mul), std::move(bracket),
                              "heisenberg_lie_ring(" + std::to_string(p) + ")");
}

namespace {

/// Splits "f(args)" into name and argument string; plain names get args="".
bool split_call(const std::string& key, std::string& fn, std::string& args) {
  const auto open = key.find('(');
  if (open == std::string::npos) {
    fn = key;
    args = "";
    return true;
  }
  if (key.back() != ')') return false;
  fn = key.substr(0, open);
  args = key.substr(open + 1, key.size() - open - 2);
  return true;
}

/// Splits on commas that sit at paren depth zero.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int(const std::string& s) {
  std::size_t pos = 0;
  const int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "' in catalog key");
  return v;
}

}  // namespace

FiniteMLA build_catalog(const std::string& key, const SearchLimits& limits) {
  std::string fn, args;
  if (!split_call(key, fn, args))
    throw std::invalid_argument("malformed catalog key '" + key + "'");
  if (fn == "cyclic") return cyclic(parse_int(args));
  if (fn == "klein4" && args.empty()) return klein4();
  if (fn == "dihedral") return dihedral(parse_int(args));
  if (fn == "sym") {
    if (parse_int(args) != 3)
      throw std::invalid_argument("only sym(3) is in the catalog");
    return sym3();
  }
  if (fn == "lie_ring_zero") {
    std::vector<int> orders;
    for (const auto& part : split_top_level(args)) orders.push_back(parse_int(part));
    return lie_ring_zero(orders);
  }
  if (fn == "heisenberg_lie_ring") return heisenberg_lie_ring(parse_int(args));
  if (fn == "product") {
    const auto parts = split_top_level(args);
    if (parts.size() != 2)
      throw std::invalid_argument("product(...) takes exactly two catalog keys");
    return direct_product(build_catalog(parts[0], limits), build_catalog(parts[1], limits),
                          limits);
  }
  throw std::invalid_argument("unknown catalog key '" + key + "'");
}

std::vector<std::string> catalog_key_patterns() {
  return {
      "cyclic(n)",
      "klein4",
      "dihedral(n)",
      "sym(3)",
      "lie_ring_zero(n1,n2,...)",
      "heisenberg_lie_ring(p)",
      "product(key,key)",
  };
}

std::vector<std::string> standard_entries() {
  return {
      "cyclic(2)",
      "cyclic(3)",
      "cyclic(4)",
      "cyclic(6)",
      "cyclic(8)",
      "klein4",
      "lie_ring_zero(2,4)",
      "dihedral(3)",
      "dihedral(4)",
      "sym(3)",
      "heisenberg_lie_ring(3)",
      "product(cyclic(2),heisenberg_lie_ring(3))",
  };
}

}  // namespace mlakit
