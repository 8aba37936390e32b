#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "mlakit/catalog.hpp"

using namespace mlakit;

TEST_CASE("every standard catalog entry passes the full validator and the derived-identity oracle") {
  for (const auto& key : standard_entries()) {
    INFO("entry " << key);
    FiniteMLA a = build_catalog(key);
    auto r = validate_algebra(a.order(), a.mul_table(), a.bracket_table(), a.name());
    CHECK(r.ok());
    CHECK(check_derived_identities(a).ok());
  }
}

TEST_CASE("standard entries have the expected orders") {
  const std::map<std::string, int> expected = {
      {"cyclic(2)", 2},
      {"cyclic(3)", 3},
      {"cyclic(4)", 4},
      {"cyclic(6)", 6},
      {"cyclic(8)", 8},
      {"klein4", 4},
      {"lie_ring_zero(2,4)", 8},
      {"dihedral(3)", 6},
      {"dihedral(4)", 8},
      {"sym(3)", 6},
      {"heisenberg_lie_ring(3)", 27},
      {"product(cyclic(2),heisenberg_lie_ring(3))", 54},
  };
  auto roster = standard_entries();
  REQUIRE(roster.size() == expected.size());
  for (const auto& key : roster) {
    INFO("entry " << key);
    REQUIRE(expected.count(key) == 1);
    CHECK(build_catalog(key).order() == expected.at(key));
  }
}

TEST_CASE("group-family entries carry the trivial bracket") {
  for (const auto* key : {"cyclic(6)", "klein4", "dihedral(4)", "sym(3)"}) {
    INFO("entry " << key);
    CHECK(build_catalog(key).bracket_trivial());
  }
}

TEST_CASE("cyclic(4) and klein4 share an order but are not isomorphic") {
  auto z4 = cyclic(4);
  auto v4 = klein4();
  CHECK(z4.element_order(1) == 4);
  CHECK(v4.element_order(1) == 2);
  CHECK_FALSE(find_isomorphism(z4, v4).has_value());
  CHECK(find_isomorphism(direct_product(cyclic(2), cyclic(2)), v4).has_value());
}

TEST_CASE("sym(3) composes permutations in lexicographic labelling") {
  auto s3 = sym3();
  // Index order: 012, 021, 102, 120, 201, 210.  With (p·q)(i) = p(q(i)):
  // 102 ∘ 021 = 120 and 021 ∘ 102 = 201, so the group is visibly nonabelian.
  CHECK(s3.mul(2, 1) == 3);
  CHECK(s3.mul(1, 2) == 4);
  CHECK_FALSE(s3.group_abelian());
  int order2 = 0, order3 = 0;
  for (int x = 1; x < 6; ++x) {
    if (s3.element_order(x) == 2) ++order2;
    if (s3.element_order(x) == 3) ++order3;
  }
  CHECK(order2 == 3);
  CHECK(order3 == 2);
  CHECK(find_isomorphism(s3, dihedral(3)).has_value());
}

TEST_CASE("dihedral(n) satisfies the defining relations at its generators") {
  auto d4 = dihedral(4);
  const int r = 1, s = 4;  // indices (0,1) and (1,0)
  CHECK(d4.element_order(r) == 4);
  CHECK(d4.element_order(s) == 2);
  CHECK(d4.mul(s, r) != d4.mul(r, s));
  CHECK(d4.conj(r, s) == d4.inv(r));  // s r s⁻¹ = r⁻¹
  CHECK_FALSE(find_isomorphism(d4, build_catalog("lie_ring_zero(2,4)")).has_value());
}

TEST_CASE("heisenberg_lie_ring(3) brackets basis vectors into the centre") {
  auto h = heisenberg_lie_ring(3);
  const int e1 = 9, e2 = 3, e3 = 1;  // (1,0,0), (0,1,0), (0,0,1)
  CHECK(h.group_abelian());
  CHECK_FALSE(h.bracket_trivial());
  CHECK(h.bracket(e1, e2) == e3);
  CHECK(h.bracket(e2, e1) == 2);  // (0,0,-1) = (0,0,2)
  CHECK(h.bracket(e1, e3) == 0);
  CHECK(h.bracket(e2, e3) == 0);
  CHECK(h.bracket(e1, e1) == 0);
  // Bilinearity spot check: {e1, e1·e2} = {e1,e1}·{e1,e2} since conjugation
  // is trivial on an abelian reduct.
  CHECK(h.bracket(e1, h.mul(e1, e2)) == h.mul(h.bracket(e1, e1), h.bracket(e1, e2)));
}

TEST_CASE("lie_ring_zero builds abelian algebras in mixed-radix labelling") {
  auto a = lie_ring_zero({2, 4});
  CHECK(a.order() == 8);
  CHECK(a.is_abelian_algebra());
  CHECK(a.mul(4, 1) == 5);       // (1,0) + (0,1) = (1,1)
  CHECK(a.mul(1, 3) == 0);       // (0,1) + (0,3) = (0,0)
  CHECK(a.element_order(1) == 4);
  CHECK(a.element_order(4) == 2);
  CHECK(find_isomorphism(a, direct_product(cyclic(2), cyclic(4))).has_value());
}

TEST_CASE("catalog keys parse recursively and reject garbage") {
  CHECK(build_catalog("product(cyclic(2),cyclic(3))").order() == 6);
  CHECK(find_isomorphism(build_catalog("product(cyclic(2),cyclic(3))"), cyclic(6)).has_value());
  CHECK(build_catalog("product(product(cyclic(2),cyclic(2)),cyclic(2))").order() == 8);

  CHECK_THROWS_AS(build_catalog("frobnicate(3)"), std::invalid_argument);
  CHECK_THROWS_AS(build_catalog("sym(4)"), std::invalid_argument);
  CHECK_THROWS_AS(build_catalog("cyclic(4"), std::invalid_argument);
  CHECK_THROWS_AS(build_catalog("cyclic(x)"), std::invalid_argument);
  CHECK_THROWS_AS(build_catalog("product(cyclic(2))"), std::invalid_argument);
  CHECK_THROWS_AS(build_catalog("lie_ring_zero(17,17)"), SearchBoundError);
  CHECK_FALSE(catalog_key_patterns().empty());
}

TEST_CASE("single-cell mutations of catalog tables are caught by the validator") {
  auto z4 = cyclic(4);
  auto mul = z4.mul_table();
  mul[1 * 4 + 1] = 3;  // 1+1 is no longer 2
  CHECK_FALSE(validate_algebra(4, mul, z4.bracket_table()).ok());

  auto h = heisenberg_lie_ring(3);
  auto bracket = h.bracket_table();
  bracket[9 * 27 + 3] = 0;  // erase {e1,e2}
  CHECK_FALSE(validate_algebra(27, h.mul_table(), bracket).ok());
}
