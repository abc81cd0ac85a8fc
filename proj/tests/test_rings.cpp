#include "doctest.h"
#include "prozero/fpmod.hpp"

using namespace prozero;

namespace {

Ring qx() {
  return make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x"}));
}

Ring circle() {
  PolyRingSpec S(CoefficientDomain::rationals(), {"a", "b"});
  return make_ring(S, std::vector<std::string>{"a^2+b^2-1"});
}

}  // namespace

TEST_CASE("localize Q[x] at x gives the Rabinowitsch presentation") {
  Ring R = qx();
  auto L = localize(R, parse_poly(R->spec(), "x"));
  const PolyRingSpec& S = L.ring->spec();
  REQUIRE(S.nvars() == 2);
  // x * t = 1 in the localized ring
  VPoly prod = vp_mul(S, parse_poly(S, "x"), vp_var(S, L.inverse_var));
  CHECK(L.ring->is_zero(vp_sub(S, prod, vp_const(S, 1))));
  CHECK_FALSE(L.ring->is_zero_ring());
}

TEST_CASE("localize at zero is rejected") {
  Ring R = qx();
  CHECK_THROWS_AS(localize(R, VPoly{}), EngineError);
}

TEST_CASE("localizing at a unit keeps the unit ideal trivial") {
  Ring R = qx();
  auto L = localize(R, parse_poly(R->spec(), "2"));
  // 2 becomes invertible, but it already was; localized ring is nonzero and
  // 1 lies in the image ideal of (2)
  CHECK_FALSE(L.ring->is_zero_ring());
  CHECK(is_covering_sequence({parse_poly(L.ring->spec(), "2")}, L.ring));
}

TEST_CASE("circle ring localization at 1+a") {
  Ring R = circle();
  auto L = localize(R, parse_poly(R->spec(), "1+a"));
  const PolyRingSpec& S = L.ring->spec();
  // 1 - a = b^2 * (1+a)^{-1} there, so (1-a) lies in (b)
  std::vector<VPoly> gens = {parse_poly(S, "b")};
  for (const auto& g : L.ring->cached_basis()) gens.push_back(g);
  auto G = groebner_basis(S, gens);
  CHECK(normal_form(S, parse_poly(S, "1-a"), G).empty());
}

TEST_CASE("covering sequences") {
  Ring Z = make_ring(PolyRingSpec(CoefficientDomain::integers(), {}));
  CHECK(is_covering_sequence(
      {parse_poly(Z->spec(), "2"), parse_poly(Z->spec(), "3")}, Z));
  Ring R = qx();
  CHECK_FALSE(is_covering_sequence({parse_poly(R->spec(), "x")}, R));
  Ring C = circle();
  CHECK(is_covering_sequence(
      {parse_poly(C->spec(), "1+a"), parse_poly(C->spec(), "1-a")}, C));
  // a list containing a unit is covering
  CHECK(is_covering_sequence(
      {parse_poly(R->spec(), "x"), parse_poly(R->spec(), "3")}, R));
  // empty list covers exactly the zero ring
  CHECK_FALSE(is_covering_sequence({}, R));
  Ring zero = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x"}),
                        std::vector<std::string>{"1"});
  CHECK(is_covering_sequence({}, zero));
}

TEST_CASE("ideal powers") {
  PolyRingSpec S(CoefficientDomain::rationals(), {"x", "y"});
  Ring R = make_ring(S);
  Ideal I(R, {parse_poly(S, "x"), parse_poly(S, "y")});
  Ideal I2 = ideal_power(I, 2);
  auto G2 = groebner_basis(S, I2.generators);
  auto Gexp = groebner_basis(
      S, {parse_poly(S, "x^2"), parse_poly(S, "x*y"), parse_poly(S, "y^2")});
  CHECK(G2 == Gexp);

  Ideal P(R, {parse_poly(S, "x+y")});
  Ideal P3 = ideal_power(P, 3);
  auto GP = groebner_basis(S, P3.generators);
  auto GPexp = groebner_basis(S, {vp_mul(S, parse_poly(S, "(x+y)^2"),
                                         parse_poly(S, "x+y"))});
  CHECK(GP == GPexp);
}

TEST_CASE("ideal power multiplicativity I^m * I^n inside I^(m+n)") {
  Ring C = circle();
  const PolyRingSpec& S = C->spec();
  Ideal I(C, {parse_poly(S, "1-a"), parse_poly(S, "b")});
  Ideal I2 = ideal_power(I, 2);
  Ideal I3 = ideal_power(I, 3);
  Ideal I5 = ideal_power(I, 5);
  std::vector<VPoly> gens5 = I5.generators;
  for (const auto& b : C->cached_basis()) gens5.push_back(b);
  auto G5 = groebner_basis(S, gens5);
  for (const auto& p : I2.generators)
    for (const auto& q : I3.generators)
      CHECK(normal_form(S, vp_mul(S, p, q), G5).empty());
}

TEST_CASE("circle ideal square membership") {
  Ring C = circle();
  const PolyRingSpec& S = C->spec();
  Ideal I(C, {parse_poly(S, "1-a"), parse_poly(S, "b")});
  Ideal I2 = ideal_power(I, 2);
  std::vector<VPoly> gens = I2.generators;
  for (const auto& b : C->cached_basis()) gens.push_back(b);
  auto G = groebner_basis(S, gens);
  CHECK(normal_form(S, parse_poly(S, "(1-a)^2"), G).empty());
  CHECK(normal_form(S, parse_poly(S, "b*(1-a)"), G).empty());
  CHECK(normal_form(S, parse_poly(S, "b^2"), G).empty());
  // on the circle, b^2 = (1-a)(1+a), so I^2 = (1-a)
  CHECK(normal_form(S, parse_poly(S, "1-a"), G).empty());
}

namespace {

bool is_exact_ses(const ModuleMap& f, const ModuleMap& g) {
  return is_injective(f) && g.is_surjective() &&
         homology_at(f, g).presented.is_zero();
}

}  // namespace

TEST_CASE("localization is exact on a verified short exact sequence") {
  Ring R = qx();
  const PolyRingSpec& S = R->spec();
  FpModule Rm = free_module(R, 1);
  FpModule Rx = cyclic_module(R, {parse_poly(S, "x")});
  ModuleMap mul_x(Rm, Rm, {parse_poly(S, "x")});
  ModuleMap proj(Rm, Rx, {vp_const(S, 1)});
  REQUIRE(is_exact_ses(mul_x, proj));

  auto L = localize(R, parse_poly(S, "x"));
  const PolyRingSpec& S2 = L.ring->spec();
  FpModule Rm2 = free_module(L.ring, 1);
  FpModule Rx2 = cyclic_module(L.ring, {parse_poly(S2, "x")});
  ModuleMap mul_x2(Rm2, Rm2, {parse_poly(S2, "x")});
  ModuleMap proj2(Rm2, Rx2, {vp_const(S2, 1)});
  CHECK(is_exact_ses(mul_x2, proj2));
  // and the cokernel became the zero module after inverting x
  CHECK(Rx2.is_zero());
}
