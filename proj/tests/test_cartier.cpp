#include "doctest.h"
#include "prozero/cartier.hpp"

using namespace prozero;

namespace {

// the circle: Q[a,b]/(a^2 + b^2 - 1), divisor of the point (1, 0)
Ring circle() {
  return make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"a", "b"}),
                   std::vector<std::string>{"a^2+b^2-1"});
}

Ideal point_ideal(const Ring& R) {
  const PolyRingSpec& S = R->spec();
  return Ideal(R, {parse_poly(S, "1-a"), parse_poly(S, "b")});
}

std::vector<Chart> circle_charts(const Ring& R) {
  const PolyRingSpec& S = R->spec();
  return {{parse_poly(S, "1+a"), parse_poly(S, "b")},
          {parse_poly(S, "1-a"), parse_poly(S, "1")}};
}

Ring zmod4_u() {
  return make_ring(PolyRingSpec(CoefficientDomain::integers_mod(4), {"u"}));
}

}  // namespace

TEST_CASE("cartier verification") {
  SUBCASE("the point on the circle is effective Cartier") {
    Ring R = circle();
    CartierReport rep = verify_cartier(point_ideal(R), circle_charts(R));
    CHECK(rep.covering);
    CHECK(rep.contained);
    REQUIRE(rep.charts.size() == 2);
    for (const auto& ev : rep.charts) {
      CHECK(ev.ideal_match);
      CHECK(ev.nonzerodivisor);
    }
    CHECK(rep.cartier);
  }
  SUBCASE("principal ideals are Cartier on the trivial chart") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x"}));
    const PolyRingSpec& S = R->spec();
    Ideal I(R, {parse_poly(S, "x^2")});
    CartierReport rep = verify_cartier(
        I, {{parse_poly(S, "1"), parse_poly(S, "x^2")}});
    CHECK(rep.cartier);
  }
  SUBCASE("the maximal ideal of the plane is not Cartier at the origin") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x", "y"}));
    const PolyRingSpec& S = R->spec();
    Ideal I(R, {parse_poly(S, "x"), parse_poly(S, "y")});
    CartierReport rep =
        verify_cartier(I, {{parse_poly(S, "1"), parse_poly(S, "x")}});
    CHECK(rep.covering);
    CHECK_FALSE(rep.charts[0].ideal_match);
    CHECK_FALSE(rep.cartier);
  }
  SUBCASE("non-covering charts are flagged") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x"}));
    const PolyRingSpec& S = R->spec();
    Ideal I(R, {parse_poly(S, "x")});
    CartierReport rep =
        verify_cartier(I, {{parse_poly(S, "x"), parse_poly(S, "x")}});
    CHECK_FALSE(rep.covering);
    CHECK_FALSE(rep.cartier);
  }
}

TEST_CASE("chart power consistency") {
  Ring R = circle();
  Ideal I = point_ideal(R);
  auto charts = circle_charts(R);
  for (int n = 1; n <= 8; ++n) {
    CHECK(chart_power_consistent(I, charts[0], n));
    CHECK(chart_power_consistent(I, charts[1], n));
  }
}

TEST_CASE("pro-regular pairs") {
  SUBCASE("zero element: quotient towers with zero transitions") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x"}));
    Ideal I(R, {parse_poly(R->spec(), "x")});
    auto rep = is_pro_regular_pair(I, VPoly{}, 4);
    CHECK(rep.holds);
  }
  SUBCASE("(y) with x on the plane: torsion-free levels") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x", "y"}));
    Ideal I(R, {parse_poly(R->spec(), "y")});
    auto rep = is_pro_regular_pair(I, parse_poly(R->spec(), "x"), 4);
    CHECK(rep.holds);
    // every level is already zero
    for (auto& [n, m] : rep.cert.witness) CHECK(m == n);
  }
  SUBCASE("(y) with x on Q[x,y]/(xy): one-step death") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x", "y"}),
                       std::vector<std::string>{"x*y"});
    Ideal I(R, {parse_poly(R->spec(), "y")});
    auto rep = is_pro_regular_pair(I, parse_poly(R->spec(), "x"), 6);
    CHECK(rep.holds);
  }
  SUBCASE("escalating torsion fails within the window") {
    std::vector<std::string> vars = {"x"};
    std::vector<std::string> gens;
    for (int k = 1; k <= 5; ++k) {
      vars.push_back("y" + std::to_string(k));
      gens.push_back("x^" + std::to_string(k) + "*y" + std::to_string(k));
    }
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), vars), gens);
    Ideal I(R, std::vector<VPoly>{});  // the zero ideal: levels are R itself
    auto rep = is_pro_regular_pair(I, parse_poly(R->spec(), "x"), 4);
    CHECK_FALSE(rep.holds);
    CHECK(rep.cert.verdict == Verdict::NOT_PRO_ZERO_WITHIN_WINDOW);
  }
}

TEST_CASE("lemma-style three-face audit") {
  SUBCASE("circle point with x = b: all faces positive and agreeing") {
    Ring R = circle();
    Lemma52Report rep = lemma_5_2_audit(point_ideal(R), circle_charts(R),
                                        parse_poly(R->spec(), "b"), 4);
    CHECK(rep.covering);
    CHECK(rep.torsion_global.bounded);
    for (const auto& tr : rep.torsion_charts) CHECK(tr.bounded);
    CHECK(rep.pair.holds);
    CHECK(rep.comparisons_ok);
    CHECK(rep.agree);
  }
  SUBCASE("mismatched data is reported, not silently accepted") {
    std::vector<std::string> vars = {"x", "y1", "y2", "y3"};
    std::vector<std::string> gens = {"x*y1", "x^2*y2", "x^3*y3"};
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), vars), gens);
    const PolyRingSpec& S = R->spec();
    Ideal I(R, std::vector<VPoly>{});
    Lemma52Report rep = lemma_5_2_audit(
        I, {{parse_poly(S, "1"), parse_poly(S, "1")}}, parse_poly(S, "x"), 2);
    CHECK_FALSE(rep.torsion_global.bounded);
    CHECK(rep.torsion_charts[0].bounded);  // the chart quotient is zero
    CHECK_FALSE(rep.agree);
    CHECK(rep.notes.find("disagree") != std::string::npos);
  }
}

TEST_CASE("prisms") {
  SUBCASE("(u - 2) in (Z/4)[u] with phi(u) = u^2: condition (b) holds") {
    Ring R = zmod4_u();
    const PolyRingSpec& S = R->spec();
    PrismData P = make_prism(R, Ideal(R, {parse_poly(S, "u-2")}), 2,
                             {parse_poly(S, "u^2")});
    PrismBReport rep = prism_condition_b(P);
    REQUIRE(rep.holds);
    // replay by hand: the combination really writes 2
    std::vector<VPoly> cols = {parse_poly(S, "u-2"), parse_poly(S, "u^2-2")};
    VPoly acc;
    for (size_t j = 0; j < cols.size(); ++j)
      acc = vp_add(S, acc, vp_mul(S, rep.combination[j], cols[j]));
    CHECK(R->is_zero(vp_sub(S, acc, vp_const(S, 2))));
  }
  SUBCASE("(u) in (Z/4)[u]: condition (b) fails") {
    Ring R = zmod4_u();
    const PolyRingSpec& S = R->spec();
    PrismData P = make_prism(R, Ideal(R, {parse_poly(S, "u")}), 2,
                             {parse_poly(S, "u^2")});
    PrismBReport rep = prism_condition_b(P);
    CHECK_FALSE(rep.holds);
    CHECK(rep.combination.empty());
  }
  SUBCASE("images that do not lift the p-power map are rejected") {
    Ring R = zmod4_u();
    const PolyRingSpec& S = R->spec();
    CHECK_THROWS_AS(make_prism(R, Ideal(R, {parse_poly(S, "u")}), 2,
                               {parse_poly(S, "u^3")}),
                    EngineError);
  }
  SUBCASE("images that break the defining ideal are rejected") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::integers_mod(4), {"u"}),
                       std::vector<std::string>{"u^2-2"});
    const PolyRingSpec& S = R->spec();
    CHECK_THROWS_AS(make_prism(R, Ideal(R, {parse_poly(S, "u")}), 2,
                               {parse_poly(S, "u^2")}),
                    EngineError);
  }
  SUBCASE("wrong image count is rejected") {
    Ring R = zmod4_u();
    CHECK_THROWS_AS(make_prism(R, Ideal(R, std::vector<VPoly>{}), 2, {}),
                    EngineError);
  }
}
