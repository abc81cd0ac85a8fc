#include "doctest.h"
#include "prozero/completion.hpp"

using namespace prozero;

namespace {

Ring qx1() {
  return make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x"}));
}

Ring qxy() {
  return make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x", "y"}));
}

// A_N = sum of Q[x]/(x^k), k = 1..N
FpModule truncated_sum(const Ring& R, int N) {
  const PolyRingSpec& S = R->spec();
  std::vector<VPoly> rels;
  for (int k = 1; k <= N; ++k)
    rels.push_back(vp_mul(S, koszul_detail::power_of(S, parse_poly(S, "x"), k),
                          vp_const(S, 1, k - 1)));
  return FpModule(R, N, std::move(rels));
}

}  // namespace

TEST_CASE("filtrations") {
  Ring R = qxy();
  FpModule F = free_module(R, 1);
  SUBCASE("power filtrations are decreasing") {
    Filtration phi = power_filtration(F, parse_poly(R->spec(), "y"), 4);
    CHECK(phi.window() == 4);
    for (int n = 0; n + 1 < 4; ++n)
      CHECK(span_subset(F, phi.levels[static_cast<size_t>(n + 1)],
                        phi.levels[static_cast<size_t>(n)]));
  }
  SUBCASE("non-decreasing input is rejected") {
    std::vector<std::vector<VPoly>> lv = {
        {parse_poly(R->spec(), "x^2")}, {parse_poly(R->spec(), "x")}};
    CHECK_THROWS_AS(make_filtration(F, std::move(lv)), EngineError);
  }
}

TEST_CASE("adic towers") {
  SUBCASE("Q[x] along (x): levels Q[x]/(x^n)") {
    Ring R = qx1();
    InverseTower T = adic_tower(free_module(R, 1), make_sequence(R, {"x"}), 5);
    for (int n = 1; n <= 5; ++n) {
      auto len = finite_length(T.level(n));
      REQUIRE(len.has_value());
      CHECK(*len == n);
    }
    // surjective steps certify ML, and lim^1 = 0 by R2
    Certificate ml = is_mittag_leffler(T);
    CHECK(ml.verdict == Verdict::ML_CERTIFIED);
    CHECK(ml.permanence_tag == "SURJECTIVE_BY_CONSTRUCTION");
    LimReport lr = lim_lim1(T);
    CHECK(lr.lim1_status == LimStatus::ZERO_CERTIFIED);
  }
  SUBCASE("Q[x,y] along (x,y): level n has length n^2") {
    Ring R = qxy();
    InverseTower T =
        adic_tower(free_module(R, 1), make_sequence(R, {"x", "y"}), 4);
    for (int n = 1; n <= 4; ++n) {
      auto len = finite_length(T.level(n));
      REQUIRE(len.has_value());
      CHECK(*len == n * n);
    }
  }
  SUBCASE("zero module gives the zero tower") {
    Ring R = qx1();
    InverseTower T = adic_tower(zero_module(R), make_sequence(R, {"x"}), 4);
    CHECK(is_pro_zero(T).verdict == Verdict::PRO_ZERO);
  }
}

TEST_CASE("cech homology classification") {
  SUBCASE("degree 1 vanishes for (x, y) on Q[x,y]") {
    Ring R = qxy();
    auto rep = cech_homology_report(1, make_sequence(R, {"x", "y"}),
                                    free_module(R, 1), 4);
    CHECK(rep.conclusion == CechConclusion::VANISHES);
  }
  SUBCASE("degree 2 vanishes for (x, y) on Q[x,y]") {
    Ring R = qxy();
    auto rep = cech_homology_report(2, make_sequence(R, {"x", "y"}),
                                    free_module(R, 1), 4);
    CHECK(rep.conclusion == CechConclusion::VANISHES);
  }
  SUBCASE("degree 0 on Q[x]/(x^3): completion comparison certified") {
    Ring R = qx1();
    FpModule M = cyclic_module(R, {parse_poly(R->spec(), "x^3")});
    auto rep = cech_homology_report(0, make_sequence(R, {"x"}), M, 8);
    CHECK(rep.conclusion == CechConclusion::ISOMORPHIC_TO_COMPLETION);
  }
  SUBCASE("degree 0 on A_N stays undetermined in a short window") {
    Ring R = qx1();
    FpModule A = truncated_sum(R, 6);
    auto rep = cech_homology_report(0, make_sequence(R, {"x"}), A, 4);
    CHECK(rep.conclusion == CechConclusion::UNDETERMINED);
    CHECK(rep.evidence.find("NOT_PRO_ZERO") != std::string::npos);
  }
  SUBCASE("degree out of range throws") {
    Ring R = qx1();
    CHECK_THROWS_AS(cech_homology_report(2, make_sequence(R, {"x"}),
                                         free_module(R, 1), 4),
                    EngineError);
  }
}

TEST_CASE("composite completion check") {
  SUBCASE("Q[x,y], M_n = y^n M, x = (x)") {
    Ring R = qxy();
    FpModule F = free_module(R, 1);
    auto rep = gm_composite_check(F, power_filtration(F, parse_poly(R->spec(), "y"), 4),
                                  make_sequence(R, {"x"}), 4);
    CHECK(rep.inner_certified);
    CHECK(rep.levelwise_agree);
    CHECK(rep.diagonal.equivalent);
    CHECK(rep.passed);
    CHECK(rep.diagonal_isos.size() == 4);
  }
  SUBCASE("Q[x]/(x^3) with the zero filtration") {
    Ring R = qx1();
    FpModule M = cyclic_module(R, {parse_poly(R->spec(), "x^3")});
    auto rep = gm_composite_check(M, zero_filtration(M, 8),
                                  make_sequence(R, {"x"}), 8);
    CHECK(rep.passed);
  }
  SUBCASE("Q[x,y]/(xy), M_n = y^n M, x = (x)") {
    Ring R = make_ring(PolyRingSpec(CoefficientDomain::rationals(), {"x", "y"}),
                       std::vector<std::string>{"x*y"});
    FpModule F = free_module(R, 1);
    auto rep = gm_composite_check(F, power_filtration(F, parse_poly(R->spec(), "y"), 6),
                                  make_sequence(R, {"x"}), 6);
    CHECK(rep.inner_certified);
    CHECK(rep.levelwise_agree);
    CHECK(rep.passed);
    // the diagonal iso chain replays: composites are identities
    for (const auto& c : rep.diagonal_isos) {
      CHECK(compose(c.forward, c.backward).equals(identity_map(c.forward.source())));
      CHECK(compose(c.backward, c.forward).equals(identity_map(c.backward.source())));
    }
  }
  SUBCASE("short filtration is rejected") {
    Ring R = qx1();
    FpModule F = free_module(R, 1);
    CHECK_THROWS_AS(gm_composite_check(F, zero_filtration(F, 2),
                                       make_sequence(R, {"x"}), 4),
                    EngineError);
  }
}
