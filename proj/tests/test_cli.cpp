#include "doctest.h"
#include "prozero/problem.hpp"

using namespace prozero;

namespace {

pjson base_problem() {
  return pjson::parse(R"({
    "schema_version": 1,
    "rings": { "R": { "coefficients": "Q", "variables": ["x"] } },
    "modules": { "M": { "ring": "R", "generators": 1, "relations": ["x^3"] } },
    "tasks": [ { "kind": "bounded_torsion", "module": "M", "element": "x", "window": 6 } ]
  })");
}

// A_N: one generator per summand, relation x^k on the k-th
pjson truncation_problem(int N, int W) {
  pjson p;
  p["schema_version"] = 1;
  p["rings"]["R"] = {{"coefficients", "Q"}, {"variables", {"x"}}};
  pjson rels = pjson::array();
  for (int k = 1; k <= N; ++k) {
    pjson row = pjson::array();
    for (int j = 1; j <= N; ++j)
      row.push_back(j == k ? "x^" + std::to_string(k) : "0");
    rels.push_back(row);
  }
  p["modules"]["A"] = {{"ring", "R"}, {"generators", N}, {"relations", rels}};
  p["sequences"]["s"] = {{"ring", "R"}, {"elements", {"x"}}};
  p["tasks"] = {{{"kind", "pro_regular"},
                 {"sequence", "s"},
                 {"module", "A"},
                 {"window", W}}};
  return p;
}

}  // namespace

TEST_CASE("problem runs") {
  SUBCASE("bounded torsion fixture: BOUNDED with index 3") {
    pjson rep = run_problem(base_problem(), RunOptions{});
    REQUIRE(rep["tasks"].size() == 1);
    CHECK(rep["tasks"][0]["verdict"] == "BOUNDED");
    CHECK(rep["tasks"][0]["certificate"]["index"] == 3);
  }
  SUBCASE("truncation escalation: NOT_PRO_ZERO_WITHIN_WINDOW at N=10, W=6") {
    pjson rep = run_problem(truncation_problem(10, 6), RunOptions{});
    CHECK(rep["tasks"][0]["verdict"] == "NOT_PRO_ZERO_WITHIN_WINDOW");
    std::string diag =
        rep["tasks"][0]["certificate"]["per_index"][0]["diagnostics"];
    CHECK(diag.find("no vanishing composite") != std::string::npos);
  }
  SUBCASE("task window falls back to the run default") {
    pjson p = base_problem();
    p["tasks"][0].erase("window");
    RunOptions o;
    o.window = 5;
    pjson rep = run_problem(p, o);
    CHECK(rep["tasks"][0]["window"] == 5);
  }
  SUBCASE("text format lists one line per task") {
    pjson rep = run_problem(base_problem(), RunOptions{});
    std::string txt = report_text(rep);
    CHECK(txt.find("task 0 bounded_torsion window=6 verdict=BOUNDED") !=
          std::string::npos);
  }
  SUBCASE("degree cap overflow becomes a per-task verdict") {
    pjson p = truncation_problem(2, 30);  // levels need x^30, cap is 24
    pjson rep = run_problem(p, RunOptions{});
    CHECK(rep["tasks"][0]["verdict"] == "CAP_EXCEEDED");
  }
}

TEST_CASE("determinism") {
  pjson p = truncation_problem(6, 4);
  p["tasks"].push_back(base_problem()["tasks"][0]);
  p["modules"]["M"] = base_problem()["modules"]["M"];
  RunOptions o1, o4;
  o4.jobs = 4;
  std::string a = run_problem(p, o1).dump();
  std::string b = run_problem(p, o1).dump();
  std::string c = run_problem(p, o4).dump();
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("replay") {
  pjson p = base_problem();
  pjson rep = run_problem(p, RunOptions{});
  SUBCASE("fresh reports replay clean") {
    auto [ok, detail] = replay_report(p, rep);
    CHECK(ok);
    CHECK(detail.empty());
  }
  SUBCASE("tampered witness data is caught and named") {
    pjson bad = rep;
    bad["tasks"][0]["certificate"]["index"] = 2;
    auto [ok, detail] = replay_report(p, bad);
    CHECK_FALSE(ok);
    CHECK(detail.find("task 0") != std::string::npos);
    CHECK(detail.find("certificate") != std::string::npos);
  }
  SUBCASE("tampered verdict is caught") {
    pjson bad = rep;
    bad["tasks"][0]["verdict"] = "NOT_BOUNDED_WITHIN_WINDOW";
    auto [ok, detail] = replay_report(p, bad);
    CHECK_FALSE(ok);
    CHECK(detail.find("verdict") != std::string::npos);
  }
  SUBCASE("engine version mismatch refuses to replay") {
    pjson bad = rep;
    bad["engine_version"] = "0.0.1";
    try {
      replay_report(p, bad);
      FAIL("expected REPLAY_INCOMPATIBLE");
    } catch (const EngineError& e) {
      CHECK(e.code() == ErrorCode::REPLAY_INCOMPATIBLE);
    }
  }
}

TEST_CASE("malformed input corpus") {
  auto expect_input_error = [](pjson p) {
    try {
      run_problem(p, RunOptions{});
      FAIL_CHECK("expected an input error");
    } catch (const EngineError& e) {
      CHECK((e.code() == ErrorCode::PARSE_ERROR ||
             e.code() == ErrorCode::INVALID_INPUT));
    }
  };
  SUBCASE("missing schema version") {
    pjson p = base_problem();
    p.erase("schema_version");
    expect_input_error(p);
  }
  SUBCASE("wrong schema version") {
    pjson p = base_problem();
    p["schema_version"] = 99;
    expect_input_error(p);
  }
  SUBCASE("missing tasks") {
    pjson p = base_problem();
    p.erase("tasks");
    expect_input_error(p);
  }
  SUBCASE("unknown task kind") {
    pjson p = base_problem();
    p["tasks"][0]["kind"] = "frobnicate";
    expect_input_error(p);
  }
  SUBCASE("undefined module reference") {
    pjson p = base_problem();
    p["tasks"][0]["module"] = "missing";
    expect_input_error(p);
  }
  SUBCASE("window below 2") {
    pjson p = base_problem();
    p["tasks"][0]["window"] = 1;
    expect_input_error(p);
  }
  SUBCASE("unparseable polynomial") {
    pjson p = base_problem();
    p["modules"]["M"]["relations"][0] = "x^^3 +";
    expect_input_error(p);
  }
  SUBCASE("unknown coefficient domain") {
    pjson p = base_problem();
    p["rings"]["R"]["coefficients"] = "R";
    expect_input_error(p);
  }
}

TEST_CASE("full task-kind sweep stays deterministic") {
  pjson p = pjson::parse(R"({
    "schema_version": 1,
    "rings": {
      "R": { "coefficients": "Q", "variables": ["x", "y"] },
      "C": { "coefficients": "Q", "variables": ["a", "b"],
             "relations": ["a^2+b^2-1"] },
      "W4": { "coefficients": "Z/4", "variables": ["u"] }
    },
    "ideals": {
      "pt": { "ring": "C", "generators": ["1-a", "b"] },
      "J": { "ring": "R", "generators": ["y"] },
      "Iu": { "ring": "W4", "generators": ["u-2"] }
    },
    "modules": { "F": { "ring": "R", "generators": 1 } },
    "sequences": {
      "xy": { "ring": "R", "elements": ["x", "y"] },
      "xonly": { "ring": "R", "elements": ["x"] }
    },
    "filtrations": { "Phi": { "module": "F", "power": "y" } },
    "divisors": { "D": { "ideal": "pt", "charts": [
      { "f": "1+a", "x": "b" }, { "f": "1-a", "x": "1" } ] } },
    "prisms": { "P": { "ring": "W4", "ideal": "Iu", "p": 2,
                       "frobenius": ["u^2"] } },
    "tasks": [
      { "kind": "regular", "sequence": "xy", "module": "F", "window": 3 },
      { "kind": "weakly_pro_regular", "sequence": "xy", "module": "F", "window": 3 },
      { "kind": "audit", "sequence": "xy", "module": "F", "window": 3 },
      { "kind": "cech_homology", "degree": 1, "sequence": "xy", "module": "F", "window": 3 },
      { "kind": "gm_composite", "module": "F", "filtration": "Phi", "sequence": "xonly", "window": 3 },
      { "kind": "verify_cartier", "divisor": "D", "window": 2 },
      { "kind": "pro_regular_pair", "ideal": "J", "element": "x", "window": 3 },
      { "kind": "lemma_5_2_audit", "divisor": "D", "element": "b", "window": 4 },
      { "kind": "prism_b", "prism": "P", "window": 2 }
    ]
  })");
  pjson rep = run_problem(p, RunOptions{});
  CHECK(rep["tasks"][0]["verdict"] == "REGULAR");
  CHECK(rep["tasks"][1]["verdict"] == "HOLDS");
  CHECK(rep["tasks"][2]["verdict"] == "CONSISTENT");
  CHECK(rep["tasks"][3]["verdict"] == "VANISHES");
  CHECK(rep["tasks"][4]["verdict"] == "PASSED");
  CHECK(rep["tasks"][5]["verdict"] == "CARTIER");
  CHECK(rep["tasks"][6]["verdict"] == "PRO_REGULAR_PAIR");
  CHECK(rep["tasks"][7]["verdict"] == "FACES_AGREE");
  CHECK(rep["tasks"][8]["verdict"] == "CONDITION_B_HOLDS");
  RunOptions o4;
  o4.jobs = 4;
  CHECK(run_problem(p, o4).dump() == rep.dump());
  auto [ok, detail] = replay_report(p, rep, 2);
  CHECK(ok);
}
