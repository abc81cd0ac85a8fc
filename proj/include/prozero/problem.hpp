#pragma once

#include <future>

#include "json.hpp"
#include "prozero/cartier.hpp"

namespace prozero {

inline constexpr const char* kEngineVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

using pjson = nlohmann::ordered_json;

struct RunOptions {
  int window = 8;
  int degree_cap = 24;
  int jobs = 1;
};

// ---------------------------------------------------------------------------
// Problem-file parsing. Every entity is built fresh inside the worker that
// needs it, so tasks never share mutable engine state.

namespace problem_detail {

inline CoefficientDomain parse_domain(const std::string& s) {
  if (s == "Q") return CoefficientDomain::rationals();
  if (s == "Z") return CoefficientDomain::integers();
  if (s.rfind("Z/", 0) == 0)
    return CoefficientDomain::integers_mod(mpz_class(s.substr(2)));
  if (s.rfind("F", 0) == 0)
    return CoefficientDomain::prime_field(mpz_class(s.substr(1)));
  throw EngineError(ErrorCode::PARSE_ERROR, "unknown coefficient domain " + s);
}

// a vector polynomial: either a scalar string (component 0) or an array of
// per-component strings
inline VPoly parse_vec(const PolyRingSpec& S, const pjson& j) {
  if (j.is_string()) return parse_poly(S, j.get<std::string>());
  if (!j.is_array())
    throw EngineError(ErrorCode::PARSE_ERROR,
                      "expected polynomial string or component array");
  VPoly out;
  int comp = 0;
  for (const auto& c : j) {
    out = vp_add(S, out,
                 vp_shift(parse_poly(S, c.get<std::string>()), comp));
    ++comp;
  }
  return out;
}

inline std::string component_string(const PolyRingSpec& S, const VPoly& v,
                                    int comp) {
  VPoly part;
  for (const auto& t : v)
    if (t.comp == comp) {
      Term u = t;
      u.comp = 0;
      part.push_back(std::move(u));
    }
  return poly_to_string(S, vp_normalize(S, std::move(part)));
}

inline pjson vec_json(const PolyRingSpec& S, const VPoly& v, int ncomp) {
  if (ncomp <= 1) return component_string(S, v, 0);
  pjson arr = pjson::array();
  for (int c = 0; c < ncomp; ++c) arr.push_back(component_string(S, v, c));
  return arr;
}

struct EntityStore {
  const pjson& doc;
  RunOptions opts;

  const pjson& section(const char* name, const std::string& key) const {
    if (!doc.contains(name) || !doc[name].contains(key))
      throw EngineError(ErrorCode::INVALID_INPUT,
                        std::string("undefined ") + name + " reference: " + key);
    return doc[name][key];
  }

  Ring ring(const std::string& name) const {
    const pjson& j = section("rings", name);
    PolyRingSpec S(parse_domain(j.at("coefficients").get<std::string>()),
                   j.at("variables").get<std::vector<std::string>>(),
                   MonomialOrder{}, opts.degree_cap);
    std::vector<VPoly> rels;
    if (j.contains("relations"))
      for (const auto& r : j["relations"]) rels.push_back(parse_vec(S, r));
    return make_ring(std::move(S), std::move(rels));
  }

  Ideal ideal(const std::string& name) const {
    const pjson& j = section("ideals", name);
    Ring R = ring(j.at("ring").get<std::string>());
    std::vector<VPoly> gens;
    for (const auto& g : j.at("generators")) gens.push_back(parse_vec(R->spec(), g));
    return Ideal(std::move(R), std::move(gens));
  }

  FpModule module(const std::string& name) const {
    const pjson& j = section("modules", name);
    Ring R = ring(j.at("ring").get<std::string>());
    int gens = j.at("generators").get<int>();
    std::vector<VPoly> rels;
    if (j.contains("relations"))
      for (const auto& r : j["relations"]) rels.push_back(parse_vec(R->spec(), r));
    return FpModule(std::move(R), gens, std::move(rels));
  }

  SequenceSpec sequence(const std::string& name) const {
    const pjson& j = section("sequences", name);
    Ring R = ring(j.at("ring").get<std::string>());
    std::vector<std::string> elems;
    for (const auto& e : j.at("elements")) elems.push_back(e.get<std::string>());
    return make_sequence(R, elems);
  }

  Filtration filtration(const std::string& name, int W) const {
    const pjson& j = section("filtrations", name);
    FpModule M = module(j.at("module").get<std::string>());
    if (j.contains("power"))
      return power_filtration(M, parse_poly(M.ring()->spec(),
                                            j["power"].get<std::string>()),
                              W);
    std::vector<std::vector<VPoly>> levels;
    for (const auto& lv : j.at("levels")) {
      std::vector<VPoly> gens;
      for (const auto& g : lv) gens.push_back(parse_vec(M.ring()->spec(), g));
      levels.push_back(std::move(gens));
    }
    return make_filtration(M, std::move(levels));
  }

  std::pair<Ideal, std::vector<Chart>> divisor(const std::string& name) const {
    const pjson& j = section("divisors", name);
    Ideal I = ideal(j.at("ideal").get<std::string>());
    const PolyRingSpec& S = I.ambient->spec();
    std::vector<Chart> charts;
    for (const auto& c : j.at("charts"))
      charts.push_back({parse_poly(S, c.at("f").get<std::string>()),
                        parse_poly(S, c.at("x").get<std::string>())});
    return {std::move(I), std::move(charts)};
  }

  PrismData prism(const std::string& name) const {
    const pjson& j = section("prisms", name);
    Ring R = ring(j.at("ring").get<std::string>());
    Ideal I = ideal(j.at("ideal").get<std::string>());
    std::vector<VPoly> images;
    for (const auto& f : j.at("frobenius"))
      images.push_back(parse_poly(R->spec(), f.get<std::string>()));
    return make_prism(R, std::move(I), mpz_class(j.at("p").get<int>()),
                      std::move(images));
  }
};

// ---------------------------------------------------------------------------
// Certificate serialization: everything that feeds the determinism hash.

inline pjson certificate_json(const Certificate& c) {
  pjson j;
  j["verdict"] = verdict_name(c.verdict);
  pjson w = pjson::object();
  for (const auto& [n, m] : c.witness) w[std::to_string(n)] = m;
  j["witness"] = w;
  if (!c.permanence_tag.empty()) j["permanence_tag"] = c.permanence_tag;
  if (!c.diagnostics.empty()) j["diagnostics"] = c.diagnostics;
  return j;
}

inline pjson verdict_json(const RegularityVerdict& v) {
  pjson j;
  j["predicate"] = v.predicate;
  j["holds"] = v.holds;
  pjson per = pjson::array();
  for (const auto& c : v.per_index) per.push_back(certificate_json(c));
  j["per_index"] = per;
  if (!v.diagnostics.empty()) j["diagnostics"] = v.diagnostics;
  return j;
}

inline pjson run_task(const EntityStore& store, const pjson& task, int W) {
  const std::string kind = task.at("kind").get<std::string>();
  pjson out;
  if (kind == "regular") {
    auto rep = is_regular_sequence(store.sequence(task.at("sequence")),
                                   store.module(task.at("module")));
    out["verdict"] = rep.regular ? "REGULAR" : "NOT_REGULAR";
    out["certificate"] = {{"regular", rep.regular},
                          {"failing_index", rep.failing_index}};
  } else if (kind == "bounded_torsion") {
    FpModule M = store.module(task.at("module"));
    const PolyRingSpec& S = M.ring()->spec();
    auto rep = is_bounded_torsion(M, parse_poly(S, task.at("element")), W);
    out["verdict"] = rep.bounded ? "BOUNDED" : "NOT_BOUNDED_WITHIN_WINDOW";
    pjson ann = pjson::array();
    for (const auto& g : rep.stable_annihilator)
      ann.push_back(vec_json(S, g, M.gens()));
    out["certificate"] = {{"bounded", rep.bounded},
                          {"index", rep.index},
                          {"stable_annihilator", ann}};
  } else if (kind == "pro_regular" || kind == "weakly_pro_regular") {
    SequenceSpec seq = store.sequence(task.at("sequence"));
    FpModule M = store.module(task.at("module"));
    RegularityVerdict v = kind == "pro_regular"
                              ? is_pro_regular(seq, M, W)
                              : is_weakly_pro_regular(seq, M, W);
    out["verdict"] = v.holds ? "HOLDS"
                             : (v.per_index.size() == 1
                                    ? verdict_name(v.per_index[0].verdict)
                                    : "FAILS_WITHIN_WINDOW");
    out["certificate"] = verdict_json(v);
  } else if (kind == "audit") {
    AuditReport rep = audit_equivalences(store.sequence(task.at("sequence")),
                                         store.module(task.at("module")), W);
    out["verdict"] = rep.chain_ok && rep.face_a_agree && rep.face_b_agree
                         ? "CONSISTENT"
                         : "INCONSISTENT";
    out["certificate"] = {{"regular", rep.regular.regular},
                          {"pro_regular", verdict_json(rep.pro_regular)},
                          {"weakly_pro_regular", verdict_json(rep.weakly_pro_regular)},
                          {"chain_ok", rep.chain_ok},
                          {"face_a_agree", rep.face_a_agree},
                          {"face_b_agree", rep.face_b_agree},
                          {"notes", rep.notes}};
  } else if (kind == "cech_homology") {
    auto rep = cech_homology_report(task.at("degree").get<int>(),
                                    store.sequence(task.at("sequence")),
                                    store.module(task.at("module")), W);
    out["verdict"] = cech_conclusion_name(rep.conclusion);
    out["certificate"] = {{"degree", rep.degree},
                          {"evidence", rep.evidence},
                          {"next_degree_pro_zero", certificate_json(rep.pro_zero_i1)}};
  } else if (kind == "gm_composite") {
    FpModule M = store.module(task.at("module"));
    auto rep = gm_composite_check(M, store.filtration(task.at("filtration"), W),
                                  store.sequence(task.at("sequence")), W);
    out["verdict"] = rep.passed ? "PASSED" : "FAILED";
    pjson inner = pjson::array();
    for (const auto& lr : rep.inner) inner.push_back(lr.rule_applied);
    out["certificate"] = {{"inner_rules", inner},
                          {"levelwise_agree", rep.levelwise_agree},
                          {"diagonal_equivalent", rep.diagonal.equivalent},
                          {"diagonal_isos", static_cast<int>(rep.diagonal_isos.size())}};
  } else if (kind == "verify_cartier") {
    auto [I, charts] = store.divisor(task.at("divisor"));
    CartierReport rep = verify_cartier(I, charts);
    out["verdict"] = rep.cartier ? "CARTIER" : "NOT_CARTIER";
    pjson ch = pjson::array();
    for (const auto& ev : rep.charts)
      ch.push_back({{"ideal_match", ev.ideal_match},
                    {"nonzerodivisor", ev.nonzerodivisor}});
    out["certificate"] = {{"covering", rep.covering},
                          {"contained", rep.contained},
                          {"charts", ch}};
  } else if (kind == "pro_regular_pair") {
    Ideal I = store.ideal(task.at("ideal"));
    auto rep = is_pro_regular_pair(
        I, parse_poly(I.ambient->spec(), task.at("element")), W);
    out["verdict"] = rep.holds ? "PRO_REGULAR_PAIR" : verdict_name(rep.cert.verdict);
    out["certificate"] = certificate_json(rep.cert);
  } else if (kind == "lemma_5_2_audit") {
    auto [I, charts] = store.divisor(task.at("divisor"));
    auto rep = lemma_5_2_audit(
        I, charts, parse_poly(I.ambient->spec(), task.at("element")), W);
    out["verdict"] = rep.agree ? "FACES_AGREE" : "FACES_DISAGREE";
    pjson ch = pjson::array();
    for (const auto& tr : rep.torsion_charts)
      ch.push_back({{"bounded", tr.bounded}, {"index", tr.index}});
    out["certificate"] = {{"global_bounded", rep.torsion_global.bounded},
                          {"global_index", rep.torsion_global.index},
                          {"charts", ch},
                          {"pair", certificate_json(rep.pair.cert)},
                          {"covering", rep.covering},
                          {"comparisons_ok", rep.comparisons_ok},
                          {"notes", rep.notes}};
  } else if (kind == "prism_b") {
    PrismData P = store.prism(task.at("prism"));
    PrismBReport rep = prism_condition_b(P);
    out["verdict"] = rep.holds ? "CONDITION_B_HOLDS" : "CONDITION_B_FAILS";
    pjson comb = pjson::array();
    for (const auto& c : rep.combination)
      comb.push_back(component_string(P.R->spec(), c, 0));
    out["certificate"] = {{"holds", rep.holds},
                          {"combination", comb},
                          {"diagnostics", rep.diagnostics}};
  } else {
    throw EngineError(ErrorCode::PARSE_ERROR, "unknown task kind " + kind);
  }
  return out;
}

}  // namespace problem_detail

// ---------------------------------------------------------------------------
// run_problem: validate, dispatch tasks (optionally concurrently), assemble
// the canonical report. Throws EngineError(PARSE_ERROR / INVALID_INPUT) for
// anything that must map to exit code 2.

inline pjson run_problem(const pjson& doc, const RunOptions& opts) {
  if (!doc.is_object() || !doc.contains("schema_version"))
    throw EngineError(ErrorCode::PARSE_ERROR, "missing schema_version");
  if (doc["schema_version"].get<int>() != kSchemaVersion)
    throw EngineError(ErrorCode::PARSE_ERROR, "unsupported schema version");
  if (!doc.contains("tasks") || !doc["tasks"].is_array())
    throw EngineError(ErrorCode::PARSE_ERROR, "missing tasks array");

  const pjson& tasks = doc["tasks"];
  // validate shapes and referenced names up front, before spawning work
  std::vector<int> windows;
  for (const auto& t : tasks) {
    if (!t.is_object() || !t.contains("kind"))
      throw EngineError(ErrorCode::PARSE_ERROR, "task without a kind");
    int W = t.contains("window") ? t["window"].get<int>() : opts.window;
    if (W < 2)
      throw EngineError(ErrorCode::INVALID_INPUT, "task window must be >= 2");
    windows.push_back(W);
  }

  problem_detail::EntityStore store{doc, opts};
  auto worker = [&](size_t i) -> pjson {
    pjson entry;
    entry["index"] = static_cast<int>(i);
    entry["kind"] = tasks[i].at("kind").get<std::string>();
    entry["window"] = windows[i];
    try {
      pjson res = problem_detail::run_task(store, tasks[i], windows[i]);
      for (auto& [k, v] : res.items()) entry[k] = v;
    } catch (const EngineError& e) {
      if (e.code() == ErrorCode::DEGREE_CAP_EXCEEDED) {
        entry["verdict"] = "CAP_EXCEEDED";
        entry["error"] = e.what();
      } else if (e.code() == ErrorCode::NOT_CHECKABLE) {
        entry["verdict"] = "NOT_CHECKABLE";
        entry["error"] = e.what();
      } else {
        throw;
      }
    }
    return entry;
  };

  std::vector<pjson> results(tasks.size());
  if (opts.jobs > 1 && tasks.size() > 1) {
    std::vector<std::future<pjson>> futs;
    for (size_t i = 0; i < tasks.size(); ++i)
      futs.push_back(std::async(std::launch::async, worker, i));
    for (size_t i = 0; i < tasks.size(); ++i) results[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < tasks.size(); ++i) results[i] = worker(i);
  }

  pjson report;
  report["schema_version"] = kSchemaVersion;
  report["engine_version"] = kEngineVersion;
  report["degree_cap"] = opts.degree_cap;
  report["tasks"] = pjson::array();
  for (auto& r : results) report["tasks"].push_back(std::move(r));
  return report;
}

inline std::string report_text(const pjson& report) {
  std::string out;
  out += "engine " + report["engine_version"].get<std::string>() + " schema " +
         std::to_string(report["schema_version"].get<int>()) + "\n";
  for (const auto& t : report["tasks"]) {
    out += "task " + std::to_string(t["index"].get<int>()) + " " +
           t["kind"].get<std::string>() + " window=" +
           std::to_string(t["window"].get<int>()) + " verdict=" +
           t["verdict"].get<std::string>() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replay: every certificate in the report is re-derived from scratch from
// the problem file and compared field by field. Returns true plus an empty
// detail on success, false plus the first failing check otherwise.

inline std::pair<bool, std::string> replay_report(const pjson& problem,
                                                  const pjson& report,
                                                  int jobs = 1) {
  if (!report.contains("engine_version") ||
      report["engine_version"].get<std::string>() != kEngineVersion ||
      !report.contains("schema_version") ||
      report["schema_version"].get<int>() != kSchemaVersion)
    throw EngineError(ErrorCode::REPLAY_INCOMPATIBLE,
                      "REPLAY_INCOMPATIBLE: report produced by a different "
                      "engine or schema version");
  RunOptions opts;
  opts.degree_cap = report.contains("degree_cap")
                        ? report["degree_cap"].get<int>()
                        : opts.degree_cap;
  opts.jobs = jobs;
  pjson fresh = run_problem(problem, opts);
  if (fresh["tasks"].size() != report["tasks"].size())
    return {false, "task count mismatch"};
  for (size_t i = 0; i < fresh["tasks"].size(); ++i) {
    const pjson& a = fresh["tasks"][i];
    const pjson& b = report["tasks"][i];
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k) || b[k] != v)
        return {false, "task " + std::to_string(i) + " (" +
                           a["kind"].get<std::string>() + "): field '" + k +
                           "' failed to replay"};
    }
    for (const auto& [k, v] : b.items())
      if (!a.contains(k))
        return {false, "task " + std::to_string(i) + ": unexpected field '" +
                           k + "'"};
  }
  return {true, ""};
}

}  // namespace prozero
