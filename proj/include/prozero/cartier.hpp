#pragma once

#include "prozero/completion.hpp"

namespace prozero {

// ---------------------------------------------------------------------------
// Effective Cartier data: an ideal that becomes principal, generated by a
// nonzerodivisor, on each chart of a covering.

struct Chart {
  VPoly f;  // the localized element, in ambient coordinates
  VPoly x;  // the local generator, in ambient coordinates
};

struct ChartEvidence {
  bool ideal_match = false;     // I R_f = (x) R_f
  bool nonzerodivisor = false;  // x/1 regular on R_f
  std::string diagnostics;
};

struct CartierReport {
  bool covering = false;
  bool contained = false;  // I lies in the ideal spanned by the chart x's
  std::vector<ChartEvidence> charts;
  bool cartier = false;
};

inline CartierReport verify_cartier(const Ideal& I,
                                    const std::vector<Chart>& charts) {
  const Ring& R = I.ambient;
  CartierReport rep;
  std::vector<VPoly> fs, xs;
  for (const auto& c : charts) {
    fs.push_back(c.f);
    xs.push_back(c.x);
  }
  rep.covering = is_covering_sequence(fs, R);
  {
    SpanSolver span(R, xs, 1);
    rep.contained = true;
    for (const auto& g : I.generators)
      if (!span.contains(g)) rep.contained = false;
  }
  for (const auto& c : charts) {
    ChartEvidence ev;
    Localization L = localize(R, c.f);
    const PolyRingSpec& S2 = L.ring->spec();
    FpModule F = free_module(L.ring, 1);
    std::vector<VPoly> igens;
    for (const auto& g : I.generators) igens.push_back(extend_poly(S2, g));
    VPoly xloc = extend_poly(S2, c.x);
    ev.ideal_match = span_equal(F, igens, {xloc});
    if (!ev.ideal_match) ev.diagnostics += "I R_f != x R_f; ";
    ev.nonzerodivisor = is_injective(scalar_map(F, xloc));
    if (!ev.nonzerodivisor) ev.diagnostics += "x has torsion on R_f; ";
    rep.charts.push_back(std::move(ev));
  }
  rep.cartier = rep.covering && rep.contained;
  for (const auto& ev : rep.charts)
    rep.cartier = rep.cartier && ev.ideal_match && ev.nonzerodivisor;
  return rep;
}

// I^n R_f = (x^n) R_f on a single chart
inline bool chart_power_consistent(const Ideal& I, const Chart& c, int n) {
  Localization L = localize(I.ambient, c.f);
  const PolyRingSpec& S2 = L.ring->spec();
  FpModule F = free_module(L.ring, 1);
  Ideal In = ideal_power(I, n);
  std::vector<VPoly> igens;
  for (const auto& g : In.generators) igens.push_back(extend_poly(S2, g));
  VPoly xn = koszul_detail::power_of(S2, extend_poly(S2, c.x), n);
  return span_equal(F, igens, {xn});
}

// ---------------------------------------------------------------------------
// Pro-regular pairs: the tower H_1(x^n; R/I^n) -- equivalently
// (I^n : x^n)/I^n -- must be pro-zero within the window.

struct ProRegularPairReport {
  bool holds = false;
  Certificate cert;
};

inline InverseTower pair_torsion_tower(const Ideal& I, const VPoly& x, int W) {
  const Ring& R = I.ambient;
  SequenceSpec seq = SequenceSpec{R, {R->nf(x)}};
  std::vector<KoszulLevel> K;
  std::vector<Subquotient> H;
  std::vector<FpModule> mods;
  for (int n = 1; n <= W; ++n) {
    FpModule Q = cyclic_module(R, ideal_power(I, n).generators);
    K.push_back(koszul_level(seq, Q, n));
    H.push_back(koszul_homology(K.back(), 1));
    mods.push_back(H.back().presented);
  }
  std::vector<ModuleMap> steps;
  for (int n = 1; n < W; ++n) {
    KoszulTransition T = koszul_transition(K[static_cast<size_t>(n)],
                                           K[static_cast<size_t>(n - 1)]);
    auto ind =
        induced_map(H[static_cast<size_t>(n)], H[static_cast<size_t>(n - 1)],
                    [&](const VPoly& v) { return T.maps[1].apply(v); });
    if (!ind)
      throw EngineError(ErrorCode::NOT_A_COMPLEX,
                        "pair tower transition does not descend");
    steps.push_back(*ind);
  }
  return make_tower(std::move(mods), std::move(steps));
}

inline ProRegularPairReport is_pro_regular_pair(const Ideal& I, const VPoly& x,
                                                int W) {
  ProRegularPairReport rep;
  rep.cert = is_pro_zero(pair_torsion_tower(I, x, W));
  rep.holds = rep.cert.verdict == Verdict::PRO_ZERO;
  return rep;
}

// ---------------------------------------------------------------------------
// The three-face audit around pro-regular pairs: bounded torsion of R/I at
// x, the same on every chart quotient R_f/(x_f), and the pair condition.
// The chart comparisons are verified levelwise: every annihilator generator
// upstairs must land in the matching annihilator downstairs, and the
// covering flag records why the glued comparison is faithful.

struct Lemma52Report {
  TorsionReport torsion_global;               // face (i)
  std::vector<TorsionReport> torsion_charts;  // face (ii), one per chart
  ProRegularPairReport pair;                  // face (iv)
  bool covering = false;
  bool comparisons_ok = false;
  bool agree = false;
  std::string notes;
};

inline Lemma52Report lemma_5_2_audit(const Ideal& I,
                                     const std::vector<Chart>& charts,
                                     const VPoly& x, int W) {
  const Ring& R = I.ambient;
  const PolyRingSpec& S = R->spec();
  Lemma52Report rep;
  FpModule M = cyclic_module(R, I.generators);
  rep.torsion_global = is_bounded_torsion(M, x, W);
  rep.pair = is_pro_regular_pair(I, x, W);

  std::vector<VPoly> fs;
  for (const auto& c : charts) fs.push_back(c.f);
  rep.covering = is_covering_sequence(fs, R);

  bool chart_all = true;
  rep.comparisons_ok = true;
  for (const auto& c : charts) {
    Localization L = localize(R, c.f);
    const PolyRingSpec& S2 = L.ring->spec();
    FpModule Mf = cyclic_module(L.ring, {extend_poly(S2, c.x)});
    VPoly xloc = extend_poly(S2, x);
    TorsionReport tr = is_bounded_torsion(Mf, xloc, W);
    if (!tr.bounded) chart_all = false;
    // levelwise comparison: annihilators upstairs land in annihilators
    // downstairs under the localization map
    for (int n = 1; n <= W && rep.comparisons_ok; ++n) {
      VPoly xn = koszul_detail::power_of(S, x, n);
      VPoly xnloc = koszul_detail::power_of(S2, xloc, n);
      ModuleMap mult = scalar_map(Mf, xnloc);
      for (const auto& g : kernel_gens(scalar_map(M, xn)))
        if (!Mf.in_relations(mult.apply(extend_poly(S2, g))))
          rep.comparisons_ok = false;
    }
    rep.torsion_charts.push_back(std::move(tr));
  }
  bool i = rep.torsion_global.bounded;
  rep.agree = (i == chart_all) && (i == rep.pair.holds);
  if (!rep.agree) rep.notes += "faces disagree within the window; ";
  if (!rep.covering) rep.notes += "charts do not cover; ";
  return rep;
}

// ---------------------------------------------------------------------------
// Prisms: delta-style data (phi, I, p) with condition (b): p lies in
// I + phi(I), certified by an explicit combination.

struct PrismData {
  Ring R;
  Ideal I;
  mpz_class p;
  std::vector<VPoly> frobenius_images;  // one per variable of R
};

inline PrismData make_prism(Ring R, Ideal I, mpz_class p,
                            std::vector<VPoly> images) {
  const PolyRingSpec& S = R->spec();
  if (images.size() != S.nvars())
    throw EngineError(ErrorCode::INVALID_INPUT,
                      "one frobenius image per variable required");
  // the substitution must descend to an endomorphism of R
  for (const auto& g : R->ideal_generators())
    if (!R->is_zero(vp_substitute(S, g, images)))
      throw EngineError(ErrorCode::INVALID_INPUT,
                        "frobenius images do not respect the defining ideal");
  // and lift the p-power map: phi(v) == v^p modulo p
  SpanSolver pspan(R, {vp_const(S, p)}, 1);
  for (size_t i = 0; i < S.nvars(); ++i) {
    VPoly vp = koszul_detail::power_of(
        S, vp_var(S, static_cast<int>(i)), static_cast<int>(p.get_si()));
    if (!pspan.contains(vp_sub(S, images[i], vp)))
      throw EngineError(ErrorCode::INVALID_INPUT,
                        "frobenius images do not lift the p-power map");
  }
  return PrismData{std::move(R), std::move(I), std::move(p),
                   std::move(images)};
}

struct PrismBReport {
  bool holds = false;
  // coefficients on [I generators..., phi(I) generators...] writing p
  std::vector<VPoly> combination;
  std::string diagnostics;
};

inline PrismBReport prism_condition_b(const PrismData& P) {
  const PolyRingSpec& S = P.R->spec();
  PrismBReport rep;
  std::vector<VPoly> cols = P.I.generators;
  for (const auto& g : P.I.generators)
    cols.push_back(P.R->nf(vp_substitute(S, g, P.frobenius_images)));
  SpanSolver span(P.R, cols, 1);
  VPoly target = vp_const(S, P.p);
  auto w = span.witness(target);
  if (!w) {
    rep.diagnostics = "p is not in I + phi(I)";
    return rep;
  }
  rep.combination = *w;
  // replay the combination before reporting success
  VPoly acc;
  for (size_t j = 0; j < cols.size(); ++j)
    acc = vp_add(S, acc, vp_mul(S, rep.combination[j], cols[j]));
  if (!P.R->is_zero(vp_sub(S, acc, target))) {
    rep.diagnostics = "membership witness failed to replay";
    return rep;
  }
  rep.holds = true;
  return rep;
}

}  // namespace prozero
