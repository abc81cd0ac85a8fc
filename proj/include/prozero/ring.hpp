#pragma once

#include <memory>

#include "prozero/groebner.hpp"

namespace prozero {

// R = (coefficients)[vars] / J, with the reduced basis of J cached at
// construction. Every module computation over R reduces to polynomial-ring
// computations with the ideal relations appended per free-module component.
class RingPresentation {
 public:
  RingPresentation(PolyRingSpec spec, std::vector<VPoly> ideal_generators)
      : spec_(std::move(spec)) {
    cached_basis_ = groebner_basis(spec_, ideal_generators);
    for (auto& g : ideal_generators) {
      VPoly r = vp_normalize(spec_, std::move(g));
      if (!r.empty()) ideal_generators_.push_back(std::move(r));
    }
  }

  const PolyRingSpec& spec() const { return spec_; }
  const std::vector<VPoly>& ideal_generators() const {
    return ideal_generators_;
  }
  const std::vector<VPoly>& cached_basis() const { return cached_basis_; }

  bool is_zero_ring() const {
    return cached_basis_.size() == 1 &&
           vp_sub(spec_, cached_basis_[0], vp_const(spec_, 1)).empty();
  }

  // Componentwise normal form of a vector polynomial modulo J.
  VPoly nf(const VPoly& v) const {
    VPoly out;
    int mc = vp_max_comp(v);
    for (int c = 0; c <= mc; ++c) {
      VPoly part = normal_form(spec_, vp_slice(v, c, c + 1), cached_basis_);
      VPoly sh = vp_shift(part, c);
      out.insert(out.end(), sh.begin(), sh.end());
    }
    return vp_normalize(spec_, std::move(out));
  }

  bool is_zero(const VPoly& v) const { return nf(v).empty(); }

  // J * e_c for every component c < k; appended to column sets so that
  // module arithmetic over R happens inside the polynomial ring.
  std::vector<VPoly> ideal_relations(int k) const {
    std::vector<VPoly> out;
    for (int c = 0; c < k; ++c)
      for (const auto& b : cached_basis_) out.push_back(vp_shift(b, c));
    return out;
  }

 private:
  PolyRingSpec spec_;
  std::vector<VPoly> ideal_generators_;
  std::vector<VPoly> cached_basis_;
};

using Ring = std::shared_ptr<const RingPresentation>;

inline Ring make_ring(PolyRingSpec spec, std::vector<VPoly> gens = {}) {
  return std::make_shared<RingPresentation>(std::move(spec), std::move(gens));
}

inline Ring make_ring(PolyRingSpec spec,
                      const std::vector<std::string>& gens) {
  std::vector<VPoly> g;
  for (const auto& s : gens) g.push_back(parse_poly(spec, s));
  return std::make_shared<RingPresentation>(std::move(spec), std::move(g));
}

// Membership solver for a column span over R: wraps ColumnSolver with the
// ideal relations appended, exposing witnesses indexed by the real columns.
class SpanSolver {
 public:
  SpanSolver(Ring R, std::vector<VPoly> cols, int k)
      : R_(std::move(R)), ncols_(cols.size()) {
    std::vector<VPoly> all = std::move(cols);
    auto aug = R_->ideal_relations(k);
    all.insert(all.end(), aug.begin(), aug.end());
    solver_ = std::make_unique<ColumnSolver>(R_->spec(), std::move(all), k);
  }

  bool contains(const VPoly& v) const { return solver_->contains(v); }

  // Coefficients on the real columns only; the ideal part of the
  // combination is dropped (it vanishes in R).
  std::optional<std::vector<VPoly>> witness(const VPoly& v) const {
    auto w = solver_->witness(v);
    if (!w) return std::nullopt;
    w->resize(ncols_);
    return w;
  }

  // Syzygies among the real columns over R: coordinates of the ideal-aug
  // columns are dropped.
  std::vector<VPoly> syzygies() const {
    std::vector<VPoly> out;
    for (const auto& s : solver_->syzygies()) {
      VPoly t = vp_slice(s, 0, static_cast<int>(ncols_));
      if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
  }

  const ColumnSolver& raw() const { return *solver_; }

 private:
  Ring R_;
  size_t ncols_;
  std::unique_ptr<ColumnSolver> solver_;
};

// Ideal of a ring presentation; generators kept reduced modulo J.
struct Ideal {
  Ring ambient;
  std::vector<VPoly> generators;

  Ideal(Ring R, std::vector<VPoly> gens) : ambient(std::move(R)) {
    for (auto& g : gens) {
      VPoly r = ambient->nf(g);
      if (!r.empty()) generators.push_back(std::move(r));
    }
  }
};

// n-fold products of the generators, reduced.
inline Ideal ideal_power(const Ideal& I, int n) {
  if (n < 1)
    throw EngineError(ErrorCode::INVALID_INPUT, "ideal_power needs n >= 1");
  const PolyRingSpec& S = I.ambient->spec();
  std::vector<VPoly> cur = {vp_const(S, 1)};
  for (int step = 0; step < n; ++step) {
    std::vector<VPoly> next;
    for (const auto& a : cur)
      for (const auto& g : I.generators) next.push_back(vp_mul(S, a, g));
    cur = std::move(next);
  }
  return Ideal(I.ambient, std::move(cur));
}

// true iff 1 lies in (f_1, ..., f_r)R; an empty list covers only the zero
// ring.
inline bool is_covering_sequence(const std::vector<VPoly>& f, const Ring& R) {
  if (f.empty()) return R->is_zero_ring();
  std::vector<VPoly> gens = f;
  for (const auto& b : R->cached_basis()) gens.push_back(b);
  auto G = groebner_basis(R->spec(), gens);
  return normal_form(R->spec(), vp_const(R->spec(), 1), G).empty();
}

// Extend a polynomial to a ring spec with extra trailing variables.
inline VPoly extend_poly(const PolyRingSpec& to, const VPoly& v) {
  VPoly r = v;
  for (auto& t : r) t.mono.resize(to.nvars(), 0);
  return vp_normalize(to, std::move(r));
}

struct Localization {
  Ring ring;          // R[t] / (J, t*f - 1)
  int inverse_var;    // index of the Rabinowitsch variable
};

// R_f presented with a Rabinowitsch variable. The canonical map is the
// inclusion of presentations (extend_poly).
inline Localization localize(const Ring& R, const VPoly& f) {
  if (R->is_zero(f))
    throw EngineError(ErrorCode::ZERO_LOCALIZATION,
                      "localization at zero element");
  const PolyRingSpec& S = R->spec();
  std::string tname = "t_inv";
  int counter = 0;
  while (S.var_index(tname) >= 0) tname = "t_inv" + std::to_string(++counter);
  std::vector<std::string> vars = S.variables;
  vars.push_back(tname);
  PolyRingSpec S2(S.coefficients, vars, S.monomial_order, S.degree_cap);
  std::vector<VPoly> gens;
  for (const auto& g : R->ideal_generators()) gens.push_back(extend_poly(S2, g));
  int tidx = static_cast<int>(S2.nvars()) - 1;
  VPoly rel = vp_sub(S2, vp_mul(S2, vp_var(S2, tidx), extend_poly(S2, f)),
                     vp_const(S2, 1));
  gens.push_back(std::move(rel));
  return {make_ring(S2, std::move(gens)), tidx};
}

}  // namespace prozero
