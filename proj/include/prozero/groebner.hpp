#pragma once

#include <optional>
#include <tuple>

#include "prozero/poly.hpp"

namespace prozero {

// Buchberger engine at module level: elements are vector polynomials in a
// finite free module R^k, the scalar ideal case being k = 1. Over Z and Z/m
// the bases computed are strong: every leading term of a module element is
// divisible, coefficient included, by the leading term of a basis element.

namespace gb_detail {

// Attempt to reduce the term t by g (leading term division including
// coefficient handling per domain). Returns the scalar multiplier q*mono to
// subtract, or nullopt when t is irreducible by g.
inline std::optional<std::pair<mpq_class, Mono>> reducer_multiplier(
    const PolyRingSpec& S, const Term& t, const VPoly& g) {
  const Term& lg = vp_lead(g);
  if (t.comp != lg.comp || !mono_divides(lg.mono, t.mono)) return std::nullopt;
  Mono u = mono_div(t.mono, lg.mono);
  const CoefficientDomain& D = S.coefficients;
  switch (D.kind) {
    case DomainKind::Rationals:
    case DomainKind::PrimeField:
      return std::make_pair(dom_reduce(D, t.coeff * dom_invert(D, lg.coeff)),
                            u);
    case DomainKind::Integers: {
      // basis leads are normalized positive; quotient with remainder in
      // [0, lc)
      mpz_class a = lg.coeff.get_num();
      if (a < 0) a = -a;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), t.coeff.get_num().get_mpz_t(), a.get_mpz_t());
      if (lg.coeff < 0) q = -q;
      if (q == 0) return std::nullopt;
      return std::make_pair(mpq_class(q), u);
    }
    case DomainKind::IntegersMod: {
      mpz_class m = D.modulus;
      mpz_class a = mod_lift(lg.coeff.get_num(), m);
      mpz_class c = mod_lift(t.coeff.get_num(), m);
      mpz_class d;
      mpz_gcd(d.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
      mpz_class r = c % d;
      if (r == c) return std::nullopt;  // c < d: already canonical
      mpz_class md = m / d, ad = a / d, inv;
      mpz_invert(inv.get_mpz_t(), ad.get_mpz_t(), md.get_mpz_t());
      mpz_class q = mod_lift(((c - r) / d) * inv, md);
      if (q == 0) return std::nullopt;
      return std::make_pair(mpq_class(q), u);
    }
  }
  return std::nullopt;
}

}  // namespace gb_detail

// Full normal form of v against the (Groebner) set G.
inline VPoly normal_form(const PolyRingSpec& S, VPoly v,
                         const std::vector<VPoly>& G) {
  VPoly out;
  while (!v.empty()) {
    bool reduced = false;
    const Term t = vp_lead(v);
    for (const auto& g : G) {
      if (g.empty()) continue;
      auto mult = gb_detail::reducer_multiplier(S, t, g);
      if (mult) {
        v = vp_sub(S, v, vp_scale(S, mult->first, mult->second, g));
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      out.push_back(t);
      v.erase(v.begin());
    }
  }
  return vp_normalize(S, std::move(out));
}

namespace gb_detail {

inline void lead_normalize(const PolyRingSpec& S, VPoly& g) {
  if (g.empty()) return;
  const CoefficientDomain& D = S.coefficients;
  const mpq_class& a = vp_lead(g).coeff;
  switch (D.kind) {
    case DomainKind::Rationals:
    case DomainKind::PrimeField: {
      mpq_class inv = dom_invert(D, a);
      for (auto& t : g) t.coeff = dom_reduce(D, t.coeff * inv);
      break;
    }
    case DomainKind::Integers:
      if (a < 0)
        for (auto& t : g) t.coeff = -t.coeff;
      break;
    case DomainKind::IntegersMod: {
      // normalize the lead to gcd(lc, m) by a unit multiplier
      mpz_class m = D.modulus;
      mpz_class av = mod_lift(a.get_num(), m);
      mpz_class d;
      mpz_gcd(d.get_mpz_t(), av.get_mpz_t(), m.get_mpz_t());
      if (av == d) break;
      mpz_class md = m / d, w = av / d, inv;
      mpz_invert(inv.get_mpz_t(), w.get_mpz_t(), md.get_mpz_t());
      mpz_class u = mod_lift(inv, md), gtest;
      while (true) {
        mpz_gcd(gtest.get_mpz_t(), u.get_mpz_t(), m.get_mpz_t());
        if (gtest == 1) break;
        u += md;
      }
      for (auto& t : g) t.coeff = dom_reduce(D, t.coeff * mpq_class(u));
      break;
    }
  }
}

struct Pair {
  size_t i, j;
  bool gpoly;  // gcd pair (Z and Z/m only)
  Mono lcm;
};

inline bool pair_less(const PolyRingSpec& S, const Pair& a, const Pair& b) {
  int da = mono_total_degree(a.lcm), db = mono_total_degree(b.lcm);
  if (da != db) return da < db;
  if (int c = mono_cmp(S.monomial_order, a.lcm, b.lcm)) return c < 0;
  return std::tie(a.i, a.j, a.gpoly) < std::tie(b.i, b.j, b.gpoly);
}

}  // namespace gb_detail

// Buchberger's algorithm with strong S/G-pairs over Z and Z/m and
// annihilator elements over Z/m. Sugar-free degree selection; the fixture
// scale of this engine keeps bases tiny.
inline std::vector<VPoly> buchberger(const PolyRingSpec& S,
                                     const std::vector<VPoly>& input) {
  using gb_detail::Pair;
  const CoefficientDomain& D = S.coefficients;
  std::vector<VPoly> G;
  std::vector<Pair> queue;

  auto push_pairs = [&](size_t idx) {
    for (size_t i = 0; i < idx; ++i) {
      if (G[i].empty() || G[idx].empty()) continue;
      const Term& a = vp_lead(G[i]);
      const Term& b = vp_lead(G[idx]);
      if (a.comp != b.comp) continue;
      Mono L = mono_lcm(a.mono, b.mono);
      queue.push_back({i, idx, false, L});
      if (!D.is_field()) queue.push_back({i, idx, true, L});
    }
  };

  auto add_element = [&](VPoly g) {
    g = normal_form(S, std::move(g), G);
    if (g.empty()) return;
    gb_detail::lead_normalize(S, g);
    G.push_back(std::move(g));
    push_pairs(G.size() - 1);
    if (D.kind == DomainKind::IntegersMod) {
      // annihilator element: (m / gcd(lc, m)) * g kills the lead
      const VPoly& f = G.back();
      mpz_class a = mod_lift(vp_lead(f).coeff.get_num(), D.modulus);
      mpz_class d;
      mpz_gcd(d.get_mpz_t(), a.get_mpz_t(), D.modulus.get_mpz_t());
      if (d != 1 && a != 0)
        queue.push_back({G.size() - 1, G.size() - 1, true,
                         vp_lead(f).mono});  // marker pair, handled below
    }
  };

  for (const auto& f : input) {
    VPoly g = vp_normalize(S, f);
    if (!g.empty()) add_element(std::move(g));
  }

  while (!queue.empty()) {
    auto it = std::min_element(queue.begin(), queue.end(),
                               [&](const Pair& a, const Pair& b) {
                                 return gb_detail::pair_less(S, a, b);
                               });
    Pair p = *it;
    queue.erase(it);
    const VPoly& f = G[p.i];
    const VPoly& g = G[p.j];
    if (f.empty() || g.empty()) continue;
    VPoly h;
    if (p.i == p.j) {
      // annihilator marker (Z/m)
      mpz_class a = mod_lift(vp_lead(f).coeff.get_num(), D.modulus);
      mpz_class d;
      mpz_gcd(d.get_mpz_t(), a.get_mpz_t(), D.modulus.get_mpz_t());
      if (d == 1) continue;
      h = vp_mul(S, vp_const(S, mpq_class(D.modulus / d)), f);
    } else {
      const Term& lf = vp_lead(f);
      const Term& lg = vp_lead(g);
      Mono uf = mono_div(p.lcm, lf.mono);
      Mono ug = mono_div(p.lcm, lg.mono);
      if (D.is_field()) {
        h = vp_sub(S, vp_scale(S, dom_invert(D, lf.coeff), uf, f),
                   vp_scale(S, dom_invert(D, lg.coeff), ug, g));
      } else {
        mpz_class a = lf.coeff.get_num(), b = lg.coeff.get_num();
        if (D.kind == DomainKind::IntegersMod) {
          a = mod_lift(a, D.modulus);
          b = mod_lift(b, D.modulus);
        }
        if (!p.gpoly) {
          mpz_class l;
          mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
          h = vp_sub(S, vp_scale(S, mpq_class(l / a), uf, f),
                     vp_scale(S, mpq_class(l / b), ug, g));
        } else {
          mpz_class d, s, t;
          mpz_gcdext(d.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(),
                     a.get_mpz_t(), b.get_mpz_t());
          h = vp_add(S, vp_scale(S, mpq_class(s), uf, f),
                     vp_scale(S, mpq_class(t), ug, g));
        }
      }
    }
    add_element(std::move(h));
  }

  std::vector<VPoly> out;
  for (auto& g : G)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

// Canonical reduced basis: pairwise irreducible leads, fully reduced tails,
// normalized lead coefficients, deterministic order.
inline std::vector<VPoly> reduce_basis(const PolyRingSpec& S,
                                       std::vector<VPoly> G) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < G.size(); ++i) {
      VPoly g = G[i];
      std::vector<VPoly> others;
      for (size_t j = 0; j < G.size(); ++j)
        if (j != i && !G[j].empty()) others.push_back(G[j]);
      VPoly r = normal_form(S, g, others);
      gb_detail::lead_normalize(S, r);
      if (r != g) {
        G[i] = std::move(r);
        changed = true;
      }
    }
    G.erase(std::remove_if(G.begin(), G.end(),
                           [](const VPoly& g) { return g.empty(); }),
            G.end());
  }
  std::sort(G.begin(), G.end(), [&](const VPoly& a, const VPoly& b) {
    if (int c = term_cmp(S, vp_lead(a), vp_lead(b))) return c > 0;
    return a.size() < b.size();
  });
  G.erase(std::unique(G.begin(), G.end()), G.end());
  return G;
}

inline std::vector<VPoly> groebner_basis(const PolyRingSpec& S,
                                         const std::vector<VPoly>& gens) {
  return reduce_basis(S, buchberger(S, gens));
}

// ---------------------------------------------------------------------------
// Elimination-module engine: syzygies and membership witnesses for a list of
// columns in R^k, by a Groebner basis of {(col_i, e_i)} in R^{k+n} under the
// position-over-term order (the first block dominates).

class ColumnSolver {
 public:
  ColumnSolver(const PolyRingSpec& S, std::vector<VPoly> cols, int k)
      : S_(S), cols_(std::move(cols)), k_(k), n_(static_cast<int>(cols_.size())) {
    std::vector<VPoly> ext;
    ext.reserve(cols_.size());
    for (int i = 0; i < n_; ++i) {
      VPoly e = cols_[static_cast<size_t>(i)];
      VPoly tag = vp_const(S_, 1, k_ + i);
      e.insert(e.end(), tag.begin(), tag.end());
      ext.push_back(vp_normalize(S_, std::move(e)));
    }
    gb_ = reduce_basis(S_, buchberger(S_, ext));
  }

  // Generators of {w in R^n : sum w_i col_i = 0}.
  std::vector<VPoly> syzygies() const {
    std::vector<VPoly> out;
    for (const auto& g : gb_) {
      if (!g.empty() && vp_lead(g).comp >= k_) out.push_back(vp_slice(g, k_, k_ + n_));
    }
    return out;
  }

  // If v lies in the column span, returns w with cols * w = v.
  std::optional<std::vector<VPoly>> witness(const VPoly& v) const {
    VPoly r = normal_form(S_, v, gb_);
    for (const auto& t : r)
      if (t.comp < k_) return std::nullopt;
    VPoly tail = vp_slice(r, k_, k_ + n_);
    std::vector<VPoly> w(static_cast<size_t>(n_));
    for (const auto& t : vp_neg(S_, tail))
      w[static_cast<size_t>(t.comp)].push_back({0, t.mono, t.coeff});
    for (auto& p : w) p = vp_normalize(S_, std::move(p));
    return w;
  }

  bool contains(const VPoly& v) const {
    VPoly r = normal_form(S_, v, gb_);
    for (const auto& t : r)
      if (t.comp < k_) return false;
    return true;
  }

  const std::vector<VPoly>& basis() const { return gb_; }

 private:
  PolyRingSpec S_;
  std::vector<VPoly> cols_;
  int k_, n_;
  std::vector<VPoly> gb_;
};

}  // namespace prozero
