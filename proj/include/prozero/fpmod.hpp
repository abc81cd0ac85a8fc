#pragma once

#include <functional>

#include "prozero/ring.hpp"

namespace prozero {

// Finitely presented module M = R^g / (column span of relations).
class FpModule {
 public:
  FpModule() = default;
  FpModule(Ring ring, int gens, std::vector<VPoly> relations)
      : ring_(std::move(ring)), gens_(gens) {
    for (auto& c : relations) {
      VPoly r = ring_->nf(c);
      if (!r.empty()) relations_.push_back(std::move(r));
    }
  }

  const Ring& ring() const { return ring_; }
  int gens() const { return gens_; }
  const std::vector<VPoly>& relations() const { return relations_; }

  const SpanSolver& rel_solver() const {
    if (!rel_solver_)
      rel_solver_ = std::make_shared<SpanSolver>(ring_, relations_, gens_);
    return *rel_solver_;
  }

  bool in_relations(const VPoly& v) const { return rel_solver().contains(v); }

  // canonical representative modulo relations (and the ring ideal)
  VPoly nf(const VPoly& v) const {
    VPoly r = normal_form(ring_->spec(), v, rel_solver().raw().basis());
    return vp_slice(r, 0, gens_);
  }

  bool is_zero() const {
    for (int j = 0; j < gens_; ++j)
      if (!in_relations(vp_const(ring_->spec(), 1, j))) return false;
    return true;
  }

  bool operator==(const FpModule& o) const {
    return ring_ == o.ring_ && gens_ == o.gens_ && relations_ == o.relations_;
  }

 private:
  Ring ring_;
  int gens_ = 0;
  std::vector<VPoly> relations_;
  mutable std::shared_ptr<SpanSolver> rel_solver_;
};

inline FpModule free_module(const Ring& R, int rank) {
  return FpModule(R, rank, {});
}

inline FpModule zero_module(const Ring& R) { return FpModule(R, 0, {}); }

// R/I as a cyclic module.
inline FpModule cyclic_module(const Ring& R,
                              const std::vector<VPoly>& ideal_gens) {
  return FpModule(R, 1, ideal_gens);
}

// Apply a column matrix (columns[j] = image of e_j) to a vector v in the
// source free module.
inline VPoly apply_columns(const PolyRingSpec& S,
                           const std::vector<VPoly>& columns, const VPoly& v) {
  VPoly acc;
  for (const auto& t : v) {
    VPoly part = vp_scale(S, t.coeff, t.mono,
                          columns[static_cast<size_t>(t.comp)]);
    acc.insert(acc.end(), part.begin(), part.end());
  }
  return vp_normalize(S, std::move(acc));
}

// A map of finitely presented modules, stored by generator images.
// Well-definedness (relations map into relations) is verified at
// construction.
class ModuleMap {
 public:
  ModuleMap() = default;
  ModuleMap(FpModule source, FpModule target, std::vector<VPoly> columns)
      : source_(std::move(source)),
        target_(std::move(target)),
        columns_(std::move(columns)) {
    if (static_cast<int>(columns_.size()) != source_.gens())
      throw EngineError(ErrorCode::INVALID_INPUT,
                        "module map column count mismatch");
    const PolyRingSpec& S = ring()->spec();
    for (auto& c : columns_) c = ring()->nf(c);
    for (const auto& r : source_.relations()) {
      VPoly img = apply_columns(S, columns_, r);
      if (!target_.in_relations(img))
        throw EngineError(ErrorCode::INVALID_INPUT,
                          "module map not well defined on relations");
    }
  }

  const FpModule& source() const { return source_; }
  const FpModule& target() const { return target_; }
  const std::vector<VPoly>& columns() const { return columns_; }
  const Ring& ring() const { return source_.ring(); }

  VPoly apply(const VPoly& v) const {
    return apply_columns(ring()->spec(), columns_, v);
  }

  bool is_zero() const {
    for (const auto& c : columns_)
      if (!target_.in_relations(c)) return false;
    return true;
  }

  bool is_surjective() const {
    const PolyRingSpec& S = ring()->spec();
    std::vector<VPoly> span = columns_;
    for (const auto& r : target_.relations()) span.push_back(r);
    SpanSolver solver(ring(), span, target_.gens());
    for (int j = 0; j < target_.gens(); ++j)
      if (!solver.contains(vp_const(S, 1, j))) return false;
    return true;
  }

  // equal as maps of presentations (columns agree modulo target relations)
  bool equals(const ModuleMap& o) const {
    if (source_.gens() != o.source_.gens()) return false;
    const PolyRingSpec& S = ring()->spec();
    for (size_t j = 0; j < columns_.size(); ++j)
      if (!target_.in_relations(vp_sub(S, columns_[j], o.columns_[j])))
        return false;
    return true;
  }

 private:
  FpModule source_, target_;
  std::vector<VPoly> columns_;
};

inline ModuleMap identity_map(const FpModule& M) {
  std::vector<VPoly> cols;
  for (int j = 0; j < M.gens(); ++j)
    cols.push_back(vp_const(M.ring()->spec(), 1, j));
  return ModuleMap(M, M, std::move(cols));
}

inline ModuleMap zero_map(const FpModule& A, const FpModule& B) {
  return ModuleMap(A, B, std::vector<VPoly>(static_cast<size_t>(A.gens())));
}

inline ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  // g after f
  std::vector<VPoly> cols;
  for (const auto& c : f.columns()) cols.push_back(g.apply(c));
  return ModuleMap(f.source(), g.target(), std::move(cols));
}

inline ModuleMap scalar_map(const FpModule& M, const VPoly& scalar) {
  std::vector<VPoly> cols;
  for (int j = 0; j < M.gens(); ++j)
    cols.push_back(vp_shift(scalar, j));
  return ModuleMap(M, M, std::move(cols));
}

// Generators (in the source free module) of ker(phi) as a submodule of the
// source; includes the source relations.
inline std::vector<VPoly> kernel_gens(const ModuleMap& phi) {
  const FpModule& A = phi.source();
  const FpModule& B = phi.target();
  std::vector<VPoly> cols = phi.columns();
  size_t nc = cols.size();
  for (const auto& r : B.relations()) cols.push_back(r);
  SpanSolver solver(phi.ring(), std::move(cols), B.gens());
  std::vector<VPoly> out;
  for (const auto& s : solver.syzygies()) {
    VPoly v = vp_slice(s, 0, static_cast<int>(nc));
    v = A.ring()->nf(v);
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

inline bool is_injective(const ModuleMap& phi) {
  for (const auto& k : kernel_gens(phi))
    if (!phi.source().in_relations(k)) return false;
  return true;
}

inline bool is_isomorphism(const ModuleMap& phi) {
  return phi.is_surjective() && is_injective(phi);
}

// Explicit inverse of an isomorphism, found by lifting target generators
// through the column span. Returns nullopt when phi is not onto.
inline std::optional<ModuleMap> inverse_of(const ModuleMap& phi) {
  const FpModule& A = phi.source();
  const FpModule& B = phi.target();
  const PolyRingSpec& S = phi.ring()->spec();
  std::vector<VPoly> span = phi.columns();
  size_t nc = span.size();
  for (const auto& r : B.relations()) span.push_back(r);
  SpanSolver solver(phi.ring(), std::move(span), B.gens());
  std::vector<VPoly> inv_cols;
  for (int j = 0; j < B.gens(); ++j) {
    auto w = solver.witness(vp_const(S, 1, j));
    if (!w) return std::nullopt;
    VPoly col;
    for (size_t i = 0; i < nc; ++i) {
      VPoly part = vp_shift((*w)[i], static_cast<int>(i));
      col.insert(col.end(), part.begin(), part.end());
    }
    inv_cols.push_back(vp_normalize(S, std::move(col)));
  }
  try {
    return ModuleMap(B, A, std::move(inv_cols));
  } catch (const EngineError&) {
    return std::nullopt;
  }
}

// Mutual lifts certifying an isomorphism of presentations: the stored pair
// composes to the identity modulo relations in both directions.
struct IsoCertificate {
  ModuleMap forward, backward;
};

inline std::optional<IsoCertificate> certify_iso(const ModuleMap& phi) {
  auto inv = inverse_of(phi);
  if (!inv) return std::nullopt;
  if (!compose(*inv, phi).equals(identity_map(phi.source()))) return std::nullopt;
  if (!compose(phi, *inv).equals(identity_map(phi.target()))) return std::nullopt;
  return IsoCertificate{phi, *inv};
}

// ---------------------------------------------------------------------------
// Subquotients: span(num) / (span(den) + relations), re-presented
// immediately as a plain FpModule whose generators are the numerator
// columns.

struct Subquotient {
  FpModule ambient;
  std::vector<VPoly> num_gens;  // columns in the ambient free module
  std::vector<VPoly> den_gens;
  FpModule presented;
};

inline Subquotient subquotient(const FpModule& M, std::vector<VPoly> num,
                               std::vector<VPoly> den) {
  size_t nn = num.size();
  std::vector<VPoly> all = num;
  for (const auto& d : den) all.push_back(d);
  for (const auto& r : M.relations()) all.push_back(r);
  SpanSolver solver(M.ring(), std::move(all), M.gens());
  std::vector<VPoly> rels;
  for (const auto& s : solver.syzygies()) {
    VPoly w = vp_slice(s, 0, static_cast<int>(nn));
    if (!w.empty()) rels.push_back(std::move(w));
  }
  FpModule pres(M.ring(), static_cast<int>(nn), std::move(rels));
  return {M, std::move(num), std::move(den), std::move(pres)};
}

// Map on subquotient presentations induced by an ambient map taking
// span(num1) into span(num2) + den2 + relations. Fails (nullopt) when the
// image does not land in the target.
inline std::optional<ModuleMap> induced_map(
    const Subquotient& src, const Subquotient& tgt,
    const std::function<VPoly(const VPoly&)>& ambient_map) {
  const PolyRingSpec& S = tgt.ambient.ring()->spec();
  std::vector<VPoly> span = tgt.num_gens;
  size_t nn = span.size();
  for (const auto& d : tgt.den_gens) span.push_back(d);
  for (const auto& r : tgt.ambient.relations()) span.push_back(r);
  SpanSolver solver(tgt.ambient.ring(), std::move(span), tgt.ambient.gens());
  std::vector<VPoly> cols;
  for (const auto& g : src.num_gens) {
    auto w = solver.witness(ambient_map(g));
    if (!w) return std::nullopt;
    VPoly col;
    for (size_t i = 0; i < nn; ++i) {
      VPoly part = vp_shift((*w)[i], static_cast<int>(i));
      col.insert(col.end(), part.begin(), part.end());
    }
    cols.push_back(vp_normalize(S, std::move(col)));
  }
  try {
    return ModuleMap(src.presented, tgt.presented, std::move(cols));
  } catch (const EngineError&) {
    return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// The operations of the module calculus.

// ker(g)/im(f) for a composable pair with g∘f = 0.
inline Subquotient homology_at(const ModuleMap& f, const ModuleMap& g) {
  if (!compose(g, f).is_zero())
    throw EngineError(ErrorCode::NOT_A_COMPLEX,
                      "composite map is not zero");
  std::vector<VPoly> num = kernel_gens(g);
  std::vector<VPoly> den = f.columns();
  return subquotient(g.source(), std::move(num), std::move(den));
}

// M/IM: append a*e_j for every ideal generator a and module generator j.
inline FpModule tensor_quotient(const FpModule& M,
                                const std::vector<VPoly>& ideal_gens) {
  std::vector<VPoly> rels = M.relations();
  for (const auto& a : ideal_gens)
    for (int j = 0; j < M.gens(); ++j) rels.push_back(vp_shift(a, j));
  return FpModule(M.ring(), M.gens(), std::move(rels));
}

// quotient by a submodule given by generator columns
inline FpModule quotient_by(const FpModule& M,
                            const std::vector<VPoly>& sub_gens) {
  std::vector<VPoly> rels = M.relations();
  for (const auto& s : sub_gens) rels.push_back(s);
  return FpModule(M.ring(), M.gens(), std::move(rels));
}

// (N :_M f)/N, presented as the f-annihilator of M/N.
inline Subquotient colon(const FpModule& M, const std::vector<VPoly>& N,
                         const VPoly& f) {
  FpModule Q = quotient_by(M, N);
  ModuleMap mul = scalar_map(Q, f);
  return subquotient(Q, kernel_gens(mul), {});
}

struct DirectSum {
  FpModule sum;
  ModuleMap inj_left, inj_right, proj_left, proj_right;
};

inline DirectSum direct_sum(const FpModule& A, const FpModule& B) {
  const PolyRingSpec& S = A.ring()->spec();
  std::vector<VPoly> rels;
  for (const auto& r : A.relations()) rels.push_back(r);
  for (const auto& r : B.relations()) rels.push_back(vp_shift(r, A.gens()));
  FpModule sum(A.ring(), A.gens() + B.gens(), std::move(rels));
  std::vector<VPoly> il, ir, pl, pr;
  for (int j = 0; j < A.gens(); ++j) il.push_back(vp_const(S, 1, j));
  for (int j = 0; j < B.gens(); ++j)
    ir.push_back(vp_const(S, 1, A.gens() + j));
  for (int j = 0; j < sum.gens(); ++j) {
    pl.push_back(j < A.gens() ? vp_const(S, 1, j) : VPoly{});
    pr.push_back(j >= A.gens() ? vp_const(S, 1, j - A.gens()) : VPoly{});
  }
  return {sum, ModuleMap(A, sum, il), ModuleMap(B, sum, ir),
          ModuleMap(sum, A, pl), ModuleMap(sum, B, pr)};
}

// ---------------------------------------------------------------------------
// Submodule span utilities (spans always taken together with the ambient
// relations).

inline bool span_contains(const FpModule& M, const std::vector<VPoly>& span,
                          const VPoly& v) {
  std::vector<VPoly> cols = span;
  for (const auto& r : M.relations()) cols.push_back(r);
  SpanSolver solver(M.ring(), std::move(cols), M.gens());
  return solver.contains(v);
}

inline bool span_subset(const FpModule& M, const std::vector<VPoly>& a,
                        const std::vector<VPoly>& b) {
  std::vector<VPoly> cols = b;
  for (const auto& r : M.relations()) cols.push_back(r);
  SpanSolver solver(M.ring(), std::move(cols), M.gens());
  for (const auto& g : a)
    if (!solver.contains(g)) return false;
  return true;
}

inline bool span_equal(const FpModule& M, const std::vector<VPoly>& a,
                       const std::vector<VPoly>& b) {
  return span_subset(M, a, b) && span_subset(M, b, a);
}

// Generators of span(a) ∩ span(b) inside M (modulo relations).
inline std::vector<VPoly> span_intersection(const FpModule& M,
                                            const std::vector<VPoly>& a,
                                            const std::vector<VPoly>& b) {
  const PolyRingSpec& S = M.ring()->spec();
  std::vector<VPoly> cols = a;
  for (const auto& x : b) cols.push_back(x);
  for (const auto& r : M.relations()) cols.push_back(r);
  SpanSolver solver(M.ring(), cols, M.gens());
  std::vector<VPoly> out;
  for (const auto& s : solver.syzygies()) {
    // first-block coordinates give an element of span(a) that also lies in
    // span(b) + relations
    VPoly acc;
    for (const auto& t : s) {
      if (t.comp >= static_cast<int>(a.size())) continue;
      VPoly part = vp_scale(S, t.coeff, t.mono, a[static_cast<size_t>(t.comp)]);
      acc.insert(acc.end(), part.begin(), part.end());
    }
    VPoly v = M.nf(vp_normalize(S, std::move(acc)));
    if (!v.empty()) out.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite length over the coefficient domain: number of standard monomials
// of the relation staircase when it is finite. Supported over fields and
// Z/m (Artinian coefficients); over Z a nonzero module is never certified
// finite.

inline std::optional<long> finite_length(const FpModule& M) {
  if (M.gens() == 0) return 0;
  const PolyRingSpec& S = M.ring()->spec();
  if (S.coefficients.kind == DomainKind::Integers) {
    if (M.is_zero()) return 0;
    return std::nullopt;
  }
  // leading monomials of the relation-module basis, per component
  std::vector<std::vector<Mono>> leads(static_cast<size_t>(M.gens()));
  for (const auto& g : M.rel_solver().raw().basis()) {
    if (g.empty()) continue;
    const Term& lt = vp_lead(g);
    // only unit-coefficient leads bound the staircase (over Z/m a non-unit
    // lead does not make the variable nilpotent)
    if (lt.comp < M.gens() && dom_is_unit(S.coefficients, lt.coeff))
      leads[static_cast<size_t>(lt.comp)].push_back(lt.mono);
  }
  long total = 0;
  for (int c = 0; c < M.gens(); ++c) {
    // the staircase for component c must be cofinite: every variable needs
    // a pure power among the leads
    const auto& L = leads[static_cast<size_t>(c)];
    std::vector<int> bound(S.nvars(), -1);
    for (const auto& m : L) {
      int nz = 0, var = -1;
      for (size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0) {
          ++nz;
          var = static_cast<int>(i);
        }
      if (nz == 0) {
        bound.assign(S.nvars(), 0);
        break;
      }
      if (nz == 1 && (bound[var] < 0 || m[static_cast<size_t>(var)] < bound[var]))
        bound[static_cast<size_t>(var)] = m[static_cast<size_t>(var)];
    }
    for (size_t i = 0; i < S.nvars(); ++i)
      if (bound[i] < 0) return std::nullopt;
    // count standard monomials below the staircase
    long count = 0;
    Mono cur(S.nvars(), 0);
    std::function<void(size_t)> rec = [&](size_t var) {
      if (var == S.nvars()) {
        for (const auto& m : L)
          if (mono_divides(m, cur)) return;
        ++count;
        return;
      }
      for (int e = 0; e < std::max(bound[var], 0) || e == 0; ++e) {
        cur[var] = e;
        rec(var + 1);
        if (bound[var] <= 0) break;
      }
      cur[var] = 0;
    };
    rec(0);
    total += count;
  }
  return total;
}

}  // namespace prozero
