#pragma once

#include "prozero/towers.hpp"

namespace prozero {

// A finite sequence of ring elements x_1, ..., x_r in R.
struct SequenceSpec {
  Ring ring;
  std::vector<VPoly> elements;

  int length() const { return static_cast<int>(elements.size()); }
};

inline SequenceSpec make_sequence(const Ring& R,
                                  const std::vector<std::string>& elems) {
  SequenceSpec s{R, {}};
  for (const auto& e : elems) s.elements.push_back(parse_poly(R->spec(), e));
  return s;
}

// ---------------------------------------------------------------------------
// subset bookkeeping: the k-subsets of {0..r-1} in lexicographic order index
// the blocks of the Koszul chain modules.

namespace koszul_detail {

inline std::vector<std::vector<int>> subsets_of_size(int r, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < r; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline int subset_index(const std::vector<std::vector<int>>& list,
                        const std::vector<int>& s) {
  for (size_t i = 0; i < list.size(); ++i)
    if (list[i] == s) return static_cast<int>(i);
  throw EngineError(ErrorCode::INVALID_INPUT, "subset not found");
}

inline VPoly power_of(const PolyRingSpec& S, const VPoly& x, int n) {
  VPoly acc = vp_const(S, 1);
  for (int i = 0; i < n; ++i) acc = vp_mul(S, acc, x);
  return acc;
}

// block sum M^blocks with the relations of M copied into every block
inline FpModule block_sum(const FpModule& M, int blocks) {
  std::vector<VPoly> rels;
  for (int b = 0; b < blocks; ++b)
    for (const auto& r : M.relations()) rels.push_back(vp_shift(r, b * M.gens()));
  return FpModule(M.ring(), blocks * M.gens(), std::move(rels));
}

}  // namespace koszul_detail

// The Koszul chain complex K(x_1^n, ..., x_r^n; M):
//   chain[k] = M^C(r,k),  diff[k] : chain[k] -> chain[k-1]  (k = 1..r)
// with d(e_S ⊗ m) = sum_{i in S} (-1)^{pos(i,S)} x_i^n (e_{S-i} ⊗ m).
// d∘d = 0 is verified at construction.
struct KoszulLevel {
  SequenceSpec seq;
  FpModule base;
  int power = 1;
  std::vector<std::vector<std::vector<int>>> subsets;  // subsets[k]
  std::vector<FpModule> chain;                         // chain[k], k=0..r
  std::vector<ModuleMap> diff;                         // diff[k], k=1..r
};

inline KoszulLevel koszul_level(const SequenceSpec& seq, const FpModule& M,
                                int n) {
  if (n < 1)
    throw EngineError(ErrorCode::INVALID_INPUT, "koszul level needs n >= 1");
  const PolyRingSpec& S = seq.ring->spec();
  int r = seq.length();
  int g = M.gens();
  KoszulLevel L{seq, M, n, {}, {}, {}};
  std::vector<VPoly> xn;
  for (const auto& x : seq.elements)
    xn.push_back(koszul_detail::power_of(S, x, n));
  for (int k = 0; k <= r; ++k) {
    L.subsets.push_back(koszul_detail::subsets_of_size(r, k));
    L.chain.push_back(koszul_detail::block_sum(
        M, static_cast<int>(L.subsets[static_cast<size_t>(k)].size())));
  }
  L.diff.resize(static_cast<size_t>(r) + 1);
  for (int k = 1; k <= r; ++k) {
    const auto& src_sets = L.subsets[static_cast<size_t>(k)];
    const auto& tgt_sets = L.subsets[static_cast<size_t>(k - 1)];
    std::vector<VPoly> cols;
    for (const auto& set : src_sets) {
      for (int j = 0; j < g; ++j) {
        VPoly col;
        for (size_t pos = 0; pos < set.size(); ++pos) {
          std::vector<int> sub = set;
          sub.erase(sub.begin() + static_cast<long>(pos));
          int blk = koszul_detail::subset_index(tgt_sets, sub);
          VPoly part = vp_mul(S, xn[static_cast<size_t>(set[pos])],
                              vp_const(S, 1, blk * g + j));
          if (pos % 2 == 1) part = vp_neg(S, part);
          col.insert(col.end(), part.begin(), part.end());
        }
        cols.push_back(vp_normalize(S, std::move(col)));
      }
    }
    L.diff[static_cast<size_t>(k)] =
        ModuleMap(L.chain[static_cast<size_t>(k)],
                  L.chain[static_cast<size_t>(k - 1)], std::move(cols));
  }
  for (int k = 2; k <= r; ++k)
    if (!compose(L.diff[static_cast<size_t>(k - 1)],
                 L.diff[static_cast<size_t>(k)])
             .is_zero())
      throw EngineError(ErrorCode::NOT_A_COMPLEX, "koszul d∘d != 0");
  return L;
}

// H_i of the level, as a subquotient of chain[i].
inline Subquotient koszul_homology(const KoszulLevel& L, int i) {
  int r = L.seq.length();
  if (i < 0 || i > r)
    throw EngineError(ErrorCode::DEGREE_OUT_OF_RANGE,
                      "koszul homology degree out of range");
  const FpModule& Ci = L.chain[static_cast<size_t>(i)];
  FpModule Z = zero_module(L.seq.ring);
  ModuleMap in = i < r ? L.diff[static_cast<size_t>(i + 1)] : zero_map(Z, Ci);
  ModuleMap out = i > 0 ? L.diff[static_cast<size_t>(i)] : zero_map(Ci, Z);
  return homology_at(in, out);
}

// The canonical chain map K(x^m; M) -> K(x^n; M) for m >= n:
// e_S ⊗ m  |->  (prod_{i in S} x_i^{m-n}) e_S ⊗ m, per degree.
// Commutation with the differentials is verified.
struct KoszulTransition {
  const KoszulLevel* from = nullptr;  // level m
  const KoszulLevel* to = nullptr;    // level n <= m
  std::vector<ModuleMap> maps;        // maps[k] : from.chain[k] -> to.chain[k]
};

inline KoszulTransition koszul_transition(const KoszulLevel& from,
                                          const KoszulLevel& to) {
  if (from.power < to.power)
    throw EngineError(ErrorCode::BAD_LEVELS,
                      "koszul transition needs source power >= target power");
  const PolyRingSpec& S = from.seq.ring->spec();
  int r = from.seq.length();
  int g = from.base.gens();
  int d = from.power - to.power;
  KoszulTransition T{&from, &to, {}};
  for (int k = 0; k <= r; ++k) {
    const auto& sets = from.subsets[static_cast<size_t>(k)];
    std::vector<VPoly> cols;
    for (const auto& set : sets) {
      VPoly factor = vp_const(S, 1);
      for (int i : set)
        factor = vp_mul(
            S, factor,
            koszul_detail::power_of(S, from.seq.elements[static_cast<size_t>(i)],
                                    d));
      int blk = koszul_detail::subset_index(to.subsets[static_cast<size_t>(k)],
                                            set);
      for (int j = 0; j < g; ++j)
        cols.push_back(vp_mul(S, factor, vp_const(S, 1, blk * g + j)));
    }
    T.maps.push_back(ModuleMap(from.chain[static_cast<size_t>(k)],
                               to.chain[static_cast<size_t>(k)],
                               std::move(cols)));
  }
  for (int k = 1; k <= r; ++k)
    if (!compose(to.diff[static_cast<size_t>(k)], T.maps[static_cast<size_t>(k)])
             .equals(compose(T.maps[static_cast<size_t>(k - 1)],
                             from.diff[static_cast<size_t>(k)])))
      throw EngineError(ErrorCode::NOT_A_COMPLEX,
                        "koszul transition does not commute");
  return T;
}

// Induced map on degree-i homology presentations. Always well defined for a
// commuting chain map; nullopt would indicate an internal inconsistency, so
// it is promoted to an error.
inline ModuleMap koszul_induced(const KoszulTransition& T, const Subquotient& Hm,
                                const Subquotient& Hn, int i) {
  const ModuleMap& amb = T.maps[static_cast<size_t>(i)];
  auto f = induced_map(Hm, Hn, [&](const VPoly& v) { return amb.apply(v); });
  if (!f)
    throw EngineError(ErrorCode::NOT_A_COMPLEX,
                      "chain map does not descend to homology");
  return *f;
}

// Comparison iso for a permuted sequence: e_S |-> sgn(sigma|_S) e_{sigma(S)}.
// perm[i] is the position of the i-th element of `from` inside `to`.
inline std::vector<ModuleMap> koszul_permutation(const KoszulLevel& from,
                                                 const KoszulLevel& to,
                                                 const std::vector<int>& perm) {
  const PolyRingSpec& S = from.seq.ring->spec();
  int r = from.seq.length();
  int g = from.base.gens();
  if (to.seq.length() != r || static_cast<int>(perm.size()) != r ||
      to.power != from.power)
    throw EngineError(ErrorCode::INVALID_INPUT, "bad permutation data");
  for (int i = 0; i < r; ++i)
    if (!from.seq.ring->is_zero(
            vp_sub(S, from.seq.elements[static_cast<size_t>(i)],
                   to.seq.elements[static_cast<size_t>(perm[i])])))
      throw EngineError(ErrorCode::INVALID_INPUT,
                        "permutation does not match the sequences");
  std::vector<ModuleMap> maps;
  for (int k = 0; k <= r; ++k) {
    const auto& sets = from.subsets[static_cast<size_t>(k)];
    std::vector<VPoly> cols;
    for (const auto& set : sets) {
      std::vector<int> image;
      for (int i : set) image.push_back(perm[static_cast<size_t>(i)]);
      // parity of the sort permutation
      int sign = 1;
      for (size_t a = 0; a < image.size(); ++a)
        for (size_t b = a + 1; b < image.size(); ++b)
          if (image[a] > image[b]) sign = -sign;
      std::vector<int> sorted = image;
      std::sort(sorted.begin(), sorted.end());
      int blk = koszul_detail::subset_index(to.subsets[static_cast<size_t>(k)],
                                            sorted);
      for (int j = 0; j < g; ++j)
        cols.push_back(vp_const(S, sign, blk * g + j));
    }
    maps.push_back(ModuleMap(from.chain[static_cast<size_t>(k)],
                             to.chain[static_cast<size_t>(k)],
                             std::move(cols)));
  }
  for (int k = 1; k <= r; ++k)
    if (!compose(to.diff[static_cast<size_t>(k)], maps[static_cast<size_t>(k)])
             .equals(compose(maps[static_cast<size_t>(k - 1)],
                             from.diff[static_cast<size_t>(k)])))
      throw EngineError(ErrorCode::NOT_A_COMPLEX,
                        "permutation comparison does not commute");
  return maps;
}

// ---------------------------------------------------------------------------
// The Koszul cochain complex K^•(x^n; M): cochain[k] = M^C(r,k), with
// d(e_S ⊗ m) = sum_{i not in S} (-1)^{#{j in S : j < i}} x_i^n e_{S+i} ⊗ m.
// The comparison for n <= m goes K^•(x^n) -> K^•(x^m) and multiplies e_S by
// prod_{i in S} x_i^{m-n}, the same factor as the chain transition.
struct KoszulCochainLevel {
  SequenceSpec seq;
  FpModule base;
  int power = 1;
  std::vector<std::vector<std::vector<int>>> subsets;
  std::vector<FpModule> cochain;      // cochain[k], k=0..r
  std::vector<ModuleMap> diff;        // diff[k] : cochain[k] -> cochain[k+1]
};

inline KoszulCochainLevel koszul_cochain_level(const SequenceSpec& seq,
                                               const FpModule& M, int n) {
  const PolyRingSpec& S = seq.ring->spec();
  int r = seq.length();
  int g = M.gens();
  KoszulCochainLevel L{seq, M, n, {}, {}, {}};
  std::vector<VPoly> xn;
  for (const auto& x : seq.elements)
    xn.push_back(koszul_detail::power_of(S, x, n));
  for (int k = 0; k <= r; ++k) {
    L.subsets.push_back(koszul_detail::subsets_of_size(r, k));
    L.cochain.push_back(koszul_detail::block_sum(
        M, static_cast<int>(L.subsets[static_cast<size_t>(k)].size())));
  }
  for (int k = 0; k < r; ++k) {
    const auto& src_sets = L.subsets[static_cast<size_t>(k)];
    const auto& tgt_sets = L.subsets[static_cast<size_t>(k + 1)];
    std::vector<VPoly> cols;
    for (const auto& set : src_sets) {
      for (int j = 0; j < g; ++j) {
        VPoly col;
        for (int i = 0; i < r; ++i) {
          if (std::find(set.begin(), set.end(), i) != set.end()) continue;
          std::vector<int> sup = set;
          sup.insert(std::upper_bound(sup.begin(), sup.end(), i), i);
          int below = 0;
          for (int j2 : set)
            if (j2 < i) ++below;
          int blk = koszul_detail::subset_index(tgt_sets, sup);
          VPoly part = vp_mul(S, xn[static_cast<size_t>(i)],
                              vp_const(S, 1, blk * g + j));
          if (below % 2 == 1) part = vp_neg(S, part);
          col.insert(col.end(), part.begin(), part.end());
        }
        cols.push_back(vp_normalize(S, std::move(col)));
      }
    }
    L.diff.push_back(ModuleMap(L.cochain[static_cast<size_t>(k)],
                               L.cochain[static_cast<size_t>(k + 1)],
                               std::move(cols)));
  }
  for (int k = 0; k + 1 < r; ++k)
    if (!compose(L.diff[static_cast<size_t>(k + 1)],
                 L.diff[static_cast<size_t>(k)])
             .is_zero())
      throw EngineError(ErrorCode::NOT_A_COMPLEX, "koszul cochain d∘d != 0");
  return L;
}

inline Subquotient koszul_cohomology(const KoszulCochainLevel& L, int i) {
  int r = L.seq.length();
  if (i < 0 || i > r)
    throw EngineError(ErrorCode::DEGREE_OUT_OF_RANGE,
                      "koszul cohomology degree out of range");
  const FpModule& Ci = L.cochain[static_cast<size_t>(i)];
  FpModule Z = zero_module(L.seq.ring);
  ModuleMap in = i > 0 ? L.diff[static_cast<size_t>(i - 1)] : zero_map(Z, Ci);
  ModuleMap out = i < r ? L.diff[static_cast<size_t>(i)] : zero_map(Ci, Z);
  return homology_at(in, out);
}

inline std::vector<ModuleMap> koszul_cochain_comparison(
    const KoszulCochainLevel& from, const KoszulCochainLevel& to) {
  if (from.power > to.power)
    throw EngineError(ErrorCode::BAD_LEVELS,
                      "cochain comparison needs source power <= target power");
  const PolyRingSpec& S = from.seq.ring->spec();
  int r = from.seq.length();
  int g = from.base.gens();
  int d = to.power - from.power;
  std::vector<ModuleMap> maps;
  for (int k = 0; k <= r; ++k) {
    const auto& sets = from.subsets[static_cast<size_t>(k)];
    std::vector<VPoly> cols;
    for (const auto& set : sets) {
      VPoly factor = vp_const(S, 1);
      for (int i : set)
        factor = vp_mul(
            S, factor,
            koszul_detail::power_of(S, from.seq.elements[static_cast<size_t>(i)],
                                    d));
      int blk = koszul_detail::subset_index(to.subsets[static_cast<size_t>(k)],
                                            set);
      for (int j = 0; j < g; ++j)
        cols.push_back(vp_mul(S, factor, vp_const(S, 1, blk * g + j)));
    }
    maps.push_back(ModuleMap(from.cochain[static_cast<size_t>(k)],
                             to.cochain[static_cast<size_t>(k)],
                             std::move(cols)));
  }
  for (int k = 0; k < r; ++k)
    if (!compose(to.diff[static_cast<size_t>(k)], maps[static_cast<size_t>(k)])
             .equals(compose(maps[static_cast<size_t>(k + 1)],
                             from.diff[static_cast<size_t>(k)])))
      throw EngineError(ErrorCode::NOT_A_COMPLEX,
                        "cochain comparison does not commute");
  return maps;
}

// ---------------------------------------------------------------------------
// Rule-generated towers: levels H_i(x^n; M) for n = 1..W with the induced
// transition maps. Finite-length levels get the structural tag when the
// length computation certifies it on every level.

inline InverseTower koszul_tower(int i, const SequenceSpec& seq,
                                 const FpModule& M, int W) {
  if (W < 1)
    throw EngineError(ErrorCode::BAD_LEVELS, "koszul tower needs W >= 1");
  std::vector<KoszulLevel> K;
  std::vector<Subquotient> H;
  for (int n = 1; n <= W; ++n) {
    K.push_back(koszul_level(seq, M, n));
    H.push_back(koszul_homology(K.back(), i));
  }
  std::vector<FpModule> levels;
  for (const auto& h : H) levels.push_back(h.presented);
  std::vector<ModuleMap> steps;
  for (int n = 1; n < W; ++n) {
    KoszulTransition T = koszul_transition(K[static_cast<size_t>(n)],
                                           K[static_cast<size_t>(n - 1)]);
    steps.push_back(koszul_induced(T, H[static_cast<size_t>(n)],
                                   H[static_cast<size_t>(n - 1)], i));
  }
  std::set<TowerTag> tags;
  bool fin = true;
  for (const auto& L : levels)
    if (!finite_length(L).has_value()) fin = false;
  if (fin) tags.insert(TowerTag::FINITE_LENGTH_LEVELS);
  return make_tower(std::move(levels), std::move(steps), std::move(tags));
}

inline DirectTower koszul_cotower(int i, const SequenceSpec& seq,
                                  const FpModule& M, int W) {
  if (W < 1)
    throw EngineError(ErrorCode::BAD_LEVELS, "koszul cotower needs W >= 1");
  std::vector<KoszulCochainLevel> K;
  std::vector<Subquotient> H;
  for (int n = 1; n <= W; ++n) {
    K.push_back(koszul_cochain_level(seq, M, n));
    H.push_back(koszul_cohomology(K.back(), i));
  }
  std::vector<FpModule> levels;
  for (const auto& h : H) levels.push_back(h.presented);
  std::vector<ModuleMap> steps;
  for (int n = 1; n < W; ++n) {
    auto cmp = koszul_cochain_comparison(K[static_cast<size_t>(n - 1)],
                                         K[static_cast<size_t>(n)]);
    const ModuleMap& amb = cmp[static_cast<size_t>(i)];
    auto ind = induced_map(H[static_cast<size_t>(n - 1)],
                           H[static_cast<size_t>(n)],
                           [&](const VPoly& v) { return amb.apply(v); });
    if (!ind)
      throw EngineError(ErrorCode::NOT_A_COMPLEX,
                        "cochain comparison does not descend to cohomology");
    steps.push_back(*ind);
  }
  return make_cotower(std::move(levels), std::move(steps));
}

// ---------------------------------------------------------------------------
// I-torsion Γ_I(M) = union of (0 :_M I^n), computed by stabilizing the
// ascending colon chain. Stabilization is certified by span equality of two
// consecutive steps; if the chain does not stabilize within max_steps the
// result is empty (caller reports UNDETERMINED).

struct GammaTorsion {
  Subquotient torsion;     // (0 :_M I^n) at the stabilization level
  int stabilized_at = 0;   // smallest n with (0:I^n) = (0:I^{n+1})
};

inline std::optional<GammaTorsion> gamma_torsion(const FpModule& M,
                                                 const Ideal& I,
                                                 int max_steps = 16) {
  const PolyRingSpec& S = M.ring()->spec();
  auto annihilator_of_power = [&](int n) {
    Ideal In = ideal_power(I, n);
    if (In.generators.empty()) {
      // I^n = 0: everything is annihilated
      std::vector<VPoly> all;
      for (int j = 0; j < M.gens(); ++j) all.push_back(vp_const(S, 1, j));
      return all;
    }
    int b = static_cast<int>(In.generators.size());
    FpModule target = koszul_detail::block_sum(M, b);
    std::vector<VPoly> cols;
    for (int j = 0; j < M.gens(); ++j) {
      VPoly col;
      for (int t = 0; t < b; ++t) {
        // copy of generator j, multiplied into block t
        VPoly part = vp_shift(vp_mul(S, In.generators[static_cast<size_t>(t)],
                                     vp_const(S, 1, j)),
                              t * M.gens());
        col.insert(col.end(), part.begin(), part.end());
      }
      col = vp_normalize(S, std::move(col));
      cols.push_back(std::move(col));
    }
    return kernel_gens(ModuleMap(M, target, std::move(cols)));
  };
  std::vector<VPoly> prev = annihilator_of_power(1);
  for (int n = 1; n <= max_steps; ++n) {
    std::vector<VPoly> next = annihilator_of_power(n + 1);
    if (span_equal(M, prev, next))
      return GammaTorsion{subquotient(M, prev, {}), n};
    prev = std::move(next);
  }
  return std::nullopt;
}

}  // namespace prozero
