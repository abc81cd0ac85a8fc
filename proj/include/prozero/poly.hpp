#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "prozero/domain.hpp"

namespace prozero {

// A term of a vector polynomial: coefficient * monomial * e_comp.
// Scalar polynomials are vector polynomials living in component 0.
struct Term {
  int comp = 0;
  Mono mono;
  mpq_class coeff;

  bool operator==(const Term& o) const {
    return comp == o.comp && mono == o.mono && coeff == o.coeff;
  }
};

// Terms kept sorted descending under the position-over-term order
// (smaller component index dominates), zero coefficients dropped.
using VPoly = std::vector<Term>;

// +1 if a > b under POT with the ring's monomial order.
inline int term_cmp(const PolyRingSpec& S, const Term& a, const Term& b) {
  if (a.comp != b.comp) return a.comp < b.comp ? 1 : -1;
  return mono_cmp(S.monomial_order, a.mono, b.mono);
}

inline VPoly vp_normalize(const PolyRingSpec& S, VPoly v) {
  std::sort(v.begin(), v.end(), [&](const Term& a, const Term& b) {
    return term_cmp(S, a, b) > 0;
  });
  VPoly out;
  for (auto& t : v) {
    mpq_class c = dom_reduce(S.coefficients, t.coeff);
    if (!out.empty() && out.back().comp == t.comp && out.back().mono == t.mono) {
      out.back().coeff = dom_reduce(S.coefficients, out.back().coeff + c);
    } else {
      out.push_back({t.comp, t.mono, c});
    }
  }
  VPoly res;
  for (auto& t : out)
    if (t.coeff != 0) res.push_back(std::move(t));
  return res;
}

inline bool vp_is_zero(const VPoly& v) { return v.empty(); }

inline const Term& vp_lead(const VPoly& v) { return v.front(); }

inline VPoly vp_add(const PolyRingSpec& S, const VPoly& a, const VPoly& b) {
  VPoly r = a;
  r.insert(r.end(), b.begin(), b.end());
  return vp_normalize(S, std::move(r));
}

inline VPoly vp_neg(const PolyRingSpec& S, const VPoly& a) {
  VPoly r = a;
  for (auto& t : r) t.coeff = dom_reduce(S.coefficients, -t.coeff);
  return vp_normalize(S, std::move(r));
}

inline VPoly vp_sub(const PolyRingSpec& S, const VPoly& a, const VPoly& b) {
  return vp_add(S, a, vp_neg(S, b));
}

// (c * mono) * v, shifting nothing across components.
inline VPoly vp_scale(const PolyRingSpec& S, const mpq_class& c,
                      const Mono& m, const VPoly& v) {
  VPoly r;
  r.reserve(v.size());
  for (const auto& t : v) {
    Mono nm = mono_mul(t.mono, m);
    S.check_degree(nm);
    r.push_back({t.comp, std::move(nm), t.coeff * c});
  }
  return vp_normalize(S, std::move(r));
}

// scalar poly (component 0) times vector poly
inline VPoly vp_mul(const PolyRingSpec& S, const VPoly& scalar,
                    const VPoly& v) {
  VPoly r;
  for (const auto& s : scalar) {
    VPoly part = vp_scale(S, s.coeff, s.mono, v);
    r.insert(r.end(), part.begin(), part.end());
  }
  return vp_normalize(S, std::move(r));
}

inline VPoly vp_const(const PolyRingSpec& S, const mpq_class& c, int comp = 0) {
  mpq_class r = dom_reduce(S.coefficients, c);
  if (r == 0) return {};
  return {{comp, Mono(S.nvars(), 0), r}};
}

inline VPoly vp_var(const PolyRingSpec& S, int idx, int comp = 0) {
  Mono m(S.nvars(), 0);
  m[static_cast<size_t>(idx)] = 1;
  return {{comp, std::move(m), 1}};
}

// Shift every component by delta; used when embedding into larger free modules.
inline VPoly vp_shift(const VPoly& v, int delta) {
  VPoly r = v;
  for (auto& t : r) t.comp += delta;
  return r;
}

// Restrict to components [lo, hi), renumbering to start at 0.
inline VPoly vp_slice(const VPoly& v, int lo, int hi) {
  VPoly r;
  for (const auto& t : v)
    if (t.comp >= lo && t.comp < hi) r.push_back({t.comp - lo, t.mono, t.coeff});
  return r;
}

inline int vp_max_comp(const VPoly& v) {
  int m = -1;
  for (const auto& t : v) m = std::max(m, t.comp);
  return m;
}

inline VPoly vp_substitute(const PolyRingSpec& S, const VPoly& v,
                           const std::vector<VPoly>& images) {
  // images[i] is a scalar polynomial replacing variable i; components pass
  // through untouched.
  VPoly out;
  for (const auto& t : v) {
    VPoly acc = vp_const(S, t.coeff);
    for (size_t i = 0; i < S.nvars(); ++i)
      for (int e = 0; e < t.mono[i]; ++e) acc = vp_mul(S, images[i], acc);
    out = vp_add(S, out, vp_shift(acc, t.comp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// printing: canonical form, terms in descending order, `*` between factors,
// `^` for powers, rational coefficients as a/b.

inline std::string coeff_str(const mpq_class& c) {
  std::ostringstream os;
  os << c;
  return os.str();
}

inline std::string poly_to_string(const PolyRingSpec& S, const VPoly& p) {
  if (p.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : p) {
    mpq_class c = t.coeff;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    bool has_mono = mono_total_degree(t.mono) > 0;
    if (c != 1 || !has_mono) {
      os << coeff_str(c);
      if (has_mono) os << "*";
    }
    bool star = false;
    for (size_t i = 0; i < S.nvars(); ++i) {
      if (t.mono[i] == 0) continue;
      if (star) os << "*";
      star = true;
      os << S.variables[i];
      if (t.mono[i] > 1) os << "^" << t.mono[i];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// parsing of scalar polynomials, grammar: sum of signed terms, each term a
// `*`-separated product of integer/rational constants and var^exponent
// factors. Parentheses are accepted around a full expression factor.

namespace detail {

struct PolyParser {
  const PolyRingSpec& S;
  const std::string& s;
  size_t pos = 0;

  explicit PolyParser(const PolyRingSpec& spec, const std::string& text)
      : S(spec), s(text) {}

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw EngineError(ErrorCode::PARSE_ERROR,
                      "polynomial parse error at offset " +
                          std::to_string(pos) + ": " + msg + " in \"" + s +
                          "\"");
  }

  VPoly parse() {
    VPoly r = parse_sum();
    if (!eof()) fail("trailing input");
    return r;
  }

  VPoly parse_sum() {
    VPoly acc;
    int sign = 1;
    if (peek() == '+' || peek() == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    }
    while (true) {
      VPoly t = parse_product();
      if (sign < 0) t = vp_neg(S, t);
      acc = vp_add(S, acc, t);
      char c = peek();
      if (c == '+' || c == '-') {
        sign = c == '-' ? -1 : 1;
        ++pos;
      } else {
        break;
      }
    }
    return acc;
  }

  VPoly parse_product() {
    VPoly acc = parse_factor();
    while (peek() == '*') {
      ++pos;
      acc = vp_mul(S, acc, parse_factor());
    }
    return acc;
  }

  VPoly parse_factor() {
    char c = peek();
    VPoly base;
    if (c == '(') {
      ++pos;
      base = parse_sum();
      if (peek() != ')') fail("expected ')'");
      ++pos;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      base = vp_const(S, parse_rational());
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = parse_name();
      int idx = S.var_index(name);
      if (idx < 0) fail("unknown variable " + name);
      base = vp_var(S, idx);
    } else {
      fail("unexpected character");
    }
    if (peek() == '^') {
      ++pos;
      long e = parse_integer();
      if (e < 0) fail("negative exponent");
      VPoly acc = vp_const(S, 1);
      for (long i = 0; i < e; ++i) acc = vp_mul(S, acc, base);
      return acc;
    }
    return base;
  }

  std::string parse_name() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }

  long parse_integer() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (start == pos) fail("expected integer");
    return std::stol(s.substr(start, pos - start));
  }

  mpq_class parse_rational() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    mpz_class num(s.substr(start, pos - start));
    skip_ws();
    if (pos < s.size() && s[pos] == '/') {
      ++pos;
      skip_ws();
      size_t d0 = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
        ++pos;
      if (d0 == pos) fail("expected denominator");
      mpz_class den(s.substr(d0, pos - d0));
      if (den == 0) fail("zero denominator");
      mpq_class q(num, den);
      q.canonicalize();
      return q;
    }
    return mpq_class(num);
  }
};

}  // namespace detail

inline VPoly parse_poly(const PolyRingSpec& S, const std::string& text) {
  detail::PolyParser p(S, text);
  return p.parse();
}

}  // namespace prozero
