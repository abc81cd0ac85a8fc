#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace prozero {

// Error codes surfaced through exceptions; the CLI maps them to task errors.
enum class ErrorCode {
  UNSUPPORTED_DOMAIN,
  DEGREE_CAP_EXCEEDED,
  ZERO_LOCALIZATION,
  NOT_A_COMPLEX,
  DEGREE_OUT_OF_RANGE,
  BAD_LEVELS,
  NOT_CHECKABLE,
  REPLAY_INCOMPATIBLE,
  PARSE_ERROR,
  INVALID_INPUT,
};

class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::UNSUPPORTED_DOMAIN: return "UNSUPPORTED_DOMAIN";
    case ErrorCode::DEGREE_CAP_EXCEEDED: return "DEGREE_CAP_EXCEEDED";
    case ErrorCode::ZERO_LOCALIZATION: return "ZERO_LOCALIZATION";
    case ErrorCode::NOT_A_COMPLEX: return "NOT_A_COMPLEX";
    case ErrorCode::DEGREE_OUT_OF_RANGE: return "DEGREE_OUT_OF_RANGE";
    case ErrorCode::BAD_LEVELS: return "BAD_LEVELS";
    case ErrorCode::NOT_CHECKABLE: return "NOT_CHECKABLE";
    case ErrorCode::REPLAY_INCOMPATIBLE: return "REPLAY_INCOMPATIBLE";
    case ErrorCode::PARSE_ERROR: return "PARSE_ERROR";
    case ErrorCode::INVALID_INPUT: return "INVALID_INPUT";
  }
  return "UNKNOWN";
}

enum class DomainKind { PrimeField, Rationals, Integers, IntegersMod };

// Coefficient domain of a polynomial ring: F_p, Q, Z or Z/m.
// Coefficient values are carried as mpq_class everywhere; for the
// non-rational domains the denominator is 1 and the numerator is kept
// reduced into [0, m) when a modulus applies.
struct CoefficientDomain {
  DomainKind kind = DomainKind::Rationals;
  mpz_class modulus = 0;  // p or m when applicable

  static CoefficientDomain rationals() { return {DomainKind::Rationals, 0}; }
  static CoefficientDomain integers() { return {DomainKind::Integers, 0}; }
  static CoefficientDomain prime_field(const mpz_class& p) {
    if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
      throw EngineError(ErrorCode::UNSUPPORTED_DOMAIN,
                        "prime field modulus must be prime: " + p.get_str());
    return {DomainKind::PrimeField, p};
  }
  static CoefficientDomain integers_mod(const mpz_class& m) {
    if (m < 2)
      throw EngineError(ErrorCode::UNSUPPORTED_DOMAIN,
                        "modulus must be >= 2: " + m.get_str());
    return {DomainKind::IntegersMod, m};
  }

  bool is_field() const {
    return kind == DomainKind::PrimeField || kind == DomainKind::Rationals;
  }
  bool has_modulus() const {
    return kind == DomainKind::PrimeField || kind == DomainKind::IntegersMod;
  }
  bool operator==(const CoefficientDomain& o) const {
    return kind == o.kind && modulus == o.modulus;
  }
};

inline mpz_class mod_lift(const mpz_class& a, const mpz_class& m) {
  mpz_class r = a % m;
  if (r < 0) r += m;
  return r;
}

// Canonical representative of a coefficient in the domain.
inline mpq_class dom_reduce(const CoefficientDomain& D, const mpq_class& c) {
  if (!D.has_modulus()) return c;
  if (c.get_den() != 1)
    throw EngineError(ErrorCode::UNSUPPORTED_DOMAIN,
                      "non-integral coefficient in modular domain");
  return mpq_class(mod_lift(c.get_num(), D.modulus));
}

inline bool dom_is_unit(const CoefficientDomain& D, const mpq_class& c) {
  if (c == 0) return false;
  switch (D.kind) {
    case DomainKind::Rationals:
    case DomainKind::PrimeField:
      return true;
    case DomainKind::Integers:
      return c == 1 || c == -1;
    case DomainKind::IntegersMod: {
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), c.get_num().get_mpz_t(), D.modulus.get_mpz_t());
      return g == 1;
    }
  }
  return false;
}

// Multiplicative inverse of a unit.
inline mpq_class dom_invert(const CoefficientDomain& D, const mpq_class& c) {
  switch (D.kind) {
    case DomainKind::Rationals:
      return 1 / c;
    case DomainKind::Integers:
      if (c == 1 || c == -1) return c;
      throw EngineError(ErrorCode::INVALID_INPUT, "non-unit inverse over Z");
    case DomainKind::PrimeField:
    case DomainKind::IntegersMod: {
      mpz_class inv;
      if (mpz_invert(inv.get_mpz_t(), c.get_num().get_mpz_t(),
                     D.modulus.get_mpz_t()) == 0)
        throw EngineError(ErrorCode::INVALID_INPUT,
                          "non-unit inverse in modular domain");
      return mpq_class(inv);
    }
  }
  throw EngineError(ErrorCode::UNSUPPORTED_DOMAIN, "bad domain");
}

enum class OrderKind { Lex, GrevLex, Elim };

// Total order on monomials. Elim compares the first `elim_block` variables
// as a grevlex block, then the rest.
struct MonomialOrder {
  OrderKind kind = OrderKind::GrevLex;
  int elim_block = 0;

  bool operator==(const MonomialOrder& o) const {
    return kind == o.kind && elim_block == o.elim_block;
  }
};

using Mono = std::vector<int>;

inline int mono_total_degree(const Mono& a) {
  int d = 0;
  for (int e : a) d += e;
  return d;
}

inline int lex_cmp(const Mono& a, const Mono& b, size_t lo, size_t hi) {
  for (size_t i = lo; i < hi; ++i) {
    if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
  }
  return 0;
}

inline int grevlex_cmp(const Mono& a, const Mono& b, size_t lo, size_t hi) {
  int da = 0, db = 0;
  for (size_t i = lo; i < hi; ++i) {
    da += a[i];
    db += b[i];
  }
  if (da != db) return da > db ? 1 : -1;
  for (size_t i = hi; i-- > lo;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

// Returns +1 if a > b, -1 if a < b, 0 if equal.
inline int mono_cmp(const MonomialOrder& ord, const Mono& a, const Mono& b) {
  switch (ord.kind) {
    case OrderKind::Lex:
      return lex_cmp(a, b, 0, a.size());
    case OrderKind::GrevLex:
      return grevlex_cmp(a, b, 0, a.size());
    case OrderKind::Elim: {
      size_t k = static_cast<size_t>(ord.elim_block);
      if (int c = grevlex_cmp(a, b, 0, std::min(k, a.size()))) return c;
      return grevlex_cmp(a, b, std::min(k, a.size()), a.size());
    }
  }
  return 0;
}

inline bool mono_divides(const Mono& a, const Mono& b) {  // a | b
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Mono mono_mul(const Mono& a, const Mono& b) {
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Mono mono_div(const Mono& a, const Mono& b) {  // a / b, assumes b | a
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
  return r;
}

inline bool mono_coprime(const Mono& a, const Mono& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

// Presentation of the ambient polynomial ring: coefficients, named
// variables, a monomial order, and the hard degree cap.
struct PolyRingSpec {
  CoefficientDomain coefficients;
  std::vector<std::string> variables;
  MonomialOrder monomial_order;
  int degree_cap = 24;

  PolyRingSpec() = default;
  PolyRingSpec(CoefficientDomain dom, std::vector<std::string> vars,
               MonomialOrder ord = {}, int cap = 24)
      : coefficients(std::move(dom)),
        variables(std::move(vars)),
        monomial_order(ord),
        degree_cap(cap) {
    for (size_t i = 0; i < variables.size(); ++i)
      for (size_t j = i + 1; j < variables.size(); ++j)
        if (variables[i] == variables[j])
          throw EngineError(ErrorCode::INVALID_INPUT,
                            "duplicate variable name " + variables[i]);
  }

  size_t nvars() const { return variables.size(); }
  int var_index(const std::string& name) const {
    for (size_t i = 0; i < variables.size(); ++i)
      if (variables[i] == name) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const PolyRingSpec& o) const {
    return coefficients == o.coefficients && variables == o.variables &&
           monomial_order == o.monomial_order;
  }

  void check_degree(const Mono& m) const {
    if (mono_total_degree(m) > degree_cap)
      throw EngineError(ErrorCode::DEGREE_CAP_EXCEEDED,
                        "total degree exceeds cap " +
                            std::to_string(degree_cap));
  }
};

}  // namespace prozero
