#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace qseries {

using Int = mpz_class;
using Rat = mpq_class;

// Series exponents. Windows use a large sentinel meaning "exact at every order".
// long rather than long long so the gmpxx constructors apply directly.
using Exp = long;
inline constexpr Exp kUnbounded = Exp(1) << 62;

struct error : std::runtime_error {
  explicit error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

inline Exp sat_add(Exp a, Exp b) {
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  Exp s = a + b;
  return s >= kUnbounded ? kUnbounded : s;
}

// a * m for m >= 1, saturating at the sentinel.
inline Exp sat_mul(Exp a, Exp m) {
  if (a >= kUnbounded / m) return kUnbounded;
  return a * m;
}

inline Exp floor_div(Exp a, Exp b) {
  Exp q = a / b, r = a % b;
  return (r != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

inline Exp ceil_div(Exp a, Exp b) { return -floor_div(-a, b); }

inline Int int_pow(Exp base, unsigned long e) {
  Int b(static_cast<long>(base)), r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline Rat make_rat(const Int& num, const Int& den) {
  if (sgn(den) == 0) throw error("zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// base^e as an exact rational; e may be negative.
inline Rat rat_pow(Exp base, long e) {
  if (base == 0 && e <= 0) throw error("zero base with nonpositive exponent");
  Int p = int_pow(base, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Rat(p);
  return make_rat(Int(1), p);
}

inline std::string rat_str(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace qseries
