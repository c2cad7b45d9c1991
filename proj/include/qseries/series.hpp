#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qseries/base.hpp"

namespace qseries {

// Laurent series in q with exact rational coefficients, tracked on a window
// [valuation, bound). The valuation is the smallest exponent that may be
// nonzero, so exponents below it read as exact zeros; reading at or above the
// bound is an error. Storage is a sorted sparse vector of nonzero entries.
class TruncatedSeries {
 public:
  using Entry = std::pair<Exp, Rat>;

  TruncatedSeries() : val_(0), bound_(kUnbounded) {}

  TruncatedSeries(Exp valuation, Exp bound, std::vector<Entry> entries)
      : val_(valuation), bound_(bound), entries_(std::move(entries)) {
    if (bound_ < val_) throw error("window bound below valuation");
    normalize();
  }

  static TruncatedSeries zero() { return TruncatedSeries(); }

  static TruncatedSeries one() { return monomial(Rat(1), 0); }

  static TruncatedSeries monomial(const Rat& c, Exp n) {
    std::vector<Entry> e;
    if (sgn(c) != 0) e.emplace_back(n, c);
    return TruncatedSeries(n, kUnbounded, std::move(e));
  }

  Exp valuation() const { return val_; }
  Exp bound() const { return bound_; }
  bool bounded() const { return bound_ < kUnbounded; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero_on_window() const { return entries_.empty(); }

  // Exact coefficient of q^n. Below the valuation this is zero by
  // definition of the window; at or beyond the bound it is not known.
  const Rat& coeff_at(Exp n) const {
    if (n >= bound_)
      throw error("coefficient not computed to requested precision");
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, Exp x) { return e.first < x; });
    if (it == entries_.end() || it->first != n) return zero_rat();
    return it->second;
  }

 private:
  static const Rat& zero_rat() {
    static const Rat z(0);
    return z;
  }

  void normalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (auto& e : entries_) {
      if (!out.empty() && out.back().first == e.first) {
        out.back().second += e.second;
        if (sgn(out.back().second) == 0) out.pop_back();
        continue;
      }
      if (sgn(e.second) != 0) out.push_back(std::move(e));
    }
    entries_ = std::move(out);
    for (const auto& e : entries_) {
      if (e.first < val_ || e.first >= bound_)
        throw error("coefficient outside window");
    }
  }

  Exp val_;
  Exp bound_;
  std::vector<Entry> entries_;
};

inline TruncatedSeries add(const TruncatedSeries& a, const TruncatedSeries& b) {
  Exp v = std::min(a.valuation(), b.valuation());
  Exp n = std::min(a.bound(), b.bound());
  if (n <= v) throw error("no common validity range");
  std::vector<TruncatedSeries::Entry> out;
  out.reserve(a.entries().size() + b.entries().size());
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      if (ia->first < n) out.emplace_back(*ia);
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      if (ib->first < n) out.emplace_back(*ib);
      ++ib;
    } else {
      if (ia->first < n) out.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return TruncatedSeries(v, n, std::move(out));
}

inline TruncatedSeries scale(const TruncatedSeries& a, const Rat& c) {
  std::vector<TruncatedSeries::Entry> out;
  if (sgn(c) != 0) {
    out.reserve(a.entries().size());
    for (const auto& e : a.entries()) out.emplace_back(e.first, e.second * c);
  }
  return TruncatedSeries(a.valuation(), a.bound(), std::move(out));
}

inline TruncatedSeries negate(const TruncatedSeries& a) {
  return scale(a, Rat(-1));
}

inline TruncatedSeries sub(const TruncatedSeries& a, const TruncatedSeries& b) {
  return add(a, negate(b));
}

inline TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  Exp v = sat_add(a.valuation(), b.valuation());
  Exp n = std::min(sat_add(a.bound(), b.valuation()),
                   sat_add(b.bound(), a.valuation()));
  if (n <= v) throw error("no common validity range");
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  if (ea.empty() || eb.empty())
    return TruncatedSeries(v, n, {});

  // Dense accumulation when the window is comparable to the work; otherwise
  // collect sparse products and combine.
  if (n < kUnbounded &&
      static_cast<unsigned long long>(n - v) <=
          static_cast<unsigned long long>(ea.size()) * eb.size()) {
    // Integer fast path: most series here have integral coefficients.
    bool integral = true;
    for (const auto& e : ea)
      if (e.second.get_den() != 1) { integral = false; break; }
    if (integral)
      for (const auto& e : eb)
        if (e.second.get_den() != 1) { integral = false; break; }
    size_t w = static_cast<size_t>(n - v);
    if (integral) {
      std::vector<Int> acc(w);
      for (const auto& x : ea) {
        const mpz_srcptr xz = x.second.get_num().get_mpz_t();
        for (const auto& y : eb) {
          Exp e = x.first + y.first;
          if (e >= n) break;
          mpz_addmul(acc[static_cast<size_t>(e - v)].get_mpz_t(), xz,
                     y.second.get_num().get_mpz_t());
        }
      }
      std::vector<TruncatedSeries::Entry> out;
      for (size_t i = 0; i < w; ++i)
        if (sgn(acc[i]) != 0) out.emplace_back(v + static_cast<Exp>(i), Rat(acc[i]));
      return TruncatedSeries(v, n, std::move(out));
    }
    std::vector<Rat> acc(w);
    for (const auto& x : ea)
      for (const auto& y : eb) {
        Exp e = x.first + y.first;
        if (e >= n) break;
        acc[static_cast<size_t>(e - v)] += x.second * y.second;
      }
    std::vector<TruncatedSeries::Entry> out;
    for (size_t i = 0; i < w; ++i)
      if (sgn(acc[i]) != 0) out.emplace_back(v + static_cast<Exp>(i), acc[i]);
    return TruncatedSeries(v, n, std::move(out));
  }

  std::vector<TruncatedSeries::Entry> prods;
  prods.reserve(ea.size() * eb.size());
  for (const auto& x : ea)
    for (const auto& y : eb) {
      Exp e = x.first + y.first;
      if (e >= n) break;
      prods.emplace_back(e, x.second * y.second);
    }
  return TruncatedSeries(v, n, std::move(prods));
}

// Multiplicative inverse. Requires a nonzero leading coefficient at the
// tracked valuation.
inline TruncatedSeries invert(const TruncatedSeries& a) {
  const auto& ea = a.entries();
  if (ea.empty() || ea.front().first != a.valuation())
    throw error("non-unit series");
  Exp v = a.valuation();
  if (ea.size() == 1) {
    Exp nb = a.bounded() ? a.bound() - 2 * v : kUnbounded;
    std::vector<TruncatedSeries::Entry> out;
    out.emplace_back(-v, Rat(1) / ea.front().second);
    return TruncatedSeries(-v, nb, std::move(out));
  }
  if (!a.bounded())
    throw error("invert requires a finite window for non-monomial series");
  size_t w = static_cast<size_t>(a.bound() - v);
  Rat lead_inv = Rat(1) / ea.front().second;
  std::vector<Rat> h(w);
  h[0] = lead_inv;
  // Sparse triangular solve against the unit part of a.
  std::vector<std::pair<size_t, const Rat*>> tail;
  for (size_t i = 1; i < ea.size(); ++i)
    tail.emplace_back(static_cast<size_t>(ea[i].first - v), &ea[i].second);
  for (size_t m = 1; m < w; ++m) {
    Rat s(0);
    for (const auto& [off, c] : tail) {
      if (off > m) break;
      if (sgn(h[m - off]) != 0) s += *c * h[m - off];
    }
    if (sgn(s) != 0) h[m] = -s * lead_inv;
  }
  std::vector<TruncatedSeries::Entry> out;
  for (size_t m = 0; m < w; ++m)
    if (sgn(h[m]) != 0) out.emplace_back(-v + static_cast<Exp>(m), h[m]);
  return TruncatedSeries(-v, a.bound() - 2 * v, std::move(out));
}

inline TruncatedSeries pow_int(const TruncatedSeries& a, long e) {
  if (e == 0) return TruncatedSeries::one();
  if (e < 0) return pow_int(invert(a), -e);
  TruncatedSeries acc = a;
  long bit = 1;
  while ((bit << 1) <= e) bit <<= 1;
  for (bit >>= 1; bit != 0; bit >>= 1) {
    acc = mul(acc, acc);
    if (e & bit) acc = mul(acc, a);
  }
  return acc;
}

// f(q) -> f(q^m) for m >= 1.
inline TruncatedSeries rescale(const TruncatedSeries& a, Exp m) {
  if (m < 1) throw error("rescale requires a positive factor");
  std::vector<TruncatedSeries::Entry> out;
  out.reserve(a.entries().size());
  for (const auto& e : a.entries()) out.emplace_back(e.first * m, e.second);
  return TruncatedSeries(a.valuation() * m, sat_mul(a.bound(), m),
                         std::move(out));
}

// theta = q d/dq.
inline TruncatedSeries theta(const TruncatedSeries& a) {
  std::vector<TruncatedSeries::Entry> out;
  out.reserve(a.entries().size());
  for (const auto& e : a.entries()) {
    if (e.first == 0) continue;
    out.emplace_back(e.first, e.second * Rat(static_cast<long>(e.first)));
  }
  return TruncatedSeries(a.valuation(), a.bound(), std::move(out));
}

// Multiply by q^k.
inline TruncatedSeries shift(const TruncatedSeries& a, Exp k) {
  std::vector<TruncatedSeries::Entry> out;
  out.reserve(a.entries().size());
  for (const auto& e : a.entries()) out.emplace_back(e.first + k, e.second);
  return TruncatedSeries(a.valuation() + k, sat_add(a.bound(), k),
                         std::move(out));
}

// Narrow the window to [lo, hi). The upper end must already be verified.
inline TruncatedSeries restrict_to(const TruncatedSeries& a, Exp lo, Exp hi) {
  if (hi > a.bound())
    throw error("coefficient not computed to requested precision");
  Exp v = std::max(lo, a.valuation());
  if (hi <= v) throw error("window too small");
  std::vector<TruncatedSeries::Entry> out;
  for (const auto& e : a.entries()) {
    if (e.first < v) throw error("coefficient outside window");
    if (e.first < hi) out.push_back(e);
  }
  return TruncatedSeries(v, hi, std::move(out));
}

struct Mismatch {
  Exp exponent;
  Rat lhs;
  Rat rhs;
};

// First exponent in the common window where the two series differ exactly.
inline std::optional<Mismatch> first_difference(const TruncatedSeries& a,
                                                const TruncatedSeries& b) {
  Exp lo = std::min(a.valuation(), b.valuation());
  Exp hi = std::min(a.bound(), b.bound());
  if (hi <= lo) throw error("no common validity range");
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    Exp xa = (ia != ea) ? ia->first : hi;
    Exp xb = (ib != eb) ? ib->first : hi;
    Exp x = std::min(xa, xb);
    if (x >= hi) break;
    const Rat& ca = (xa == x) ? ia->second : Rat(0);
    const Rat& cb = (xb == x) ? ib->second : Rat(0);
    if (ca != cb) return Mismatch{x, ca, cb};
    if (xa == x) ++ia;
    if (xb == x) ++ib;
  }
  return std::nullopt;
}

inline bool equal_on_window(const TruncatedSeries& a, const TruncatedSeries& b) {
  return !first_difference(a, b).has_value();
}

struct CongruenceFailure {
  Exp exponent;
  Int lhs;  // residues mod m
  Int rhs;
};

struct CongruenceResult {
  bool ok = true;
  std::optional<CongruenceFailure> failure;
  explicit operator bool() const { return ok; }
};

namespace detail {
// num/den mod m, via a modular inverse of the denominator.
inline Int reduce_mod(const Rat& c, const Int& m) {
  Int num = c.get_num() % m;
  if (sgn(num) < 0) num += m;
  if (c.get_den() == 1) return num;
  Int inv;
  if (mpz_invert(inv.get_mpz_t(), c.get_den().get_mpz_t(), m.get_mpz_t()) == 0)
    throw error("modulus not invertible against denominator");
  return (num * inv) % m;
}
}  // namespace detail

// Coefficientwise congruence mod m over the common window, reporting the
// first failing exponent.
inline CongruenceResult congruent_mod(const TruncatedSeries& a,
                                      const TruncatedSeries& b, const Int& m) {
  if (sgn(m) <= 0) throw error("modulus must be positive");
  Exp lo = std::min(a.valuation(), b.valuation());
  Exp hi = std::min(a.bound(), b.bound());
  if (hi <= lo) throw error("no common validity range");
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    Exp xa = (ia != ea) ? ia->first : hi;
    Exp xb = (ib != eb) ? ib->first : hi;
    Exp x = std::min(xa, xb);
    if (x >= hi) break;
    Int ra = (xa == x) ? detail::reduce_mod(ia->second, m) : Int(0);
    Int rb = (xb == x) ? detail::reduce_mod(ib->second, m) : Int(0);
    if (ra != rb) return CongruenceResult{false, CongruenceFailure{x, ra, rb}};
    if (xa == x) ++ia;
    if (xb == x) ++ib;
  }
  return CongruenceResult{};
}

inline TruncatedSeries operator+(const TruncatedSeries& a,
                                 const TruncatedSeries& b) {
  return add(a, b);
}
inline TruncatedSeries operator-(const TruncatedSeries& a,
                                 const TruncatedSeries& b) {
  return sub(a, b);
}
inline TruncatedSeries operator-(const TruncatedSeries& a) { return negate(a); }
inline TruncatedSeries operator*(const TruncatedSeries& a,
                                 const TruncatedSeries& b) {
  return mul(a, b);
}
inline TruncatedSeries operator*(const Rat& c, const TruncatedSeries& a) {
  return scale(a, c);
}

// Dense text form: one line per exponent of the window, "exponent<TAB>p/q".
// Including explicit zeros makes the round trip reproduce the window exactly.
inline std::string to_text(const TruncatedSeries& a) {
  if (!a.bounded()) throw error("text serialization requires a finite window");
  std::ostringstream os;
  auto it = a.entries().begin();
  for (Exp e = a.valuation(); e < a.bound(); ++e) {
    if (it != a.entries().end() && it->first == e) {
      os << e << '\t' << rat_str(it->second) << '\n';
      ++it;
    } else {
      os << e << "\t0/1\n";
    }
  }
  return os.str();
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw error("malformed rational: " + s);
  }
}

inline TruncatedSeries from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<TruncatedSeries::Entry> entries;
  Exp lo = 0, hi = 0;
  bool any = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw error("malformed series line: " + line);
    Exp e = std::stoll(line.substr(0, tab));
    Rat c = parse_rat(line.substr(tab + 1));
    if (!any) {
      lo = e;
      any = true;
    } else if (e <= hi - 1) {
      throw error("series lines out of order");
    }
    hi = e + 1;
    if (sgn(c) != 0) entries.emplace_back(e, c);
  }
  if (!any) throw error("empty series text");
  return TruncatedSeries(lo, hi, std::move(entries));
}

}  // namespace qseries
