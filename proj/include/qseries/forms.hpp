#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qseries/numthy.hpp"
#include "qseries/series.hpp"

namespace qseries {

// Formal product over (scale, power) of dilated Dedekind eta factors.
struct EtaQuotient {
  // (scale d, power r) meaning the d-dilated factor to the r-th power.
  std::vector<std::pair<Exp, long>> terms;

  EtaQuotient() = default;

  explicit EtaQuotient(std::vector<std::pair<Exp, long>> t)
      : terms(std::move(t)) {
    normalize();
  }

  void normalize() {
    for (const auto& [d, r] : terms) {
      (void)r;
      if (d < 1) throw error("eta scale must be positive");
    }
    std::sort(terms.begin(), terms.end());
    std::vector<std::pair<Exp, long>> out;
    for (const auto& t : terms) {
      if (!out.empty() && out.back().first == t.first)
        out.back().second += t.second;
      else
        out.push_back(t);
      if (!out.empty() && out.back().second == 0) out.pop_back();
    }
    terms = std::move(out);
  }

  // Twice the weight.
  long weight_num() const {
    long s = 0;
    for (const auto& [d, r] : terms) {
      (void)d;
      s += r;
    }
    return s;
  }

  Exp lead_times24() const {
    Exp s = 0;
    for (const auto& [d, r] : terms) s += d * r;
    return s;
  }

  // Leading q-exponent; the quotient must expand with integral exponents.
  Exp lead_exponent() const {
    Exp s = lead_times24();
    if (s % 24 != 0) throw error("eta quotient has fractional q-power");
    return s / 24;
  }

  EtaQuotient rescaled(Exp m) const {
    if (m < 1) throw error("rescale requires a positive factor");
    auto t = terms;
    for (auto& [d, r] : t) {
      (void)r;
      d *= m;
    }
    return EtaQuotient(std::move(t));
  }

  EtaQuotient pow(long e) const {
    auto t = terms;
    for (auto& [d, r] : t) {
      (void)d;
      r *= e;
    }
    return EtaQuotient(std::move(t));
  }

  EtaQuotient times(const EtaQuotient& other) const {
    auto t = terms;
    t.insert(t.end(), other.terms.begin(), other.terms.end());
    return EtaQuotient(std::move(t));
  }
};

inline std::string to_string(const EtaQuotient& eq) {
  if (eq.terms.empty()) return "1";
  std::string s;
  for (const auto& [d, r] : eq.terms) {
    if (!s.empty()) s += " * ";
    s += "eta(" + std::to_string(d) + "t)^" + std::to_string(r);
  }
  return s;
}

// Grammar: "eta(2t)^1 * eta(1t)^-2"; the power suffix defaults to 1.
inline EtaQuotient parse_eta_quotient(const std::string& text) {
  std::vector<std::pair<Exp, long>> terms;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](const std::string& tok) {
    if (text.compare(pos, tok.size(), tok) != 0)
      throw error("malformed eta quotient: " + text);
    pos += tok.size();
  };
  auto read_int = [&]() -> long {
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(text[start]))))
      throw error("malformed eta quotient: " + text);
    return std::stol(text.substr(start, pos - start));
  };
  skip_ws();
  if (text.compare(pos, 1, "1") == 0 && pos + 1 == text.size())
    return EtaQuotient();
  while (true) {
    skip_ws();
    expect("eta(");
    long d = read_int();
    expect("t)");
    long r = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      r = read_int();
    }
    terms.emplace_back(d, r);
    skip_ws();
    if (pos >= text.size()) break;
    expect("*");
  }
  return EtaQuotient(std::move(terms));
}

namespace detail {

// Sparse unit polynomial 1 + sum c_e x^e used by the expansion kernel.
struct UnitPoly {
  std::vector<std::pair<size_t, long>> terms;  // e >= 1
};

// prod_n (1 - x^{s n}) truncated below len, by the pentagonal number series.
inline UnitPoly unit_poly_eta(size_t s, size_t len) {
  UnitPoly p;
  for (size_t k = 1;; ++k) {
    size_t g1 = s * (k * (3 * k - 1) / 2);
    size_t g2 = s * (k * (3 * k + 1) / 2);
    long sign = (k % 2 == 1) ? -1 : 1;
    if (g1 >= len) break;
    p.terms.emplace_back(g1, sign);
    if (g2 < len) p.terms.emplace_back(g2, sign);
  }
  std::sort(p.terms.begin(), p.terms.end());
  return p;
}

// prod_n (1 - x^{s n})^3 = sum_k (-1)^k (2k+1) x^{s k(k+1)/2}.
inline UnitPoly unit_poly_eta3(size_t s, size_t len) {
  UnitPoly p;
  for (size_t k = 1;; ++k) {
    size_t e = s * (k * (k + 1) / 2);
    if (e >= len) break;
    p.terms.emplace_back(e, (k % 2 == 1) ? -static_cast<long>(2 * k + 1)
                                         : static_cast<long>(2 * k + 1));
  }
  return p;
}

inline void add_scaled(Int& t, const Int& s, long c) {
  if (mpz_sgn(s.get_mpz_t()) == 0) return;
  if (c == 1)
    mpz_add(t.get_mpz_t(), t.get_mpz_t(), s.get_mpz_t());
  else if (c == -1)
    mpz_sub(t.get_mpz_t(), t.get_mpz_t(), s.get_mpz_t());
  else if (c > 0)
    mpz_addmul_ui(t.get_mpz_t(), s.get_mpz_t(), static_cast<unsigned long>(c));
  else
    mpz_submul_ui(t.get_mpz_t(), s.get_mpz_t(), static_cast<unsigned long>(-c));
}

inline void add_scaled(Rat& t, const Rat& s, long c) {
  if (sgn(s) == 0) return;
  Rat prod = s;
  prod *= c;
  t += prod;
}

template <class C>
void unit_mul_in_place(std::vector<C>& a, const UnitPoly& p) {
  for (size_t n = a.size(); n-- > 1;)
    for (const auto& [e, c] : p.terms) {
      if (e > n) break;
      add_scaled(a[n], a[n - e], c);
    }
}

template <class C>
void unit_div_in_place(std::vector<C>& a, const UnitPoly& p) {
  for (size_t n = 1; n < a.size(); ++n)
    for (const auto& [e, c] : p.terms) {
      if (e > n) break;
      add_scaled(a[n], a[n - e], -c);
    }
}

// Apply the unit part of one dilated eta factor to the given power. Cubes
// are grouped so the shorter odd-triangular series carries most of the work.
template <class C>
void apply_eta_power(std::vector<C>& a, size_t scale, long power) {
  if (power == 0 || a.empty()) return;
  long t = power / 3, rem = power % 3;
  if (t != 0) {
    UnitPoly p3 = unit_poly_eta3(scale, a.size());
    for (long i = 0; i < (t > 0 ? t : -t); ++i)
      t > 0 ? unit_mul_in_place(a, p3) : unit_div_in_place(a, p3);
  }
  if (rem != 0) {
    UnitPoly p1 = unit_poly_eta(scale, a.size());
    for (long i = 0; i < (rem > 0 ? rem : -rem); ++i)
      rem > 0 ? unit_mul_in_place(a, p1) : unit_div_in_place(a, p1);
  }
}

template <class C>
TruncatedSeries wrap_strided(const std::vector<C>& a, Exp lo, Exp g, Exp hi) {
  std::vector<TruncatedSeries::Entry> out;
  for (size_t i = 0; i < a.size(); ++i) {
    Exp e = lo + g * static_cast<Exp>(i);
    if (e >= hi) break;
    if (sgn(a[i]) != 0) out.emplace_back(e, Rat(a[i]));
  }
  return TruncatedSeries(lo, hi, std::move(out));
}

}  // namespace detail

// Expand an eta quotient exactly on [lead, bound). Coefficients are computed
// in the compressed variable q^gcd(scales).
inline TruncatedSeries eta_expand(const EtaQuotient& eq, Exp bound) {
  Exp lead = eq.lead_exponent();
  if (bound <= lead) throw error("window too small");
  if (eq.terms.empty())
    return TruncatedSeries(0, bound, {{0, Rat(1)}});
  Exp g = 0;
  for (const auto& [d, r] : eq.terms) {
    (void)r;
    g = std::gcd(g, d);
  }
  size_t len = static_cast<size_t>(ceil_div(bound - lead, g));
  std::vector<Int> a(len);
  a[0] = 1;
  for (const auto& [d, r] : eq.terms)
    detail::apply_eta_power(a, static_cast<size_t>(d / g), r);
  return detail::wrap_strided(a, lead, g, bound);
}

// Multiply f by prod_d (prod_n (1 - q^{d n}))^{r_d}, i.e. by the unit parts
// only. Sparse passes over f's window; the window is unchanged because the
// factors are exact at every order.
inline TruncatedSeries mul_eta_unit(const TruncatedSeries& f,
                                    const std::vector<std::pair<Exp, long>>& dr) {
  if (!f.bounded()) throw error("eta multiplication requires a finite window");
  if (f.bound() <= f.valuation() || dr.empty()) return f;
  Exp v = f.valuation();
  Exp g = 0;
  for (const auto& [d, r] : dr) {
    (void)r;
    if (d < 1) throw error("eta scale must be positive");
    g = std::gcd(g, d);
  }
  for (const auto& e : f.entries()) {
    g = std::gcd(g, e.first - v);
    if (g == 1) break;
  }
  size_t len = static_cast<size_t>(ceil_div(f.bound() - v, g));
  bool integral = true;
  for (const auto& e : f.entries())
    if (e.second.get_den() != 1) { integral = false; break; }
  if (integral) {
    std::vector<Int> a(len);
    for (const auto& e : f.entries())
      a[static_cast<size_t>((e.first - v) / g)] = e.second.get_num();
    for (const auto& [d, r] : dr)
      detail::apply_eta_power(a, static_cast<size_t>(d / g), r);
    return detail::wrap_strided(a, v, g, f.bound());
  }
  std::vector<Rat> a(len);
  for (const auto& e : f.entries())
    a[static_cast<size_t>((e.first - v) / g)] = e.second;
  for (const auto& [d, r] : dr)
    detail::apply_eta_power(a, static_cast<size_t>(d / g), r);
  return detail::wrap_strided(a, v, g, f.bound());
}

// Multiply f by a full eta quotient (unit parts plus the leading power).
inline TruncatedSeries mul_eta(const TruncatedSeries& f, const EtaQuotient& eq) {
  Exp lead = eq.lead_exponent();
  return shift(mul_eta_unit(f, eq.terms), lead);
}

// Normalized Eisenstein series of even weight k: 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
inline TruncatedSeries eisenstein(long k, Exp bound) {
  if (bound < 1) throw error("window too small");
  Rat factor = Rat(-2 * k) / bernoulli(k);
  size_t len = static_cast<size_t>(bound);
  std::vector<Int> sig(len);
  for (size_t d = 1; d < len; ++d) {
    Int p = int_pow(static_cast<Exp>(d), static_cast<unsigned long>(k - 1));
    for (size_t e = d; e < len; e += d)
      mpz_add(sig[e].get_mpz_t(), sig[e].get_mpz_t(), p.get_mpz_t());
  }
  std::vector<TruncatedSeries::Entry> out;
  out.emplace_back(0, Rat(1));
  for (size_t n = 1; n < len; ++n)
    out.emplace_back(static_cast<Exp>(n), factor * Rat(sig[n]));
  return TruncatedSeries(0, bound, std::move(out));
}

namespace detail {
inline const std::vector<std::pair<Exp, long>>& quotient_terms(
    const std::string& name) {
  static const std::vector<std::pair<std::string, std::vector<std::pair<Exp, long>>>>
      table = {
          {"Pbar", {{1, -2}, {2, 1}}},    {"R", {{8, 1}, {16, -2}}},
          {"psi", {{1, -8}, {2, 16}}},    {"rho", {{1, 16}, {2, -8}}},
          {"j2", {{1, 24}, {2, -24}}},
      };
  for (const auto& [n, t] : table)
    if (n == name) return t;
  throw error("unknown eta quotient name: " + name);
}
}  // namespace detail

// Built-in named series. Eta quotients expand through the kernel; the rest
// are assembled from Eisenstein series or explicit supports.
inline TruncatedSeries named_form(const std::string& name, Exp bound) {
  if (name == "Pbar" || name == "R" || name == "psi" || name == "rho" ||
      name == "j2")
    return eta_expand(EtaQuotient(detail::quotient_terms(name)), bound);
  if (name == "E2" || name == "E4" || name == "E6")
    return eisenstein(name[1] - '0', bound);
  if (name == "E") {
    TruncatedSeries e2 = eisenstein(2, bound);
    TruncatedSeries half = restrict_to(e2, 0, ceil_div(bound, 2));
    return restrict_to(scale(rescale(half, 2), Rat(2)) - e2, 0, bound);
  }
  if (name == "h")
    return mul_eta(named_form("E", bound),
                   EtaQuotient(detail::quotient_terms("Pbar")));
  if (name == "g") {
    TruncatedSeries e8 =
        rescale(named_form("E", ceil_div(bound + 1, 8) + 1), 8);
    return restrict_to(mul_eta(e8, EtaQuotient(detail::quotient_terms("R"))),
                       -1, bound);
  }
  if (name == "F") {
    if (bound < 2) throw error("window too small");
    size_t len = static_cast<size_t>(bound);
    std::vector<Int> sig(len);
    for (size_t d = 1; d < len; ++d)
      for (size_t e = d; e < len; e += d)
        mpz_add_ui(sig[e].get_mpz_t(), sig[e].get_mpz_t(),
                   static_cast<unsigned long>(d));
    std::vector<TruncatedSeries::Entry> out;
    for (size_t n = 1; n < len; n += 2)
      out.emplace_back(static_cast<Exp>(n), Rat(sig[n]));
    return TruncatedSeries(1, bound, std::move(out));
  }
  if (name == "theta0") {
    if (bound < 1) throw error("window too small");
    std::vector<TruncatedSeries::Entry> out;
    out.emplace_back(0, Rat(1));
    for (Exp k = 1; k * k < bound; ++k) out.emplace_back(k * k, Rat(2));
    return TruncatedSeries(0, bound, std::move(out));
  }
  if (name == "theta_odd") {
    if (bound < 2) throw error("window too small");
    std::vector<TruncatedSeries::Entry> out;
    for (Exp k = 1; k * k < bound; k += 2) out.emplace_back(k * k, Rat(1));
    return TruncatedSeries(1, bound, std::move(out));
  }
  throw error("unknown form name: " + name);
}

// Image of an eta quotient under the level-N Fricke involution, up to a
// constant of the shape (positive rational) * 2^{s/2} with s in {0, 1}.
struct FrickeImage {
  EtaQuotient quotient;
  Rat rational;  // the rational factor of the constant
  bool sqrt2;    // extra factor sqrt(2) present
};

inline FrickeImage fricke_eta(const EtaQuotient& eq, Exp level) {
  if (level < 1) throw error("level must be positive");
  for (const auto& [d, r] : eq.terms) {
    (void)r;
    if (level % d != 0) throw error("eta scale does not divide the level");
  }
  std::vector<std::pair<Exp, long>> image;
  for (const auto& [d, r] : eq.terms) image.emplace_back(level / d, r);

  // Exponent of each prime in the constant, as an exact rational.
  std::vector<Exp> primes;
  Exp n = level;
  for (Exp p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      primes.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) primes.push_back(n);
  auto valuation_of = [](Exp m, Exp p) {
    long v = 0;
    while (m % p == 0) {
      m /= p;
      ++v;
    }
    return v;
  };
  long wnum = eq.weight_num();
  Rat rational(1);
  bool sqrt2 = false;
  for (Exp p : primes) {
    Rat f = make_rat(-wnum, 4) * Rat(valuation_of(level, p));
    for (const auto& [d, r] : eq.terms)
      f += make_rat(r, 2) * Rat(valuation_of(level / d, p));
    const Int& den = f.get_den();
    if (den != 1 && !(p == 2 && den == 2))
      throw error("constant outside value domain");
    Exp half = 0;
    if (den == 2) {
      sqrt2 = true;
      half = 1;
    }
    Int ipart = (f.get_num() - Int(half)) / den;
    rational *= rat_pow(p, ipart.get_si());
  }
  return FrickeImage{EtaQuotient(std::move(image)), rational, sqrt2};
}

// Exact coordinates of f in the rational span of the given series, checked
// over the whole common window.
inline std::vector<Rat> decompose_in_basis(
    const TruncatedSeries& f, const std::vector<TruncatedSeries>& basis) {
  if (basis.empty()) throw error("empty basis");
  Exp lo = f.valuation(), hi = f.bound();
  for (const auto& b : basis) {
    lo = std::min(lo, b.valuation());
    hi = std::min(hi, b.bound());
  }
  if (hi <= lo) throw error("no common validity range");

  struct Unit {
    Exp pivot;
    TruncatedSeries s;
    std::vector<Rat> t;  // coordinates over the original basis
  };
  std::vector<Unit> units;
  for (size_t i = 0; i < basis.size(); ++i) {
    TruncatedSeries s = restrict_to(basis[i], lo, hi);
    std::vector<Rat> t(basis.size());
    t[i] = Rat(1);
    while (true) {
      if (s.entries().empty())
        throw error("basis not independent on common window");
      Exp p = s.entries().front().first;
      const Unit* hit = nullptr;
      for (const auto& u : units)
        if (u.pivot == p) {
          hit = &u;
          break;
        }
      if (hit == nullptr) {
        units.push_back(Unit{p, std::move(s), std::move(t)});
        break;
      }
      Rat c = s.entries().front().second / hit->s.coeff_at(p);
      s = sub(s, scale(hit->s, c));
      for (size_t j = 0; j < t.size(); ++j) t[j] -= c * hit->t[j];
    }
  }
  std::sort(units.begin(), units.end(),
            [](const Unit& a, const Unit& b) { return a.pivot < b.pivot; });

  TruncatedSeries residual = restrict_to(f, lo, hi);
  std::vector<Rat> coords(basis.size());
  for (const auto& u : units) {
    if (u.pivot >= residual.bound()) break;
    Rat c = residual.coeff_at(u.pivot) / u.s.coeff_at(u.pivot);
    if (sgn(c) == 0) continue;
    residual = sub(residual, scale(u.s, c));
    for (size_t j = 0; j < coords.size(); ++j) coords[j] += c * u.t[j];
  }
  if (!residual.entries().empty())
    throw error("not in span: residual at exponent " +
                std::to_string(residual.entries().front().first));
  return coords;
}

// Write f/base as a polynomial of the stated degree in a Hauptmodul with a
// pole, eliminating the most negative exponents first. Returns the
// coefficients by ascending power; the residual must vanish on the whole
// common window.
inline std::vector<Rat> hauptmodul_decompose(const TruncatedSeries& f,
                                             const TruncatedSeries& base,
                                             const TruncatedSeries& haupt,
                                             long degree) {
  if (degree < 0) throw error("degree must be nonnegative");
  if (haupt.entries().empty() ||
      haupt.entries().front().first != haupt.valuation())
    throw error("non-unit series");
  Exp vj = haupt.valuation();
  if (vj >= 0) throw error("Hauptmodul must have a pole");
  TruncatedSeries residual = mul(f, invert(base));
  std::vector<TruncatedSeries> powers;
  powers.push_back(TruncatedSeries::one());
  for (long i = 1; i <= degree; ++i) powers.push_back(mul(powers.back(), haupt));
  std::vector<Rat> coeffs(static_cast<size_t>(degree) + 1);
  for (long i = degree; i >= 0; --i) {
    Exp pivot = vj * i;
    Rat c = residual.coeff_at(pivot) / powers[static_cast<size_t>(i)].coeff_at(pivot);
    coeffs[static_cast<size_t>(i)] = c;
    if (sgn(c) != 0)
      residual = sub(residual, scale(powers[static_cast<size_t>(i)], c));
  }
  if (!residual.entries().empty())
    throw error("not polynomial in Hauptmodul of stated degree: residual at exponent " +
                std::to_string(residual.entries().front().first));
  return coeffs;
}

}  // namespace qseries
