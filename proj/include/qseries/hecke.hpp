#pragma once

#include <cmath>
#include <optional>

#include "qseries/numthy.hpp"
#include "qseries/series.hpp"

namespace qseries {

// Hecke operator T(ell^2) in weight lambda + 1/2 with character chi:
//   b(n) = a(ell^2 n) + chi*(ell) (n|ell) ell^{lambda-1} a(n)
//        + chi*(ell)^2 ell^{2 lambda - 1} a(n / ell^2),
// where chi*(m) = ((-1)^lambda | m) chi(m) and the last term drops unless
// ell^2 divides n. Output window: the coefficients this can certify.
inline TruncatedSeries hecke(const TruncatedSeries& f, Exp ell, long lambda,
                             const QuadChar& chi = QuadChar::trivial()) {
  if (!is_odd_prime(ell)) throw error("ell must be an odd prime");
  Exp l2 = ell * ell;
  Exp v = f.valuation();
  Exp v_out = v >= 0 ? ceil_div(v, l2) : v * l2;
  Exp n_out = f.bounded()
                  ? std::min(floor_div(f.bound() - 1, l2) + 1, f.bound())
                  : kUnbounded;
  if (n_out <= v_out) throw error("window too small");
  int eps = (lambda % 2 != 0) ? -1 : 1;
  int cs = kronecker(eps, ell) * chi(ell);
  Rat c1 = Rat(cs) * rat_pow(ell, lambda - 1);
  Rat c2 = Rat(cs * cs) * rat_pow(ell, 2 * lambda - 1);
  std::vector<TruncatedSeries::Entry> out;
  auto image_at = [&](Exp n) {
    Rat b = f.coeff_at(l2 * n);
    if (sgn(c1) != 0) {
      int kr = kronecker(n, ell);
      if (kr != 0) b += Rat(kr) * c1 * f.coeff_at(n);
    }
    if (n % l2 == 0 && sgn(c2) != 0) b += c2 * f.coeff_at(n / l2);
    return b;
  };
  if (f.bounded()) {
    for (Exp n = v_out; n < n_out; ++n) {
      Rat b = image_at(n);
      if (sgn(b) != 0) out.emplace_back(n, b);
    }
  } else {
    // exact input: only indices fed by some entry can be nonzero
    std::vector<Exp> cand;
    for (const auto& [e, a] : f.entries()) {
      cand.push_back(e);
      cand.push_back(e * l2);
      if (e % l2 == 0) cand.push_back(e / l2);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    for (Exp n : cand) {
      if (n < v_out) continue;
      Rat b = image_at(n);
      if (sgn(b) != 0) out.emplace_back(n, b);
    }
  }
  return TruncatedSeries(v_out, n_out, std::move(out));
}

struct HeckeSpec {
  Exp ell;
  long lambda;  // weight = lambda + 1/2
  QuadChar chi = QuadChar::trivial();
};

inline TruncatedSeries hecke(const TruncatedSeries& f, const HeckeSpec& spec) {
  return hecke(f, spec.ell, spec.lambda, spec.chi);
}

struct CommutationResult {
  bool ok = true;
  std::optional<Mismatch> mismatch;
  explicit operator bool() const { return ok; }
};

// theta = q d/dq raises the weight by 2:  ell^2 theta(f|T) = (theta f)|T',
// with T' taken in weight (lambda+2) + 1/2 and the same character. Checked
// exactly on the full certified window.
inline CommutationResult theta_commutation_check(const TruncatedSeries& f,
                                                 Exp ell, long lambda,
                                                 const QuadChar& chi =
                                                     QuadChar::trivial()) {
  TruncatedSeries lhs = scale(theta(hecke(f, ell, lambda, chi)), Rat(ell * ell));
  TruncatedSeries rhs = hecke(theta(f), ell, lambda + 2, chi);
  auto d = first_difference(lhs, rhs);
  return CommutationResult{!d.has_value(), d};
}

inline CommutationResult theta_commutation_check(const TruncatedSeries& f,
                                                 const HeckeSpec& spec) {
  return theta_commutation_check(f, spec.ell, spec.lambda, spec.chi);
}

// Shimura-type lift at squarefree t:
//   b(n) = sum_{d | n} ((-1)^k 4t | d) d^{k-1} a(t n^2 / d^2).
inline TruncatedSeries shimura(const TruncatedSeries& f, Exp t, long k) {
  if (t < 1) throw error("t must be positive");
  for (Exp p = 2; p * p <= t; ++p)
    if (t % (p * p) == 0) throw error("t must be squarefree");
  if (!f.bounded()) throw error("lift requires a finite window");
  if (f.valuation() < 0) throw error("lift requires nonnegative valuation");
  if (k < 1) throw error("weight parameter must be positive");
  Exp m = (f.bound() - 1) / t;
  Exp r = static_cast<Exp>(std::sqrt(static_cast<double>(m)));
  while (r > 0 && r * r > m) --r;
  while ((r + 1) * (r + 1) <= m) ++r;
  Exp n_out = r + 1;
  if (n_out <= 1) throw error("window too small");
  Exp top = ((k % 2 != 0) ? -4 : 4) * t;
  std::vector<TruncatedSeries::Entry> out;
  for (Exp n = 1; n < n_out; ++n) {
    Rat b(0);
    for (Exp d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      int kr = kronecker(top, d);
      if (kr == 0) continue;
      Exp q = n / d;
      const Rat& a = f.coeff_at(t * q * q);
      if (sgn(a) == 0) continue;
      b += Rat(kr) * Rat(int_pow(d, static_cast<unsigned long>(k - 1))) * a;
    }
    if (sgn(b) != 0) out.emplace_back(n, b);
  }
  return TruncatedSeries(1, n_out, std::move(out));
}

// Coefficientwise twist by a quadratic character.
inline TruncatedSeries twist(const TruncatedSeries& f, const QuadChar& chi) {
  std::vector<TruncatedSeries::Entry> out;
  out.reserve(f.entries().size());
  for (const auto& e : f.entries()) {
    int c = chi(e.first);
    if (c == 1)
      out.push_back(e);
    else if (c == -1)
      out.emplace_back(e.first, -e.second);
  }
  return TruncatedSeries(f.valuation(), f.bound(), std::move(out));
}

}  // namespace qseries
