#pragma once

#include <string>
#include <vector>

#include "qseries/forms.hpp"

namespace qseries {

// Enumeration oracles. Independent of the series code: walk every partition
// of n and total the statistics directly. Kept deliberately small.
struct PartitionTotals {
  Int pbar;    // overpartitions: 2^{#distinct parts} per partition
  Int spt;     // total multiplicity of the smallest part
  Int sptbar;  // overpartition version, odd smallest part only
  Int m2spt;   // no repeated odd part, even smallest part
};

inline constexpr long kOracleCeiling = 40;

inline PartitionTotals partition_totals(long n) {
  if (n < 0) return PartitionTotals{Int(0), Int(0), Int(0), Int(0)};
  if (n > kOracleCeiling) throw error("oracle scale exceeded");
  PartitionTotals t{Int(n == 0 ? 1 : 0), Int(0), Int(0), Int(0)};
  // Parts chosen in decreasing order; the last part placed is the smallest.
  struct Walker {
    PartitionTotals& t;
    void walk(long rem, long maxpart, long distinct, bool repeated_odd) {
      for (long p = std::min(rem, maxpart); p >= 1; --p) {
        for (long m = 1; m * p <= rem; ++m) {
          bool rep = repeated_odd || (p % 2 == 1 && m > 1);
          long left = rem - m * p;
          if (left == 0) {
            Int ways;
            mpz_ui_pow_ui(ways.get_mpz_t(), 2,
                          static_cast<unsigned long>(distinct + 1));
            t.pbar += ways;
            t.spt += m;
            if (p % 2 == 1) t.sptbar += Int(m) * ways;
            if (p % 2 == 0 && !rep) t.m2spt += m;
          } else {
            walk(left, p - 1, distinct + 1, rep);
          }
        }
      }
    }
  };
  if (n > 0) Walker{t}.walk(n, n, 0, false);
  return t;
}

inline Int pbar_oracle(long n) { return partition_totals(n).pbar; }
inline Int spt_oracle(long n) { return partition_totals(n).spt; }
inline Int sptbar_oracle(long n) { return partition_totals(n).sptbar; }
inline Int m2spt_oracle(long n) { return partition_totals(n).m2spt; }

// Overpartition counts: the eta quotient with scales (2, 1) against (1, -2).
inline TruncatedSeries pbar_series(Exp bound) {
  return eta_expand(EtaQuotient({{1, -2}, {2, 1}}), bound);
}

// Generating series of the smallest-parts count for overpartitions with odd
// smallest part. Bilateral Bailey-pair form: a harmonic first sum plus a
// two-sided series whose negative half is rewritten with positive exponents,
// all multiplied by the overpartition generating function.
inline TruncatedSeries sptbar_series(Exp bound) {
  if (bound < 2) throw error("window too small");
  size_t w = static_cast<size_t>(bound);
  std::vector<Int> br(w);
  auto bump = [&](size_t e, long c) {
    if (c >= 0)
      mpz_add_ui(br[e].get_mpz_t(), br[e].get_mpz_t(),
                 static_cast<unsigned long>(c));
    else
      mpz_sub_ui(br[e].get_mpz_t(), br[e].get_mpz_t(),
                 static_cast<unsigned long>(-c));
  };
  // sum_{n>=1} 2n q^n / (1 - q^{2n})
  for (size_t n = 1; n < w; ++n)
    for (size_t e = n; e < w; e += 2 * n) bump(e, static_cast<long>(2 * n));
  // n >= 1:  4(-1)^n q^{n^2+n} (1 + q^{2n} + q^{3n}) / ((1-q^{2n})(1-q^{4n}))
  // with 1/((1-u)(1-u^2)) = sum_j (floor(j/2)+1) u^j at u = q^{2n}.
  for (size_t n = 1; n * n + n < w; ++n) {
    long s4 = (n % 2 == 1) ? -4 : 4;
    const size_t shifts[3] = {0, 2 * n, 3 * n};
    for (size_t sh : shifts) {
      size_t base = n * n + n + sh;
      for (size_t j = 0; base + 2 * n * j < w; ++j)
        bump(base + 2 * n * j, s4 * static_cast<long>(j / 2 + 1));
    }
  }
  // n <= -1, n = -m:  4(-1)^m q^{m^2+2m} (1 + q^m + q^{3m}), same denominators.
  for (size_t m = 1; m * m + 2 * m < w; ++m) {
    long s4 = (m % 2 == 1) ? -4 : 4;
    const size_t shifts[3] = {0, m, 3 * m};
    for (size_t sh : shifts) {
      size_t base = m * m + 2 * m + sh;
      for (size_t j = 0; base + 2 * m * j < w; ++j)
        bump(base + 2 * m * j, s4 * static_cast<long>(j / 2 + 1));
    }
  }
  std::vector<TruncatedSeries::Entry> entries;
  for (size_t e = 1; e < w; ++e)
    if (sgn(br[e]) != 0) entries.emplace_back(static_cast<Exp>(e), Rat(br[e]));
  TruncatedSeries bracket(1, bound, std::move(entries));
  return mul_eta_unit(bracket, {{2, 1}, {1, -2}});
}

// Smallest-parts count for partitions without repeated odd parts and even
// smallest part. Same structure: harmonic sum plus a rewritten bilateral
// series, times prod (1+q^{2n-1})/(1-q^{2n}).
inline TruncatedSeries m2spt_series(Exp bound) {
  if (bound < 2) throw error("window too small");
  size_t w = static_cast<size_t>(bound);
  std::vector<Int> br(w);
  auto bump = [&](size_t e, long c) {
    if (c >= 0)
      mpz_add_ui(br[e].get_mpz_t(), br[e].get_mpz_t(),
                 static_cast<unsigned long>(c));
    else
      mpz_sub_ui(br[e].get_mpz_t(), br[e].get_mpz_t(),
                 static_cast<unsigned long>(-c));
  };
  // sum_{n>=1} n q^{2n} / (1 - q^{2n})
  for (size_t n = 1; 2 * n < w; ++n)
    for (size_t e = 2 * n; e < w; e += 2 * n) bump(e, static_cast<long>(n));
  // n >= 1: (-1)^n q^{2n^2+n} / (1-q^{2n})^2, 1/(1-u)^2 = sum (j+1) u^j.
  for (size_t n = 1; 2 * n * n + n < w; ++n) {
    long s = (n % 2 == 1) ? -1 : 1;
    size_t base = 2 * n * n + n;
    for (size_t j = 0; base + 2 * n * j < w; ++j)
      bump(base + 2 * n * j, s * static_cast<long>(j + 1));
  }
  // n = -m: (-1)^m q^{2m^2+3m} / (1-q^{2m})^2.
  for (size_t m = 1; 2 * m * m + 3 * m < w; ++m) {
    long s = (m % 2 == 1) ? -1 : 1;
    size_t base = 2 * m * m + 3 * m;
    for (size_t j = 0; base + 2 * m * j < w; ++j)
      bump(base + 2 * m * j, s * static_cast<long>(j + 1));
  }
  std::vector<TruncatedSeries::Entry> entries;
  for (size_t e = 1; e < w; ++e)
    if (sgn(br[e]) != 0) entries.emplace_back(static_cast<Exp>(e), Rat(br[e]));
  TruncatedSeries bracket(1, bound, std::move(entries));
  return mul_eta_unit(bracket, {{2, 1}, {1, -1}, {4, -1}});
}

// Smallest-parts count over all partitions. Streams the smallest part s from
// high to low, extending the tail product by one factor each step.
inline TruncatedSeries spt_series(Exp bound) {
  if (bound < 2) throw error("window too small");
  size_t w = static_cast<size_t>(bound);
  std::vector<Int> tail(w);  // prod_{m>s} 1/(1-q^m), exponents 0 or > s
  std::vector<Int> acc(w);
  tail[0] = 1;
  for (size_t s = w - 1; s >= 1; --s) {
    for (size_t j = 1; j * s < w; ++j) {
      size_t e = j * s;
      mpz_add_ui(acc[e].get_mpz_t(), acc[e].get_mpz_t(),
                 static_cast<unsigned long>(j));
      size_t top = w - e;
      for (size_t i = s + 1; i < top; ++i)
        if (mpz_sgn(tail[i].get_mpz_t()) != 0)
          mpz_addmul_ui(acc[e + i].get_mpz_t(), tail[i].get_mpz_t(),
                        static_cast<unsigned long>(j));
    }
    for (size_t i = s; i < w; ++i)
      mpz_add(tail[i].get_mpz_t(), tail[i].get_mpz_t(),
              tail[i - s].get_mpz_t());
  }
  std::vector<TruncatedSeries::Entry> entries;
  for (size_t e = 1; e < w; ++e)
    if (sgn(acc[e]) != 0) entries.emplace_back(static_cast<Exp>(e), Rat(acc[e]));
  return TruncatedSeries(1, bound, std::move(entries));
}

// Alternating repackaging of the m2spt values in arithmetic progression
// 8n - 1; supported there only.
inline TruncatedSeries s2_series(Exp bound) {
  if (bound < 8) throw error("window too small");
  Exp n_max = bound / 8;
  TruncatedSeries m2 = m2spt_series(n_max + 1);
  std::vector<TruncatedSeries::Entry> entries;
  for (Exp n = 1; n <= n_max; ++n) {
    const Rat& c = m2.coeff_at(n);
    if (sgn(c) == 0) continue;
    entries.emplace_back(8 * n - 1, (n % 2 == 0) ? c : -c);
  }
  return TruncatedSeries(7, bound, std::move(entries));
}

// Eisenstein completion of sptbar_series: the combination that transforms as
// a weight 3/2 form.
inline TruncatedSeries mbar_series(Exp bound) {
  TruncatedSeries sbar = sptbar_series(bound);
  TruncatedSeries e2 = eisenstein(2, bound);
  TruncatedSeries half = eisenstein(2, ceil_div(bound, 2) + 1);
  TruncatedSeries diff = e2 - scale(rescale(half, 2), Rat(4));
  TruncatedSeries corr = scale(mul(pbar_series(bound), diff), Rat(1, 12));
  return sbar + corr;
}

// Eisenstein completion of s2_series.
inline TruncatedSeries m2_series(Exp bound) {
  TruncatedSeries s2 = s2_series(bound);
  TruncatedSeries e16 = rescale(eisenstein(2, ceil_div(bound, 16) + 1), 16);
  TruncatedSeries e8 = rescale(eisenstein(2, ceil_div(bound, 8) + 1), 8);
  TruncatedSeries diff = restrict_to(e16 - e8, 0, bound + 1);
  TruncatedSeries r = eta_expand(EtaQuotient({{8, 1}, {16, -2}}), bound + 1);
  return s2 + scale(mul(diff, r), Rat(1, 24));
}

// Dense CSV dump of a window, "exponent,value" per line. Integral values
// print without a denominator.
inline std::string to_csv(const TruncatedSeries& a) {
  if (!a.bounded()) throw error("csv serialization requires a finite window");
  std::string out;
  auto it = a.entries().begin();
  for (Exp e = a.valuation(); e < a.bound(); ++e) {
    out += std::to_string(e);
    out += ',';
    if (it != a.entries().end() && it->first == e) {
      if (it->second.get_den() == 1)
        out += it->second.get_num().get_str();
      else
        out += rat_str(it->second);
      ++it;
    } else {
      out += '0';
    }
    out += '\n';
  }
  return out;
}

}  // namespace qseries
