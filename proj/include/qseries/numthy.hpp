#pragma once

#include <vector>

#include "qseries/base.hpp"

namespace qseries {

// Kronecker symbol (a|n), extended to all integers.
inline int kronecker(const Int& a, Exp n) {
  return mpz_kronecker_si(a.get_mpz_t(), static_cast<long>(n));
}

inline int kronecker(Exp a, Exp n) {
  Int top(static_cast<long>(a));
  return mpz_kronecker_si(top.get_mpz_t(), static_cast<long>(n));
}

inline int kronecker(Exp a, const Int& n) {
  return mpz_si_kronecker(static_cast<long>(a), n.get_mpz_t());
}

// sigma_m(n): sum of m-th powers of the positive divisors of n; 0 for n <= 0.
inline Int sigma(long m, Exp n) {
  if (n <= 0) return Int(0);
  Int total(0);
  for (Exp d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    total += int_pow(d, static_cast<unsigned long>(m));
    Exp e = n / d;
    if (e != d) total += int_pow(e, static_cast<unsigned long>(m));
  }
  return total;
}

// sigma at a rational index is 0 unless the index is a positive integer.
inline Int sigma(long m, const Rat& n) {
  if (n.get_den() != 1) return Int(0);
  if (!n.get_num().fits_slong_p()) throw error("sigma index out of range");
  return sigma(m, n.get_num().get_si());
}

// Bernoulli number B_k for even k >= 2, by the defining recurrence
//   sum_{j=0}^{m} C(m+1, j) B_j = 0.
inline Rat bernoulli(long k) {
  if (k < 2 || k % 2 != 0) throw error("bernoulli requires even k >= 2");
  std::vector<Rat> b(static_cast<size_t>(k) + 1);
  b[0] = Rat(1);
  b[1] = Rat(-1, 2);
  for (long m = 2; m <= k; ++m) {
    Rat acc(0);
    for (long j = 0; j < m; ++j) {
      Int c;
      mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(m + 1),
                   static_cast<unsigned long>(j));
      acc += Rat(c) * b[static_cast<size_t>(j)];
    }
    b[static_cast<size_t>(m)] = -acc / Rat(m + 1);
  }
  return b[static_cast<size_t>(k)];
}

// Deterministic for all inputs below 2^64 (Baillie-PSW has no known failures
// there); the library only ever feeds it word-sized primes.
inline bool is_odd_prime(Exp n) {
  if (n < 3 || n % 2 == 0) return false;
  Int m(static_cast<long>(n));
  return mpz_probab_prime_p(m.get_mpz_t(), 32) != 0;
}

// Quadratic character: either trivial (identically 1) or the Kronecker
// symbol (D|.).
class QuadChar {
 public:
  QuadChar() = default;

  static QuadChar trivial() { return QuadChar(); }

  static QuadChar kron(Exp d) {
    QuadChar c;
    c.trivial_ = false;
    c.top_ = d;
    return c;
  }

  bool is_trivial() const { return trivial_; }
  Exp top() const { return top_; }

  int operator()(Exp n) const {
    if (trivial_) return 1;
    return kronecker(top_, n);
  }

  int operator()(const Int& n) const {
    if (trivial_) return 1;
    return kronecker(top_, n);
  }

 private:
  bool trivial_ = true;
  Exp top_ = 1;
};

}  // namespace qseries
