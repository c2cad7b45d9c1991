// Acceptance gate. Exercises the full stack end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qseries/verify.hpp"

namespace {

using namespace qseries;

// First failure wins; later require() calls keep it.
struct Checker {
  std::string why;
  void require(bool ok, const std::string& msg) {
    if (why.empty() && !ok) why = msg;
  }
};

std::string param(const CongruenceReport& r, const std::string& key) {
  for (const auto& [k, v] : r.params)
    if (k == key) return v;
  return "";
}

bool skipped_by_hypothesis(const CongruenceReport& r) {
  return r.status == Status::skipped &&
         r.note == "excluded by hypothesis: ell = t" &&
         param(r, "t") == param(r, "ell");
}

void require_all_pass(Checker& ck, const std::vector<CongruenceReport>& reps,
                      const std::string& what, bool allow_hypothesis_skips) {
  for (const auto& r : reps) {
    if (allow_hypothesis_skips && skipped_by_hypothesis(r)) continue;
    if (r.status != Status::pass) {
      std::string detail = what + " " + r.check_id;
      for (const auto& [k, v] : r.params) detail += " " + k + "=" + v;
      if (r.first_failure)
        detail += " first failure at n=" + std::to_string(r.first_failure->exponent);
      if (!r.note.empty()) detail += " (" + r.note + ")";
      ck.require(false, detail);
      return;
    }
  }
}

TruncatedSeries random_series(std::mt19937& rng, int min_val, int min_len) {
  std::uniform_int_distribution<int> vd(min_val, 4);
  std::uniform_int_distribution<int> ld(min_len, min_len + 11);
  std::uniform_int_distribution<int> nd(-9, 9);
  std::uniform_int_distribution<int> dd(1, 4);
  Exp v = vd(rng);
  int len = ld(rng);
  std::vector<TruncatedSeries::Entry> entries;
  for (int i = 0; i < len; ++i) {
    int num = nd(rng);
    if (num != 0) entries.emplace_back(v + i, make_rat(num, dd(rng)));
  }
  return TruncatedSeries(v, v + len, std::move(entries));
}

TruncatedSeries perturb(const TruncatedSeries& f, Exp at, const Rat& delta) {
  std::vector<TruncatedSeries::Entry> entries;
  bool placed = false;
  for (const auto& [e, c] : f.entries()) {
    if (e == at) {
      Rat v = c + delta;
      if (sgn(v) != 0) entries.emplace_back(e, v);
      placed = true;
    } else {
      if (!placed && e > at) {
        entries.emplace_back(at, delta);
        placed = true;
      }
      entries.emplace_back(e, c);
    }
  }
  if (!placed) entries.emplace_back(at, delta);
  return TruncatedSeries(f.valuation(), f.bound(), std::move(entries));
}

// ---- criterion bodies ------------------------------------------------

std::string criterion_series(FormCache&) {
  Checker ck;
  TruncatedSeries pbar = pbar_series(31);
  TruncatedSeries sbar = sptbar_series(31);
  TruncatedSeries m2s = m2spt_series(31);
  TruncatedSeries spt = spt_series(31);

  const long pbar_want[] = {1, 2, 4, 8, 14, 24};
  for (long n = 0; n <= 5; ++n)
    ck.require(pbar.coeff_at(n) == Rat(pbar_want[n]),
               "pbar prefix differs at n=" + std::to_string(n));
  const long sbar_want[] = {2, 4, 12, 20, 40};
  for (long n = 1; n <= 5; ++n)
    ck.require(sbar.coeff_at(n) == Rat(sbar_want[n - 1]),
               "sptbar prefix differs at n=" + std::to_string(n));
  const std::pair<long, long> m2s_want[] = {{2, 1}, {3, 0}, {4, 3},
                                            {5, 1}, {6, 5}, {7, 3}};
  for (const auto& [n, c] : m2s_want)
    ck.require(m2s.coeff_at(n) == Rat(c),
               "m2spt prefix differs at n=" + std::to_string(n));
  ck.require(spt.coeff_at(5) == Rat(14), "spt(5) differs");

  for (long n = 0; n <= 30; ++n) {
    PartitionTotals t = partition_totals(n);
    ck.require(pbar.coeff_at(n) == Rat(t.pbar),
               "pbar oracle mismatch at n=" + std::to_string(n));
    ck.require(sbar.coeff_at(n) == Rat(t.sptbar),
               "sptbar oracle mismatch at n=" + std::to_string(n));
    ck.require(m2s.coeff_at(n) == Rat(t.m2spt),
               "m2spt oracle mismatch at n=" + std::to_string(n));
    ck.require(spt.coeff_at(n) == Rat(t.spt),
               "spt oracle mismatch at n=" + std::to_string(n));
  }
  return ck.why;
}

std::string criterion_eigenforms(FormCache& cache) {
  Checker ck;
  struct Row {
    const char* form;
    std::vector<Exp> ells;
    unsigned long e;
  };
  const std::vector<Row> rows = {{"Pbar^-7", {3, 5, 7, 11}, 5},
                                 {"E*Pbar^-7", {3, 5, 7}, 9},
                                 {"Mbar", {3, 5, 7}, 1},
                                 {"M2", {3, 5, 7}, 1}};
  for (const auto& row : rows) {
    for (Exp ell : row.ells) {
      CongruenceReport r = verify_eigenform(cache, row.form, ell);
      std::string tag = std::string(row.form) + " ell=" + std::to_string(ell);
      require_all_pass(ck, {r}, "eigenform", false);
      Int want = int_pow(ell, row.e) + 1;
      ck.require(param(r, "eigenvalue") == want.get_str(),
                 "eigenvalue differs for " + tag);
      ck.require(std::stol(param(r, "bound")) >= 50,
                 "window below 50 coefficients for " + tag);
    }
  }
  return ck.why;
}

std::string criterion_basis(FormCache& cache) {
  Checker ck;
  for (Exp ell : {3, 5}) {
    std::vector<CongruenceReport> reps = verify_basis(cache, ell);
    ck.require(reps.size() == 2,
               "expected two decompositions for ell=" + std::to_string(ell));
    require_all_pass(ck, reps, "basis", false);
  }
  return ck.why;
}

std::string criterion_lemmas(FormCache& cache) {
  Checker ck;
  for (const char* id :
       {"L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9"})
    require_all_pass(ck, verify_lemma(cache, id, 2000), "lemma", false);
  return ck.why;
}

std::string criterion_theorems(FormCache& cache) {
  Checker ck;
  struct Family {
    const char* id;
    std::vector<Exp> ells;
    long n_max;
  };
  const std::vector<Family> families = {
      {"garvan_72", {7, 11, 13}, 50}, {"garvan_t", {7, 11}, 50},
      {"sptbar", {3, 5, 7, 11, 17}, 100}, {"m2spt", {3, 5, 7, 17}, 100},
      {"pbar_16", {3, 5, 7, 17}, 200},   {"pbar_theta", {3, 5, 7, 17}, 200},
      {"blo_mod3", {5, 7}, 200}};
  for (const auto& fam : families)
    for (Exp ell : fam.ells)
      require_all_pass(ck, verify_theorem(cache, fam.id, ell, fam.n_max),
                       "theorem", true);
  return ck.why;
}

std::string criterion_lifts(FormCache& cache) {
  Checker ck;
  std::vector<CongruenceReport> reps = verify_shimura_identities(cache, 60, 2000);
  ck.require(reps.size() == 9, "expected nine lift claims");
  require_all_pass(ck, reps, "lift", false);
  return ck.why;
}

std::string criterion_parity(FormCache& cache) {
  Checker ck;
  for (Exp ell : {5, 13, 17, 41, 7, 23, 31})
    require_all_pass(ck, {verify_parity_prop(cache, ell)}, "parity", false);
  return ck.why;
}

std::string criterion_properties(FormCache&) {
  Checker ck;

  std::mt19937 rng(0x51a5u);
  for (int i = 0; i < 100 && ck.why.empty(); ++i) {
    TruncatedSeries a = random_series(rng, -4, 1);
    TruncatedSeries b = random_series(rng, -4, 1);
    TruncatedSeries c = random_series(rng, -4, 1);
    std::string at = " in trial " + std::to_string(i);
    ck.require(!first_difference(add(a, b), add(b, a)), "additive commutativity" + at);
    ck.require(!first_difference(add(add(a, b), c), add(a, add(b, c))),
               "additive associativity" + at);
    ck.require(!first_difference(mul(a, b), mul(b, a)), "multiplicative commutativity" + at);
    ck.require(!first_difference(mul(mul(a, b), c), mul(a, mul(b, c))),
               "multiplicative associativity" + at);
    ck.require(!first_difference(mul(a, add(b, c)), add(mul(a, b), mul(a, c))),
               "distributivity" + at);
    ck.require(!first_difference(mul(a, TruncatedSeries::one()), a),
               "multiplicative identity" + at);
    ck.require(!first_difference(theta(mul(a, b)),
                                 add(mul(theta(a), b), mul(a, theta(b)))),
               "theta product rule" + at);
  }

  std::mt19937 hrng(0xc0117u);
  const long lambdas[] = {-1, 0, 1, 3};
  const Exp hells[] = {3, 5, 7};
  for (int i = 0; i < 100 && ck.why.empty(); ++i) {
    TruncatedSeries f = random_series(hrng, 0, 60);
    QuadChar chi = (i % 2 == 0) ? QuadChar::trivial() : QuadChar::kron(-4);
    CommutationResult res =
        theta_commutation_check(f, hells[i % 3], lambdas[i % 4], chi);
    ck.require(res.ok, "dilation commutation fails in trial " + std::to_string(i));
  }

  for (long n = 1; n <= 10000 && ck.why.empty(); ++n) {
    Int d = Int(sigma(3, n) - sigma(1, n)) % 2;
    ck.require(d == 0, "sigma parity fails at n=" + std::to_string(n));
  }

  for (Exp p = 3; p < 100; p += 2) {
    if (!is_odd_prime(p)) continue;
    std::set<Exp> squares;
    for (Exp x = 1; x < p; ++x) squares.insert(x * x % p);
    for (Exp a = -100; a <= 100 && ck.why.empty(); ++a) {
      Exp r = ((a % p) + p) % p;
      int want = (r == 0) ? 0 : (squares.count(r) ? 1 : -1);
      ck.require(kronecker(a, p) == want,
                 "quadratic residue table differs at (" + std::to_string(a) +
                     "|" + std::to_string(p) + ")");
    }
  }
  return ck.why;
}

std::string criterion_faults(FormCache& cache) {
  Checker ck;
  struct Fault {
    const char* name;
    Exp pin_bound;
    Exp at;
    long delta;
    std::function<std::vector<CongruenceReport>(FormCache&)> target;
  };
  auto one = [](CongruenceReport r) {
    std::vector<CongruenceReport> v;
    v.push_back(std::move(r));
    return v;
  };
  const std::vector<Fault> faults = {
      {"Pbar", 451, 5, 1,
       [](FormCache& c) { return verify_theorem(c, "pbar_16", 3, 50); }},
      {"R", 577, 23, 1,
       [&](FormCache& c) { return one(verify_eigenform(c, "M2", 3)); }},
      {"psi", 64, 3, 1,
       [](FormCache& c) { return verify_lemma(c, "L2", 64); }},
      {"rho", 64, 1, 1,
       [](FormCache& c) { return verify_lemma(c, "L6", 64); }},
      {"j2", 16, 0, 1,
       [&](FormCache& c) { return one(verify_hauptmodul(c, 3)); }},
      {"E2", 64, 2, 1,
       [](FormCache& c) { return verify_lemma(c, "L2", 64); }},
      {"E4", 64, 2, 1,
       [](FormCache& c) { return verify_lemma(c, "L2", 64); }},
      {"E6", 64, 1, 1,
       [](FormCache& c) { return verify_lemma(c, "L3", 64); }},
      {"E", 64, 2, 1,
       [](FormCache& c) { return verify_lemma(c, "L2", 64); }},
      {"h", 144, 2, 1,
       [](FormCache& c) { return verify_lemma(c, "L7", 16, {3}); }},
      {"g", 450, 2, 1,
       [&](FormCache& c) { return one(verify_hauptmodul(c, 3)); }},
      {"F", 16, 3, 2,
       [](FormCache& c) { return verify_shimura_identities(c, 8, 16); }},
      {"theta0", 16, 3, 1,
       [](FormCache& c) { return verify_shimura_identities(c, 8, 16); }},
      {"theta_odd", 144, 2, 1,
       [](FormCache& c) { return verify_theta_parity(c, 64, 16, {3}); }},
      {"Sbar", 451, 6, 1,
       [](FormCache& c) { return verify_theorem(c, "sptbar", 3, 50); }},
      {"S2", 576, 15, 1,
       [&](FormCache& c) { return one(verify_eigenform(c, "M2", 3)); }},
      {"Mbar", 576, 2, 1,
       [&](FormCache& c) { return one(verify_eigenform(c, "Mbar", 3)); }},
      {"M2spt", 450, 4, 1,
       [](FormCache& c) { return verify_theorem(c, "m2spt", 3, 50); }},
      {"M2", 576, 15, 1,
       [&](FormCache& c) { return one(verify_eigenform(c, "M2", 3)); }},
      {"spt", 979, 10, 1,
       [](FormCache& c) { return verify_theorem(c, "garvan_72", 7, 20); }},
  };
  for (const auto& fl : faults) {
    TruncatedSeries clean = cache.get(fl.name, fl.pin_bound);
    cache.pin(fl.name, perturb(clean, fl.at, Rat(fl.delta)));
    std::vector<CongruenceReport> reps = fl.target(cache);
    cache.unpin(fl.name);
    bool tripped = false;
    for (const auto& r : reps)
      if (r.status == Status::fail && r.first_failure.has_value() &&
          !r.first_failure->modulus.empty())
        tripped = true;
    ck.require(tripped, std::string("perturbing ") + fl.name +
                            " tripped no check");
  }
  require_all_pass(ck, verify_lemma(cache, "L6", 64),
                   "post-injection baseline", false);
  return ck.why;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* what;
    double budget_s;  // 0 = untimed
    std::function<std::string(FormCache&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "printed series prefixes and enumeration oracles", 5, criterion_series},
      {2, "exact eigenforms with the stated eigenvalues", 60, criterion_eigenforms},
      {3, "basis decompositions with integral tails", 120, criterion_basis},
      {4, "identity suite L1-L9 at bound 2000", 60, criterion_lemmas},
      {5, "coefficient congruence families", 900, criterion_theorems},
      {6, "lift displays and twisted support", 600, criterion_lifts},
      {7, "decomposition parity pattern", 0, criterion_parity},
      {8, "algebraic property sweep", 0, criterion_properties},
      {9, "fault injection trips the checks", 0, criterion_faults},
  };

  FormCache cache;
  int failures = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string why;
    try {
      why = c.body(cache);
    } catch (const std::exception& e) {
      why = e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (why.empty() && c.budget_s > 0 && secs > c.budget_s) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "exceeded %.0f s budget", c.budget_s);
      why = buf;
    }
    if (why.empty()) {
      std::printf("[PASS] criterion %d: %s (%.1f s)\n", c.number, c.what, secs);
    } else {
      std::printf("[FAIL] criterion %d: %s: %s (%.1f s)\n", c.number, c.what,
                  why.c_str(), secs);
      ++failures;
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
