#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "qseries/series.hpp"

using namespace qseries;

namespace {

// Random series with small windows and small rational entries.
TruncatedSeries random_series(std::mt19937& rng) {
  std::uniform_int_distribution<long> val_dist(-4, 4);
  std::uniform_int_distribution<long> len_dist(1, 12);
  std::uniform_int_distribution<long> num_dist(-9, 9);
  std::uniform_int_distribution<long> den_dist(1, 5);
  Exp v = val_dist(rng);
  Exp n = v + len_dist(rng);
  std::vector<TruncatedSeries::Entry> entries;
  for (Exp e = v; e < n; ++e) {
    long num = num_dist(rng);
    if (num == 0) continue;
    entries.emplace_back(e, make_rat(num, den_dist(rng)));
  }
  return TruncatedSeries(v, n, std::move(entries));
}

}  // namespace

TEST_CASE("zero and one", "[series]") {
  auto z = TruncatedSeries::zero();
  REQUIRE(z.bound() == kUnbounded);
  REQUIRE(z.coeff_at(-1000000) == 0);
  REQUIRE(z.coeff_at(1000000) == 0);
  REQUIRE(z.entries().empty());

  auto one = TruncatedSeries::one();
  REQUIRE(one.coeff_at(0) == 1);
  REQUIRE(one.coeff_at(-3) == 0);
  REQUIRE(one.bound() == kUnbounded);
}

TEST_CASE("coefficient access respects the window", "[series]") {
  TruncatedSeries f(2, 10, {{3, Rat(5)}, {7, make_rat(-1, 2)}});
  REQUIRE(f.valuation() == 2);
  REQUIRE(f.bound() == 10);
  REQUIRE(f.coeff_at(3) == 5);
  REQUIRE(f.coeff_at(7) == make_rat(-1, 2));
  REQUIRE(f.coeff_at(4) == 0);
  // Below the valuation the series is exactly zero.
  REQUIRE(f.coeff_at(1) == 0);
  REQUIRE(f.coeff_at(-50) == 0);
  REQUIRE_THROWS_WITH(f.coeff_at(10),
                      "coefficient not computed to requested precision");
  REQUIRE_THROWS_WITH(f.coeff_at(11),
                      "coefficient not computed to requested precision");
}

TEST_CASE("addition intersects windows", "[series]") {
  TruncatedSeries a(0, 8, {{0, Rat(1)}, {5, Rat(2)}});
  TruncatedSeries b(2, 12, {{2, Rat(3)}});
  auto s = a + b;
  REQUIRE(s.valuation() == 0);
  REQUIRE(s.bound() == 8);
  REQUIRE(s.coeff_at(0) == 1);
  REQUIRE(s.coeff_at(2) == 3);
  REQUIRE(s.coeff_at(5) == 2);
  REQUIRE_THROWS(s.coeff_at(8));
}

TEST_CASE("multiplication window accounts for both valuations", "[series]") {
  // (q^-1 + q) * (q^2 + q^3): valuations -1 and 2, bounds 3 and 5.
  TruncatedSeries a(-1, 3, {{-1, Rat(1)}, {1, Rat(1)}});
  TruncatedSeries b(2, 5, {{2, Rat(1)}, {3, Rat(1)}});
  auto p = a * b;
  REQUIRE(p.valuation() == 1);
  // min(3 + 2, 5 + (-1)) = 4
  REQUIRE(p.bound() == 4);
  REQUIRE(p.coeff_at(1) == 1);
  REQUIRE(p.coeff_at(2) == 1);
  REQUIRE(p.coeff_at(3) == 1);
  REQUIRE_THROWS(p.coeff_at(4));
}

TEST_CASE("multiplying by zero follows the window rule", "[series]") {
  TruncatedSeries a(-2, 6, {{-2, Rat(1)}, {4, Rat(7)}});
  auto p = a * TruncatedSeries::zero();
  // zero() has window [0, inf), so the product keeps a's window
  REQUIRE(p.valuation() == -2);
  REQUIRE(p.bound() == 6);
  REQUIRE(p.is_zero_on_window());
  REQUIRE(p.coeff_at(3) == 0);
  REQUIRE(p.coeff_at(-100) == 0);
  REQUIRE_THROWS(p.coeff_at(100));
}

TEST_CASE("ring identities on random series", "[series][property]") {
  std::mt19937 rng(0x5eed);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_series(rng);
    auto b = random_series(rng);
    auto c = random_series(rng);

    auto lhs = (a + b) * c;
    auto rhs = a * c + b * c;
    REQUIRE(equal_on_window(lhs, rhs));
    REQUIRE(equal_on_window(a * b, b * a));
    REQUIRE(equal_on_window(a + b, b + a));
    REQUIRE(equal_on_window((a * b) * c, a * (b * c)));
    REQUIRE(equal_on_window(a - a, TruncatedSeries::zero()));
  }
}

TEST_CASE("theta is a derivation", "[series][property]") {
  std::mt19937 rng(0xd1ce);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_series(rng);
    auto b = random_series(rng);
    auto lhs = theta(a * b);
    auto rhs = theta(a) * b + a * theta(b);
    REQUIRE(equal_on_window(lhs, rhs));
  }
}

TEST_CASE("theta multiplies each coefficient by its exponent", "[series]") {
  TruncatedSeries f(-3, 4, {{-3, Rat(2)}, {0, Rat(5)}, {2, make_rat(1, 3)}});
  auto t = theta(f);
  REQUIRE(t.coeff_at(-3) == -6);
  REQUIRE(t.coeff_at(0) == 0);
  REQUIRE(t.coeff_at(2) == make_rat(2, 3));
  REQUIRE(t.bound() == 4);
}

TEST_CASE("inversion", "[series]") {
  // 1/(1 - q) = 1 + q + q^2 + ...
  TruncatedSeries f(0, 10, {{0, Rat(1)}, {1, Rat(-1)}});
  auto g = invert(f);
  REQUIRE(g.valuation() == 0);
  REQUIRE(g.bound() == 10);
  for (Exp e = 0; e < 10; ++e) REQUIRE(g.coeff_at(e) == 1);

  // Laurent case: leading term q^-2.
  TruncatedSeries h(-2, 5, {{-2, Rat(1)}, {0, Rat(3)}});
  auto hi = invert(h);
  REQUIRE(hi.valuation() == 2);
  REQUIRE(hi.bound() == 5 - 2 * (-2));
  REQUIRE(equal_on_window(h * hi, TruncatedSeries::one()));
}

TEST_CASE("inverse times original is one", "[series][property]") {
  std::mt19937 rng(0xfade);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_series(rng);
    if (a.entries().empty() || a.entries().front().first != a.valuation())
      continue;
    auto prod = a * invert(a);
    REQUIRE(equal_on_window(prod, TruncatedSeries::one()));
  }
}

TEST_CASE("inverting a series without a unit leading term fails", "[series]") {
  TruncatedSeries f(0, 5, {{1, Rat(1)}});
  REQUIRE_THROWS(invert(f));
  REQUIRE_THROWS(invert(TruncatedSeries::zero()));
}

TEST_CASE("integer powers", "[series]") {
  TruncatedSeries f(0, 20, {{0, Rat(1)}, {1, Rat(1)}, {2, Rat(1)}});
  REQUIRE(equal_on_window(pow_int(f, 3), f * f * f));
  REQUIRE(equal_on_window(pow_int(f, 1), f));
  auto unit = pow_int(f, 0);
  REQUIRE(unit.coeff_at(0) == 1);
  REQUIRE(unit.coeff_at(10) == 0);
  REQUIRE(equal_on_window(pow_int(f, -2), invert(f) * invert(f)));
}

TEST_CASE("power window for a Laurent base", "[series]") {
  TruncatedSeries f(-1, 6, {{-1, Rat(1)}, {3, Rat(2)}});
  auto p3 = pow_int(f, 3);
  REQUIRE(p3.valuation() == -3);
  REQUIRE(p3.bound() == 6 + 2 * (-1));
  REQUIRE(p3.coeff_at(-3) == 1);
}

TEST_CASE("rescale and shift", "[series]") {
  TruncatedSeries f(1, 5, {{1, Rat(2)}, {3, Rat(-1)}});
  auto r = rescale(f, 4);
  REQUIRE(r.valuation() == 4);
  REQUIRE(r.bound() == 20);
  REQUIRE(r.coeff_at(4) == 2);
  REQUIRE(r.coeff_at(12) == -1);
  REQUIRE(r.coeff_at(5) == 0);

  auto s = shift(f, -3);
  REQUIRE(s.valuation() == -2);
  REQUIRE(s.bound() == 2);
  REQUIRE(s.coeff_at(-2) == 2);
  REQUIRE(s.coeff_at(0) == -1);
}

TEST_CASE("restrict_to narrows the window", "[series]") {
  TruncatedSeries f(0, 20, {{5, Rat(2)}, {15, Rat(3)}});
  auto g = restrict_to(f, 3, 10);
  REQUIRE(g.valuation() == 3);
  REQUIRE(g.bound() == 10);
  REQUIRE(g.coeff_at(5) == 2);
  REQUIRE(g.coeff_at(3) == 0);
  REQUIRE_THROWS(g.coeff_at(15));

  REQUIRE_THROWS_WITH(restrict_to(f, 0, 25),
                      "coefficient not computed to requested precision");
  // Narrowing may not silently drop a nonzero coefficient.
  TruncatedSeries h(0, 20, {{0, Rat(1)}, {5, Rat(2)}});
  REQUIRE_THROWS_WITH(restrict_to(h, 3, 10), "coefficient outside window");
  REQUIRE_THROWS_WITH(restrict_to(f, 18, 18), "window too small");
}

TEST_CASE("monomial and scale", "[series]") {
  auto m = TruncatedSeries::monomial(make_rat(3, 7), -2);
  REQUIRE(m.coeff_at(-2) == make_rat(3, 7));
  REQUIRE(m.coeff_at(99) == 0);

  TruncatedSeries f(0, 4, {{0, Rat(1)}, {2, Rat(5)}});
  auto g = scale(f, make_rat(-1, 2));
  REQUIRE(g.coeff_at(0) == make_rat(-1, 2));
  REQUIRE(g.coeff_at(2) == make_rat(-5, 2));
}

TEST_CASE("congruence scanning", "[series][congruence]") {
  TruncatedSeries a(0, 10, {{0, Rat(3)}, {4, Rat(10)}});
  TruncatedSeries b(0, 10, {{0, Rat(8)}, {4, Rat(-5)}});
  auto ok = congruent_mod(a, b, Int(5));
  REQUIRE(static_cast<bool>(ok));

  TruncatedSeries c(0, 10, {{0, Rat(3)}, {4, Rat(11)}});
  auto bad = congruent_mod(a, c, Int(5));
  REQUIRE_FALSE(static_cast<bool>(bad));
  REQUIRE(bad.failure.has_value());
  REQUIRE(bad.failure->exponent == 4);
  REQUIRE(bad.failure->lhs == 0);
  REQUIRE(bad.failure->rhs == 1);

  REQUIRE_THROWS_WITH(congruent_mod(a, b, Int(0)), "modulus must be positive");

  // Coefficient 1/5 has no residue mod 5.
  TruncatedSeries d(0, 10, {{0, make_rat(1, 5)}});
  REQUIRE_THROWS_WITH(congruent_mod(d, a, Int(5)),
                      "modulus not invertible against denominator");
}

TEST_CASE("denominators reduce through an invertible modulus", "[series][congruence]") {
  // 1/2 = 3 mod 5, so 1/2 - 3 should scan as congruent.
  TruncatedSeries a(0, 4, {{0, make_rat(1, 2)}});
  TruncatedSeries b(0, 4, {{0, Rat(3)}});
  REQUIRE(static_cast<bool>(congruent_mod(a, b, Int(5))));
}

TEST_CASE("first difference", "[series]") {
  TruncatedSeries a(0, 10, {{0, Rat(1)}, {3, Rat(4)}});
  TruncatedSeries b(0, 12, {{0, Rat(1)}, {3, Rat(4)}});
  REQUIRE_FALSE(first_difference(a, b).has_value());

  TruncatedSeries c(0, 12, {{0, Rat(1)}, {3, Rat(5)}});
  auto diff = first_difference(a, c);
  REQUIRE(diff.has_value());
  REQUIRE(diff->exponent == 3);
  REQUIRE(diff->lhs == 4);
  REQUIRE(diff->rhs == 5);

  // below the valuation coefficients are exact zeros, so windows that do
  // not overlap still compare (and agree when both vanish there)
  TruncatedSeries lo(0, 5, {});
  TruncatedSeries hi(7, 9, {});
  REQUIRE_FALSE(first_difference(lo, hi).has_value());
  TruncatedSeries hi2(7, 9, {{7, Rat(2)}});
  REQUIRE_FALSE(first_difference(lo, hi2).has_value());
}

TEST_CASE("text round trip", "[series][io]") {
  TruncatedSeries f(-2, 6, {{-2, Rat(1)}, {0, make_rat(-7, 3)}, {5, Rat(11)}});
  auto text = to_text(f);
  auto g = from_text(text);
  REQUIRE(g.valuation() == f.valuation());
  REQUIRE(g.bound() == f.bound());
  REQUIRE(equal_on_window(f, g));

  REQUIRE_THROWS_WITH(to_text(TruncatedSeries::zero()),
                      "text serialization requires a finite window");
}

TEST_CASE("rational parsing", "[series][io]") {
  REQUIRE(parse_rat("3/4") == make_rat(3, 4));
  REQUIRE(parse_rat("-6/4") == make_rat(-3, 2));
  REQUIRE(parse_rat("17") == 17);
  REQUIRE_THROWS_AS(parse_rat("x/2"), error);
  REQUIRE_THROWS_AS(parse_rat(""), error);
  REQUIRE_THROWS_AS(parse_rat("1/0"), error);
}

TEST_CASE("malformed series text is rejected", "[series][io]") {
  REQUIRE_THROWS_AS(from_text("not a series"), error);
}
