#include <catch2/catch_amalgamated.hpp>

#include "qseries/expr.hpp"

using namespace qseries;

namespace {

TruncatedSeries eval(const std::string& text, Exp bound) {
  return eval_form_expr(text, bound, [](const std::string& name, Exp b) {
    return named_form(name, b);
  });
}

}  // namespace

TEST_CASE("names are case insensitive", "[expr]") {
  auto a = eval("pbar", 30);
  auto b = eval("Pbar", 30);
  REQUIRE(equal_on_window(a, b));
  REQUIRE(a.valuation() == 0);
  REQUIRE(a.bound() == 30);
  REQUIRE(a.coeff_at(5) == 24);
}

TEST_CASE("digit suffixes dilate the variable", "[expr]") {
  auto rho8 = eval("rho8", 40);
  REQUIRE(equal_on_window(rho8, rescale(named_form("rho", 5), 8)));

  // E8 is the weight 2 form dilated by 8; E2 stays the Eisenstein name.
  auto e8 = eval("E8", 40);
  REQUIRE(equal_on_window(e8, rescale(named_form("E", 5), 8)));
  auto e2 = eval("E2", 10);
  REQUIRE(e2.coeff_at(1) == -24);
  auto e216 = eval("E216", 40);
  REQUIRE(equal_on_window(e216, rescale(named_form("E2", 3), 16)));
}

TEST_CASE("negative powers expand through the eta kernel", "[expr]") {
  auto r15 = eval("R^-15", 40);
  auto to = named_form("theta_odd", 60);
  REQUIRE(equal_on_window(r15, pow_int(to, 15)));
  REQUIRE(r15.valuation() == 15);

  auto pbar7 = eval("Pbar^-7", 30);
  REQUIRE(pbar7.valuation() == 0);
  REQUIRE(pbar7.bound() == 30);
}

TEST_CASE("products mix eta and provided factors", "[expr]") {
  auto lhs = eval("E*Pbar^-7", 25);
  auto rhs = named_form("E", 25) * eval("Pbar^-7", 25);
  REQUIRE(equal_on_window(lhs, rhs));
  REQUIRE(lhs.valuation() == 0);
  REQUIRE(lhs.bound() == 25);

  // Eta factors merge into one quotient before expanding.
  auto mixed = eval("Pbar*psi", 30);
  auto sep = named_form("Pbar", 30) * named_form("psi", 30);
  REQUIRE(equal_on_window(mixed, sep));
  REQUIRE(mixed.valuation() == 1);

  auto sq = eval("F^2", 20);
  auto f = named_form("F", 19);
  REQUIRE(equal_on_window(sq, f * f));
  REQUIRE(sq.valuation() == 2);
  REQUIRE(sq.bound() == 20);
}

TEST_CASE("zero and empty products", "[expr]") {
  auto z = eval(" Zero ", 10);
  REQUIRE(z.bound() == kUnbounded);
  REQUIRE(z.entries().empty());

  auto unit = eval("E^0", 12);
  REQUIRE(unit.valuation() == 0);
  REQUIRE(unit.bound() == 12);
  REQUIRE(unit.coeff_at(0) == 1);
  REQUIRE(unit.coeff_at(5) == 0);
}

TEST_CASE("expression grammar errors", "[expr]") {
  REQUIRE_THROWS_WITH(eval("", 10),
                      "malformed form expression: expected a form name");
  REQUIRE_THROWS_WITH(eval("*E", 10),
                      "malformed form expression: unexpected character '*'");
  REQUIRE_THROWS_WITH(eval("E+R", 10),
                      "malformed form expression: unexpected character '+'");
  REQUIRE_THROWS_WITH(eval("rho0", 10),
                      "malformed form expression: rescale factor must be positive");
  REQUIRE_THROWS_WITH(eval("rho99999999", 10),
                      "malformed form expression: rescale factor too large");
  REQUIRE_THROWS_WITH(eval("E^x", 10),
                      "malformed form expression: expected an integer power");
  REQUIRE_THROWS_WITH(eval("E^99999999", 10),
                      "malformed form expression: power too large");
  REQUIRE_THROWS_WITH(eval("zorp", 10), "unknown form name: zorp");
  REQUIRE_THROWS_WITH(eval("F^-1", 10),
                      "negative power requires an eta quotient form");
  REQUIRE_THROWS_WITH(eval("psi", 1), "window too small");
}
