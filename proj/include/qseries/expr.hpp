#pragma once

#include <cctype>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qseries/forms.hpp"

namespace qseries {

// Supplies a named series computed at least to the requested bound.
using FormProvider = std::function<TruncatedSeries(const std::string&, Exp)>;

namespace detail {

struct FormName {
  const char* name;
  bool is_eta;  // expandable by the eta kernel, so negative powers are fine
  Exp val;      // tracked valuation of the power-1, scale-1 form
};

// Longest-prefix matching relies on this listing every recognized name.
inline const std::vector<FormName>& form_names() {
  static const std::vector<FormName> t = {
      {"Pbar", true, 0},   {"R", true, -1},       {"psi", true, 1},
      {"rho", true, 0},    {"j2", true, -1},      {"E2", false, 0},
      {"E4", false, 0},    {"E6", false, 0},      {"E", false, 0},
      {"h", false, 0},     {"g", false, -1},      {"F", false, 1},
      {"theta0", false, 0}, {"theta_odd", false, 1}, {"Sbar", false, 1},
      {"S2", false, 7},    {"Mbar", false, 0},    {"M2spt", false, 1},
      {"M2", false, -1},   {"spt", false, 1},
  };
  return t;
}

inline bool iprefix(const std::string& s, size_t at, const char* name) {
  size_t i = 0;
  for (; name[i] != '\0'; ++i) {
    if (at + i >= s.size()) return false;
    if (std::tolower(static_cast<unsigned char>(s[at + i])) !=
        std::tolower(static_cast<unsigned char>(name[i])))
      return false;
  }
  return true;
}

struct ExprFactor {
  const FormName* form = nullptr;
  Exp scale = 1;
  long power = 1;
};

inline std::vector<ExprFactor> parse_form_expr(const std::string& text) {
  std::vector<ExprFactor> factors;
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  while (true) {
    skip_ws();
    if (i >= text.size())
      throw error("malformed form expression: expected a form name");
    size_t start = i;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
      ++i;
    std::string token = text.substr(start, i - start);
    if (token.empty())
      throw error("malformed form expression: unexpected character '" +
                  std::string(1, text[start]) + "'");

    // Split the token into the longest known name plus a digit-only
    // rescale suffix ("rho8" dilates rho by 8).
    ExprFactor f;
    size_t best = 0;
    for (const auto& fn : form_names()) {
      size_t len = std::char_traits<char>::length(fn.name);
      if (len <= best || len > token.size()) continue;
      if (!iprefix(token, 0, fn.name)) continue;
      bool digits = true;
      for (size_t k = len; k < token.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(token[k]))) {
          digits = false;
          break;
        }
      if (!digits) continue;
      f.form = &fn;
      best = len;
    }
    if (f.form == nullptr) throw error("unknown form name: " + token);
    if (best < token.size()) {
      f.scale = 0;
      for (size_t k = best; k < token.size(); ++k) {
        f.scale = f.scale * 10 + (token[k] - '0');
        if (f.scale > 1000000)
          throw error("malformed form expression: rescale factor too large");
      }
      if (f.scale < 1)
        throw error("malformed form expression: rescale factor must be positive");
    }
    skip_ws();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip_ws();
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
      }
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
        throw error("malformed form expression: expected an integer power");
      long p = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        p = p * 10 + (text[i++] - '0');
        if (p > 1000000)
          throw error("malformed form expression: power too large");
      }
      f.power = neg ? -p : p;
    }
    factors.push_back(f);
    skip_ws();
    if (i >= text.size()) break;
    if (text[i] != '*')
      throw error("malformed form expression: unexpected character '" +
                  std::string(1, text[i]) + "'");
    ++i;
  }
  return factors;
}

}  // namespace detail

// Evaluate a product of named forms with integer powers and rescale
// suffixes, e.g. "E8*R^-7" or "rho8*R^-15", on the window [val, bound).
// Eta-quotient factors are merged and expanded directly; everything else
// is fetched through the provider.
inline TruncatedSeries eval_form_expr(const std::string& text, Exp bound,
                                      const FormProvider& provider) {
  {
    std::string trimmed;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c)))
        trimmed += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (trimmed == "zero") return TruncatedSeries::zero();
  }
  auto factors = detail::parse_form_expr(text);

  EtaQuotient eta;
  bool have_eta = false;
  struct Piece {
    const detail::FormName* form;
    Exp scale;
    long power;
    Exp val;
  };
  std::vector<Piece> pieces;
  for (const auto& f : factors) {
    if (f.power == 0) continue;
    if (f.form->is_eta) {
      eta = eta.times(
          EtaQuotient(detail::quotient_terms(f.form->name)).rescaled(f.scale).pow(f.power));
      have_eta = true;
      continue;
    }
    if (f.power < 0)
      throw error("negative power requires an eta quotient form");
    pieces.push_back(Piece{f.form, f.scale, f.power, f.scale * f.power * f.form->val});
  }

  Exp total_val = 0;
  Exp eta_val = 0;
  if (have_eta) {
    eta_val = eta.lead_exponent();
    total_val += eta_val;
  }
  for (const auto& p : pieces) total_val += p.val;
  if (bound <= total_val) throw error("window too small");

  std::vector<TruncatedSeries> parts;
  if (have_eta) parts.push_back(eta_expand(eta, bound - total_val + eta_val));
  for (const auto& p : pieces) {
    Exp b = bound - total_val + p.val;
    Exp base_bound = ceil_div(b, p.scale) - (p.power - 1) * p.form->val;
    base_bound = std::max(base_bound, p.form->val + 1);
    TruncatedSeries s = provider(p.form->name, base_bound);
    if (p.power != 1) s = pow_int(s, p.power);
    if (p.scale != 1) s = rescale(s, p.scale);
    parts.push_back(std::move(s));
  }
  if (parts.empty()) return restrict_to(TruncatedSeries::one(), 0, bound);
  TruncatedSeries acc = std::move(parts.front());
  for (size_t i = 1; i < parts.size(); ++i) acc = mul(acc, parts[i]);
  return restrict_to(acc, total_val, bound);
}

}  // namespace qseries
