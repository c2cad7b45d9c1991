#pragma once

#include <string>

#include <json.hpp>

#include "qseries/series.hpp"

namespace qseries {

using json = nlohmann::ordered_json;

// Minimal display form: integers drop the "/1".
inline std::string rat_str_min(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_str();
}

// {kind, valuation, bound, entries}. An unbounded window serializes its
// bound as null so the integer field never has to hold a sentinel.
inline json series_to_json(const TruncatedSeries& f) {
  json out;
  out["kind"] = "series";
  out["valuation"] = static_cast<long long>(f.valuation());
  if (f.bound() == kUnbounded)
    out["bound"] = nullptr;
  else
    out["bound"] = static_cast<long long>(f.bound());
  json entries = json::array();
  for (const auto& [e, c] : f.entries()) {
    json item;
    item["exponent"] = static_cast<long long>(e);
    item["value"] = rat_str_min(c);
    entries.push_back(std::move(item));
  }
  out["entries"] = std::move(entries);
  return out;
}

inline TruncatedSeries series_from_json(const json& j) {
  auto fail = [](const std::string& why) -> void {
    throw error("malformed series json: " + why);
  };
  if (!j.is_object()) fail("expected an object");
  if (!j.contains("kind") || j["kind"] != "series") fail("kind must be \"series\"");
  if (!j.contains("valuation") || !j["valuation"].is_number_integer())
    fail("valuation must be an integer");
  if (!j.contains("bound")) fail("missing bound");
  Exp val = j["valuation"].get<long long>();
  Exp bound = kUnbounded;
  if (!j["bound"].is_null()) {
    if (!j["bound"].is_number_integer()) fail("bound must be an integer or null");
    bound = j["bound"].get<long long>();
  }
  if (!j.contains("entries") || !j["entries"].is_array())
    fail("entries must be an array");
  std::vector<std::pair<Exp, Rat>> entries;
  for (const auto& item : j["entries"]) {
    if (!item.is_object() || !item.contains("exponent") ||
        !item["exponent"].is_number_integer() || !item.contains("value") ||
        !item["value"].is_string())
      fail("each entry needs an integer exponent and a string value");
    Exp e = item["exponent"].get<long long>();
    Rat c = parse_rat(item["value"].get<std::string>());
    entries.emplace_back(e, std::move(c));
  }
  try {
    return TruncatedSeries(val, bound, std::move(entries));
  } catch (const error& err) {
    fail(err.what());
  }
  return TruncatedSeries::zero();  // unreachable
}

}  // namespace qseries
