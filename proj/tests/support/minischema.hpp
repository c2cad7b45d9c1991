#pragma once

// Just enough of JSON Schema draft-07 to check the documents this project
// emits: type, enum, required, properties, additionalProperties, items,
// pattern, anyOf. Returns the first violation as "<path>: <reason>", or an
// empty string when the instance validates.

#include <json.hpp>

#include <regex>
#include <string>

namespace minischema {

using json = nlohmann::ordered_json;

inline bool type_matches(const json& inst, const std::string& t) {
  if (t == "object") return inst.is_object();
  if (t == "array") return inst.is_array();
  if (t == "string") return inst.is_string();
  if (t == "integer") return inst.is_number_integer();
  if (t == "number") return inst.is_number();
  if (t == "boolean") return inst.is_boolean();
  if (t == "null") return inst.is_null();
  return false;
}

inline std::string validate(const json& inst, const json& schema,
                            const std::string& path = "$") {
  if (schema.is_boolean()) return schema.get<bool>() ? "" : path + ": forbidden";
  if (!schema.is_object()) return path + ": unsupported schema node";

  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(inst, t.get<std::string>());
    } else if (t.is_array()) {
      for (const auto& alt : t)
        if (alt.is_string() && type_matches(inst, alt.get<std::string>()))
          ok = true;
    }
    if (!ok) return path + ": wrong type, expected " + t.dump();
  }

  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema["enum"])
      if (v == inst) ok = true;
    if (!ok) return path + ": value not in enum";
  }

  if (schema.contains("pattern") && inst.is_string()) {
    std::regex re(schema["pattern"].get<std::string>());
    if (!std::regex_search(inst.get<std::string>(), re))
      return path + ": pattern mismatch";
  }

  if (schema.contains("anyOf")) {
    bool ok = false;
    for (const auto& alt : schema["anyOf"])
      if (validate(inst, alt, path).empty()) ok = true;
    if (!ok) return path + ": no anyOf branch matched";
  }

  if (inst.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!inst.contains(key.get<std::string>()))
          return path + ": missing required key " + key.get<std::string>();
    const json* props =
        schema.contains("properties") ? &schema["properties"] : nullptr;
    for (const auto& [key, value] : inst.items()) {
      if (props != nullptr && props->contains(key)) {
        std::string err = validate(value, (*props)[key], path + "." + key);
        if (!err.empty()) return err;
      } else if (schema.contains("additionalProperties")) {
        const json& ap = schema["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>())
          return path + ": unexpected key " + key;
        if (!ap.is_boolean()) {
          std::string err = validate(value, ap, path + "." + key);
          if (!err.empty()) return err;
        }
      }
    }
  }

  if (inst.is_array() && schema.contains("items")) {
    size_t i = 0;
    for (const auto& item : inst) {
      std::string err =
          validate(item, schema["items"], path + "[" + std::to_string(i) + "]");
      if (!err.empty()) return err;
      ++i;
    }
  }

  return "";
}

}  // namespace minischema
