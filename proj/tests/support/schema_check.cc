// Copyright 2026 The AFN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "schema_check.h"

#include <stdexcept>

#include "synthetic_model.h"

namespace afn::testing {
namespace {

using nlohmann::json;

bool HasType(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  throw std::invalid_argument("schema: unsupported type " + type);
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void Check(const json& schema, const json& v, const std::string& at, std::vector<std::string>& errors) const {
    if (schema.contains("$ref")) {
      const std::string ref = schema["$ref"];
      const std::string prefix = "#/$defs/";
      if (ref.rfind(prefix, 0) != 0) throw std::invalid_argument("schema: unsupported $ref " + ref);
      Check(root_.at("$defs").at(ref.substr(prefix.size())), v, at, errors);
      return;
    }
    if (schema.contains("oneOf")) {
      int matches = 0;
      for (const json& alt : schema["oneOf"]) {
        std::vector<std::string> sub;
        Check(alt, v, at, sub);
        if (sub.empty()) ++matches;
      }
      if (matches != 1) errors.push_back(at + ": matches " + std::to_string(matches) + " oneOf branches");
    }
    if (schema.contains("const") && v != schema["const"]) {
      errors.push_back(at + ": expected " + schema["const"].dump());
    }
    if (schema.contains("enum")) {
      bool found = false;
      for (const json& e : schema["enum"]) found = found || e == v;
      if (!found) errors.push_back(at + ": " + v.dump() + " not in enum");
    }
    if (schema.contains("type") && !HasType(v, schema["type"])) {
      errors.push_back(at + ": expected " + schema["type"].get<std::string>());
      return;
    }
    if (v.is_number()) {
      if (schema.contains("minimum") && v.get<double>() < schema["minimum"].get<double>())
        errors.push_back(at + ": below minimum");
      if (schema.contains("maximum") && v.get<double>() > schema["maximum"].get<double>())
        errors.push_back(at + ": above maximum");
    }
    if (v.is_object()) {
      for (const json& key : schema.value("required", json::array())) {
        if (!v.contains(key.get<std::string>())) errors.push_back(at + ": missing " + key.get<std::string>());
      }
      const json props = schema.value("properties", json::object());
      for (const auto& [key, value] : v.items()) {
        if (props.contains(key)) {
          Check(props[key], value, at + "." + key, errors);
        } else if (schema.contains("additionalProperties") && schema["additionalProperties"] == false) {
          errors.push_back(at + ": unexpected key " + key);
        }
      }
    }
    if (v.is_array()) {
      if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>())
        errors.push_back(at + ": too few items");
      if (schema.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i)
          Check(schema["items"], v[i], at + "[" + std::to_string(i) + "]", errors);
      }
    }
  }

 private:
  const json& root_;
};

}  // namespace

std::vector<std::string> ValidateSchema(const json& schema, const json& doc) {
  std::vector<std::string> errors;
  Validator(schema).Check(schema, doc, "$", errors);
  return errors;
}

std::vector<std::string> ValidateReport(const std::string& kind, const std::string& text) {
  const json schema = json::parse(ReadFile(SchemaDir() / (kind + ".schema.json")));
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return {std::string("not JSON: ") + e.what()};
  }
  return ValidateSchema(schema, doc);
}

}  // namespace afn::testing
