#pragma once

// Strict field access for the JSON document schemas: every field must be
// consumed, and unknown fields are rejected with their location.

#include <initializer_list>
#include <string>
#include <string_view>

#include "gridline/errors.hpp"
#include "json.hpp"

namespace gridline::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline Json parse_json_text(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& err) {
    throw ParseError(std::string(what) + ": malformed JSON: " + err.what());
  }
}

class FieldReader {
 public:
  FieldReader(const Json& object, std::string location)
      : object_(object), location_(std::move(location)) {
    if (!object_.is_object()) fail("expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> fields) const {
    for (const auto& [key, value] : object_.items()) {
      bool known = false;
      for (auto field : fields) known = known || key == field;
      if (!known) fail("unknown field \"" + key + "\"");
    }
  }

  bool has(std::string_view field) const { return object_.contains(field); }

  const Json& at(std::string_view field) const {
    auto it = object_.find(field);
    if (it == object_.end()) fail("missing field \"" + std::string(field) + "\"");
    return *it;
  }

  double number(std::string_view field) const {
    const Json& value = at(field);
    if (!value.is_number()) fail_field(field, "expected a number");
    return value.get<double>();
  }

  std::string string(std::string_view field) const {
    const Json& value = at(field);
    if (!value.is_string()) fail_field(field, "expected a string");
    return value.get<std::string>();
  }

  const Json& array(std::string_view field) const {
    const Json& value = at(field);
    if (!value.is_array()) fail_field(field, "expected an array");
    return value;
  }

  std::string child(std::string_view field, std::size_t index) const {
    return location_ + "." + std::string(field) + "[" + std::to_string(index) + "]";
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(location_ + ": " + message);
  }

  [[noreturn]] void fail_field(std::string_view field, const std::string& message) const {
    throw ParseError(location_ + "." + std::string(field) + ": " + message);
  }

 private:
  const Json& object_;
  std::string location_;
};

}  // namespace gridline::detail
