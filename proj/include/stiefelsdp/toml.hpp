#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stiefelsdp/errors.hpp"

// Minimal TOML subset for benchmark configs: [tables], bare keys,
// strings, integers, floats, booleans, and (nested) arrays. Keys are
// flattened to "table.key". Enough for every documented config field;
// not a general TOML implementation.

namespace stiefel::toml {

struct Value {
  enum class Kind { integer, floating, boolean, string, array };
  Kind kind = Kind::integer;
  std::int64_t i = 0;
  double d = 0.0;
  bool b = false;
  std::string s;
  std::vector<Value> arr;

  std::int64_t as_int() const;
  double as_double() const;  // accepts integers
  bool as_bool() const;
  const std::string& as_string() const;
  const std::vector<Value>& as_array() const;
};

using Table = std::map<std::string, Value>;

Table parse(const std::string& text);
Table parse_file(const std::string& path);

}  // namespace stiefel::toml
