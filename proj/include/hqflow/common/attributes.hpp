#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

namespace hqflow {

/// Device attribute values are open-ended scalars (counts, budgets, window
/// names, vendor strings).
using AttrValue = std::variant<std::int64_t, double, std::string>;
using AttrMap = std::map<std::string, AttrValue>;

std::string attr_to_string(const AttrValue& v);
/// Types a raw scalar: integer, then float, else string.
AttrValue attr_from_string(const std::string& s);

/// Predicate over one attribute. `min`/`max` compare numerically and never
/// match non-numeric values; `equals` compares the canonical string form.
struct AttributePredicate {
  std::string attribute;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<std::string> equals;

  bool matches(const AttrMap& attrs) const;
  bool operator==(const AttributePredicate&) const = default;
};

}  // namespace hqflow
