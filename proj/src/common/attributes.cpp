#include "hqflow/common/attributes.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace hqflow {

std::string attr_to_string(const AttrValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    std::ostringstream os;
    os << *d;
    return os.str();
  }
  return std::get<std::string>(v);
}

AttrValue attr_from_string(const std::string& s) {
  if (s.empty()) return s;
  {
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (ec == std::errc() && p == s.data() + s.size()) return i;
  }
  {
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size() && end != s.c_str()) return d;
  }
  return s;
}

namespace {

std::optional<double> numeric(const AttrValue& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  return std::nullopt;
}

}  // namespace

bool AttributePredicate::matches(const AttrMap& attrs) const {
  auto it = attrs.find(attribute);
  if (it == attrs.end()) return false;
  if (min || max) {
    auto n = numeric(it->second);
    if (!n) return false;
    if (min && *n < *min) return false;
    if (max && *n > *max) return false;
  }
  if (equals && attr_to_string(it->second) != *equals) return false;
  return true;
}

}  // namespace hqflow
