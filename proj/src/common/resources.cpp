#include "hqflow/common/resources.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace hqflow {

void ResourceVector::add(const ResourceVector& other) {
  for (const auto& [k, v] : other.amounts) amounts[k] += v;
}

void ResourceVector::sub(const ResourceVector& other) {
  for (const auto& [k, v] : other.amounts) amounts[k] -= v;
}

bool ResourceVector::fits_within(const ResourceVector& within) const {
  for (const auto& [k, v] : amounts) {
    if (v > within.get(k)) return false;
  }
  return true;
}

bool ResourceVector::covered_by(const ResourceVector& covered) const {
  for (const auto& [k, v] : amounts) {
    if (v == 0) continue;
    if (covered.amounts.find(k) == covered.amounts.end()) return false;
  }
  return true;
}

bool ResourceVector::non_negative() const {
  for (const auto& [k, v] : amounts) {
    (void)k;
    if (v < 0) return false;
  }
  return true;
}

std::string ResourceVector::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : amounts) {
    if (!first) os << ", ";
    first = false;
    os << k << ": " << v;
  }
  os << "}";
  return os.str();
}

namespace {

struct Suffix {
  const char* text;
  std::int64_t multiplier;
};

constexpr Suffix kMemorySuffixes[] = {
    {"Ki", 1024LL},
    {"Mi", 1024LL * 1024},
    {"Gi", 1024LL * 1024 * 1024},
    {"Ti", 1024LL * 1024 * 1024 * 1024},
    {"K", 1000LL},
    {"M", 1000LL * 1000},
    {"G", 1000LL * 1000 * 1000},
    {"T", 1000LL * 1000 * 1000 * 1000},
};

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool dot = false;
  for (char c : text) {
    if (c == '.') {
      if (dot) return std::nullopt;
      dot = true;
    } else if (!std::isdigit(static_cast<unsigned char>(c))) {
      return std::nullopt;
    }
  }
  if (text.front() == '.' || text.back() == '.') return std::nullopt;
  return std::stod(std::string(text));
}

}  // namespace

std::optional<std::int64_t> parse_quantity(const std::string& resource, std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (resource == "cpu") {
    if (text.back() == 'm') {
      auto n = parse_number(text.substr(0, text.size() - 1));
      if (!n || *n != std::floor(*n)) return std::nullopt;
      return static_cast<std::int64_t>(*n);
    }
    auto n = parse_number(text);
    if (!n) return std::nullopt;
    double milli = *n * 1000.0;
    if (milli != std::floor(milli)) return std::nullopt;
    return static_cast<std::int64_t>(milli);
  }
  if (resource == "memory") {
    for (const auto& s : kMemorySuffixes) {
      std::string_view suf(s.text);
      if (text.size() > suf.size() && text.substr(text.size() - suf.size()) == suf) {
        auto n = parse_number(text.substr(0, text.size() - suf.size()));
        if (!n) return std::nullopt;
        double bytes = *n * static_cast<double>(s.multiplier);
        if (bytes != std::floor(bytes)) return std::nullopt;
        return static_cast<std::int64_t>(bytes);
      }
    }
    auto n = parse_number(text);
    if (!n || *n != std::floor(*n)) return std::nullopt;
    return static_cast<std::int64_t>(*n);
  }
  // device / claim counts
  auto n = parse_number(text);
  if (!n || *n != std::floor(*n)) return std::nullopt;
  return static_cast<std::int64_t>(*n);
}

std::string format_quantity(const std::string& resource, std::int64_t amount) {
  std::ostringstream os;
  if (resource == "cpu") {
    if (amount % 1000 == 0) {
      os << amount / 1000;
    } else {
      os << amount << "m";
    }
    return os.str();
  }
  if (resource == "memory") {
    constexpr std::int64_t gi = 1024LL * 1024 * 1024;
    constexpr std::int64_t mi = 1024LL * 1024;
    constexpr std::int64_t ki = 1024LL;
    if (amount != 0 && amount % gi == 0) {
      os << amount / gi << "Gi";
    } else if (amount != 0 && amount % mi == 0) {
      os << amount / mi << "Mi";
    } else if (amount != 0 && amount % ki == 0) {
      os << amount / ki << "Ki";
    } else {
      os << amount;
    }
    return os.str();
  }
  os << amount;
  return os.str();
}

}  // namespace hqflow
