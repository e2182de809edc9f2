#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace hqflow {

/// Resource amounts in canonical units: cpu in millicores, memory in bytes,
/// everything else (device counts, claim counts) as plain counts.
struct ResourceVector {
  std::map<std::string, std::int64_t> amounts;

  std::int64_t get(const std::string& name) const {
    auto it = amounts.find(name);
    return it == amounts.end() ? 0 : it->second;
  }
  void add(const ResourceVector& other);
  void sub(const ResourceVector& other);
  /// Every entry of *this fits inside `within` (missing entries count as 0).
  bool fits_within(const ResourceVector& within) const;
  /// Every requested resource name appears in `covered` (amount irrelevant).
  bool covered_by(const ResourceVector& covered) const;
  bool non_negative() const;
  bool empty() const { return amounts.empty(); }
  bool operator==(const ResourceVector&) const = default;

  std::string str() const;
};

/// Parses the `500m` / `1Gi` quantity grammar used in the config files.
/// The interpretation depends on the resource name: `cpu` quantities are in
/// cores (suffix `m` for millicores), `memory` in bytes with binary (Ki, Mi,
/// Gi, Ti) or decimal (K, M, G, T) suffixes, all other resources are plain
/// non-negative integers.
std::optional<std::int64_t> parse_quantity(const std::string& resource, std::string_view text);

/// Canonical rendering of a quantity (inverse of parse for exact values).
std::string format_quantity(const std::string& resource, std::int64_t amount);

}  // namespace hqflow
