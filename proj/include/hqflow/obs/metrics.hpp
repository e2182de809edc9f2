#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqflow::obs {

enum class MetricType { Counter, Gauge, Histogram };

using LabelSet = std::map<std::string, std::string>;

struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Counter/gauge/histogram registry with text exposition export
/// (format version 0.0.4). Families are declared up front; export prints
/// HELP/TYPE headers for every family and one sample line per point,
/// stamped with the registry's virtual time. Counters reject decrements,
/// histograms count cumulatively per bucket.
class MetricsRegistry {
 public:
  void declare(const std::string& name, MetricType type, const std::string& help,
               std::vector<double> bucketBounds = {});

  void counter_add(const std::string& name, const LabelSet& labels, double v = 1.0);
  void gauge_set(const std::string& name, const LabelSet& labels, double v);
  void gauge_add(const std::string& name, const LabelSet& labels, double v);
  void observe(const std::string& name, const LabelSet& labels, double v);

  void set_virtual_time_ns(std::int64_t tNs) { virtualTimeNs_ = tNs; }
  std::int64_t virtual_time_ns() const { return virtualTimeNs_; }

  std::optional<double> value(const std::string& name, const LabelSet& labels = {}) const;

  /// Exposition text: families sorted by name, samples by label signature.
  std::string export_text() const;

  /// Declares the families the engine records into.
  static MetricsRegistry standard();

 private:
  struct Histogram {
    std::vector<double> bounds;
    std::vector<std::uint64_t> counts;  // one per bound, +Inf implicit via total
    std::uint64_t total = 0;
    double sum = 0.0;
  };
  struct Family {
    MetricType type = MetricType::Gauge;
    std::string help;
    std::vector<double> bucketBounds;
    std::map<std::string, double> points;        // label signature -> value
    std::map<std::string, Histogram> histograms;
    std::map<std::string, LabelSet> labelSets;   // signature -> labels
  };

  Family& family_for(const std::string& name, MetricType expected);
  static std::string signature(const LabelSet& labels);

  std::map<std::string, Family> families_;
  std::int64_t virtualTimeNs_ = 0;
};

}  // namespace hqflow::obs
