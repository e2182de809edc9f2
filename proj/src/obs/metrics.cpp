#include "hqflow/obs/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace hqflow::obs {

namespace {

bool valid_metric_name(const std::string& name) {
  if (name.empty()) return false;
  auto head = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':';
  };
  if (!head(name[0])) return false;
  for (char c : name) {
    if (!head(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

bool valid_label_name(const std::string& name) {
  if (name.empty()) return false;
  auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!head(name[0])) return false;
  for (char c : name) {
    if (!head(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

std::string escape_label_value(const std::string& v) {
  std::string out;
  for (char c : v) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string escape_help(const std::string& v) {
  std::string out;
  for (char c : v) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "+Inf" : "-Inf";
  if (std::isnan(v)) return "NaN";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

const char* type_name(MetricType t) {
  switch (t) {
    case MetricType::Counter: return "counter";
    case MetricType::Gauge: return "gauge";
    case MetricType::Histogram: return "histogram";
  }
  return "untyped";
}

std::string render_labels(const LabelSet& labels) {
  if (labels.empty()) return "";
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : labels) {
    if (!first) out += ",";
    first = false;
    out += k + "=\"" + escape_label_value(v) + "\"";
  }
  out += "}";
  return out;
}

}  // namespace

std::string MetricsRegistry::signature(const LabelSet& labels) { return render_labels(labels); }

void MetricsRegistry::declare(const std::string& name, MetricType type, const std::string& help,
                              std::vector<double> bucketBounds) {
  if (!valid_metric_name(name)) throw MetricError("invalid metric name '" + name + "'");
  if (families_.count(name)) throw MetricError("metric '" + name + "' already declared");
  Family f;
  f.type = type;
  f.help = help;
  std::sort(bucketBounds.begin(), bucketBounds.end());
  f.bucketBounds = std::move(bucketBounds);
  families_[name] = std::move(f);
}

MetricsRegistry::Family& MetricsRegistry::family_for(const std::string& name, MetricType expected) {
  auto it = families_.find(name);
  if (it == families_.end()) throw MetricError("metric '" + name + "' is not declared");
  if (it->second.type != expected) throw MetricError("metric '" + name + "' has a different type");
  return it->second;
}

void MetricsRegistry::counter_add(const std::string& name, const LabelSet& labels, double v) {
  if (v < 0) throw MetricError("counter '" + name + "' cannot decrease");
  for (const auto& [k, value] : labels) {
    (void)value;
    if (!valid_label_name(k)) throw MetricError("invalid label name '" + k + "'");
  }
  Family& f = family_for(name, MetricType::Counter);
  const std::string sig = signature(labels);
  f.points[sig] += v;
  f.labelSets[sig] = labels;
}

void MetricsRegistry::gauge_set(const std::string& name, const LabelSet& labels, double v) {
  Family& f = family_for(name, MetricType::Gauge);
  const std::string sig = signature(labels);
  f.points[sig] = v;
  f.labelSets[sig] = labels;
}

void MetricsRegistry::gauge_add(const std::string& name, const LabelSet& labels, double v) {
  Family& f = family_for(name, MetricType::Gauge);
  const std::string sig = signature(labels);
  f.points[sig] += v;
  f.labelSets[sig] = labels;
}

void MetricsRegistry::observe(const std::string& name, const LabelSet& labels, double v) {
  Family& f = family_for(name, MetricType::Histogram);
  const std::string sig = signature(labels);
  Histogram& h = f.histograms[sig];
  if (h.counts.empty()) h.counts.assign(f.bucketBounds.size(), 0);
  f.labelSets[sig] = labels;
  for (std::size_t i = 0; i < f.bucketBounds.size(); ++i) {
    if (v <= f.bucketBounds[i]) ++h.counts[i];
  }
  ++h.total;
  h.sum += v;
}

std::optional<double> MetricsRegistry::value(const std::string& name, const LabelSet& labels) const {
  auto it = families_.find(name);
  if (it == families_.end()) return std::nullopt;
  auto pIt = it->second.points.find(signature(labels));
  if (pIt == it->second.points.end()) return std::nullopt;
  return pIt->second;
}

std::string MetricsRegistry::export_text() const {
  std::ostringstream out;
  const std::int64_t tMs = virtualTimeNs_ / 1000000;
  for (const auto& [name, f] : families_) {
    out << "# HELP " << name << " " << escape_help(f.help) << "\n";
    out << "# TYPE " << name << " " << type_name(f.type) << "\n";
    if (f.type == MetricType::Histogram) {
      for (const auto& [sig, h] : f.histograms) {
        const LabelSet& base = f.labelSets.at(sig);
        std::uint64_t cumulative = 0;
        for (std::size_t i = 0; i < f.bucketBounds.size(); ++i) {
          cumulative = h.counts[i];
          LabelSet withLe = base;
          withLe["le"] = format_value(f.bucketBounds[i]);
          out << name << "_bucket" << render_labels(withLe) << " " << cumulative << " " << tMs << "\n";
        }
        LabelSet inf = base;
        inf["le"] = "+Inf";
        out << name << "_bucket" << render_labels(inf) << " " << h.total << " " << tMs << "\n";
        out << name << "_sum" << render_labels(base) << " " << format_value(h.sum) << " " << tMs << "\n";
        out << name << "_count" << render_labels(base) << " " << h.total << " " << tMs << "\n";
      }
    } else {
      for (const auto& [sig, value] : f.points) {
        out << name << render_labels(f.labelSets.at(sig)) << " " << format_value(value) << " " << tMs
            << "\n";
      }
    }
  }
  return out.str();
}

MetricsRegistry MetricsRegistry::standard() {
  MetricsRegistry r;
  r.declare("hqflow_tasks", MetricType::Gauge, "Number of tasks by lifecycle state.");
  r.declare("hqflow_node_allocatable", MetricType::Gauge,
            "Remaining allocatable amount per node and resource.");
  r.declare("hqflow_queue_pending", MetricType::Gauge, "Workloads waiting in each local queue.");
  r.declare("hqflow_queue_admitted", MetricType::Gauge, "Workloads admitted from each local queue.");
  r.declare("hqflow_qpu_latency_seconds", MetricType::Histogram,
            "Virtual duration of tasks executed on qpu nodes.", {0.5, 1.0, 2.0, 5.0, 10.0});
  r.declare("hqflow_workflow_completed_total", MetricType::Counter,
            "Workflows that reached the succeeded state.");
  r.declare("hqflow_workflow_throughput", MetricType::Gauge,
            "Completed workflows per virtual second.");
  r.declare("hqflow_artifact_bytes_read_total", MetricType::Counter,
            "Bytes read from the artifact store.");
  r.declare("hqflow_artifact_bytes_written_total", MetricType::Counter,
            "Bytes written to the artifact store.");
  return r;
}

}  // namespace hqflow::obs
