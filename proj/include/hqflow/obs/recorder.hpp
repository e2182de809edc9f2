#pragma once

#include "hqflow/engine/engine.hpp"
#include "hqflow/obs/metrics.hpp"

namespace hqflow::obs {

/// Bridges engine events onto the metrics registry. Attach via
/// engine.add_observer(recorder.callback()).
class EventRecorder {
 public:
  explicit EventRecorder(MetricsRegistry& registry) : registry_(registry) {}

  std::function<void(const engine::Event&)> callback() {
    return [this](const engine::Event& e) { record(e); };
  }

  void record(const engine::Event& event);

 private:
  MetricsRegistry& registry_;
  int completedRuns_ = 0;
};

}  // namespace hqflow::obs
