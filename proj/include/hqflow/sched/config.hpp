#pragma once

#include <optional>
#include <string_view>

#include "hqflow/common/diagnostics.hpp"
#include "hqflow/sched/scheduler.hpp"

namespace hqflow::sched {

struct QueueConfigResult {
  std::optional<Scheduler> scheduler;
  Diagnostics diagnostics;
  Diagnostics warnings;  // e.g. a flavor whose selector matches no node
  bool ok() const { return scheduler.has_value() && diagnostics.empty(); }
};

/// Loads a multi-document queue configuration: ResourceFlavor, ClusterQueue
/// and LocalQueue documents in any order. When `cluster` is given, flavors
/// matching zero nodes produce warnings.
QueueConfigResult load_queue_config(std::string_view text, const cluster::ClusterState* cluster = nullptr);

}  // namespace hqflow::sched
