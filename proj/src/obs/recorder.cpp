#include "hqflow/obs/recorder.hpp"

namespace hqflow::obs {

using engine::Event;
using engine::EventKind;
using engine::TaskState;

void EventRecorder::record(const Event& event) {
  registry_.set_virtual_time_ns(event.tNs);
  switch (event.kind) {
    case EventKind::RunSubmitted:
      registry_.gauge_add("hqflow_tasks", {{"state", "pending"}}, event.taskTotal);
      break;
    case EventKind::TaskEnqueued:
      registry_.gauge_add("hqflow_queue_pending", {{"queue", event.queue}}, 1);
      break;
    case EventKind::TaskAdmitted:
      registry_.gauge_add("hqflow_queue_pending", {{"queue", event.queue}}, -1);
      registry_.gauge_add("hqflow_queue_admitted", {{"queue", event.queue}}, 1);
      break;
    case EventKind::TaskStateChanged:
      registry_.gauge_add("hqflow_tasks", {{"state", to_string(event.from)}}, -1);
      registry_.gauge_add("hqflow_tasks", {{"state", to_string(event.to)}}, 1);
      if (event.to == TaskState::Succeeded || event.to == TaskState::Failed) {
        if (!event.queue.empty()) {
          registry_.gauge_add("hqflow_queue_admitted", {{"queue", event.queue}}, -1);
        }
        if (event.nodeType == "qpu") {
          registry_.observe("hqflow_qpu_latency_seconds", {},
                            static_cast<double>(event.durationNs) / 1e9);
        }
      }
      break;
    case EventKind::NodeAllocatable:
      for (const auto& [resource, amount] : event.allocatable) {
        registry_.gauge_set("hqflow_node_allocatable", {{"node", event.node}, {"resource", resource}},
                            static_cast<double>(amount));
      }
      break;
    case EventKind::RunFinished:
      if (event.runState == engine::RunState::Succeeded) {
        registry_.counter_add("hqflow_workflow_completed_total", {});
        ++completedRuns_;
        if (event.tNs > 0) {
          registry_.gauge_set("hqflow_workflow_throughput", {},
                              static_cast<double>(completedRuns_) /
                                  (static_cast<double>(event.tNs) / 1e9));
        }
      }
      registry_.counter_add("hqflow_artifact_bytes_read_total", {},
                            static_cast<double>(event.bytesRead));
      registry_.counter_add("hqflow_artifact_bytes_written_total", {},
                            static_cast<double>(event.bytesWritten));
      break;
  }
}

}  // namespace hqflow::obs
