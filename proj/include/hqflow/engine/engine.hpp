#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hqflow/cluster/cluster.hpp"
#include "hqflow/engine/artifact_store.hpp"
#include "hqflow/engine/payload.hpp"
#include "hqflow/sched/scheduler.hpp"
#include "hqflow/wfspec/graph.hpp"
#include "hqflow/wfspec/parse.hpp"

namespace hqflow::engine {

enum class TaskState { Pending, Active, Succeeded, Failed };
enum class RunState { Running, Succeeded, Failed, Deadlocked };

const char* to_string(TaskState s);
const char* to_string(RunState s);

struct TaskInstance {
  int id = 0;
  std::string name;
  std::string templateRef;
  TaskState state = TaskState::Pending;
  std::int64_t enqueuedNs = -1;
  std::int64_t startedNs = -1;
  std::int64_t finishedNs = -1;
  int attempt = 0;
  std::string node;
  std::string queue;  // local queue, empty for direct-scheduled tasks
  std::string failureMessage;
  // internals
  bool dispatched = false;            // handed to scheduler or direct pool
  std::optional<cluster::Binding> directBinding;
};

enum class EventKind {
  RunSubmitted,
  TaskEnqueued,
  TaskAdmitted,
  TaskStateChanged,
  NodeAllocatable,
  RunFinished,
};

const char* to_string(EventKind k);

struct Event {
  std::uint64_t seq = 0;
  std::int64_t tNs = 0;
  EventKind kind = EventKind::TaskStateChanged;
  std::string runId;
  std::string task;
  std::string node;
  std::string nodeType;  // resource_type label of `node`
  std::string queue;
  std::string flavor;
  std::string detail;
  TaskState from = TaskState::Pending;
  TaskState to = TaskState::Pending;
  std::int64_t durationNs = 0;
  std::map<std::string, std::int64_t> allocatable;  // NodeAllocatable
  int taskTotal = 0;                                // RunSubmitted
  RunState runState = RunState::Running;            // RunFinished
  std::int64_t bytesRead = 0;                       // RunFinished
  std::int64_t bytesWritten = 0;

  std::string to_json_line() const;
};

struct DeadlockError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunReport {
  std::string runId;
  std::string specHash;
  RunState state = RunState::Running;
  std::int64_t makespanNs = 0;
  std::map<std::string, int> stateCounts;  // by state name
  struct TaskRow {
    std::string name;
    std::string templateRef;
    std::string state;
    std::int64_t enqueuedNs = -1;
    std::int64_t startedNs = -1;
    std::int64_t finishedNs = -1;
    std::string node;
    std::string queue;
    int attempt = 0;
  };
  std::vector<TaskRow> tasks;
  struct ArtifactRow {
    std::string path;  // volume-rooted
    std::int64_t bytes = 0;
    std::string fnv64;
  };
  std::vector<ArtifactRow> artifacts;
  std::map<std::string, sched::Scheduler::QueueCounts> queues;
  std::int64_t artifactBytesRead = 0;
  std::int64_t artifactBytesWritten = 0;
  std::string workloadResultJson;  // result.json content when present

  /// Canonical JSON. `includeRunId=false` gives the run-identity-free form
  /// used by determinism comparisons across resubmissions.
  std::string to_json(bool includeRunId = true) const;
};

struct WorkflowRun {
  std::string runId;
  std::string specHash;
  std::string specText;
  wfspec::WorkflowSpec spec;
  RunState state = RunState::Running;
  std::vector<TaskInstance> tasks;
  std::vector<wfspec::TaskNode> nodes;  // parallel to tasks
  ArtifactStore artifacts;
  std::vector<Event> events;
  std::int64_t makespanNs = 0;

  std::map<TaskState, int> census() const;
};

/// Deterministic discrete-event engine driving a task graph to completion
/// over the simulated cluster through the admission scheduler. Runs execute
/// one at a time; the virtual clock restarts at zero per run.
class Engine {
 public:
  Engine(cluster::ClusterState cluster, sched::Scheduler scheduler, RunConfig config = {});

  PayloadRegistry& payloads() { return payloads_; }
  void set_secrets(cluster::SecretData secrets);
  void add_observer(std::function<void(const Event&)> observer);

  /// Validates nothing: the spec must already be parsed/validated.
  /// Expansion errors surface as wfspec diagnostics.
  std::string submit(const wfspec::WorkflowSpec& spec, const std::string& specText);

  /// Advances the run by one event batch; returns the events emitted.
  /// Empty result on a non-terminal run means deadlock.
  std::vector<Event> step(const std::string& runId);

  RunReport run_to_completion(const std::string& runId);

  const WorkflowRun* find_run(const std::string& runId) const;
  WorkflowRun* find_run(const std::string& runId);
  const cluster::ClusterState& cluster() const { return cluster_; }
  const sched::Scheduler& scheduler() const { return sched_; }
  const RunConfig& config() const { return config_; }

 private:
  struct Completion {
    std::int64_t finishNs;
    std::uint64_t order;
    int taskId;
    bool ok;
    double costSeconds;
    std::string failureMessage;
  };

  Event& emit(WorkflowRun& run, EventKind kind);
  void change_state(WorkflowRun& run, TaskInstance& task, TaskState to);
  void emit_allocatable(WorkflowRun& run, const std::string& nodeName);
  void start_task(WorkflowRun& run, TaskInstance& task, const std::string& nodeName,
                  const std::string& flavor, std::optional<cluster::Binding> directBinding);
  void finish_task(WorkflowRun& run, const Completion& completion);
  bool dispatch_ready(WorkflowRun& run);
  bool preds_succeeded(const WorkflowRun& run, const TaskInstance& task) const;
  std::string task_key(const WorkflowRun& run, const TaskInstance& task) const;
  void finalize(WorkflowRun& run);
  RunReport build_report(const WorkflowRun& run) const;

  cluster::ClusterState cluster_;
  sched::Scheduler sched_;
  RunConfig config_;
  PayloadRegistry payloads_;
  cluster::SecretData secrets_;
  std::vector<std::unique_ptr<WorkflowRun>> runs_;
  std::vector<std::function<void(const Event&)>> observers_;
  std::vector<Completion> pending_;  // completion queue, ordered (finishNs, order)
  std::uint64_t nextCompletionOrder_ = 1;
  std::uint64_t nextEventSeq_ = 1;
  int nextRunNumber_ = 1;
};

}  // namespace hqflow::engine
