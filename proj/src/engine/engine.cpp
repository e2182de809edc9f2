#include "hqflow/engine/engine.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "hqflow/common/hash.hpp"

namespace hqflow::engine {

using nlohmann::json;

const char* to_string(TaskState s) {
  switch (s) {
    case TaskState::Pending: return "pending";
    case TaskState::Active: return "active";
    case TaskState::Succeeded: return "succeeded";
    case TaskState::Failed: return "failed";
  }
  return "?";
}

const char* to_string(RunState s) {
  switch (s) {
    case RunState::Running: return "running";
    case RunState::Succeeded: return "succeeded";
    case RunState::Failed: return "failed";
    case RunState::Deadlocked: return "deadlocked";
  }
  return "?";
}

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::RunSubmitted: return "run_submitted";
    case EventKind::TaskEnqueued: return "task_enqueued";
    case EventKind::TaskAdmitted: return "task_admitted";
    case EventKind::TaskStateChanged: return "task_state_changed";
    case EventKind::NodeAllocatable: return "node_allocatable";
    case EventKind::RunFinished: return "run_finished";
  }
  return "?";
}

std::string Event::to_json_line() const {
  json j;
  j["seq"] = seq;
  j["t_ns"] = tNs;
  j["event"] = to_string(kind);
  j["run"] = runId;
  switch (kind) {
    case EventKind::RunSubmitted:
      j["tasks"] = taskTotal;
      break;
    case EventKind::TaskEnqueued:
      j["task"] = task;
      j["queue"] = queue;
      break;
    case EventKind::TaskAdmitted:
      j["task"] = task;
      j["queue"] = queue;
      j["flavor"] = flavor;
      j["node"] = node;
      break;
    case EventKind::TaskStateChanged:
      j["task"] = task;
      j["from"] = to_string(from);
      j["to"] = to_string(to);
      if (!node.empty()) j["node"] = node;
      if (!nodeType.empty()) j["node_type"] = nodeType;
      if (durationNs > 0) j["duration_ns"] = durationNs;
      if (!detail.empty()) j["detail"] = detail;
      break;
    case EventKind::NodeAllocatable:
      j["node"] = node;
      j["allocatable"] = allocatable;
      break;
    case EventKind::RunFinished:
      j["state"] = to_string(runState);
      j["bytes_read"] = bytesRead;
      j["bytes_written"] = bytesWritten;
      break;
  }
  return j.dump();
}

std::map<TaskState, int> WorkflowRun::census() const {
  std::map<TaskState, int> counts{{TaskState::Pending, 0},
                                  {TaskState::Active, 0},
                                  {TaskState::Succeeded, 0},
                                  {TaskState::Failed, 0}};
  for (const auto& t : tasks) ++counts[t.state];
  return counts;
}

Engine::Engine(cluster::ClusterState cluster, sched::Scheduler scheduler, RunConfig config)
    : cluster_(std::move(cluster)), sched_(std::move(scheduler)), config_(std::move(config)) {}

void Engine::set_secrets(cluster::SecretData secrets) { secrets_ = std::move(secrets); }

void Engine::add_observer(std::function<void(const Event&)> observer) {
  observers_.push_back(std::move(observer));
}

const WorkflowRun* Engine::find_run(const std::string& runId) const {
  for (const auto& r : runs_) {
    if (r->runId == runId) return r.get();
  }
  return nullptr;
}

WorkflowRun* Engine::find_run(const std::string& runId) {
  for (auto& r : runs_) {
    if (r->runId == runId) return r.get();
  }
  return nullptr;
}

Event& Engine::emit(WorkflowRun& run, EventKind kind) {
  Event e;
  e.seq = nextEventSeq_++;
  e.tNs = cluster_.clock().now();
  e.kind = kind;
  e.runId = run.runId;
  run.events.push_back(std::move(e));
  return run.events.back();
}

void Engine::change_state(WorkflowRun& run, TaskInstance& task, TaskState to) {
  const TaskState from = task.state;
  // legal transitions only: Pending -> Active -> {Succeeded, Failed}
  const bool legal = (from == TaskState::Pending && to == TaskState::Active) ||
                     (from == TaskState::Active && (to == TaskState::Succeeded || to == TaskState::Failed));
  if (!legal) {
    throw std::logic_error(std::string("illegal task transition ") + to_string(from) + " -> " +
                           to_string(to));
  }
  task.state = to;
  Event& e = emit(run, EventKind::TaskStateChanged);
  e.task = task.name;
  e.from = from;
  e.to = to;
  e.node = task.node;
  e.queue = task.queue;
  if (!task.node.empty()) {
    if (const auto* n = cluster_.find_node(task.node)) e.nodeType = n->resource_type();
  }
  if (to == TaskState::Succeeded || to == TaskState::Failed) {
    e.durationNs = task.finishedNs - task.startedNs;
    e.detail = task.failureMessage;
  }
}

void Engine::emit_allocatable(WorkflowRun& run, const std::string& nodeName) {
  const auto* node = cluster_.find_node(nodeName);
  if (!node) return;
  Event& e = emit(run, EventKind::NodeAllocatable);
  e.node = nodeName;
  e.nodeType = node->resource_type();
  e.allocatable = node->allocatable.amounts;
}

std::string Engine::task_key(const WorkflowRun& run, const TaskInstance& task) const {
  return run.runId + ":" + std::to_string(task.id);
}

std::string Engine::submit(const wfspec::WorkflowSpec& spec, const std::string& specText) {
  auto expanded = wfspec::expand_dag(spec);
  if (!expanded.ok()) {
    throw std::invalid_argument("spec does not expand: " + format_diagnostics(expanded.diagnostics));
  }
  auto run = std::make_unique<WorkflowRun>();
  run->runId = "run-" + std::to_string(nextRunNumber_++);
  run->specHash = hex64(fnv1a64(specText));
  run->specText = specText;
  run->spec = spec;
  run->nodes = std::move(expanded.graph->nodes);
  for (const auto& node : run->nodes) {
    TaskInstance t;
    t.id = node.id;
    t.name = node.name;
    t.templateRef = node.templateRef;
    t.queue = node.queueLabel.value_or("");
    run->tasks.push_back(std::move(t));
  }
  for (const auto& vol : spec.volumes) run->artifacts.declare_volume(vol);
  run->artifacts.set_secrets(&secrets_);

  cluster_.clock().reset();
  Event& e = emit(*run, EventKind::RunSubmitted);
  e.taskTotal = static_cast<int>(run->tasks.size());
  for (const auto& ev : run->events) {
    for (const auto& obs : observers_) obs(ev);
  }
  // observers saw the submission; later events notify as they happen
  runs_.push_back(std::move(run));
  return runs_.back()->runId;
}

bool Engine::preds_succeeded(const WorkflowRun& run, const TaskInstance& task) const {
  for (int p : run.nodes[static_cast<std::size_t>(task.id)].preds) {
    if (run.tasks[static_cast<std::size_t>(p)].state != TaskState::Succeeded) return false;
  }
  return true;
}

void Engine::start_task(WorkflowRun& run, TaskInstance& task, const std::string& nodeName,
                        const std::string& flavor, std::optional<cluster::Binding> directBinding) {
  const auto& node = run.nodes[static_cast<std::size_t>(task.id)];
  task.node = nodeName;
  task.directBinding = std::move(directBinding);
  task.attempt += 1;
  task.startedNs = cluster_.clock().now();
  change_state(run, task, TaskState::Active);
  if (!flavor.empty()) {
    Event& e = emit(run, EventKind::TaskAdmitted);
    e.task = task.name;
    e.queue = task.queue;
    e.flavor = flavor;
    e.node = nodeName;
  }
  emit_allocatable(run, nodeName);

  Completion completion;
  completion.order = nextCompletionOrder_++;
  completion.taskId = task.id;
  completion.ok = true;
  completion.costSeconds = 1e-4;

  const PayloadFn* payload = payloads_.find(node.image);
  if (!payload) {
    completion.ok = false;
    completion.failureMessage = "ImageNotFound: no payload registered for image '" + node.image + "'";
  } else {
    PayloadContext ctx(task_key(run, task), node.params, node.command, node.args, node.env,
                       node.volumeMounts, run.artifacts, config_);
    try {
      PayloadResult result = (*payload)(ctx);
      completion.costSeconds = result.costSeconds;
    } catch (const std::exception& e) {
      completion.ok = false;
      completion.failureMessage = e.what();
    }
  }

  const auto* clusterNode = cluster_.find_node(nodeName);
  const double speed = clusterNode ? clusterNode->speedFactor : 1.0;
  const double delay = clusterNode ? clusterNode->queueDelaySeconds : 0.0;
  const double durationSeconds = completion.costSeconds * speed + delay;
  completion.finishNs =
      cluster_.clock().now() + static_cast<std::int64_t>(std::llround(durationSeconds * 1e9));
  pending_.push_back(completion);
}

void Engine::finish_task(WorkflowRun& run, const Completion& completion) {
  TaskInstance& task = run.tasks[static_cast<std::size_t>(completion.taskId)];
  task.finishedNs = cluster_.clock().now();
  task.failureMessage = completion.failureMessage;

  const std::string key = task_key(run, task);
  if (completion.ok) {
    run.artifacts.commit(key);
  } else {
    run.artifacts.discard(key);
  }

  if (task.directBinding) {
    cluster_.release(*task.directBinding);
    task.directBinding.reset();
  } else {
    sched_.complete(key, cluster_);
  }
  change_state(run, task, completion.ok ? TaskState::Succeeded : TaskState::Failed);
  emit_allocatable(run, task.node);
  if (!completion.ok && run.state == RunState::Running) {
    run.state = RunState::Failed;  // fail-fast, active tasks drain
  }
}

bool Engine::dispatch_ready(WorkflowRun& run) {
  bool progress = false;
  if (run.state != RunState::Running) return false;
  for (auto& task : run.tasks) {
    if (task.state != TaskState::Pending || task.dispatched) continue;
    if (!preds_succeeded(run, task)) continue;
    const auto& node = run.nodes[static_cast<std::size_t>(task.id)];
    if (node.queueLabel) {
      task.enqueuedNs = cluster_.clock().now();
      sched_.enqueue(task_key(run, task), *node.queueLabel, node.resources, node.nodeSelector);
      task.dispatched = true;
      Event& e = emit(run, EventKind::TaskEnqueued);
      e.task = task.name;
      e.queue = *node.queueLabel;
      progress = true;
    } else {
      if (task.enqueuedNs < 0) task.enqueuedNs = cluster_.clock().now();
      // direct scheduling: bypasses queues and quota, not node capacity
      for (const auto* candidate : cluster_.match_nodes(node.nodeSelector)) {
        if (!cluster_.can_bind(candidate->name, node.resources)) continue;
        auto outcome = cluster_.bind_task(candidate->name, task_key(run, task), node.resources);
        if (auto* binding = std::get_if<cluster::Binding>(&outcome)) {
          task.dispatched = true;
          start_task(run, task, candidate->name, "", *binding);
          progress = true;
          break;
        }
      }
    }
  }
  return progress;
}

std::vector<Event> Engine::step(const std::string& runId) {
  WorkflowRun* run = find_run(runId);
  if (!run) throw std::invalid_argument("no run '" + runId + "'");
  const std::size_t eventsBefore = run->events.size();

  bool progress = dispatch_ready(*run);

  if (run->state == RunState::Running) {
    for (const auto& admission : sched_.admit_cycle(cluster_)) {
      // task key is "<run>:<id>"
      const auto pos = admission.taskId.find(':');
      const int id = std::stoi(admission.taskId.substr(pos + 1));
      TaskInstance& task = run->tasks[static_cast<std::size_t>(id)];
      start_task(*run, task, admission.node, admission.flavor, std::nullopt);
      progress = true;
    }
  }

  if (!pending_.empty()) {
    auto best = std::min_element(pending_.begin(), pending_.end(),
                                 [](const Completion& a, const Completion& b) {
                                   if (a.finishNs != b.finishNs) return a.finishNs < b.finishNs;
                                   return a.order < b.order;
                                 });
    const std::int64_t t = best->finishNs;
    cluster_.clock().advance_to(t);
    // complete every task due at this instant, in schedule order
    std::vector<Completion> due;
    for (const auto& c : pending_) {
      if (c.finishNs == t) due.push_back(c);
    }
    std::sort(due.begin(), due.end(),
              [](const Completion& a, const Completion& b) { return a.order < b.order; });
    pending_.erase(std::remove_if(pending_.begin(), pending_.end(),
                                  [&](const Completion& c) { return c.finishNs == t; }),
                   pending_.end());
    for (const auto& c : due) finish_task(*run, c);
    progress = true;
  }

  (void)progress;
  std::vector<Event> emitted(run->events.begin() + static_cast<std::ptrdiff_t>(eventsBefore),
                             run->events.end());
  for (const auto& e : emitted) {
    for (const auto& obs : observers_) obs(e);
  }
  return emitted;
}

void Engine::finalize(WorkflowRun& run) {
  // drop still-queued workloads so later runs start from a clean scheduler
  for (auto& task : run.tasks) {
    if (task.state == TaskState::Pending && task.dispatched) {
      sched_.cancel_pending(task_key(run, task));
    }
  }
  run.makespanNs = cluster_.clock().now();
  Event& e = emit(run, EventKind::RunFinished);
  e.runState = run.state;
  e.bytesRead = static_cast<std::int64_t>(run.artifacts.bytes_read());
  e.bytesWritten = static_cast<std::int64_t>(run.artifacts.bytes_written());
  for (const auto& obs : observers_) obs(run.events.back());
}

RunReport Engine::run_to_completion(const std::string& runId) {
  WorkflowRun* run = find_run(runId);
  if (!run) throw std::invalid_argument("no run '" + runId + "'");
  while (true) {
    const auto census = run->census();
    const int active = census.at(TaskState::Active);
    const int pendingCount = census.at(TaskState::Pending);
    if (run->state == RunState::Running && pendingCount == 0 && active == 0) {
      run->state = census.at(TaskState::Failed) == 0 ? RunState::Succeeded : RunState::Failed;
      break;
    }
    if (run->state == RunState::Failed && active == 0) break;

    auto events = step(runId);
    if (events.empty()) {
      if (run->state == RunState::Running) {
        run->state = RunState::Deadlocked;
      }
      break;
    }
  }
  finalize(*run);
  return build_report(*run);
}

RunReport Engine::build_report(const WorkflowRun& run) const {
  RunReport report;
  report.runId = run.runId;
  report.specHash = run.specHash;
  report.state = run.state;
  report.makespanNs = run.makespanNs;
  for (const auto& [state, count] : run.census()) report.stateCounts[to_string(state)] = count;
  for (const auto& task : run.tasks) {
    RunReport::TaskRow row;
    row.name = task.name;
    row.templateRef = task.templateRef;
    row.state = to_string(task.state);
    row.enqueuedNs = task.enqueuedNs;
    row.startedNs = task.startedNs;
    row.finishedNs = task.finishedNs;
    row.node = task.node;
    row.queue = task.queue;
    row.attempt = task.attempt;
    report.tasks.push_back(std::move(row));
  }
  for (const auto& [path, bytes] : run.artifacts.committed()) {
    RunReport::ArtifactRow row;
    row.path = path;
    row.bytes = static_cast<std::int64_t>(bytes.size());
    row.fnv64 = hex64(fnv1a64(bytes));
    report.artifacts.push_back(std::move(row));
  }
  report.queues = sched_.queue_snapshot();
  report.artifactBytesRead = static_cast<std::int64_t>(run.artifacts.bytes_read());
  report.artifactBytesWritten = static_cast<std::int64_t>(run.artifacts.bytes_written());
  for (const auto& vol : run.spec.volumes) {
    if (auto result = run.artifacts.read_committed(vol.name, "result.json")) {
      report.workloadResultJson = *result;
      break;
    }
  }
  return report;
}

std::string RunReport::to_json(bool includeRunId) const {
  json j;
  if (includeRunId) j["run_id"] = runId;
  j["spec_hash"] = specHash;
  j["state"] = to_string(state);
  j["makespan_ns"] = makespanNs;
  j["task_states"] = stateCounts;
  json tasksJson = json::array();
  for (const auto& t : tasks) {
    tasksJson.push_back({{"name", t.name},
                         {"template", t.templateRef},
                         {"state", t.state},
                         {"enqueued_ns", t.enqueuedNs},
                         {"started_ns", t.startedNs},
                         {"finished_ns", t.finishedNs},
                         {"node", t.node},
                         {"queue", t.queue},
                         {"attempt", t.attempt}});
  }
  j["tasks"] = tasksJson;
  json artifactsJson = json::array();
  for (const auto& a : artifacts) {
    artifactsJson.push_back({{"path", a.path}, {"bytes", a.bytes}, {"fnv64", a.fnv64}});
  }
  j["artifacts"] = artifactsJson;
  json queuesJson;
  for (const auto& [name, counts] : queues) {
    queuesJson[name] = {{"pending", counts.pending}, {"admitted", counts.admitted}};
  }
  j["queues"] = queuesJson;
  j["artifact_bytes_read"] = artifactBytesRead;
  j["artifact_bytes_written"] = artifactBytesWritten;
  if (!workloadResultJson.empty()) j["workload_result"] = json::parse(workloadResultJson);
  return j.dump(2) + "\n";
}

}  // namespace hqflow::engine
