#include "hqflow/sched/scheduler.hpp"

#include <algorithm>

namespace hqflow::sched {

const FlavorQuota* ClusterQueue::find_quota(const std::string& flavor) const {
  for (const auto& q : quotas) {
    if (q.flavor == flavor) return &q;
  }
  return nullptr;
}

void Scheduler::add_flavor(ResourceFlavor flavor) { flavors_.push_back(std::move(flavor)); }

void Scheduler::add_cluster_queue(ClusterQueue queue) { clusterQueues_.push_back(std::move(queue)); }

void Scheduler::add_local_queue(LocalQueue queue) { localQueues_.push_back(std::move(queue)); }

const LocalQueue* Scheduler::find_local_queue(const std::string& name) const {
  for (const auto& q : localQueues_) {
    if (q.name == name) return &q;
  }
  return nullptr;
}

const ResourceFlavor* Scheduler::find_flavor(const std::string& name) const {
  for (const auto& f : flavors_) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

ClusterQueue* Scheduler::cluster_queue_for(const QueuedWorkload& wl) {
  const LocalQueue* lq = find_local_queue(wl.localQueue);
  if (!lq) return nullptr;
  for (auto& cq : clusterQueues_) {
    if (cq.name == lq->clusterQueue) return &cq;
  }
  return nullptr;
}

QueuedWorkload& Scheduler::enqueue(const std::string& taskId, const std::string& queueName,
                                   const wfspec::ResourceRequest& request,
                                   const cluster::LabelMap& nodeSelector, int priority) {
  const LocalQueue* lq = find_local_queue(queueName);
  if (!lq) throw UnknownQueueError("no local queue named '" + queueName + "'");
  QueuedWorkload wl;
  wl.taskId = taskId;
  wl.localQueue = queueName;
  wl.request = request;
  wl.nodeSelector = nodeSelector;
  wl.priority = priority;
  wl.enqueueSeq = nextSeq_++;
  workloads_.push_back(std::move(wl));
  return workloads_.back();
}

std::optional<Scheduler::FitChoice> Scheduler::find_fit(const QueuedWorkload& wl,
                                                        cluster::ClusterState& cluster) const {
  const LocalQueue* lq = find_local_queue(wl.localQueue);
  if (!lq) return std::nullopt;
  const ClusterQueue* cq = nullptr;
  for (const auto& c : clusterQueues_) {
    if (c.name == lq->clusterQueue) cq = &c;
  }
  if (!cq) return std::nullopt;

  ResourceVector need = wl.request.scheduling_requests();
  for (const auto& q : cq->quotas) {
    if (!need.covered_by(q.quota)) continue;
    ResourceVector after = need;
    auto usageIt = cq->usage.find(q.flavor);
    if (usageIt != cq->usage.end()) after.add(usageIt->second);
    if (!after.fits_within(q.quota)) continue;

    const ResourceFlavor* flavor = find_flavor(q.flavor);
    if (!flavor) continue;
    // flavor selector and the task's own nodeSelector must agree
    cluster::LabelMap merged = flavor->nodeSelector;
    bool conflict = false;
    for (const auto& [k, v] : wl.nodeSelector) {
      auto it = merged.find(k);
      if (it != merged.end() && it->second != v) {
        conflict = true;
        break;
      }
      merged[k] = v;
    }
    if (conflict) continue;
    for (const auto* node : cluster.match_nodes(merged)) {
      if (cluster.can_bind(node->name, wl.request)) {
        return FitChoice{&q, node->name};
      }
    }
  }
  return std::nullopt;
}

std::vector<Admission> Scheduler::admit_cycle(cluster::ClusterState& cluster) {
  std::vector<Admission> admissions;
  while (true) {
    // candidates ordered by priority desc, then enqueue order
    std::vector<QueuedWorkload*> pending;
    for (auto& wl : workloads_) {
      if (wl.state == WorkloadState::Pending) pending.push_back(&wl);
    }
    std::stable_sort(pending.begin(), pending.end(), [](const QueuedWorkload* a, const QueuedWorkload* b) {
      if (a->priority != b->priority) return a->priority > b->priority;
      return a->enqueueSeq < b->enqueueSeq;
    });
    bool admitted = false;
    for (QueuedWorkload* wl : pending) {
      auto fit = find_fit(*wl, cluster);
      if (!fit) continue;
      auto outcome = cluster.bind_task(fit->nodeName, wl->taskId, wl->request);
      auto* binding = std::get_if<cluster::Binding>(&outcome);
      if (!binding) continue;  // raced with nothing; defensive, can_bind said yes
      ClusterQueue* cq = cluster_queue_for(*wl);
      cq->usage[fit->quota->flavor].add(wl->request.scheduling_requests());
      wl->state = WorkloadState::Admitted;
      wl->flavor = fit->quota->flavor;
      wl->binding = *binding;
      admissions.push_back(Admission{wl->taskId, wl->flavor, fit->nodeName, *binding});
      admitted = true;
      break;
    }
    if (!admitted) break;
  }
  return admissions;
}

void Scheduler::complete(const std::string& taskId, cluster::ClusterState& cluster) {
  for (auto it = workloads_.begin(); it != workloads_.end(); ++it) {
    if (it->taskId != taskId) continue;
    if (it->state != WorkloadState::Admitted) {
      throw UnknownWorkloadError("workload '" + taskId + "' is not admitted");
    }
    ClusterQueue* cq = cluster_queue_for(*it);
    cq->usage[it->flavor].sub(it->request.scheduling_requests());
    cluster.release(it->binding);
    workloads_.erase(it);
    return;
  }
  throw UnknownWorkloadError("no workload for task '" + taskId + "'");
}

void Scheduler::cancel_pending(const std::string& taskId) {
  for (auto it = workloads_.begin(); it != workloads_.end(); ++it) {
    if (it->taskId == taskId && it->state == WorkloadState::Pending) {
      workloads_.erase(it);
      return;
    }
  }
}

std::map<std::string, Scheduler::QueueCounts> Scheduler::queue_snapshot() const {
  std::map<std::string, QueueCounts> out;
  for (const auto& lq : localQueues_) out[lq.name];  // ensure all queues appear
  for (const auto& wl : workloads_) {
    auto& counts = out[wl.localQueue];
    if (wl.state == WorkloadState::Pending) {
      ++counts.pending;
    } else {
      ++counts.admitted;
    }
  }
  return out;
}

bool Scheduler::quota_safe() const {
  for (const auto& cq : clusterQueues_) {
    for (const auto& [flavor, usage] : cq.usage) {
      if (!usage.non_negative()) return false;
      const FlavorQuota* q = cq.find_quota(flavor);
      if (!q) {
        if (!usage.empty() && !(usage == ResourceVector{})) {
          for (const auto& [k, v] : usage.amounts) {
            (void)k;
            if (v != 0) return false;
          }
        }
        continue;
      }
      if (!usage.fits_within(q->quota)) return false;
    }
  }
  return true;
}

std::size_t Scheduler::pending_count() const {
  std::size_t n = 0;
  for (const auto& wl : workloads_) {
    if (wl.state == WorkloadState::Pending) ++n;
  }
  return n;
}

}  // namespace hqflow::sched
