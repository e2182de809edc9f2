#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqflow/cluster/cluster.hpp"
#include "hqflow/common/resources.hpp"
#include "hqflow/wfspec/spec.hpp"

namespace hqflow::sched {

struct ResourceFlavor {
  std::string name;
  cluster::LabelMap nodeSelector;
};

struct FlavorQuota {
  std::string flavor;
  ResourceVector quota;
};

struct ClusterQueue {
  std::string name;
  std::vector<FlavorQuota> quotas;  // declaration order matters: first fit wins
  std::map<std::string, ResourceVector> usage;

  const FlavorQuota* find_quota(const std::string& flavor) const;
};

struct LocalQueue {
  std::string namespace_;
  std::string name;
  std::string clusterQueue;
};

enum class WorkloadState { Pending, Admitted };

struct QueuedWorkload {
  std::string taskId;
  std::string localQueue;
  wfspec::ResourceRequest request;
  cluster::LabelMap nodeSelector;
  int priority = 0;
  std::uint64_t enqueueSeq = 0;
  WorkloadState state = WorkloadState::Pending;
  std::string flavor;  // assigned at admission
  cluster::Binding binding;
};

struct Admission {
  std::string taskId;
  std::string flavor;
  std::string node;
  cluster::Binding binding;
};

struct UnknownQueueError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownWorkloadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Queue-based admission control: workloads enter local queues, are admitted
/// against their cluster queue's per-flavor quotas, then bound onto a
/// flavor-matching node. Single ordered event stream; fully deterministic
/// (priority desc, then enqueue order; flavors in declaration order; nodes
/// by name).
class Scheduler {
 public:
  void add_flavor(ResourceFlavor flavor);
  void add_cluster_queue(ClusterQueue queue);
  void add_local_queue(LocalQueue queue);

  const std::vector<ResourceFlavor>& flavors() const { return flavors_; }
  const std::vector<ClusterQueue>& cluster_queues() const { return clusterQueues_; }
  const std::vector<LocalQueue>& local_queues() const { return localQueues_; }
  const LocalQueue* find_local_queue(const std::string& name) const;

  QueuedWorkload& enqueue(const std::string& taskId, const std::string& queueName,
                          const wfspec::ResourceRequest& request,
                          const cluster::LabelMap& nodeSelector, int priority = 0);

  /// Admits every workload that fits, highest priority first (FIFO within
  /// equal priority). Never exceeds quota; charges usage and binds nodes.
  std::vector<Admission> admit_cycle(cluster::ClusterState& cluster);

  /// Refunds usage and releases the node binding of an admitted workload.
  void complete(const std::string& taskId, cluster::ClusterState& cluster);

  /// Drops a still-pending workload (run teardown). No-op when absent;
  /// admitted workloads must go through complete().
  void cancel_pending(const std::string& taskId);

  struct QueueCounts {
    int pending = 0;
    int admitted = 0;
  };
  std::map<std::string, QueueCounts> queue_snapshot() const;

  /// usage <= quota and usage >= 0 for every cluster queue and flavor.
  bool quota_safe() const;

  std::size_t pending_count() const;

 private:
  struct FitChoice {
    const FlavorQuota* quota;
    std::string nodeName;
  };
  std::optional<FitChoice> find_fit(const QueuedWorkload& wl, cluster::ClusterState& cluster) const;
  ClusterQueue* cluster_queue_for(const QueuedWorkload& wl);
  const ResourceFlavor* find_flavor(const std::string& name) const;

  std::vector<ResourceFlavor> flavors_;
  std::vector<ClusterQueue> clusterQueues_;
  std::vector<LocalQueue> localQueues_;
  std::vector<QueuedWorkload> workloads_;
  std::uint64_t nextSeq_ = 1;
};

}  // namespace hqflow::sched
