#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hqflow/common/attributes.hpp"
#include "hqflow/common/resources.hpp"
#include "hqflow/wfspec/spec.hpp"

namespace hqflow::cluster {

using LabelMap = std::map<std::string, std::string>;

/// Virtual nanoseconds since simulation start. Monotone, never wall-clock.
class VirtualClock {
 public:
  std::int64_t now() const { return now_; }
  void advance_to(std::int64_t t) {
    if (t < now_) throw std::logic_error("virtual clock moved backwards");
    now_ = t;
  }
  void reset() { now_ = 0; }

 private:
  std::int64_t now_ = 0;
};

struct Device {
  std::string id;
  std::string className;
  AttrMap attributes;
  std::optional<std::string> allocatedTo;  // task id when exclusive-allocated

  bool free() const { return !allocatedTo.has_value(); }
};

struct DeviceClass {
  std::string name;
  std::vector<AttributePredicate> selector;

  bool matches(const Device& d) const {
    if (d.className != name) return false;
    for (const auto& p : selector) {
      if (!p.matches(d.attributes)) return false;
    }
    return true;
  }
};

struct Node {
  std::string name;
  LabelMap labels;
  ResourceVector capacity;
  ResourceVector allocatable;
  std::vector<Device> devices;  // sorted by id
  bool schedulable = true;
  double speedFactor = 1.0;         // task duration multiplier
  double queueDelaySeconds = 0.0;   // added to every task on this node

  std::string resource_type() const {
    auto it = labels.find("resource_type");
    return it == labels.end() ? "" : it->second;
  }
};

/// Recorded at bind time; holds exactly what release must return.
struct Binding {
  std::int64_t id = 0;
  std::string nodeName;
  std::string taskId;
  ResourceVector amounts;
  std::vector<std::string> deviceIds;
};

enum class RejectReason { InsufficientCapacity, NoMatchingDevice };

struct Rejection {
  RejectReason reason;
  std::string detail;
};

using BindOutcome = std::variant<Binding, Rejection>;

struct DoubleReleaseError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Whether `labels` contains every entry of `selector`.
bool selector_matches(const LabelMap& selector, const LabelMap& labels);

/// Node pool with exclusive devices and exact capacity accounting. All
/// mutation goes through bind/release in one ordered command stream;
/// everything is deterministic (ties broken by node name, then device id).
class ClusterState {
 public:
  void add_node(Node node);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node* find_node(const std::string& name) const;

  /// Nodes whose labels superset the selector (empty selector matches all).
  /// Unschedulable nodes are excluded unless `includeUnschedulable`.
  std::vector<const Node*> match_nodes(const LabelMap& selector, bool includeUnschedulable = false) const;

  /// Attempts to bind a request on a named node. On success allocatable
  /// shrinks and claimed devices become Allocated.
  BindOutcome bind_task(const std::string& nodeName, const std::string& taskId,
                        const wfspec::ResourceRequest& request);

  /// Would bind succeed right now? No state change.
  bool can_bind(const std::string& nodeName, const wfspec::ResourceRequest& request) const;

  /// Restores exactly what bind took. Throws DoubleReleaseError on reuse.
  void release(const Binding& binding);

  /// Conservation check: allocatable + active bindings == capacity for every
  /// node and resource, and no device is allocated twice.
  bool conserved() const;

  VirtualClock& clock() { return clock_; }
  const VirtualClock& clock() const { return clock_; }

 private:
  Node* mutable_node(const std::string& name);
  /// Picks devices for the request; nullopt when unsatisfiable.
  std::optional<std::vector<std::string>> select_devices(const Node& node,
                                                         const wfspec::ResourceRequest& request,
                                                         std::string* failDetail) const;

  std::vector<Node> nodes_;  // sorted by name
  std::map<std::int64_t, Binding> active_;
  std::int64_t nextBindingId_ = 1;
  VirtualClock clock_;
};

}  // namespace hqflow::cluster
