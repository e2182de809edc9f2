#include "hqflow/cluster/cluster.hpp"

#include <algorithm>

namespace hqflow::cluster {

bool selector_matches(const LabelMap& selector, const LabelMap& labels) {
  for (const auto& [k, v] : selector) {
    auto it = labels.find(k);
    if (it == labels.end() || it->second != v) return false;
  }
  return true;
}

void ClusterState::add_node(Node node) {
  std::sort(node.devices.begin(), node.devices.end(),
            [](const Device& a, const Device& b) { return a.id < b.id; });
  node.allocatable = node.capacity;
  auto pos = std::lower_bound(nodes_.begin(), nodes_.end(), node,
                              [](const Node& a, const Node& b) { return a.name < b.name; });
  nodes_.insert(pos, std::move(node));
}

const Node* ClusterState::find_node(const std::string& name) const {
  for (const auto& n : nodes_) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

Node* ClusterState::mutable_node(const std::string& name) {
  for (auto& n : nodes_) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

std::vector<const Node*> ClusterState::match_nodes(const LabelMap& selector,
                                                   bool includeUnschedulable) const {
  std::vector<const Node*> out;
  for (const auto& n : nodes_) {
    if (!includeUnschedulable && !n.schedulable) continue;
    if (selector_matches(selector, n.labels)) out.push_back(&n);
  }
  return out;
}

std::optional<std::vector<std::string>> ClusterState::select_devices(
    const Node& node, const wfspec::ResourceRequest& request, std::string* failDetail) const {
  std::vector<std::string> chosen;
  std::vector<const Device*> taken;
  auto is_taken = [&](const Device& d) {
    return std::find(taken.begin(), taken.end(), &d) != taken.end();
  };

  // Named device resources (e.g. nvidia.com/gpu: 2) take whole free devices
  // of that class, lowest id first.
  for (const auto& [name, count] : request.scheduling_requests().amounts) {
    if (name == "cpu" || name == "memory" || name.rfind("claims/", 0) == 0) continue;
    std::int64_t need = count;
    for (const auto& d : node.devices) {
      if (need == 0) break;
      if (d.className != name || !d.free() || is_taken(d)) continue;
      chosen.push_back(d.id);
      taken.push_back(&d);
      --need;
    }
    if (need > 0) {
      if (failDetail) *failDetail = "not enough free '" + name + "' devices";
      return std::nullopt;
    }
  }

  // DRA-style claims: late binding against class plus claim constraints.
  for (const auto& claim : request.deviceClaims) {
    std::int64_t need = claim.count;
    for (const auto& d : node.devices) {
      if (need == 0) break;
      if (d.className != claim.className || !d.free() || is_taken(d)) continue;
      bool ok = true;
      for (const auto& p : claim.constraints) {
        if (!p.matches(d.attributes)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(d.id);
      taken.push_back(&d);
      --need;
    }
    if (need > 0) {
      if (failDetail) {
        *failDetail = "no device of class '" + claim.className + "' satisfies the claim constraints";
      }
      return std::nullopt;
    }
  }
  return chosen;
}

BindOutcome ClusterState::bind_task(const std::string& nodeName, const std::string& taskId,
                                    const wfspec::ResourceRequest& request) {
  Node* node = mutable_node(nodeName);
  if (!node) return Rejection{RejectReason::InsufficientCapacity, "unknown node '" + nodeName + "'"};

  ResourceVector want = request.scheduling_requests();
  // claims/<class> pseudo-resources account in quota space, not node space
  for (auto it = want.amounts.begin(); it != want.amounts.end();) {
    if (it->first.rfind("claims/", 0) == 0) {
      it = want.amounts.erase(it);
    } else {
      ++it;
    }
  }
  if (!want.fits_within(node->allocatable)) {
    return Rejection{RejectReason::InsufficientCapacity,
                     "request " + want.str() + " exceeds allocatable " + node->allocatable.str()};
  }
  std::string detail;
  auto devices = select_devices(*node, request, &detail);
  if (!devices) return Rejection{RejectReason::NoMatchingDevice, detail};

  node->allocatable.sub(want);
  for (const auto& id : *devices) {
    for (auto& d : node->devices) {
      if (d.id == id) d.allocatedTo = taskId;
    }
  }
  Binding binding;
  binding.id = nextBindingId_++;
  binding.nodeName = nodeName;
  binding.taskId = taskId;
  binding.amounts = want;
  binding.deviceIds = *devices;
  active_[binding.id] = binding;
  return binding;
}

bool ClusterState::can_bind(const std::string& nodeName, const wfspec::ResourceRequest& request) const {
  const Node* node = find_node(nodeName);
  if (!node) return false;
  ResourceVector want = request.scheduling_requests();
  for (auto it = want.amounts.begin(); it != want.amounts.end();) {
    if (it->first.rfind("claims/", 0) == 0) {
      it = want.amounts.erase(it);
    } else {
      ++it;
    }
  }
  if (!want.fits_within(node->allocatable)) return false;
  return select_devices(*node, request, nullptr).has_value();
}

void ClusterState::release(const Binding& binding) {
  auto it = active_.find(binding.id);
  if (it == active_.end()) {
    throw DoubleReleaseError("binding " + std::to_string(binding.id) + " is not active");
  }
  Node* node = mutable_node(binding.nodeName);
  node->allocatable.add(binding.amounts);
  for (const auto& id : binding.deviceIds) {
    for (auto& d : node->devices) {
      if (d.id == id) d.allocatedTo.reset();
    }
  }
  active_.erase(it);
}

bool ClusterState::conserved() const {
  std::map<std::string, ResourceVector> held;
  std::map<std::string, int> deviceUse;
  for (const auto& [id, b] : active_) {
    (void)id;
    held[b.nodeName].add(b.amounts);
    for (const auto& d : b.deviceIds) {
      if (++deviceUse[b.nodeName + "/" + d] > 1) return false;
    }
  }
  for (const auto& n : nodes_) {
    ResourceVector sum = n.allocatable;
    sum.add(held[n.name]);
    if (!(sum == n.capacity)) return false;
    int allocated = 0;
    for (const auto& d : n.devices) {
      if (!d.free()) ++allocated;
    }
    int bound = 0;
    for (const auto& [id, b] : active_) {
      (void)id;
      if (b.nodeName == n.name) bound += static_cast<int>(b.deviceIds.size());
    }
    if (allocated != bound) return false;
  }
  return true;
}

}  // namespace hqflow::cluster
