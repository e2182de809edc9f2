#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "hqflow/cluster/cluster.hpp"
#include "hqflow/common/diagnostics.hpp"

namespace hqflow::cluster {

using SecretData = std::map<std::string, std::map<std::string, std::string>>;

struct ClusterConfig {
  ClusterState cluster;
  SecretData secrets;  // secretName -> key -> value
};

struct ClusterConfigResult {
  std::optional<ClusterConfig> config;
  Diagnostics diagnostics;
  bool ok() const { return config.has_value() && diagnostics.empty(); }
};

/// Loads a cluster definition document (kind: ClusterConfig): nodes with
/// labels, capacities, devices and attributes, plus simulated secrets.
ClusterConfigResult load_cluster_config(std::string_view text);

}  // namespace hqflow::cluster
