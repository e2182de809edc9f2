#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hqflow/common/diagnostics.hpp"
#include "hqflow/wfspec/spec.hpp"

namespace hqflow::wfspec {

/// One fully substituted, schedulable task node of the expanded DAG.
struct TaskNode {
  int id = 0;
  std::string name;  // step name, with "[i]" suffix for fan-out instances
  std::string templateRef;
  std::map<std::string, std::string> params;
  std::string image;
  std::vector<std::string> command;
  std::vector<std::string> args;
  std::vector<EnvVar> env;
  std::vector<VolumeMount> volumeMounts;
  ResourceRequest resources;
  LabelMap nodeSelector;
  std::optional<std::string> queueLabel;
  std::vector<int> preds;  // ids of all nodes this one depends on
};

struct TaskGraph {
  std::vector<TaskNode> nodes;

  std::vector<std::vector<int>> successors() const;
  /// Topological order; empty optional when the graph has a cycle.
  std::optional<std::vector<int>> topo_order() const;
};

struct ExpandResult {
  std::optional<TaskGraph> graph;
  Diagnostics diagnostics;
  bool ok() const { return graph.has_value() && diagnostics.empty(); }
};

/// Expands a validated spec into the task DAG. Step groups are full
/// barriers: every node of one group depends on every node of the previous
/// non-empty group. withSequence fans a step into count instances with an
/// `index` parameter.
ExpandResult expand_dag(const WorkflowSpec& spec);

struct SubstituteResult {
  std::optional<std::vector<std::string>> tokens;
  Diagnostics diagnostics;
  bool ok() const { return tokens.has_value(); }
};

/// Replaces every `{{inputs.parameters.X}}` with bindings[X]. Unknown
/// placeholders are an error; everything else passes through unchanged.
SubstituteResult substitute_params(const std::vector<std::string>& tokens,
                                   const std::map<std::string, std::string>& bindings);

}  // namespace hqflow::wfspec
