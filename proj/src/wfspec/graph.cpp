#include "hqflow/wfspec/graph.hpp"

namespace hqflow::wfspec {

std::vector<std::vector<int>> TaskGraph::successors() const {
  std::vector<std::vector<int>> succ(nodes.size());
  for (const auto& node : nodes) {
    for (int p : node.preds) succ[p].push_back(node.id);
  }
  return succ;
}

std::optional<std::vector<int>> TaskGraph::topo_order() const {
  std::vector<int> indeg(nodes.size(), 0);
  auto succ = successors();
  for (const auto& node : nodes) indeg[node.id] = static_cast<int>(node.preds.size());
  std::vector<int> order;
  std::vector<int> ready;
  for (const auto& node : nodes) {
    if (indeg[node.id] == 0) ready.push_back(node.id);
  }
  while (!ready.empty()) {
    int n = ready.back();
    ready.pop_back();
    order.push_back(n);
    for (int s : succ[n]) {
      if (--indeg[s] == 0) ready.push_back(s);
    }
  }
  if (order.size() != nodes.size()) return std::nullopt;
  return order;
}

namespace {

constexpr const char* kParamPrefix = "inputs.parameters.";

/// Substitutes placeholders in one token. Returns nullopt and appends a
/// diagnostic when a placeholder has no binding.
std::optional<std::string> substitute_token(const std::string& token,
                                            const std::map<std::string, std::string>& bindings,
                                            Diagnostics& diags) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto open = token.find("{{", pos);
    if (open == std::string::npos) {
      out += token.substr(pos);
      return out;
    }
    auto close = token.find("}}", open + 2);
    if (close == std::string::npos) {
      out += token.substr(pos);
      return out;
    }
    out += token.substr(pos, open - pos);
    std::string inner = token.substr(open + 2, close - open - 2);
    if (inner.rfind(kParamPrefix, 0) == 0) {
      std::string name = inner.substr(std::string(kParamPrefix).size());
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        diags.push_back(Diagnostic{DiagCode::UnboundParameter,
                                   "no binding for parameter '" + name + "'", 0, 0});
        return std::nullopt;
      }
      out += it->second;
    } else {
      diags.push_back(Diagnostic{DiagCode::UnboundParameter,
                                 "unsupported placeholder '{{" + inner + "}}'", 0, 0});
      return std::nullopt;
    }
    pos = close + 2;
  }
}

/// `{{item}}` is only legal inside step argument values; it resolves to the
/// fan-out index before template-level substitution happens.
std::string substitute_item(const std::string& value, std::int64_t index) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto open = value.find("{{item}}", pos);
    if (open == std::string::npos) {
      out += value.substr(pos);
      return out;
    }
    out += value.substr(pos, open - pos);
    out += std::to_string(index);
    pos = open + 8;
  }
}

}  // namespace

SubstituteResult substitute_params(const std::vector<std::string>& tokens,
                                   const std::map<std::string, std::string>& bindings) {
  SubstituteResult result;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    auto sub = substitute_token(token, bindings, result.diagnostics);
    if (!sub) return result;
    out.push_back(std::move(*sub));
  }
  result.tokens = std::move(out);
  return result;
}

ExpandResult expand_dag(const WorkflowSpec& spec) {
  ExpandResult result;
  TaskGraph graph;

  const Template* entry = spec.find_template(spec.entrypoint);
  if (!entry) {
    result.diagnostics.push_back(Diagnostic{DiagCode::EntrypointUnresolved,
                                            "entrypoint '" + spec.entrypoint + "' not found", 0, 0});
    return result;
  }

  auto make_node = [&](const std::string& name, const Template& tpl,
                       std::map<std::string, std::string> params) -> bool {
    TaskNode node;
    node.id = static_cast<int>(graph.nodes.size());
    node.name = name;
    node.templateRef = tpl.name;
    node.params = std::move(params);
    const auto& c = tpl.container();
    node.image = c.image;
    node.volumeMounts = c.volumeMounts;
    node.resources = c.resources;
    node.nodeSelector = tpl.nodeSelector;
    node.queueLabel = tpl.queue_label();

    auto cmd = substitute_params(c.command, node.params);
    auto args = substitute_params(c.args, node.params);
    if (!cmd.ok() || !args.ok()) {
      auto& diags = cmd.ok() ? args.diagnostics : cmd.diagnostics;
      for (auto& d : diags) {
        d.message = "task '" + name + "': " + d.message;
        result.diagnostics.push_back(d);
      }
      return false;
    }
    node.command = std::move(*cmd.tokens);
    node.args = std::move(*args.tokens);
    for (const auto& e : c.env) {
      auto v = substitute_params({e.value}, node.params);
      if (!v.ok()) {
        for (auto& d : v.diagnostics) {
          d.message = "task '" + name + "': " + d.message;
          result.diagnostics.push_back(d);
        }
        return false;
      }
      node.env.push_back(EnvVar{e.name, v.tokens->front()});
    }
    graph.nodes.push_back(std::move(node));
    return true;
  };

  if (!entry->is_steps()) {
    if (!make_node(entry->name, *entry, {})) return result;
    result.graph = std::move(graph);
    return result;
  }

  std::vector<int> prevBarrier;  // nodes of the last non-empty group
  for (const auto& group : entry->steps().groups) {
    std::vector<int> current;
    for (const auto& step : group.steps) {
      const Template* target = spec.find_template(step.templateRef);
      if (!target || target->is_steps()) {
        result.diagnostics.push_back(Diagnostic{DiagCode::TemplateRefUnresolved,
                                                "step '" + step.name + "' cannot be expanded",
                                                step.mark.line, step.mark.column});
        return result;
      }
      std::int64_t fanout = step.withSequence ? step.withSequence->count : 1;
      for (std::int64_t i = 0; i < fanout; ++i) {
        std::map<std::string, std::string> params;
        for (const auto& arg : step.arguments) {
          params[arg.name] = step.withSequence ? substitute_item(arg.value, i) : arg.value;
        }
        std::string name = step.name;
        if (step.withSequence) name += "[" + std::to_string(i) + "]";
        if (!make_node(name, *target, std::move(params))) return result;
        int id = graph.nodes.back().id;
        graph.nodes[id].preds = prevBarrier;
        current.push_back(id);
      }
    }
    if (!current.empty()) prevBarrier = std::move(current);
  }

  result.graph = std::move(graph);
  return result;
}

}  // namespace hqflow::wfspec
