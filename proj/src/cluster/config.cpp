#include "hqflow/cluster/config.hpp"

#include <set>

#include "hqflow/yaml/yaml.hpp"

namespace hqflow::cluster {

namespace {

void err(Diagnostics& diags, DiagCode code, const yaml::Mark& mark, std::string msg) {
  diags.push_back(Diagnostic{code, std::move(msg), mark.line, mark.column});
}

std::optional<Node> parse_node(const yaml::Node& n, Diagnostics& diags) {
  if (!n.is_mapping()) {
    err(diags, DiagCode::WrongType, n.mark(), "node must be a mapping");
    return std::nullopt;
  }
  Node node;
  std::set<std::string> known{"name", "labels", "capacity", "devices", "schedulable",
                              "speedFactor", "queueDelaySeconds"};
  for (const auto& e : n.entries()) {
    if (!known.count(e.key)) err(diags, DiagCode::UnknownField, e.keyMark, "unknown field '" + e.key + "'");
  }
  const auto* name = n.find("name");
  if (!name || !name->is_scalar()) {
    err(diags, DiagCode::MissingField, n.mark(), "node needs a scalar 'name'");
    return std::nullopt;
  }
  node.name = name->str();
  if (const auto* labels = n.find("labels")) {
    if (!labels->is_mapping()) {
      err(diags, DiagCode::WrongType, labels->mark(), "labels must be a mapping");
    } else {
      for (const auto& e : labels->entries()) {
        if (e.value.is_scalar()) node.labels[e.key] = e.value.str();
      }
    }
  }
  if (const auto* cap = n.find("capacity")) {
    if (!cap->is_mapping()) {
      err(diags, DiagCode::WrongType, cap->mark(), "capacity must be a mapping");
    } else {
      for (const auto& e : cap->entries()) {
        if (!e.value.is_scalar()) continue;
        auto q = parse_quantity(e.key, e.value.str());
        if (!q || *q < 0) {
          err(diags, DiagCode::BadQuantity, e.value.mark(),
              "bad quantity '" + e.value.str() + "' for '" + e.key + "'");
          continue;
        }
        node.capacity.amounts[e.key] = *q;
      }
    }
  }
  if (const auto* sched = n.find("schedulable")) {
    node.schedulable = !(sched->is_scalar() && sched->str() == "false");
  }
  if (const auto* sf = n.find("speedFactor")) {
    if (sf->is_scalar()) node.speedFactor = std::strtod(sf->str().c_str(), nullptr);
  }
  if (const auto* qd = n.find("queueDelaySeconds")) {
    if (qd->is_scalar()) node.queueDelaySeconds = std::strtod(qd->str().c_str(), nullptr);
  }
  if (const auto* devs = n.find("devices")) {
    if (!devs->is_sequence()) {
      err(diags, DiagCode::WrongType, devs->mark(), "devices must be a sequence");
    } else {
      for (const auto& item : devs->items()) {
        if (!item.is_mapping()) {
          err(diags, DiagCode::WrongType, item.mark(), "device must be a mapping");
          continue;
        }
        Device dev;
        const auto* id = item.find("id");
        const auto* cls = item.find("className");
        if (!id || !cls || !id->is_scalar() || !cls->is_scalar()) {
          err(diags, DiagCode::MissingField, item.mark(), "device needs scalar 'id' and 'className'");
          continue;
        }
        dev.id = id->str();
        dev.className = cls->str();
        if (const auto* attrs = item.find("attributes")) {
          if (attrs->is_mapping()) {
            for (const auto& a : attrs->entries()) {
              if (a.value.is_scalar()) dev.attributes[a.key] = attr_from_string(a.value.str());
            }
          }
        }
        node.devices.push_back(std::move(dev));
      }
    }
  }
  // capacity entry for a device class must agree with the device list
  std::map<std::string, std::int64_t> byClass;
  for (const auto& d : node.devices) ++byClass[d.className];
  for (const auto& [cls, count] : byClass) {
    if (node.capacity.get(cls) != count) {
      err(diags, DiagCode::BadDocument, n.mark(),
          "node '" + node.name + "' capacity for '" + cls + "' (" +
              std::to_string(node.capacity.get(cls)) + ") does not match its " +
              std::to_string(count) + " devices");
    }
  }
  return node;
}

}  // namespace

ClusterConfigResult load_cluster_config(std::string_view text) {
  ClusterConfigResult result;
  yaml::Node root = yaml::Node::mapping();
  try {
    root = yaml::parse_document(text);
  } catch (const yaml::ParseError& e) {
    err(result.diagnostics, DiagCode::YamlSyntax, e.mark, e.what());
    return result;
  }
  if (!root.is_mapping()) {
    err(result.diagnostics, DiagCode::WrongType, root.mark(), "cluster config must be a mapping");
    return result;
  }
  std::set<std::string> known{"kind", "nodes", "secrets"};
  for (const auto& e : root.entries()) {
    if (!known.count(e.key)) {
      err(result.diagnostics, DiagCode::UnknownField, e.keyMark, "unknown field '" + e.key + "'");
    }
  }
  const auto* kind = root.find("kind");
  if (!kind || !kind->is_scalar() || kind->str() != "ClusterConfig") {
    err(result.diagnostics, DiagCode::BadDocument, root.mark(), "kind must be 'ClusterConfig'");
  }
  ClusterConfig config;
  std::set<std::string> nodeNames;
  if (const auto* nodes = root.find("nodes"); nodes && nodes->is_sequence()) {
    for (const auto& item : nodes->items()) {
      auto node = parse_node(item, result.diagnostics);
      if (node) {
        if (!nodeNames.insert(node->name).second) {
          err(result.diagnostics, DiagCode::DuplicateName, item.mark(),
              "duplicate node name '" + node->name + "'");
          continue;
        }
        config.cluster.add_node(std::move(*node));
      }
    }
  } else {
    err(result.diagnostics, DiagCode::MissingField, root.mark(), "cluster config needs a 'nodes' sequence");
  }
  if (const auto* secrets = root.find("secrets"); secrets && secrets->is_mapping()) {
    for (const auto& s : secrets->entries()) {
      if (!s.value.is_mapping()) {
        err(result.diagnostics, DiagCode::WrongType, s.value.mark(), "secret must map keys to values");
        continue;
      }
      for (const auto& kv : s.value.entries()) {
        if (kv.value.is_scalar()) config.secrets[s.key][kv.key] = kv.value.str();
      }
    }
  }
  if (!result.diagnostics.empty()) return result;
  result.config = std::move(config);
  return result;
}

}  // namespace hqflow::cluster
