#include "hqflow/sched/config.hpp"

#include <set>

#include "hqflow/yaml/yaml.hpp"

namespace hqflow::sched {

namespace {

void err(Diagnostics& diags, DiagCode code, const yaml::Mark& mark, std::string msg) {
  diags.push_back(Diagnostic{code, std::move(msg), mark.line, mark.column});
}

void check_fields(const yaml::Node& n, const std::set<std::string>& known, Diagnostics& diags) {
  for (const auto& e : n.entries()) {
    if (!known.count(e.key)) err(diags, DiagCode::UnknownField, e.keyMark, "unknown field '" + e.key + "'");
  }
}

std::optional<std::string> scalar_field(const yaml::Node& n, const std::string& key,
                                        Diagnostics& diags, bool required) {
  const auto* f = n.find(key);
  if (!f) {
    if (required) err(diags, DiagCode::MissingField, n.mark(), "missing field '" + key + "'");
    return std::nullopt;
  }
  if (!f->is_scalar()) {
    err(diags, DiagCode::WrongType, f->mark(), "'" + key + "' must be a scalar");
    return std::nullopt;
  }
  return f->str();
}

cluster::LabelMap label_map(const yaml::Node* n, Diagnostics& diags) {
  cluster::LabelMap out;
  if (!n) return out;
  if (!n->is_mapping()) {
    err(diags, DiagCode::WrongType, n->mark(), "selector must be a mapping");
    return out;
  }
  for (const auto& e : n->entries()) {
    if (e.value.is_scalar()) out[e.key] = e.value.str();
  }
  return out;
}

ResourceVector resource_vector(const yaml::Node* n, Diagnostics& diags) {
  ResourceVector out;
  if (!n) return out;
  if (!n->is_mapping()) {
    err(diags, DiagCode::WrongType, n->mark(), "resources must be a mapping");
    return out;
  }
  for (const auto& e : n->entries()) {
    if (!e.value.is_scalar()) continue;
    auto q = parse_quantity(e.key, e.value.str());
    if (!q || *q < 0) {
      err(diags, DiagCode::BadQuantity, e.value.mark(),
          "bad quantity '" + e.value.str() + "' for '" + e.key + "'");
      continue;
    }
    out.amounts[e.key] = *q;
  }
  return out;
}

}  // namespace

QueueConfigResult load_queue_config(std::string_view text, const cluster::ClusterState* cluster) {
  QueueConfigResult result;
  std::vector<yaml::Node> docs;
  try {
    docs = yaml::parse_stream(text);
  } catch (const yaml::ParseError& e) {
    err(result.diagnostics, DiagCode::YamlSyntax, e.mark, e.what());
    return result;
  }
  Scheduler sched;
  for (const auto& doc : docs) {
    if (!doc.is_mapping()) {
      err(result.diagnostics, DiagCode::WrongType, doc.mark(), "queue config document must be a mapping");
      continue;
    }
    check_fields(doc, {"apiVersion", "kind", "metadata", "spec"}, result.diagnostics);
    auto kind = scalar_field(doc, "kind", result.diagnostics, true);
    const auto* meta = doc.find("metadata");
    const auto* spec = doc.find("spec");
    if (!kind || !meta || !meta->is_mapping() || !spec || !spec->is_mapping()) {
      err(result.diagnostics, DiagCode::BadDocument, doc.mark(),
          "document needs kind, metadata and spec mappings");
      continue;
    }
    if (*kind == "ResourceFlavor") {
      check_fields(*meta, {"name"}, result.diagnostics);
      check_fields(*spec, {"nodeSelector"}, result.diagnostics);
      ResourceFlavor flavor;
      if (auto name = scalar_field(*meta, "name", result.diagnostics, true)) flavor.name = *name;
      flavor.nodeSelector = label_map(spec->find("nodeSelector"), result.diagnostics);
      sched.add_flavor(std::move(flavor));
    } else if (*kind == "ClusterQueue") {
      check_fields(*meta, {"name"}, result.diagnostics);
      check_fields(*spec, {"quotas"}, result.diagnostics);
      ClusterQueue cq;
      if (auto name = scalar_field(*meta, "name", result.diagnostics, true)) cq.name = *name;
      const auto* quotas = spec->find("quotas");
      if (!quotas || !quotas->is_sequence()) {
        err(result.diagnostics, DiagCode::MissingField, spec->mark(), "ClusterQueue needs a quotas sequence");
      } else {
        for (const auto& item : quotas->items()) {
          if (!item.is_mapping()) {
            err(result.diagnostics, DiagCode::WrongType, item.mark(), "quota must be a mapping");
            continue;
          }
          check_fields(item, {"flavor", "resources"}, result.diagnostics);
          FlavorQuota q;
          if (auto f = scalar_field(item, "flavor", result.diagnostics, true)) q.flavor = *f;
          q.quota = resource_vector(item.find("resources"), result.diagnostics);
          cq.quotas.push_back(std::move(q));
        }
      }
      sched.add_cluster_queue(std::move(cq));
    } else if (*kind == "LocalQueue") {
      check_fields(*meta, {"name", "namespace"}, result.diagnostics);
      check_fields(*spec, {"clusterQueue"}, result.diagnostics);
      LocalQueue lq;
      if (auto name = scalar_field(*meta, "name", result.diagnostics, true)) lq.name = *name;
      if (auto ns = scalar_field(*meta, "namespace", result.diagnostics, false)) lq.namespace_ = *ns;
      if (auto cq = scalar_field(*spec, "clusterQueue", result.diagnostics, true)) lq.clusterQueue = *cq;
      sched.add_local_queue(std::move(lq));
    } else {
      err(result.diagnostics, DiagCode::BadDocument, doc.mark(), "unsupported kind '" + *kind + "'");
    }
  }

  // referential checks
  for (const auto& lq : sched.local_queues()) {
    bool found = false;
    for (const auto& cq : sched.cluster_queues()) {
      if (cq.name == lq.clusterQueue) found = true;
    }
    if (!found) {
      err(result.diagnostics, DiagCode::TemplateRefUnresolved, {},
          "local queue '" + lq.name + "' references unknown cluster queue '" + lq.clusterQueue + "'");
    }
  }
  for (const auto& cq : sched.cluster_queues()) {
    for (const auto& q : cq.quotas) {
      bool found = false;
      for (const auto& f : sched.flavors()) {
        if (f.name == q.flavor) found = true;
      }
      if (!found) {
        err(result.diagnostics, DiagCode::TemplateRefUnresolved, {},
            "cluster queue '" + cq.name + "' references unknown flavor '" + q.flavor + "'");
      }
    }
  }
  if (cluster) {
    for (const auto& f : sched.flavors()) {
      if (cluster->match_nodes(f.nodeSelector).empty()) {
        result.warnings.push_back(Diagnostic{DiagCode::BadDocument,
                                             "flavor '" + f.name + "' matches no schedulable node", 0, 0});
      }
    }
  }
  if (!result.diagnostics.empty()) return result;
  result.scheduler = std::move(sched);
  return result;
}

}  // namespace hqflow::sched
