#include "hqflow/wfspec/parse.hpp"

#include <algorithm>
#include <set>

namespace hqflow::wfspec {

std::optional<std::string> Template::queue_label() const {
  auto it = labels.find(kQueueLabelKey);
  if (it == labels.end()) return std::nullopt;
  return it->second;
}

const Template* WorkflowSpec::find_template(std::string_view name) const {
  for (const auto& t : templates) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

ResourceVector ResourceRequest::scheduling_requests() const {
  ResourceVector v = requests;
  for (const auto& [name, amount] : limits.amounts) {
    if (name == "cpu" || name == "memory") continue;
    if (v.amounts.find(name) == v.amounts.end()) v.amounts[name] = amount;
  }
  for (const auto& claim : deviceClaims) {
    v.amounts["claims/" + claim.className] += claim.count;
  }
  return v;
}

namespace {

class Walker {
 public:
  explicit Walker(Diagnostics& diags) : diags_(diags) {}

  void error(DiagCode code, const yaml::Mark& mark, std::string msg) {
    diags_.push_back(Diagnostic{code, std::move(msg), mark.line, mark.column});
  }

  /// Fail-closed field access over a mapping node.
  struct Fields {
    Walker& w;
    const yaml::Node& node;
    std::set<std::string> known;

    Fields(Walker& w, const yaml::Node& node) : w(w), node(node) {}

    const yaml::Node* get(const std::string& key) {
      known.insert(key);
      return node.find(key);
    }
    const yaml::Node* require(const std::string& key) {
      known.insert(key);
      const yaml::Node* n = node.find(key);
      if (!n) w.error(DiagCode::MissingField, node.mark(), "missing required field '" + key + "'");
      return n;
    }
    ~Fields() {
      for (const auto& e : node.entries()) {
        if (!known.count(e.key)) {
          w.error(DiagCode::UnknownField, e.keyMark, "unknown field '" + e.key + "'");
        }
      }
    }
  };

  const yaml::Node* as_mapping(const yaml::Node* n, const char* what) {
    if (!n) return nullptr;
    if (!n->is_mapping()) {
      error(DiagCode::WrongType, n->mark(), std::string(what) + " must be a mapping");
      return nullptr;
    }
    return n;
  }

  const yaml::Node* as_sequence(const yaml::Node* n, const char* what) {
    if (!n) return nullptr;
    if (!n->is_sequence()) {
      error(DiagCode::WrongType, n->mark(), std::string(what) + " must be a sequence");
      return nullptr;
    }
    return n;
  }

  std::optional<std::string> as_scalar(const yaml::Node* n, const char* what) {
    if (!n) return std::nullopt;
    if (!n->is_scalar()) {
      error(DiagCode::WrongType, n->mark(), std::string(what) + " must be a scalar");
      return std::nullopt;
    }
    return n->str();
  }

  std::optional<bool> as_bool(const yaml::Node* n, const char* what) {
    auto s = as_scalar(n, what);
    if (!s) return std::nullopt;
    if (*s == "true") return true;
    if (*s == "false") return false;
    error(DiagCode::WrongType, n->mark(), std::string(what) + " must be 'true' or 'false'");
    return std::nullopt;
  }

  std::optional<std::int64_t> as_count(const yaml::Node* n, const char* what) {
    auto s = as_scalar(n, what);
    if (!s) return std::nullopt;
    if (s->empty() || !std::all_of(s->begin(), s->end(), [](char c) { return c >= '0' && c <= '9'; })) {
      error(DiagCode::BadCount, n->mark(), std::string(what) + " must be a non-negative integer");
      return std::nullopt;
    }
    return std::stoll(*s);
  }

  LabelMap parse_label_map(const yaml::Node* n, const char* what) {
    LabelMap out;
    if (!as_mapping(n, what)) return out;
    for (const auto& e : n->entries()) {
      auto v = as_scalar(&e.value, "label value");
      if (v) out[e.key] = *v;
    }
    return out;
  }

  ResourceVector parse_resource_vector(const yaml::Node* n, const char* what) {
    ResourceVector out;
    if (!as_mapping(n, what)) return out;
    for (const auto& e : n->entries()) {
      auto v = as_scalar(&e.value, "quantity");
      if (!v) continue;
      auto q = parse_quantity(e.key, *v);
      if (!q) {
        error(DiagCode::BadQuantity, e.value.mark(), "bad quantity '" + *v + "' for resource '" + e.key + "'");
        continue;
      }
      if (*q < 0) {
        error(DiagCode::BadQuantity, e.value.mark(), "quantity must be non-negative");
        continue;
      }
      out.amounts[e.key] = *q;
    }
    return out;
  }

  std::vector<AttributePredicate> parse_constraints(const yaml::Node* n) {
    std::vector<AttributePredicate> out;
    if (!n) return out;
    if (!as_sequence(n, "constraints")) return out;
    for (const auto& item : n->items()) {
      if (!item.is_mapping()) {
        error(DiagCode::WrongType, item.mark(), "constraint must be a mapping");
        continue;
      }
      Fields f(*this, item);
      AttributePredicate p;
      if (auto a = as_scalar(f.require("attribute"), "attribute")) p.attribute = *a;
      if (const auto* m = f.get("min")) {
        if (auto s = as_scalar(m, "min")) p.min = std::strtod(s->c_str(), nullptr);
      }
      if (const auto* m = f.get("max")) {
        if (auto s = as_scalar(m, "max")) p.max = std::strtod(s->c_str(), nullptr);
      }
      if (const auto* m = f.get("equals")) {
        if (auto s = as_scalar(m, "equals")) p.equals = *s;
      }
      out.push_back(std::move(p));
    }
    return out;
  }

  std::vector<std::string> parse_string_list(const yaml::Node* n, const char* what) {
    std::vector<std::string> out;
    if (!as_sequence(n, what)) return out;
    for (const auto& item : n->items()) {
      if (auto s = as_scalar(&item, "list item")) out.push_back(*s);
    }
    return out;
  }

 private:
  Diagnostics& diags_;
};

/// Extracts `{{...}}` placeholders from a token. Returns inner names.
std::vector<std::string> placeholders(const std::string& token) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    auto open = token.find("{{", pos);
    if (open == std::string::npos) break;
    auto close = token.find("}}", open + 2);
    if (close == std::string::npos) break;
    out.push_back(token.substr(open + 2, close - open - 2));
    pos = close + 2;
  }
  return out;
}

constexpr const char* kParamPrefix = "inputs.parameters.";

class SpecParser {
 public:
  SpecParser(Diagnostics& diags) : w_(diags), diags_(diags) {}

  std::optional<WorkflowSpec> parse(std::string_view text) {
    yaml::Node root = yaml::Node::mapping();
    try {
      root = yaml::parse_document(text);
    } catch (const yaml::ParseError& e) {
      w_.error(DiagCode::YamlSyntax, e.mark, e.what());
      return std::nullopt;
    }
    if (!root.is_mapping()) {
      w_.error(DiagCode::WrongType, root.mark(), "workflow document must be a mapping");
      return std::nullopt;
    }
    WorkflowSpec spec;
    {
      Walker::Fields f(w_, root);
      if (auto v = w_.as_scalar(f.require("apiVersion"), "apiVersion")) spec.apiVersion = *v;
      if (auto v = w_.as_scalar(f.require("kind"), "kind")) {
        if (*v != "Workflow") {
          w_.error(DiagCode::BadDocument, root.find("kind")->mark(), "kind must be 'Workflow'");
        }
      }
      if (const auto* meta = w_.as_mapping(f.require("metadata"), "metadata")) {
        Walker::Fields mf(w_, *meta);
        if (auto v = w_.as_scalar(mf.require("name"), "metadata.name")) spec.name = *v;
        if (const auto* labels = mf.get("labels")) w_.parse_label_map(labels, "metadata.labels");
      }
      if (const auto* sp = w_.as_mapping(f.require("spec"), "spec")) {
        parse_spec_body(*sp, spec);
      }
    }
    validate(spec);
    if (!diags_.empty()) return std::nullopt;
    return spec;
  }

 private:
  void parse_spec_body(const yaml::Node& node, WorkflowSpec& spec) {
    Walker::Fields f(w_, node);
    if (auto v = w_.as_scalar(f.require("entrypoint"), "entrypoint")) spec.entrypoint = *v;
    if (const auto* vols = f.get("volumes")) {
      if (w_.as_sequence(vols, "volumes")) {
        for (const auto& item : vols->items()) parse_volume(item, spec);
      }
    }
    if (const auto* tpls = w_.as_sequence(f.require("templates"), "templates")) {
      for (const auto& item : tpls->items()) parse_template(item, spec);
    }
  }

  void parse_volume(const yaml::Node& node, WorkflowSpec& spec) {
    if (!node.is_mapping()) {
      w_.error(DiagCode::WrongType, node.mark(), "volume must be a mapping");
      return;
    }
    Walker::Fields f(w_, node);
    VolumeDecl vol;
    if (auto v = w_.as_scalar(f.require("name"), "volume name")) vol.name = *v;
    const auto* pvc = f.get("persistentVolumeClaim");
    const auto* sec = f.get("secret");
    if ((pvc != nullptr) == (sec != nullptr)) {
      w_.error(DiagCode::BadDocument, node.mark(),
               "volume must declare exactly one of persistentVolumeClaim or secret");
      return;
    }
    if (pvc) {
      if (const auto* m = w_.as_mapping(pvc, "persistentVolumeClaim")) {
        Walker::Fields pf(w_, *m);
        vol.kind = VolumeDecl::Kind::PersistentVolumeClaim;
        if (auto v = w_.as_scalar(pf.require("claimName"), "claimName")) vol.ref = *v;
      }
    } else {
      if (const auto* m = w_.as_mapping(sec, "secret")) {
        Walker::Fields sf(w_, *m);
        vol.kind = VolumeDecl::Kind::Secret;
        if (auto v = w_.as_scalar(sf.require("secretName"), "secretName")) vol.ref = *v;
      }
    }
    spec.volumes.push_back(std::move(vol));
  }

  void parse_template(const yaml::Node& node, WorkflowSpec& spec) {
    if (!node.is_mapping()) {
      w_.error(DiagCode::WrongType, node.mark(), "template must be a mapping");
      return;
    }
    Walker::Fields f(w_, node);
    Template tpl;
    tpl.mark = node.mark();
    if (auto v = w_.as_scalar(f.require("name"), "template name")) tpl.name = *v;
    if (const auto* meta = f.get("metadata")) {
      if (const auto* m = w_.as_mapping(meta, "template metadata")) {
        Walker::Fields mf(w_, *m);
        if (const auto* labels = mf.get("labels")) tpl.labels = w_.parse_label_map(labels, "labels");
      }
    }
    if (const auto* inputs = f.get("inputs")) {
      if (const auto* m = w_.as_mapping(inputs, "inputs")) {
        Walker::Fields inf(w_, *m);
        if (const auto* params = w_.as_sequence(inf.require("parameters"), "inputs.parameters")) {
          for (const auto& p : params->items()) {
            if (!p.is_mapping()) {
              w_.error(DiagCode::WrongType, p.mark(), "parameter must be a mapping");
              continue;
            }
            Walker::Fields pf(w_, p);
            if (auto v = w_.as_scalar(pf.require("name"), "parameter name")) {
              tpl.inputParams.push_back(ParamDecl{*v});
            }
          }
        }
      }
    }
    if (const auto* sel = f.get("nodeSelector")) {
      tpl.nodeSelector = w_.parse_label_map(sel, "nodeSelector");
    }
    const auto* steps = f.get("steps");
    const auto* container = f.get("container");
    if ((steps != nullptr) == (container != nullptr)) {
      w_.error(DiagCode::BadDocument, node.mark(),
               "template '" + tpl.name + "' must declare exactly one of steps or container");
      return;
    }
    if (steps) {
      tpl.body = parse_steps(*steps);
    } else {
      tpl.body = parse_container(*container);
    }
    spec.templates.push_back(std::move(tpl));
  }

  StepsTemplate parse_steps(const yaml::Node& node) {
    StepsTemplate out;
    if (!w_.as_sequence(&node, "steps")) return out;
    for (const auto& groupNode : node.items()) {
      StepGroup group;
      if (!groupNode.is_sequence()) {
        w_.error(DiagCode::WrongType, groupNode.mark(), "step group must be a sequence of steps");
        continue;
      }
      for (const auto& stepNode : groupNode.items()) {
        if (!stepNode.is_mapping()) {
          w_.error(DiagCode::WrongType, stepNode.mark(), "step must be a mapping");
          continue;
        }
        Walker::Fields f(w_, stepNode);
        StepRef step;
        step.mark = stepNode.mark();
        if (auto v = w_.as_scalar(f.require("name"), "step name")) step.name = *v;
        if (auto v = w_.as_scalar(f.require("template"), "step template")) step.templateRef = *v;
        if (const auto* argsNode = f.get("arguments")) {
          if (const auto* m = w_.as_mapping(argsNode, "arguments")) {
            Walker::Fields af(w_, *m);
            if (const auto* params = w_.as_sequence(af.require("parameters"), "arguments.parameters")) {
              for (const auto& p : params->items()) {
                if (!p.is_mapping()) {
                  w_.error(DiagCode::WrongType, p.mark(), "argument must be a mapping");
                  continue;
                }
                Walker::Fields pf(w_, p);
                ParamBinding binding;
                if (auto v = w_.as_scalar(pf.require("name"), "argument name")) binding.name = *v;
                if (auto v = w_.as_scalar(pf.require("value"), "argument value")) binding.value = *v;
                step.arguments.push_back(std::move(binding));
              }
            }
          }
        }
        if (const auto* seqNode = f.get("withSequence")) {
          if (const auto* m = w_.as_mapping(seqNode, "withSequence")) {
            Walker::Fields sf(w_, *m);
            WithSequence ws;
            if (auto c = w_.as_count(sf.require("count"), "withSequence.count")) ws.count = *c;
            step.withSequence = ws;
          }
        }
        group.steps.push_back(std::move(step));
      }
      out.groups.push_back(std::move(group));
    }
    return out;
  }

  ContainerTemplate parse_container(const yaml::Node& node) {
    ContainerTemplate out;
    if (!w_.as_mapping(&node, "container")) return out;
    Walker::Fields f(w_, node);
    if (auto v = w_.as_scalar(f.require("image"), "image")) out.image = *v;
    if (const auto* cmd = f.require("command")) out.command = w_.parse_string_list(cmd, "command");
    if (const auto* args = f.get("args")) out.args = w_.parse_string_list(args, "args");
    if (const auto* env = f.get("env")) {
      if (w_.as_sequence(env, "env")) {
        for (const auto& item : env->items()) {
          if (!item.is_mapping()) {
            w_.error(DiagCode::WrongType, item.mark(), "env entry must be a mapping");
            continue;
          }
          Walker::Fields ef(w_, item);
          EnvVar var;
          if (auto v = w_.as_scalar(ef.require("name"), "env name")) var.name = *v;
          if (auto v = w_.as_scalar(ef.require("value"), "env value")) var.value = *v;
          out.env.push_back(std::move(var));
        }
      }
    }
    if (const auto* mounts = f.get("volumeMounts")) {
      if (w_.as_sequence(mounts, "volumeMounts")) {
        for (const auto& item : mounts->items()) {
          if (!item.is_mapping()) {
            w_.error(DiagCode::WrongType, item.mark(), "volumeMount must be a mapping");
            continue;
          }
          Walker::Fields mf(w_, item);
          VolumeMount mount;
          if (auto v = w_.as_scalar(mf.require("name"), "volumeMount name")) mount.volumeName = *v;
          if (auto v = w_.as_scalar(mf.require("mountPath"), "mountPath")) mount.mountPath = *v;
          if (const auto* ro = mf.get("readOnly")) {
            if (auto b = w_.as_bool(ro, "readOnly")) mount.readOnly = *b;
          }
          out.volumeMounts.push_back(std::move(mount));
        }
      }
    }
    if (const auto* res = f.get("resources")) {
      if (const auto* m = w_.as_mapping(res, "resources")) {
        Walker::Fields rf(w_, *m);
        if (const auto* req = rf.get("requests")) {
          out.resources.requests = w_.parse_resource_vector(req, "requests");
        }
        if (const auto* lim = rf.get("limits")) {
          out.resources.limits = w_.parse_resource_vector(lim, "limits");
        }
        if (const auto* claims = rf.get("deviceClaims")) {
          if (w_.as_sequence(claims, "deviceClaims")) {
            for (const auto& item : claims->items()) {
              if (!item.is_mapping()) {
                w_.error(DiagCode::WrongType, item.mark(), "deviceClaim must be a mapping");
                continue;
              }
              Walker::Fields cf(w_, item);
              DeviceClaim claim;
              if (auto v = w_.as_scalar(cf.require("className"), "className")) claim.className = *v;
              if (auto c = w_.as_count(cf.require("count"), "claim count")) claim.count = *c;
              claim.constraints = w_.parse_constraints(cf.get("constraints"));
              out.resources.deviceClaims.push_back(std::move(claim));
            }
          }
        }
        if (const auto* lim = m->find("limits"); lim && m->find("requests")) {
          for (const auto& [name, req] : out.resources.requests.amounts) {
            if (out.resources.limits.amounts.count(name) && out.resources.limits.get(name) < req) {
              w_.error(DiagCode::LimitBelowRequest, lim->mark(),
                       "limit for '" + name + "' is below its request");
            }
          }
        }
      }
    }
    return out;
  }

  /// Semantic validation: reference resolution, uniqueness, placeholder
  /// declarations, acyclicity. Reports everything it finds.
  void validate(const WorkflowSpec& spec) {
    std::set<std::string> names;
    for (const auto& tpl : spec.templates) {
      if (!names.insert(tpl.name).second) {
        w_.error(DiagCode::DuplicateTemplate, tpl.mark, "duplicate template name '" + tpl.name + "'");
      }
    }
    if (!spec.entrypoint.empty() && spec.find_template(spec.entrypoint) == nullptr) {
      w_.error(DiagCode::EntrypointUnresolved, {},
               "entrypoint '" + spec.entrypoint + "' does not name a template");
    }
    std::set<std::string> volumeNames;
    for (const auto& vol : spec.volumes) volumeNames.insert(vol.name);

    for (const auto& tpl : spec.templates) {
      if (tpl.is_steps()) {
        validate_steps(spec, tpl);
      } else {
        validate_container(tpl, volumeNames);
      }
    }
    // Step groups run strictly in sequence, so the expanded graph is acyclic
    // by construction; checked anyway so a future change cannot silently
    // break it.
    check_acyclic(spec);
  }

  void validate_steps(const WorkflowSpec& spec, const Template& tpl) {
    std::set<std::string> stepNames;
    for (const auto& group : tpl.steps().groups) {
      for (const auto& step : group.steps) {
        if (!stepNames.insert(step.name).second) {
          w_.error(DiagCode::DuplicateName, step.mark,
                   "duplicate step name '" + step.name + "' in template '" + tpl.name + "'");
        }
        const Template* target = spec.find_template(step.templateRef);
        if (!target) {
          w_.error(DiagCode::TemplateRefUnresolved, step.mark,
                   "step '" + step.name + "' references unknown template '" + step.templateRef + "'");
          continue;
        }
        if (target->is_steps()) {
          w_.error(DiagCode::NestedStepsUnsupported, step.mark,
                   "step '" + step.name + "' references a steps template; nesting is not supported");
          continue;
        }
        std::set<std::string> declared;
        for (const auto& p : target->inputParams) declared.insert(p.name);
        std::set<std::string> bound;
        for (const auto& arg : step.arguments) {
          bound.insert(arg.name);
          if (!declared.count(arg.name)) {
            w_.error(DiagCode::UndeclaredParameter, step.mark,
                     "step '" + step.name + "' binds parameter '" + arg.name +
                         "' not declared by template '" + target->name + "'");
          }
          for (const auto& ph : placeholders(arg.value)) {
            if (ph == "item") {
              if (!step.withSequence) {
                w_.error(DiagCode::UndeclaredParameter, step.mark,
                         "step '" + step.name + "' uses {{item}} without withSequence");
              }
            } else {
              w_.error(DiagCode::UndeclaredParameter, step.mark,
                       "unsupported placeholder '{{" + ph + "}}' in step argument");
            }
          }
        }
        for (const auto& name : declared) {
          if (!bound.count(name)) {
            w_.error(DiagCode::UndeclaredParameter, step.mark,
                     "step '" + step.name + "' does not bind input parameter '" + name +
                         "' of template '" + target->name + "'");
          }
        }
      }
    }
  }

  void validate_container(const Template& tpl, const std::set<std::string>& volumeNames) {
    std::set<std::string> declared;
    for (const auto& p : tpl.inputParams) declared.insert(p.name);
    auto check_tokens = [&](const std::vector<std::string>& tokens) {
      for (const auto& token : tokens) {
        for (const auto& ph : placeholders(token)) {
          if (ph.rfind(kParamPrefix, 0) == 0) {
            std::string name = ph.substr(std::string(kParamPrefix).size());
            if (!declared.count(name)) {
              w_.error(DiagCode::UndeclaredParameter, tpl.mark,
                       "template '" + tpl.name + "' references undeclared input parameter '" + name + "'");
            }
          } else {
            w_.error(DiagCode::UndeclaredParameter, tpl.mark,
                     "unsupported placeholder '{{" + ph + "}}' in template '" + tpl.name + "'");
          }
        }
      }
    };
    const auto& c = tpl.container();
    check_tokens(c.command);
    check_tokens(c.args);
    for (const auto& e : c.env) check_tokens({e.value});
    for (const auto& mount : c.volumeMounts) {
      if (!volumeNames.count(mount.volumeName)) {
        w_.error(DiagCode::UnknownVolume, tpl.mark,
                 "template '" + tpl.name + "' mounts undeclared volume '" + mount.volumeName + "'");
      }
    }
  }

  void check_acyclic(const WorkflowSpec& spec) {
    const Template* entry = spec.find_template(spec.entrypoint);
    if (!entry || !entry->is_steps()) return;
    // Kahn over step nodes; edges are the group barriers.
    std::vector<const StepRef*> nodes;
    std::vector<std::vector<int>> preds;
    int prevStart = -1, prevEnd = -1;
    for (const auto& group : entry->steps().groups) {
      int start = static_cast<int>(nodes.size());
      for (const auto& step : group.steps) {
        nodes.push_back(&step);
        preds.emplace_back();
        if (prevStart >= 0) {
          for (int p = prevStart; p < prevEnd; ++p) preds.back().push_back(p);
        }
      }
      if (!group.steps.empty()) {
        prevStart = start;
        prevEnd = static_cast<int>(nodes.size());
      }
    }
    std::vector<int> indeg(nodes.size(), 0);
    std::vector<std::vector<int>> succ(nodes.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      indeg[i] = static_cast<int>(preds[i].size());
      for (int p : preds[i]) succ[p].push_back(static_cast<int>(i));
    }
    std::vector<int> ready;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
      int n = ready.back();
      ready.pop_back();
      ++seen;
      for (int s : succ[n]) {
        if (--indeg[s] == 0) ready.push_back(s);
      }
    }
    if (seen != nodes.size()) {
      w_.error(DiagCode::DagCycle, entry->mark, "step graph of entrypoint is cyclic");
    }
  }

  Walker w_;
  Diagnostics& diags_;
};

}  // namespace

ParseResult parse_workflow(std::string_view text) {
  ParseResult result;
  SpecParser parser(result.diagnostics);
  result.spec = parser.parse(text);
  return result;
}

namespace {

yaml::Node scalar(const std::string& s) { return yaml::Node::scalar(s); }

yaml::Node render_resource_vector(const ResourceVector& v) {
  yaml::Node m = yaml::Node::mapping();
  for (const auto& [name, amount] : v.amounts) {
    m.insert(name, {}, scalar(format_quantity(name, amount)));
  }
  return m;
}

yaml::Node render_label_map(const LabelMap& labels) {
  yaml::Node m = yaml::Node::mapping();
  for (const auto& [k, v] : labels) m.insert(k, {}, scalar(v));
  return m;
}

yaml::Node render_string_list(const std::vector<std::string>& list) {
  yaml::Node s = yaml::Node::sequence();
  for (const auto& item : list) s.push_back(scalar(item));
  return s;
}

yaml::Node render_template(const Template& tpl) {
  yaml::Node t = yaml::Node::mapping();
  t.insert("name", {}, scalar(tpl.name));
  if (!tpl.labels.empty()) {
    yaml::Node meta = yaml::Node::mapping();
    meta.insert("labels", {}, render_label_map(tpl.labels));
    t.insert("metadata", {}, std::move(meta));
  }
  if (!tpl.inputParams.empty()) {
    yaml::Node params = yaml::Node::sequence();
    for (const auto& p : tpl.inputParams) {
      yaml::Node pm = yaml::Node::mapping();
      pm.insert("name", {}, scalar(p.name));
      params.push_back(std::move(pm));
    }
    yaml::Node inputs = yaml::Node::mapping();
    inputs.insert("parameters", {}, std::move(params));
    t.insert("inputs", {}, std::move(inputs));
  }
  if (tpl.is_steps()) {
    yaml::Node groups = yaml::Node::sequence();
    for (const auto& group : tpl.steps().groups) {
      yaml::Node g = yaml::Node::sequence();
      for (const auto& step : group.steps) {
        yaml::Node s = yaml::Node::mapping();
        s.insert("name", {}, scalar(step.name));
        s.insert("template", {}, scalar(step.templateRef));
        if (!step.arguments.empty()) {
          yaml::Node params = yaml::Node::sequence();
          for (const auto& b : step.arguments) {
            yaml::Node bm = yaml::Node::mapping();
            bm.insert("name", {}, scalar(b.name));
            bm.insert("value", {}, scalar(b.value));
            params.push_back(std::move(bm));
          }
          yaml::Node args = yaml::Node::mapping();
          args.insert("parameters", {}, std::move(params));
          s.insert("arguments", {}, std::move(args));
        }
        if (step.withSequence) {
          yaml::Node ws = yaml::Node::mapping();
          ws.insert("count", {}, scalar(std::to_string(step.withSequence->count)));
          s.insert("withSequence", {}, std::move(ws));
        }
        g.push_back(std::move(s));
      }
      groups.push_back(std::move(g));
    }
    t.insert("steps", {}, std::move(groups));
  } else {
    const auto& c = tpl.container();
    yaml::Node cn = yaml::Node::mapping();
    cn.insert("image", {}, scalar(c.image));
    cn.insert("command", {}, render_string_list(c.command));
    if (!c.args.empty()) cn.insert("args", {}, render_string_list(c.args));
    if (!c.env.empty()) {
      yaml::Node env = yaml::Node::sequence();
      for (const auto& e : c.env) {
        yaml::Node em = yaml::Node::mapping();
        em.insert("name", {}, scalar(e.name));
        em.insert("value", {}, scalar(e.value));
        env.push_back(std::move(em));
      }
      cn.insert("env", {}, std::move(env));
    }
    if (!c.volumeMounts.empty()) {
      yaml::Node mounts = yaml::Node::sequence();
      for (const auto& mnt : c.volumeMounts) {
        yaml::Node mm = yaml::Node::mapping();
        mm.insert("name", {}, scalar(mnt.volumeName));
        mm.insert("mountPath", {}, scalar(mnt.mountPath));
        if (mnt.readOnly) mm.insert("readOnly", {}, scalar("true"));
        mounts.push_back(std::move(mm));
      }
      cn.insert("volumeMounts", {}, std::move(mounts));
    }
    if (!c.resources.requests.empty() || !c.resources.limits.empty() || !c.resources.deviceClaims.empty()) {
      yaml::Node res = yaml::Node::mapping();
      if (!c.resources.requests.empty()) res.insert("requests", {}, render_resource_vector(c.resources.requests));
      if (!c.resources.limits.empty()) res.insert("limits", {}, render_resource_vector(c.resources.limits));
      if (!c.resources.deviceClaims.empty()) {
        yaml::Node claims = yaml::Node::sequence();
        for (const auto& claim : c.resources.deviceClaims) {
          yaml::Node cm = yaml::Node::mapping();
          cm.insert("className", {}, scalar(claim.className));
          cm.insert("count", {}, scalar(std::to_string(claim.count)));
          if (!claim.constraints.empty()) {
            yaml::Node cons = yaml::Node::sequence();
            for (const auto& p : claim.constraints) {
              yaml::Node pm = yaml::Node::mapping();
              pm.insert("attribute", {}, scalar(p.attribute));
              auto fmt = [](double d) {
                std::string s = std::to_string(d);
                while (s.size() > 1 && s.back() == '0') s.pop_back();
                if (!s.empty() && s.back() == '.') s.pop_back();
                return s;
              };
              if (p.min) pm.insert("min", {}, scalar(fmt(*p.min)));
              if (p.max) pm.insert("max", {}, scalar(fmt(*p.max)));
              if (p.equals) pm.insert("equals", {}, scalar(*p.equals));
              cons.push_back(std::move(pm));
            }
            cm.insert("constraints", {}, std::move(cons));
          }
          claims.push_back(std::move(cm));
        }
        res.insert("deviceClaims", {}, std::move(claims));
      }
      cn.insert("resources", {}, std::move(res));
    }
    t.insert("container", {}, std::move(cn));
  }
  if (!tpl.nodeSelector.empty()) {
    t.insert("nodeSelector", {}, render_label_map(tpl.nodeSelector));
  }
  return t;
}

}  // namespace

std::string render_workflow(const WorkflowSpec& spec) {
  yaml::Node root = yaml::Node::mapping();
  root.insert("apiVersion", {}, scalar(spec.apiVersion));
  root.insert("kind", {}, scalar("Workflow"));
  yaml::Node meta = yaml::Node::mapping();
  meta.insert("name", {}, scalar(spec.name));
  root.insert("metadata", {}, std::move(meta));
  yaml::Node sp = yaml::Node::mapping();
  sp.insert("entrypoint", {}, scalar(spec.entrypoint));
  if (!spec.volumes.empty()) {
    yaml::Node vols = yaml::Node::sequence();
    for (const auto& vol : spec.volumes) {
      yaml::Node vm = yaml::Node::mapping();
      vm.insert("name", {}, scalar(vol.name));
      yaml::Node ref = yaml::Node::mapping();
      if (vol.kind == VolumeDecl::Kind::PersistentVolumeClaim) {
        ref.insert("claimName", {}, scalar(vol.ref));
        vm.insert("persistentVolumeClaim", {}, std::move(ref));
      } else {
        ref.insert("secretName", {}, scalar(vol.ref));
        vm.insert("secret", {}, std::move(ref));
      }
      vols.push_back(std::move(vm));
    }
    sp.insert("volumes", {}, std::move(vols));
  }
  yaml::Node tpls = yaml::Node::sequence();
  for (const auto& tpl : spec.templates) tpls.push_back(render_template(tpl));
  sp.insert("templates", {}, std::move(tpls));
  root.insert("spec", {}, std::move(sp));
  return yaml::render(root);
}

}  // namespace hqflow::wfspec
