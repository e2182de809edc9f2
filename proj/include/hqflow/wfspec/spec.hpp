#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hqflow/common/attributes.hpp"
#include "hqflow/common/resources.hpp"
#include "hqflow/yaml/yaml.hpp"

namespace hqflow::wfspec {

using LabelMap = std::map<std::string, std::string>;

constexpr const char* kQueueLabelKey = "kueue.x-k8s.io/queue-name";

struct ParamDecl {
  std::string name;
  bool operator==(const ParamDecl&) const = default;
};

struct ParamBinding {
  std::string name;
  std::string value;
  bool operator==(const ParamBinding&) const = default;
};

struct WithSequence {
  std::int64_t count = 0;
  bool operator==(const WithSequence&) const = default;
};

struct StepRef {
  std::string name;
  std::string templateRef;
  std::vector<ParamBinding> arguments;
  std::optional<WithSequence> withSequence;
  yaml::Mark mark{};

  bool operator==(const StepRef& o) const {
    return name == o.name && templateRef == o.templateRef && arguments == o.arguments &&
           withSequence == o.withSequence;
  }
};

struct StepGroup {
  std::vector<StepRef> steps;
  bool operator==(const StepGroup&) const = default;
};

struct VolumeDecl {
  enum class Kind { PersistentVolumeClaim, Secret };
  std::string name;
  Kind kind = Kind::PersistentVolumeClaim;
  std::string ref;  // claimName or secretName
  bool operator==(const VolumeDecl&) const = default;
};

struct VolumeMount {
  std::string volumeName;
  std::string mountPath;
  bool readOnly = false;
  bool operator==(const VolumeMount&) const = default;
};

struct DeviceClaim {
  std::string className;
  std::int64_t count = 1;
  std::vector<AttributePredicate> constraints;
  bool operator==(const DeviceClaim&) const = default;
};

struct ResourceRequest {
  ResourceVector requests;
  ResourceVector limits;
  std::vector<DeviceClaim> deviceClaims;

  /// What scheduling and binding account for: explicit requests plus
  /// limit-only device entries (extended resources default request=limit),
  /// plus one `claims/<class>` pseudo-resource per device claim.
  ResourceVector scheduling_requests() const;

  bool operator==(const ResourceRequest&) const = default;
};

struct EnvVar {
  std::string name;
  std::string value;
  bool operator==(const EnvVar&) const = default;
};

struct ContainerTemplate {
  std::string image;
  std::vector<std::string> command;
  std::vector<std::string> args;
  std::vector<EnvVar> env;
  std::vector<VolumeMount> volumeMounts;
  ResourceRequest resources;
  bool operator==(const ContainerTemplate&) const = default;
};

struct StepsTemplate {
  std::vector<StepGroup> groups;
  bool operator==(const StepsTemplate&) const = default;
};

struct Template {
  std::string name;
  LabelMap labels;  // template metadata labels (queue binding lives here)
  std::vector<ParamDecl> inputParams;
  LabelMap nodeSelector;
  std::variant<StepsTemplate, ContainerTemplate> body;
  yaml::Mark mark{};

  bool is_steps() const { return std::holds_alternative<StepsTemplate>(body); }
  const StepsTemplate& steps() const { return std::get<StepsTemplate>(body); }
  const ContainerTemplate& container() const { return std::get<ContainerTemplate>(body); }
  std::optional<std::string> queue_label() const;

  bool operator==(const Template& o) const {
    return name == o.name && labels == o.labels && inputParams == o.inputParams &&
           nodeSelector == o.nodeSelector && body == o.body;
  }
};

struct WorkflowSpec {
  std::string apiVersion;
  std::string name;
  std::string entrypoint;
  std::vector<VolumeDecl> volumes;
  std::vector<Template> templates;

  const Template* find_template(std::string_view name) const;

  bool operator==(const WorkflowSpec& o) const {
    return apiVersion == o.apiVersion && name == o.name && entrypoint == o.entrypoint &&
           volumes == o.volumes && templates == o.templates;
  }
};

}  // namespace hqflow::wfspec
