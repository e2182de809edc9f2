#pragma once

#include <string>
#include <vector>

namespace hqflow {

/// Machine-readable error codes attached to diagnostics. Keep stable:
/// they are part of the CLI output contract.
enum class DiagCode {
  YamlSyntax,
  DuplicateKey,
  WrongType,
  MissingField,
  UnknownField,
  BadQuantity,
  BadCount,
  DuplicateTemplate,
  DuplicateName,
  EntrypointUnresolved,
  TemplateRefUnresolved,
  NestedStepsUnsupported,
  UnknownVolume,
  UndeclaredParameter,
  LimitBelowRequest,
  DagCycle,
  UnboundParameter,
  BadDocument,
};

const char* to_string(DiagCode code);

struct Diagnostic {
  DiagCode code;
  std::string message;
  int line = 0;    // 1-based, 0 when unknown
  int column = 0;  // 1-based, 0 when unknown

  std::string str() const;
};

using Diagnostics = std::vector<Diagnostic>;

std::string format_diagnostics(const Diagnostics& diags);

}  // namespace hqflow
