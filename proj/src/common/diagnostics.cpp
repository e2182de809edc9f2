#include "hqflow/common/diagnostics.hpp"

#include <sstream>

namespace hqflow {

const char* to_string(DiagCode code) {
  switch (code) {
    case DiagCode::YamlSyntax: return "yaml_syntax";
    case DiagCode::DuplicateKey: return "duplicate_key";
    case DiagCode::WrongType: return "wrong_type";
    case DiagCode::MissingField: return "missing_field";
    case DiagCode::UnknownField: return "unknown_field";
    case DiagCode::BadQuantity: return "bad_quantity";
    case DiagCode::BadCount: return "bad_count";
    case DiagCode::DuplicateTemplate: return "duplicate_template";
    case DiagCode::DuplicateName: return "duplicate_name";
    case DiagCode::EntrypointUnresolved: return "entrypoint_unresolved";
    case DiagCode::TemplateRefUnresolved: return "template_ref_unresolved";
    case DiagCode::NestedStepsUnsupported: return "nested_steps_unsupported";
    case DiagCode::UnknownVolume: return "unknown_volume";
    case DiagCode::UndeclaredParameter: return "undeclared_parameter";
    case DiagCode::LimitBelowRequest: return "limit_below_request";
    case DiagCode::DagCycle: return "dag_cycle";
    case DiagCode::UnboundParameter: return "unbound_parameter";
    case DiagCode::BadDocument: return "bad_document";
  }
  return "unknown";
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << line << ":" << column << ": error [" << to_string(code) << "] " << message;
  return os.str();
}

std::string format_diagnostics(const Diagnostics& diags) {
  std::ostringstream os;
  for (const auto& d : diags) os << d.str() << "\n";
  return os.str();
}

}  // namespace hqflow
