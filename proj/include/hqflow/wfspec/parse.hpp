#pragma once

#include <optional>
#include <string_view>

#include "hqflow/common/diagnostics.hpp"
#include "hqflow/wfspec/spec.hpp"

namespace hqflow::wfspec {

struct ParseResult {
  std::optional<WorkflowSpec> spec;
  Diagnostics diagnostics;
  bool ok() const { return spec.has_value() && diagnostics.empty(); }
};

/// Parses and validates a workflow document. The schema is fail-closed:
/// unknown fields are rejected. Validation reports every violation it can
/// find, not just the first; `spec` is only set when there are none.
ParseResult parse_workflow(std::string_view text);

/// Renders a spec back to document text. parse(render(s)) == s.
std::string render_workflow(const WorkflowSpec& spec);

}  // namespace hqflow::wfspec
