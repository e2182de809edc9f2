#pragma once

#include <filesystem>
#include <string>

#include "hqflow/engine/engine.hpp"

namespace hqflow::engine {

// Run records persist one directory per run:
//   <dir>/<runId>/spec.yaml      submitted document, byte-identical
//   <dir>/<runId>/events.jsonl   append-only transition log, replayable
//   <dir>/<runId>/report.json    final RunReport
//   <dir>/<runId>/metrics.prom   exposition-format snapshot (when given)

std::filesystem::path persist_run_record(const std::filesystem::path& dir, const WorkflowRun& run,
                                         const RunReport& report, const std::string& metricsText = "");

/// Replays an events.jsonl stream into the final per-state task census.
/// Used to verify that the log alone reconstructs the run outcome.
std::map<std::string, int> replay_census(const std::string& eventsJsonl);

}  // namespace hqflow::engine
