#include "hqflow/engine/run_record.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hqflow::engine {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace

std::filesystem::path persist_run_record(const std::filesystem::path& dir, const WorkflowRun& run,
                                         const RunReport& report, const std::string& metricsText) {
  const std::filesystem::path runDir = dir / run.runId;
  std::filesystem::create_directories(runDir);
  write_file(runDir / "spec.yaml", run.specText);
  std::ostringstream events;
  for (const auto& e : run.events) events << e.to_json_line() << "\n";
  write_file(runDir / "events.jsonl", events.str());
  write_file(runDir / "report.json", report.to_json());
  if (!metricsText.empty()) write_file(runDir / "metrics.prom", metricsText);
  return runDir;
}

std::map<std::string, int> replay_census(const std::string& eventsJsonl) {
  std::map<std::string, int> census{{"pending", 0}, {"active", 0}, {"succeeded", 0}, {"failed", 0}};
  std::istringstream in(eventsJsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    const std::string kind = j.value("event", "");
    if (kind == "run_submitted") {
      census["pending"] += j.value("tasks", 0);
    } else if (kind == "task_state_changed") {
      census[j.at("from").get<std::string>()] -= 1;
      census[j.at("to").get<std::string>()] += 1;
    }
  }
  return census;
}

}  // namespace hqflow::engine
