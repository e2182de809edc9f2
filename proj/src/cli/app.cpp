#include "hqflow/cli/app.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hqflow/cluster/config.hpp"
#include "hqflow/cutting/workload.hpp"
#include "hqflow/engine/engine.hpp"
#include "hqflow/engine/run_record.hpp"
#include "hqflow/obs/metrics.hpp"
#include "hqflow/obs/recorder.hpp"
#include "hqflow/obs/serve.hpp"
#include "hqflow/quantum/statevector.hpp"
#include "hqflow/sched/config.hpp"
#include "hqflow/wfspec/parse.hpp"

namespace hqflow::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, end);
}

std::string seconds_str(std::int64_t ns) {
  std::ostringstream os;
  os << format_double(static_cast<double>(ns) / 1e9) << " s";
  return os.str();
}

struct ApplyOptions {
  std::string workflowFile;
  std::string clusterFile;
  std::string queuesFile;
  std::string runDir = "runs";
  std::uint64_t seed = 42;
  std::string mode = "exact";
  std::int64_t shots = 4096;
  int qubits = 11;
  int layers = 3;
  int maxFragmentQubits = 6;
};

int do_validate(const std::string& file, std::ostream& out, std::ostream& err) {
  auto text = read_file(file);
  if (!text) {
    err << "error: cannot read '" << file << "'\n";
    return 2;
  }
  auto result = wfspec::parse_workflow(*text);
  if (!result.ok()) {
    err << file << " is invalid:\n" << format_diagnostics(result.diagnostics);
    return 2;
  }
  auto expanded = wfspec::expand_dag(*result.spec);
  if (!expanded.ok()) {
    err << file << " does not expand:\n" << format_diagnostics(expanded.diagnostics);
    return 2;
  }
  out << file << ": valid (" << result.spec->templates.size() << " templates, "
      << expanded.graph->nodes.size() << " tasks)\n";
  return 0;
}

int do_apply(const ApplyOptions& opts, std::ostream& out, std::ostream& err) {
  auto workflowText = read_file(opts.workflowFile);
  if (!workflowText) {
    err << "error: cannot read '" << opts.workflowFile << "'\n";
    return 2;
  }
  auto clusterText = read_file(opts.clusterFile);
  if (!clusterText) {
    err << "error: cannot read '" << opts.clusterFile << "'\n";
    return 2;
  }
  auto queuesText = read_file(opts.queuesFile);
  if (!queuesText) {
    err << "error: cannot read '" << opts.queuesFile << "'\n";
    return 2;
  }

  auto parsed = wfspec::parse_workflow(*workflowText);
  if (!parsed.ok()) {
    err << opts.workflowFile << " is invalid:\n" << format_diagnostics(parsed.diagnostics);
    return 2;
  }
  auto clusterResult = cluster::load_cluster_config(*clusterText);
  if (!clusterResult.ok()) {
    err << opts.clusterFile << " is invalid:\n" << format_diagnostics(clusterResult.diagnostics);
    return 2;
  }
  auto queueResult = sched::load_queue_config(*queuesText, &clusterResult.config->cluster);
  if (!queueResult.ok()) {
    err << opts.queuesFile << " is invalid:\n" << format_diagnostics(queueResult.diagnostics);
    return 2;
  }
  for (const auto& w : queueResult.warnings) err << "warning: " << w.message << "\n";

  engine::RunConfig config;
  config.seed = opts.seed;
  config.shots = opts.shots;
  try {
    config.mode = cutting::exec_mode_from_string(opts.mode);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  config.workload.numQubits = opts.qubits;
  config.workload.layers = opts.layers;
  config.workload.maxFragmentQubits = opts.maxFragmentQubits;
  config.workload.seed = opts.seed;

  engine::Engine eng(std::move(clusterResult.config->cluster), std::move(*queueResult.scheduler), config);
  eng.set_secrets(clusterResult.config->secrets);
  engine::register_quantum_workflow_payloads(eng.payloads());

  obs::MetricsRegistry registry = obs::MetricsRegistry::standard();
  obs::EventRecorder recorder(registry);
  eng.add_observer(recorder.callback());

  const std::string runId = eng.submit(*parsed.spec, *workflowText);
  engine::RunReport report = eng.run_to_completion(runId);

  const auto runDir =
      engine::persist_run_record(fs::path(opts.runDir), *eng.find_run(runId), report,
                                 registry.export_text());

  out << "run " << report.runId << ": " << to_string(report.state) << "\n";
  out << "tasks: " << report.stateCounts.at("succeeded") << " succeeded, "
      << report.stateCounts.at("failed") << " failed, " << report.stateCounts.at("pending")
      << " pending (of " << report.tasks.size() << ")\n";
  out << "makespan: " << seconds_str(report.makespanNs) << " virtual\n";

  if (!report.workloadResultJson.empty()) {
    auto result = json::parse(report.workloadResultJson);
    const double value = result.at("value").get<double>();
    auto circuit = cutting::make_hea_circuit(config.workload.numQubits, config.workload.layers,
                                             config.seed);
    const double oracle = quantum::expectation(
        quantum::simulate(circuit), quantum::Observable::full_z(config.workload.numQubits));
    out << "reconstructed expectation: " << format_double(value) << " ("
        << result.at("mode").get<std::string>() << ", " << result.at("variant_count").get<int>()
        << " variants)\n";
    out << "uncut oracle:              " << format_double(oracle) << "\n";
    out << "absolute delta:            " << format_double(std::abs(value - oracle)) << "\n";
    if (config.mode == cutting::ExecMode::Sampled) {
      out << "propagated stderr:         " << format_double(result.at("uncertainty").get<double>())
          << "\n";
    }
  }
  for (const auto& t : report.tasks) {
    if (t.state == "failed") {
      out << "failed task: " << t.name << "\n";
    }
  }
  out << "record: " << runDir.string() << "\n";
  return report.state == engine::RunState::Succeeded ? 0 : 1;
}

int do_status(const std::string& runId, const std::string& runDir, std::ostream& out,
              std::ostream& err) {
  auto text = read_file((fs::path(runDir) / runId / "report.json").string());
  if (!text) {
    err << "error: no report for run '" << runId << "' under " << runDir << "\n";
    return 2;
  }
  auto report = json::parse(*text);
  out << "run " << runId << ": " << report.at("state").get<std::string>() << "\n";
  const auto& states = report.at("task_states");
  out << "tasks: pending " << states.at("pending").get<int>() << ", active "
      << states.at("active").get<int>() << ", succeeded " << states.at("succeeded").get<int>()
      << ", failed " << states.at("failed").get<int>() << "\n";
  // per-template progress
  std::map<std::string, std::pair<int, int>> progress;  // template -> (succeeded, total)
  for (const auto& t : report.at("tasks")) {
    auto& p = progress[t.at("template").get<std::string>()];
    ++p.second;
    if (t.at("state").get<std::string>() == "succeeded") ++p.first;
  }
  for (const auto& [tpl, p] : progress) {
    out << "  " << tpl << ": " << p.first << "/" << p.second << "\n";
  }
  out << "makespan: " << seconds_str(report.at("makespan_ns").get<std::int64_t>()) << " virtual\n";
  return 0;
}

int do_queues(const std::string& runId, const std::string& runDir, const std::string& queuesFile,
              std::ostream& out, std::ostream& err) {
  if (!runId.empty()) {
    auto text = read_file((fs::path(runDir) / runId / "report.json").string());
    if (!text) {
      err << "error: no report for run '" << runId << "' under " << runDir << "\n";
      return 2;
    }
    auto report = json::parse(*text);
    out << "queue pending admitted\n";
    for (const auto& [name, counts] : report.at("queues").items()) {
      out << name << " " << counts.at("pending").get<int>() << " " << counts.at("admitted").get<int>()
          << "\n";
    }
    return 0;
  }
  auto text = read_file(queuesFile);
  if (!text) {
    err << "error: cannot read '" << queuesFile << "'\n";
    return 2;
  }
  auto queueResult = sched::load_queue_config(*text);
  if (!queueResult.ok()) {
    err << queuesFile << " is invalid:\n" << format_diagnostics(queueResult.diagnostics);
    return 2;
  }
  out << "queue pending admitted\n";
  for (const auto& [name, counts] : queueResult.scheduler->queue_snapshot()) {
    out << name << " " << counts.pending << " " << counts.admitted << "\n";
  }
  return 0;
}

int do_metrics(const std::string& runId, const std::string& runDir, bool serve,
               const std::string& host, int port, std::ostream& out, std::ostream& err) {
  auto text = read_file((fs::path(runDir) / runId / "metrics.prom").string());
  if (!text) {
    err << "error: no metrics snapshot for run '" << runId << "' under " << runDir << "\n";
    return 2;
  }
  if (!serve) {
    out << *text;
    return 0;
  }
  obs::MetricsServer server;
  int bound = server.start(*text, host, port);
  if (bound < 0) {
    err << "error: cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  out << "serving GET http://" << host << ":" << bound << "/metrics (ctrl-c to stop)\n";
  out.flush();
  server.wait();
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hybrid quantum-classical workflow orchestration simulator"};
  app.require_subcommand(1);

  std::uint64_t defaultSeed = 42;
  if (const char* env = std::getenv("HQFLOW_SEED")) {
    defaultSeed = std::strtoull(env, nullptr, 10);
  }

  std::string validateFile;
  auto* validate = app.add_subcommand("validate", "parse and validate a workflow document");
  validate->add_option("-f,--file", validateFile, "workflow document")->required();

  ApplyOptions opts;
  opts.seed = defaultSeed;
  auto* apply = app.add_subcommand("apply", "submit a workflow and run it to completion");
  apply->add_option("-f,--file", opts.workflowFile, "workflow document")->required();
  apply->add_option("--cluster", opts.clusterFile, "cluster definition")->required();
  apply->add_option("--queues", opts.queuesFile, "queue and flavor configuration")->required();
  apply->add_option("--run-dir", opts.runDir, "run record directory (default runs)");
  apply->add_option("--seed", opts.seed, "global seed (default HQFLOW_SEED or 42)");
  apply->add_option("--mode", opts.mode, "execution mode: exact or sampled");
  apply->add_option("--shots", opts.shots, "shots per fragment in sampled mode");
  apply->add_option("--qubits", opts.qubits, "reference circuit width");
  apply->add_option("--layers", opts.layers, "reference circuit layers");
  apply->add_option("--max-fragment-qubits", opts.maxFragmentQubits, "cut planner bound");

  std::string statusRun, statusDir = "runs";
  auto* status = app.add_subcommand("status", "task census and progress of a recorded run");
  status->add_option("run", statusRun, "run id")->required();
  status->add_option("--run-dir", statusDir, "run record directory (default runs)");

  std::string queuesRun, queuesDir = "runs", queuesFile;
  auto* queues = app.add_subcommand("queues", "per-queue pending/admitted counts");
  queues->add_option("--run", queuesRun, "run id to read");
  queues->add_option("--run-dir", queuesDir, "run record directory (default runs)");
  queues->add_option("--queues", queuesFile, "queue configuration (when no run given)");

  std::string metricsRun, metricsDir = "runs", host = "127.0.0.1";
  int port = 9464;
  bool serve = false;
  auto* metrics = app.add_subcommand("metrics", "dump or serve a run's metrics snapshot");
  metrics->add_option("--run", metricsRun, "run id")->required();
  metrics->add_option("--run-dir", metricsDir, "run record directory (default runs)");
  metrics->add_flag("--serve", serve, "serve over HTTP instead of printing");
  metrics->add_option("--host", host, "bind address (default loopback)");
  metrics->add_option("--port", port, "port (default 9464, 0 for any)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (app.got_subcommand(validate)) return do_validate(validateFile, out, err);
  if (app.got_subcommand(apply)) return do_apply(opts, out, err);
  if (app.got_subcommand(status)) return do_status(statusRun, statusDir, out, err);
  if (app.got_subcommand(queues)) return do_queues(queuesRun, queuesDir, queuesFile, out, err);
  if (app.got_subcommand(metrics)) {
    return do_metrics(metricsRun, metricsDir, serve, host, port, out, err);
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace hqflow::cli
