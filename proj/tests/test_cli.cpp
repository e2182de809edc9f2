#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <httplib.h>

#include "hqflow/cli/app.hpp"
#include "hqflow/obs/serve.hpp"
#include "support/expo_parser.hpp"
#include "support/files.hpp"

using namespace hqflow;

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exitCode;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "hqflow-cli-test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("validate accepts the shipped workflow and rejects garbage") {
  auto good = run({"validate", "-f", testing::config_path("circuit_cutting_workflow.yaml")});
  CHECK(good.exitCode == 0);
  CHECK(good.out.find("valid") != std::string::npos);

  TempDir tmp;
  auto badFile = tmp.path / "bad.yaml";
  {
    std::ofstream f(badFile);
    f << "apiVersion: v1\nkind: Workflow\nmetadata:\n  name: x\nspec:\n"
         "  entrypoint: ghost\n  templates:\n    - name: solo\n      container:\n"
         "        image: x\n        command: [\"r\"]\n        bogus: 1\n";
  }
  auto bad = run({"validate", "-f", badFile.string()});
  CHECK(bad.exitCode == 2);
  CHECK(bad.err.find("entrypoint_unresolved") != std::string::npos);
  CHECK(bad.err.find("unknown_field") != std::string::npos);

  auto missing = run({"validate", "-f", (tmp.path / "nope.yaml").string()});
  CHECK(missing.exitCode == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).exitCode == 2);
  CHECK(run({"apply"}).exitCode == 2);             // missing required options
  CHECK(run({"frobnicate"}).exitCode == 2);        // unknown subcommand
  CHECK(run({"status"}).exitCode == 2);            // missing run id
}

TEST_CASE("apply, status, queues and metrics work against a recorded run") {
  TempDir tmp;
  auto applied = run({"apply", "-f", testing::config_path("circuit_cutting_workflow.yaml"),
                      "--cluster", testing::config_path("cluster.yaml"), "--queues",
                      testing::config_path("queues.yaml"), "--run-dir", (tmp.path / "runs").string()});
  REQUIRE_MESSAGE(applied.exitCode == 0, applied.err);
  CHECK(applied.out.find("run run-1: succeeded") != std::string::npos);
  CHECK(applied.out.find("reconstructed expectation:") != std::string::npos);
  CHECK(applied.out.find("absolute delta:") != std::string::npos);

  auto status = run({"status", "run-1", "--run-dir", (tmp.path / "runs").string()});
  CHECK(status.exitCode == 0);
  CHECK(status.out.find("succeeded 650") != std::string::npos);

  auto queues = run({"queues", "--run", "run-1", "--run-dir", (tmp.path / "runs").string()});
  CHECK(queues.exitCode == 0);
  CHECK(queues.out.find("queue-qpu 0 0") != std::string::npos);

  auto metrics = run({"metrics", "--run", "run-1", "--run-dir", (tmp.path / "runs").string()});
  CHECK(metrics.exitCode == 0);
  auto doc = testing::parse_exposition(metrics.out);
  testing::check_exposition(doc);
  bool sawCensus = false;
  for (const auto& s : doc.samples) {
    if (s.name == "hqflow_tasks" && s.labels.at("state") == "succeeded") {
      sawCensus = true;
      CHECK(s.value == 650);
    }
  }
  CHECK(sawCensus);

  auto unknownRun = run({"status", "run-9", "--run-dir", (tmp.path / "runs").string()});
  CHECK(unknownRun.exitCode == 2);
}

TEST_CASE("apply reports failures with exit 1") {
  TempDir tmp;
  auto ghostWorkflow = tmp.path / "ghost.yaml";
  {
    std::ofstream f(ghostWorkflow);
    f << "apiVersion: argoproj.io/v1alpha1\nkind: Workflow\nmetadata:\n  name: ghost\nspec:\n"
         "  entrypoint: solo\n  templates:\n    - name: solo\n      container:\n"
         "        image: ghost/image:latest\n        command: [\"run\"]\n"
         "      nodeSelector:\n        resource_type: cpu\n";
  }
  auto applied = run({"apply", "-f", ghostWorkflow.string(), "--cluster",
                      testing::config_path("cluster.yaml"), "--queues",
                      testing::config_path("queues.yaml"), "--run-dir", (tmp.path / "runs").string()});
  CHECK(applied.exitCode == 1);
  CHECK(applied.out.find("failed task: solo") != std::string::npos);
}

TEST_CASE("HQFLOW_SEED env var sets the default seed") {
  TempDir tmp;
  setenv("HQFLOW_SEED", "7", 1);
  auto fromEnv = run({"apply", "-f", testing::config_path("circuit_cutting_workflow.yaml"),
                      "--cluster", testing::config_path("cluster.yaml"), "--queues",
                      testing::config_path("queues.yaml"), "--run-dir", (tmp.path / "a").string()});
  unsetenv("HQFLOW_SEED");
  auto fromFlag = run({"apply", "-f", testing::config_path("circuit_cutting_workflow.yaml"),
                       "--cluster", testing::config_path("cluster.yaml"), "--queues",
                       testing::config_path("queues.yaml"), "--seed", "7", "--run-dir",
                       (tmp.path / "b").string()});
  REQUIRE(fromEnv.exitCode == 0);
  REQUIRE(fromFlag.exitCode == 0);
  CHECK(testing::read_file((tmp.path / "a" / "run-1" / "report.json").string()) ==
        testing::read_file((tmp.path / "b" / "run-1" / "report.json").string()));
}

TEST_CASE("metrics serve answers GET /metrics") {
  obs::MetricsServer server;
  int port = server.start("# HELP x y\n# TYPE x counter\nx 1\n");
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/metrics");
  REQUIRE(res != nullptr);
  CHECK(res->status == 200);
  CHECK(res->body.find("x 1") != std::string::npos);
  CHECK(res->get_header_value("Content-Type").find("version=0.0.4") != std::string::npos);
  server.stop();
}
