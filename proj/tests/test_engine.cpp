#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <json.hpp>

#include "hqflow/cluster/config.hpp"
#include "hqflow/cutting/workload.hpp"
#include "hqflow/engine/engine.hpp"
#include "hqflow/engine/run_record.hpp"
#include "hqflow/quantum/statevector.hpp"
#include "hqflow/sched/config.hpp"
#include "hqflow/wfspec/parse.hpp"
#include "support/files.hpp"

using namespace hqflow;
using namespace hqflow::engine;

namespace {

struct Fixture {
  std::string workflowText;
  wfspec::WorkflowSpec spec;
  std::unique_ptr<Engine> engine;
};

Fixture make_fixture(RunConfig config = {}, const std::string& queueFile = "queues.yaml") {
  Fixture f;
  auto clusterResult = cluster::load_cluster_config(testing::read_file(testing::config_path("cluster.yaml")));
  REQUIRE(clusterResult.ok());
  auto queueResult = sched::load_queue_config(testing::read_file(testing::config_path(queueFile)),
                                              &clusterResult.config->cluster);
  REQUIRE_MESSAGE(queueResult.ok(), format_diagnostics(queueResult.diagnostics));
  f.workflowText = testing::read_file(testing::config_path("circuit_cutting_workflow.yaml"));
  auto parsed = wfspec::parse_workflow(f.workflowText);
  REQUIRE_MESSAGE(parsed.ok(), format_diagnostics(parsed.diagnostics));
  f.spec = *parsed.spec;
  f.engine = std::make_unique<Engine>(std::move(clusterResult.config->cluster),
                                      std::move(*queueResult.scheduler), config);
  f.engine->set_secrets(clusterResult.config->secrets);
  register_quantum_workflow_payloads(f.engine->payloads());
  return f;
}

double reference_oracle(const RunConfig& config) {
  auto circuit = cutting::make_hea_circuit(config.workload.numQubits, config.workload.layers, config.seed);
  return quantum::expectation(quantum::simulate(circuit),
                              quantum::Observable::full_z(config.workload.numQubits));
}

}  // namespace

TEST_CASE("reference workflow runs to success with a verifiable reconstruction") {
  Fixture f = make_fixture();
  std::string runId = f.engine->submit(f.spec, f.workflowText);
  RunReport report = f.engine->run_to_completion(runId);

  CHECK(report.state == RunState::Succeeded);
  CHECK(report.tasks.size() == 650);
  CHECK(report.stateCounts.at("succeeded") == 650);
  CHECK(report.stateCounts.at("failed") == 0);
  CHECK(report.stateCounts.at("pending") == 0);
  CHECK(report.stateCounts.at("active") == 0);
  CHECK(report.makespanNs > 0);

  REQUIRE(!report.workloadResultJson.empty());
  auto result = nlohmann::json::parse(report.workloadResultJson);
  CHECK(result.at("variant_count").get<int>() == 216);
  const double value = result.at("value").get<double>();
  const double oracle = reference_oracle(f.engine->config());
  CHECK(std::abs(value - oracle) < 1e-9);

  // artifact index contains the plan, 432 fragments, 432 results and result.json
  CHECK(report.artifacts.size() == 1 + 432 + 432 + 1);
  CHECK(report.artifactBytesWritten > 0);
}

TEST_CASE("census stays consistent and dependencies are safe at every event") {
  Fixture f = make_fixture();
  std::string runId = f.engine->submit(f.spec, f.workflowText);

  std::map<std::string, int> census{{"pending", 0}, {"active", 0}, {"succeeded", 0}, {"failed", 0}};
  int total = 0;
  f.engine->add_observer([&](const Event& e) {
    if (e.kind == EventKind::RunSubmitted) {
      census["pending"] += e.taskTotal;
      total += e.taskTotal;
    } else if (e.kind == EventKind::TaskStateChanged) {
      census[to_string(e.from)] -= 1;
      census[to_string(e.to)] += 1;
    }
    int sum = census["pending"] + census["active"] + census["succeeded"] + census["failed"];
    REQUIRE(sum == total);
  });
  // observer attached after submit: seed the census manually
  census["pending"] = 650;
  total = 650;

  RunReport report = f.engine->run_to_completion(runId);
  REQUIRE(report.state == RunState::Succeeded);

  // barrier semantics: reconstruct starts only after the last execute finishes
  std::int64_t lastExecuteFinish = -1;
  std::int64_t reconstructStart = -1;
  std::int64_t createFinish = -1;
  for (const auto& t : report.tasks) {
    if (t.name.rfind("execute-subcircuits-", 0) == 0) {
      lastExecuteFinish = std::max(lastExecuteFinish, t.finishedNs);
      CHECK(t.startedNs >= createFinish);  // create precedes every execute
    } else if (t.name == "reconstruct") {
      reconstructStart = t.startedNs;
    } else if (t.name == "create-subcircuits") {
      createFinish = t.finishedNs;
    }
    // timestamps ordered
    if (t.startedNs >= 0) CHECK(t.enqueuedNs <= t.startedNs);
    if (t.finishedNs >= 0) CHECK(t.startedNs <= t.finishedNs);
  }
  REQUIRE(reconstructStart >= 0);
  CHECK(reconstructStart >= lastExecuteFinish);
}

TEST_CASE("qpu tasks carry the configured queueing delay") {
  Fixture f = make_fixture();
  std::string runId = f.engine->submit(f.spec, f.workflowText);
  RunReport report = f.engine->run_to_completion(runId);
  REQUIRE(report.state == RunState::Succeeded);
  int qpuTasks = 0;
  for (const auto& t : report.tasks) {
    if (t.name.rfind("execute-subcircuits-qpu", 0) == 0) {
      ++qpuTasks;
      CHECK(t.finishedNs - t.startedNs >= 2'000'000'000LL);
    }
  }
  CHECK(qpuTasks == 216);
}

TEST_CASE("injected failure of one execute task fails the run and blocks reconstruct") {
  Fixture f = make_fixture();
  // wrap the standard payload: task with index 37 on the cpu branch dies
  PayloadRegistry standard;
  register_quantum_workflow_payloads(standard);
  const PayloadFn* inner = standard.find(kQuantumWorkflowImage);
  REQUIRE(inner != nullptr);
  PayloadFn wrapped = [inner](PayloadContext& ctx) -> PayloadResult {
    auto it = ctx.params().find("index");
    bool cpu = false;
    for (const auto& token : ctx.command()) {
      if (token.find("execute_subcircuits_cpu") != std::string::npos) cpu = true;
    }
    if (cpu && it != ctx.params().end() && it->second == "37") {
      throw PayloadError("injected fault for testing");
    }
    return (*inner)(ctx);
  };
  f.engine->payloads().register_image(kQuantumWorkflowImage, wrapped);

  std::string runId = f.engine->submit(f.spec, f.workflowText);
  RunReport report = f.engine->run_to_completion(runId);
  CHECK(report.state == RunState::Failed);
  int failed = 0;
  for (const auto& t : report.tasks) {
    if (t.state == "failed") {
      ++failed;
      CHECK(t.name == "execute-subcircuits-cpu[37]");
    }
    if (t.name == "reconstruct") CHECK(t.state == "pending");
  }
  CHECK(failed == 1);
  // fail-fast: far fewer than all 648 execute tasks ran
  CHECK(report.stateCounts.at("pending") > 0);
}

TEST_CASE("unknown image fails the task") {
  Fixture f = make_fixture();
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: ghost\n"
      "spec:\n"
      "  entrypoint: solo\n"
      "  templates:\n"
      "    - name: solo\n"
      "      container:\n"
      "        image: ghost/image:latest\n"
      "        command: [\"run\"]\n"
      "      nodeSelector:\n"
      "        resource_type: cpu\n";
  auto parsed = wfspec::parse_workflow(doc);
  REQUIRE(parsed.ok());
  std::string runId = f.engine->submit(*parsed.spec, doc);
  RunReport report = f.engine->run_to_completion(runId);
  CHECK(report.state == RunState::Failed);
  REQUIRE(report.tasks.size() == 1);
  CHECK(report.tasks[0].state == "failed");
}

TEST_CASE("zero-task run succeeds immediately") {
  Fixture f = make_fixture();
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: empty\n"
      "spec:\n"
      "  entrypoint: main\n"
      "  templates:\n"
      "    - name: main\n"
      "      steps:\n"
      "        - - name: nothing\n"
      "            template: work\n"
      "            withSequence: {count: 0}\n"
      "    - name: work\n"
      "      container:\n"
      "        image: ghost/image:latest\n"
      "        command: [\"run\"]\n";
  auto parsed = wfspec::parse_workflow(doc);
  REQUIRE(parsed.ok());
  std::string runId = f.engine->submit(*parsed.spec, doc);
  RunReport report = f.engine->run_to_completion(runId);
  CHECK(report.state == RunState::Succeeded);
  CHECK(report.tasks.empty());
  CHECK(report.makespanNs == 0);
}

TEST_CASE("zero quota deadlocks a queued workflow") {
  auto clusterResult = cluster::load_cluster_config(testing::read_file(testing::config_path("cluster.yaml")));
  REQUIRE(clusterResult.ok());
  const char* queues =
      "apiVersion: kueue.x-k8s.io/v1beta1\n"
      "kind: ResourceFlavor\n"
      "metadata:\n"
      "  name: cpu-flavor\n"
      "spec:\n"
      "  nodeSelector:\n"
      "    resource_type: cpu\n"
      "---\n"
      "apiVersion: kueue.x-k8s.io/v1beta1\n"
      "kind: ClusterQueue\n"
      "metadata:\n"
      "  name: cluster-queue\n"
      "spec:\n"
      "  quotas:\n"
      "    - flavor: cpu-flavor\n"
      "      resources: {cpu: \"0\", memory: \"0\"}\n"
      "---\n"
      "apiVersion: kueue.x-k8s.io/v1beta1\n"
      "kind: LocalQueue\n"
      "metadata:\n"
      "  namespace: ns\n"
      "  name: queue-cpu\n"
      "spec:\n"
      "  clusterQueue: cluster-queue\n";
  auto queueResult = sched::load_queue_config(queues, &clusterResult.config->cluster);
  REQUIRE(queueResult.ok());
  Engine engine(std::move(clusterResult.config->cluster), std::move(*queueResult.scheduler));
  register_quantum_workflow_payloads(engine.payloads());

  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: starved\n"
      "spec:\n"
      "  entrypoint: solo\n"
      "  templates:\n"
      "    - name: solo\n"
      "      metadata:\n"
      "        labels:\n"
      "          kueue.x-k8s.io/queue-name: queue-cpu\n"
      "      container:\n"
      "        image: ghost/image:latest\n"
      "        command: [\"run\"]\n"
      "        resources:\n"
      "          requests: {cpu: \"500m\", memory: \"100Mi\"}\n"
      "      nodeSelector:\n"
      "        resource_type: cpu\n";
  auto parsed = wfspec::parse_workflow(doc);
  REQUIRE(parsed.ok());
  std::string runId = engine.submit(*parsed.spec, doc);
  RunReport report = engine.run_to_completion(runId);
  CHECK(report.state == RunState::Deadlocked);
  CHECK(report.tasks[0].state == "pending");
}

TEST_CASE("determinism: resubmitting the same spec reproduces the report") {
  Fixture f = make_fixture();
  std::string run1 = f.engine->submit(f.spec, f.workflowText);
  RunReport r1 = f.engine->run_to_completion(run1);
  std::string run2 = f.engine->submit(f.spec, f.workflowText);
  RunReport r2 = f.engine->run_to_completion(run2);

  CHECK(run1 != run2);                  // distinct run ids
  CHECK(r1.specHash == r2.specHash);    // same snapshot hash
  CHECK(r1.to_json(false) == r2.to_json(false));  // identical content and timings
}

TEST_CASE("artifact isolation: sibling writes stay invisible until success") {
  Fixture f = make_fixture();
  // two parallel writers and a reader in the same group, then a successor
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: isolation\n"
      "spec:\n"
      "  entrypoint: main\n"
      "  volumes:\n"
      "    - name: shared-data\n"
      "      persistentVolumeClaim:\n"
      "        claimName: shared-pvc\n"
      "  templates:\n"
      "    - name: main\n"
      "      steps:\n"
      "        - - name: writer\n"
      "            template: writer\n"
      "          - name: peeker\n"
      "            template: peeker\n"
      "        - - name: reader\n"
      "            template: reader\n"
      "    - name: writer\n"
      "      container:\n"
      "        image: test/writer\n"
      "        command: [\"w\"]\n"
      "        volumeMounts:\n"
      "          - name: shared-data\n"
      "            mountPath: /mnt/shared/\n"
      "      nodeSelector:\n"
      "        resource_type: cpu\n"
      "    - name: peeker\n"
      "      container:\n"
      "        image: test/peeker\n"
      "        command: [\"p\"]\n"
      "        volumeMounts:\n"
      "          - name: shared-data\n"
      "            mountPath: /mnt/shared/\n"
      "      nodeSelector:\n"
      "        resource_type: cpu\n"
      "    - name: reader\n"
      "      container:\n"
      "        image: test/reader\n"
      "        command: [\"r\"]\n"
      "        volumeMounts:\n"
      "          - name: shared-data\n"
      "            mountPath: /mnt/shared/\n"
      "      nodeSelector:\n"
      "        resource_type: cpu\n";
  bool peekerSawNothing = false;
  std::string readerSaw;
  f.engine->payloads().register_image("test/writer", [](PayloadContext& ctx) {
    ctx.write_artifact("/mnt/shared/note.txt", "committed at success");
    return PayloadResult{0.5};  // long task: still running when peeker looks
  });
  f.engine->payloads().register_image("test/peeker", [&](PayloadContext& ctx) {
    peekerSawNothing = !ctx.artifact_exists("/mnt/shared/note.txt");
    return PayloadResult{1e-4};
  });
  f.engine->payloads().register_image("test/reader", [&](PayloadContext& ctx) {
    readerSaw = ctx.read_artifact("/mnt/shared/note.txt");
    return PayloadResult{1e-4};
  });
  auto parsed = wfspec::parse_workflow(doc);
  REQUIRE_MESSAGE(parsed.ok(), format_diagnostics(parsed.diagnostics));
  std::string runId = f.engine->submit(*parsed.spec, doc);
  RunReport report = f.engine->run_to_completion(runId);
  REQUIRE(report.state == RunState::Succeeded);
  CHECK(peekerSawNothing);
  CHECK(readerSaw == "committed at success");
}

TEST_CASE("read-only mounts reject writes and secrets never leak into records") {
  Fixture f = make_fixture(RunConfig{});
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: secrets\n"
      "spec:\n"
      "  entrypoint: solo\n"
      "  volumes:\n"
      "    - name: iqm-tokens\n"
      "      secret:\n"
      "        secretName: iqm-tokens\n"
      "  templates:\n"
      "    - name: solo\n"
      "      container:\n"
      "        image: test/secret-reader\n"
      "        command: [\"s\"]\n"
      "        volumeMounts:\n"
      "          - name: iqm-tokens\n"
      "            mountPath: /mnt/shared/iqm\n"
      "            readOnly: true\n"
      "      nodeSelector:\n"
      "        resource_type: cpu\n";
  std::string tokenSeen;
  bool writeRejected = false;
  f.engine->payloads().register_image("test/secret-reader", [&](PayloadContext& ctx) {
    tokenSeen = ctx.read_artifact("/mnt/shared/iqm/tokens.json");
    try {
      ctx.write_artifact("/mnt/shared/iqm/evil.txt", "x");
    } catch (const ArtifactError& e) {
      writeRejected = e.kind == ArtifactErrorKind::ReadOnlyMount;
    }
    return PayloadResult{1e-4};
  });
  auto parsed = wfspec::parse_workflow(doc);
  REQUIRE(parsed.ok());
  std::string runId = f.engine->submit(*parsed.spec, doc);
  RunReport report = f.engine->run_to_completion(runId);
  REQUIRE(report.state == RunState::Succeeded);
  CHECK(tokenSeen.find("sim-dummy-token-000") != std::string::npos);
  CHECK(writeRejected);

  // persist and confirm the secret bytes are absent from every file
  auto dir = std::filesystem::temp_directory_path() / "hqflow-test-records";
  std::filesystem::remove_all(dir);
  auto runDir = persist_run_record(dir, *f.engine->find_run(runId), report);
  for (const auto& entry : std::filesystem::directory_iterator(runDir)) {
    auto content = testing::read_file(entry.path().string());
    CHECK(content.find("sim-dummy-token-000") == std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("run records persist and the event log replays to the final census") {
  Fixture f = make_fixture();
  std::string runId = f.engine->submit(f.spec, f.workflowText);
  RunReport report = f.engine->run_to_completion(runId);
  auto dir = std::filesystem::temp_directory_path() / "hqflow-test-replay";
  std::filesystem::remove_all(dir);
  auto runDir = persist_run_record(dir, *f.engine->find_run(runId), report, "# metrics\n");

  CHECK(testing::read_file((runDir / "spec.yaml").string()) == f.workflowText);
  auto events = testing::read_file((runDir / "events.jsonl").string());
  auto census = replay_census(events);
  CHECK(census.at("succeeded") == 650);
  CHECK(census.at("pending") == 0);
  CHECK(census.at("active") == 0);
  CHECK(census.at("failed") == 0);
  std::filesystem::remove_all(dir);
}
