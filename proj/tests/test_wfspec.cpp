#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "hqflow/common/rng.hpp"
#include "hqflow/wfspec/graph.hpp"
#include "hqflow/wfspec/parse.hpp"
#include "support/files.hpp"

using namespace hqflow;
using namespace hqflow::wfspec;

namespace {

bool has_code(const Diagnostics& diags, DiagCode code) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

const char* kMinimalDoc =
    "apiVersion: argoproj.io/v1alpha1\n"
    "kind: Workflow\n"
    "metadata:\n"
    "  name: tiny\n"
    "spec:\n"
    "  entrypoint: solo\n"
    "  templates:\n"
    "    - name: solo\n"
    "      container:\n"
    "        image: example/task:latest\n"
    "        command: [\"run\"]\n";

}  // namespace

TEST_CASE("reference workflow parses: entrypoint, volumes, templates") {
  auto text = testing::read_file(testing::config_path("circuit_cutting_workflow.yaml"));
  auto result = parse_workflow(text);
  REQUIRE_MESSAGE(result.ok(), format_diagnostics(result.diagnostics));
  const auto& spec = *result.spec;
  CHECK(spec.name == "quantum-subcircuits");
  CHECK(spec.entrypoint == "main");
  CHECK(spec.volumes.size() == 2);
  CHECK(spec.templates.size() == 5);
  CHECK(spec.volumes[0].kind == VolumeDecl::Kind::PersistentVolumeClaim);
  CHECK(spec.volumes[0].ref == "shared-pvc");
  CHECK(spec.volumes[1].kind == VolumeDecl::Kind::Secret);
  CHECK(spec.volumes[1].ref == "iqm-tokens");
  const Template* gpu = spec.find_template("execute-subcircuits-gpu");
  REQUIRE(gpu != nullptr);
  CHECK(gpu->queue_label() == "queue-gpu");
  CHECK(gpu->nodeSelector.at("resource_type") == "gpu");
  const Template* qpu = spec.find_template("execute-subcircuits-qpu");
  REQUIRE(qpu != nullptr);
  REQUIRE(qpu->container().resources.deviceClaims.size() == 1);
  CHECK(qpu->container().resources.deviceClaims[0].className == "qpu");
  CHECK(qpu->container().volumeMounts[1].readOnly);
  // quantity canonicalization: 500m cpu, 500Mi memory
  const Template* cr = spec.find_template("create-reconstruct");
  REQUIRE(cr != nullptr);
  CHECK(cr->container().resources.requests.get("cpu") == 500);
  CHECK(cr->container().resources.requests.get("memory") == 500LL * 1024 * 1024);
  CHECK(cr->container().resources.limits.get("cpu") == 1000);
}

TEST_CASE("reference workflow expands to the full fan-out graph") {
  auto text = testing::read_file(testing::config_path("circuit_cutting_workflow.yaml"));
  auto spec = parse_workflow(text);
  REQUIRE(spec.ok());
  auto expanded = expand_dag(*spec.spec);
  REQUIRE_MESSAGE(expanded.ok(), format_diagnostics(expanded.diagnostics));
  const auto& graph = *expanded.graph;
  CHECK(graph.nodes.size() == 1 + 3 * 216 + 1);

  const TaskNode* reconstruct = nullptr;
  int executeCount = 0;
  for (const auto& node : graph.nodes) {
    if (node.name == "reconstruct") reconstruct = &node;
    if (node.name.rfind("execute-subcircuits-", 0) == 0) ++executeCount;
  }
  CHECK(executeCount == 648);
  REQUIRE(reconstruct != nullptr);
  CHECK(reconstruct->preds.size() == 648);
  CHECK(reconstruct->params.at("stage") == "reconstruct");

  // fan-out instances carry their index, substituted into args
  const TaskNode& some = graph.nodes[1 + 17];  // create + first 17 cpu tasks
  CHECK(some.name == "execute-subcircuits-cpu[17]");
  CHECK(some.params.at("index") == "17");
  REQUIRE(some.args.size() == 2);
  CHECK(some.args[0] == "17");
  CHECK(some.args[1] == "/mnt/shared");
  CHECK(some.preds.size() == 1);  // barrier on create-subcircuits

  auto order = graph.topo_order();
  CHECK(order.has_value());
}

TEST_CASE("missing entrypoint target is a validation error") {
  std::string text = kMinimalDoc;
  auto pos = text.find("entrypoint: solo");
  text.replace(pos, 16, "entrypoint: gone");
  auto result = parse_workflow(text);
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, DiagCode::EntrypointUnresolved));
}

TEST_CASE("minimal document yields a single-node graph") {
  auto result = parse_workflow(kMinimalDoc);
  REQUIRE_MESSAGE(result.ok(), format_diagnostics(result.diagnostics));
  auto expanded = expand_dag(*result.spec);
  REQUIRE(expanded.ok());
  CHECK(expanded.graph->nodes.size() == 1);
  CHECK(expanded.graph->nodes[0].preds.empty());
}

TEST_CASE("validation reports every violation, not just the first") {
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: broken\n"
      "spec:\n"
      "  entrypoint: missing-main\n"
      "  templates:\n"
      "    - name: dup\n"
      "      container:\n"
      "        image: x\n"
      "        command: [\"a\"]\n"
      "        volumeMounts:\n"
      "          - name: nowhere\n"
      "            mountPath: /data\n"
      "    - name: dup\n"
      "      container:\n"
      "        image: x\n"
      "        command: [\"{{inputs.parameters.ghost}}\"]\n"
      "        mystery: true\n";
  auto result = parse_workflow(doc);
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, DiagCode::EntrypointUnresolved));
  CHECK(has_code(result.diagnostics, DiagCode::DuplicateTemplate));
  CHECK(has_code(result.diagnostics, DiagCode::UnknownVolume));
  CHECK(has_code(result.diagnostics, DiagCode::UndeclaredParameter));
  CHECK(has_code(result.diagnostics, DiagCode::UnknownField));
  CHECK(result.diagnostics.size() >= 5);
  // unknown field diagnostic points at its line
  for (const auto& d : result.diagnostics) {
    if (d.code == DiagCode::UnknownField) CHECK(d.line == 19);
  }
}

TEST_CASE("limits below requests are rejected") {
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: bad-limits\n"
      "spec:\n"
      "  entrypoint: solo\n"
      "  templates:\n"
      "    - name: solo\n"
      "      container:\n"
      "        image: x\n"
      "        command: [\"run\"]\n"
      "        resources:\n"
      "          requests: {cpu: \"2\", memory: \"1Gi\"}\n"
      "          limits: {cpu: \"1\", memory: \"2Gi\"}\n";
  auto result = parse_workflow(doc);
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, DiagCode::LimitBelowRequest));
}

TEST_CASE("the reference document round-trips through render") {
  auto text = testing::read_file(testing::config_path("circuit_cutting_workflow.yaml"));
  auto first = parse_workflow(text);
  REQUIRE(first.ok());
  auto again = parse_workflow(render_workflow(*first.spec));
  REQUIRE_MESSAGE(again.ok(), format_diagnostics(again.diagnostics));
  CHECK(*again.spec == *first.spec);
}

TEST_CASE("unknown fields are rejected (fail-closed)") {
  std::string text = kMinimalDoc;
  text += "  extras: true\n";
  auto result = parse_workflow(text);
  CHECK(!result.spec.has_value());
  CHECK(has_code(result.diagnostics, DiagCode::UnknownField));
}

TEST_CASE("withSequence count zero contributes no nodes") {
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: fanout\n"
      "spec:\n"
      "  entrypoint: main\n"
      "  templates:\n"
      "    - name: main\n"
      "      steps:\n"
      "        - - name: first\n"
      "            template: work\n"
      "        - - name: none\n"
      "            template: work\n"
      "            withSequence: {count: 0}\n"
      "          - name: some\n"
      "            template: work\n"
      "            withSequence: {count: 2}\n"
      "        - - name: last\n"
      "            template: work\n"
      "    - name: work\n"
      "      container:\n"
      "        image: x\n"
      "        command: [\"run\"]\n";
  auto result = parse_workflow(doc);
  REQUIRE_MESSAGE(result.ok(), format_diagnostics(result.diagnostics));
  auto expanded = expand_dag(*result.spec);
  REQUIRE(expanded.ok());
  const auto& graph = *expanded.graph;
  REQUIRE(graph.nodes.size() == 4);  // first + some[0] + some[1] + last
  const TaskNode& last = graph.nodes.back();
  CHECK(last.name == "last");
  CHECK(last.preds.size() == 2);  // only the remaining fanned step
  std::set<std::string> predNames;
  for (int p : last.preds) predNames.insert(graph.nodes[p].name);
  CHECK(predNames == std::set<std::string>{"some[0]", "some[1]"});
}

TEST_CASE("a group that expands to nothing is skipped by the barrier") {
  const char* doc =
      "apiVersion: argoproj.io/v1alpha1\n"
      "kind: Workflow\n"
      "metadata:\n"
      "  name: fanout\n"
      "spec:\n"
      "  entrypoint: main\n"
      "  templates:\n"
      "    - name: main\n"
      "      steps:\n"
      "        - - name: first\n"
      "            template: work\n"
      "        - - name: nothing\n"
      "            template: work\n"
      "            withSequence: {count: 0}\n"
      "        - - name: last\n"
      "            template: work\n"
      "    - name: work\n"
      "      container:\n"
      "        image: x\n"
      "        command: [\"run\"]\n";
  auto result = parse_workflow(doc);
  REQUIRE(result.ok());
  auto expanded = expand_dag(*result.spec);
  REQUIRE(expanded.ok());
  const auto& graph = *expanded.graph;
  REQUIRE(graph.nodes.size() == 2);
  CHECK(graph.nodes[1].name == "last");
  REQUIRE(graph.nodes[1].preds.size() == 1);
  CHECK(graph.nodes[graph.nodes[1].preds[0]].name == "first");
}

TEST_CASE("substitute_params") {
  SUBCASE("replaces bound placeholders") {
    auto r = substitute_params({"{{inputs.parameters.index}}", "/mnt/shared"}, {{"index", "42"}});
    REQUIRE(r.ok());
    CHECK(*r.tokens == std::vector<std::string>{"42", "/mnt/shared"});
  }
  SUBCASE("identity on plain tokens") {
    std::vector<std::string> tokens{"python", "/app/run.py", "a b c"};
    auto r = substitute_params(tokens, {});
    REQUIRE(r.ok());
    CHECK(*r.tokens == tokens);
  }
  SUBCASE("missing binding is an error") {
    auto r = substitute_params({"{{inputs.parameters.missing}}"}, {});
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, DiagCode::UnboundParameter));
  }
  SUBCASE("mixed text and placeholder in one token") {
    auto r = substitute_params({"frag-{{inputs.parameters.index}}.json"}, {{"index", "7"}});
    REQUIRE(r.ok());
    CHECK(r.tokens->front() == "frag-7.json");
  }
}

namespace {

/// Small random spec generator for the structural properties below.
WorkflowSpec random_spec(Rng& rng) {
  WorkflowSpec spec;
  spec.apiVersion = "argoproj.io/v1alpha1";
  spec.name = "gen-" + std::to_string(rng.next_below(1000));
  int volumes = static_cast<int>(rng.next_below(3));
  for (int v = 0; v < volumes; ++v) {
    VolumeDecl vol;
    vol.name = "vol-" + std::to_string(v);
    vol.kind = rng.next_below(2) ? VolumeDecl::Kind::Secret : VolumeDecl::Kind::PersistentVolumeClaim;
    vol.ref = "ref-" + std::to_string(v);
    spec.volumes.push_back(vol);
  }
  int workers = 1 + static_cast<int>(rng.next_below(3));
  for (int w = 0; w < workers; ++w) {
    Template tpl;
    tpl.name = "work-" + std::to_string(w);
    if (rng.next_below(2)) tpl.labels[kQueueLabelKey] = "queue-" + std::to_string(w);
    tpl.inputParams.push_back(ParamDecl{"index"});
    ContainerTemplate c;
    c.image = "img/" + std::to_string(w);
    c.command = {"run", "{{inputs.parameters.index}}"};
    if (rng.next_below(2)) c.env.push_back(EnvVar{"MODE", "fast"});
    if (!spec.volumes.empty() && rng.next_below(2)) {
      c.volumeMounts.push_back(VolumeMount{spec.volumes[0].name, "/mnt/data", rng.next_below(2) != 0});
    }
    c.resources.requests.amounts["cpu"] = 100 + static_cast<std::int64_t>(rng.next_below(4)) * 250;
    c.resources.limits.amounts["cpu"] = 2000;
    tpl.body = c;
    if (rng.next_below(2)) tpl.nodeSelector["resource_type"] = "cpu";
    spec.templates.push_back(std::move(tpl));
  }
  Template main;
  main.name = "main";
  StepsTemplate steps;
  int groups = 1 + static_cast<int>(rng.next_below(4));
  for (int g = 0; g < groups; ++g) {
    StepGroup group;
    int stepCount = 1 + static_cast<int>(rng.next_below(3));
    for (int s = 0; s < stepCount; ++s) {
      StepRef step;
      step.name = "s" + std::to_string(g) + "-" + std::to_string(s);
      step.templateRef = "work-" + std::to_string(rng.next_below(workers));
      if (rng.next_below(2)) {
        step.withSequence = WithSequence{static_cast<std::int64_t>(rng.next_below(5))};
        step.arguments.push_back(ParamBinding{"index", "{{item}}"});
      } else {
        step.arguments.push_back(ParamBinding{"index", std::to_string(rng.next_below(10))});
      }
      group.steps.push_back(std::move(step));
    }
    steps.groups.push_back(std::move(group));
  }
  main.body = steps;
  spec.templates.push_back(std::move(main));
  spec.entrypoint = "main";
  return spec;
}

}  // namespace

TEST_CASE("property: parse(render(spec)) == spec") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    WorkflowSpec spec = random_spec(rng);
    std::string text = render_workflow(spec);
    auto again = parse_workflow(text);
    REQUIRE_MESSAGE(again.ok(), text << "\n" << format_diagnostics(again.diagnostics));
    CHECK(*again.spec == spec);
  }
}

TEST_CASE("property: expansion is acyclic and obeys the node count law") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    WorkflowSpec spec = random_spec(rng);
    auto expanded = expand_dag(spec);
    REQUIRE(expanded.ok());
    const auto& graph = *expanded.graph;

    std::int64_t expected = 0;
    for (const auto& group : spec.find_template("main")->steps().groups) {
      for (const auto& step : group.steps) {
        expected += step.withSequence ? step.withSequence->count : 1;
      }
    }
    CHECK(static_cast<std::int64_t>(graph.nodes.size()) == expected);
    CHECK(graph.topo_order().has_value());

    // barrier law: preds of each node are exactly the previous non-empty group
    std::size_t i = 0;
    std::vector<int> prev;
    for (const auto& group : spec.find_template("main")->steps().groups) {
      std::vector<int> current;
      for (const auto& step : group.steps) {
        std::int64_t n = step.withSequence ? step.withSequence->count : 1;
        for (std::int64_t k = 0; k < n; ++k, ++i) {
          CHECK(graph.nodes[i].preds == prev);
          current.push_back(static_cast<int>(i));
        }
      }
      if (!current.empty()) prev = std::move(current);
    }
  }
}

TEST_CASE("invalid documents never yield a partial spec") {
  const char* bad[] = {
      "kind: Workflow\n",                    // missing everything else
      "apiVersion: v1\nkind: Pod\nmetadata:\n  name: x\nspec:\n  entrypoint: a\n  templates: []\n",
      "not even a workflow\n",
  };
  for (const char* doc : bad) {
    auto result = parse_workflow(doc);
    CHECK(!result.spec.has_value());
    CHECK(!result.diagnostics.empty());
  }
}
