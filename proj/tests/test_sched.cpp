#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "hqflow/cluster/config.hpp"
#include "hqflow/common/rng.hpp"
#include "hqflow/sched/config.hpp"
#include "hqflow/sched/scheduler.hpp"
#include "support/files.hpp"

using namespace hqflow;
using namespace hqflow::sched;

namespace {

struct Setup {
  cluster::ClusterState cluster;
  Scheduler sched;
};

Setup make_setup(std::int64_t gpuQuota = 1) {
  Setup s;
  {
    cluster::Node n;
    n.name = "cpu-a";
    n.labels["resource_type"] = "cpu";
    n.capacity.amounts["cpu"] = 8000;
    n.capacity.amounts["memory"] = 16LL << 30;
    s.cluster.add_node(std::move(n));
  }
  {
    cluster::Node n;
    n.name = "gpu-1";
    n.labels["resource_type"] = "gpu";
    n.capacity.amounts["cpu"] = 64000;
    n.capacity.amounts["memory"] = 128LL << 30;
    n.capacity.amounts["nvidia.com/gpu"] = 4;
    for (int i = 0; i < 4; ++i) {
      cluster::Device d;
      d.id = "gpu-" + std::to_string(i);
      d.className = "nvidia.com/gpu";
      n.devices.push_back(d);
    }
    s.cluster.add_node(std::move(n));
  }
  s.sched.add_flavor(ResourceFlavor{"cpu-flavor", {{"resource_type", "cpu"}}});
  s.sched.add_flavor(ResourceFlavor{"gpu-flavor", {{"resource_type", "gpu"}}});
  ClusterQueue cq;
  cq.name = "cluster-queue";
  cq.quotas.push_back(FlavorQuota{"cpu-flavor", ResourceVector{{{"cpu", 8000}, {"memory", 16LL << 30}}}});
  cq.quotas.push_back(
      FlavorQuota{"gpu-flavor",
                  ResourceVector{{{"cpu", 64000}, {"memory", 128LL << 30}, {"nvidia.com/gpu", gpuQuota}}}});
  s.sched.add_cluster_queue(std::move(cq));
  s.sched.add_local_queue(LocalQueue{"ns", "queue-cpu", "cluster-queue"});
  s.sched.add_local_queue(LocalQueue{"ns", "queue-gpu", "cluster-queue"});
  return s;
}

wfspec::ResourceRequest gpu_request() {
  wfspec::ResourceRequest r;
  r.requests.amounts["cpu"] = 1000;
  r.requests.amounts["memory"] = 1LL << 30;
  r.requests.amounts["nvidia.com/gpu"] = 1;
  return r;
}

wfspec::ResourceRequest cpu_request(std::int64_t millicores = 500) {
  wfspec::ResourceRequest r;
  r.requests.amounts["cpu"] = millicores;
  r.requests.amounts["memory"] = 1LL << 28;
  return r;
}

}  // namespace

TEST_CASE("enqueue requires a known queue and hands out monotone sequence numbers") {
  Setup s = make_setup();
  auto& w1 = s.sched.enqueue("t1", "queue-gpu", gpu_request(), {{"resource_type", "gpu"}});
  auto seq1 = w1.enqueueSeq;
  auto& w2 = s.sched.enqueue("t2", "queue-gpu", gpu_request(), {{"resource_type", "gpu"}});
  CHECK(w2.enqueueSeq > seq1);
  CHECK(w1.state == WorkloadState::Pending);
  CHECK_THROWS_AS(s.sched.enqueue("t3", "queue-nonexistent", cpu_request(), {}), UnknownQueueError);
}

TEST_CASE("quota of one admits exactly one of three") {
  Setup s = make_setup(1);
  for (int i = 0; i < 3; ++i) {
    s.sched.enqueue("t" + std::to_string(i), "queue-gpu", gpu_request(), {{"resource_type", "gpu"}});
  }
  auto admissions = s.sched.admit_cycle(s.cluster);
  REQUIRE(admissions.size() == 1);
  CHECK(admissions[0].taskId == "t0");
  CHECK(admissions[0].flavor == "gpu-flavor");
  auto counts = s.sched.queue_snapshot();
  CHECK(counts["queue-gpu"].pending == 2);
  CHECK(counts["queue-gpu"].admitted == 1);
  CHECK(s.sched.quota_safe());

  SUBCASE("completion admits the earliest pending workload (FIFO)") {
    s.sched.complete("t0", s.cluster);
    auto next = s.sched.admit_cycle(s.cluster);
    REQUIRE(next.size() == 1);
    CHECK(next[0].taskId == "t1");
  }
  SUBCASE("higher priority jumps the line") {
    s.sched.enqueue("hot", "queue-gpu", gpu_request(), {{"resource_type", "gpu"}}, 10);
    s.sched.complete("t0", s.cluster);
    auto next = s.sched.admit_cycle(s.cluster);
    REQUIRE(next.size() == 1);
    CHECK(next[0].taskId == "hot");
  }
}

TEST_CASE("complete refunds usage exactly") {
  Setup s = make_setup(2);
  s.sched.enqueue("t1", "queue-gpu", gpu_request(), {{"resource_type", "gpu"}});
  auto before = s.sched.cluster_queues()[0].usage;
  auto admissions = s.sched.admit_cycle(s.cluster);
  REQUIRE(admissions.size() == 1);
  s.sched.complete("t1", s.cluster);
  const auto& usage = s.sched.cluster_queues()[0].usage;
  for (const auto& [flavor, vec] : usage) {
    for (const auto& [res, amount] : vec.amounts) {
      (void)res;
      CHECK(amount == 0);
    }
    (void)flavor;
  }
  (void)before;
  CHECK(s.cluster.conserved());
  CHECK_THROWS_AS(s.sched.complete("t1", s.cluster), UnknownWorkloadError);
  CHECK_THROWS_AS(s.sched.complete("ghost", s.cluster), UnknownWorkloadError);
}

TEST_CASE("work conservation: a fitting workload is admitted in the same cycle") {
  Setup s = make_setup(4);
  s.sched.enqueue("big", "queue-gpu", gpu_request(), {{"resource_type", "gpu"}});
  wfspec::ResourceRequest monster = gpu_request();
  monster.requests.amounts["nvidia.com/gpu"] = 9;  // can never fit
  s.sched.enqueue("impossible", "queue-gpu", monster, {{"resource_type", "gpu"}});
  s.sched.enqueue("small", "queue-cpu", cpu_request(), {{"resource_type", "cpu"}});
  auto admissions = s.sched.admit_cycle(s.cluster);
  std::set<std::string> ids;
  for (const auto& a : admissions) ids.insert(a.taskId);
  CHECK(ids == std::set<std::string>{"big", "small"});
}

TEST_CASE("216-task fan-out with gpu quota 4 never exceeds 4 admitted") {
  Setup s = make_setup(4);
  for (int i = 0; i < 216; ++i) {
    s.sched.enqueue("gpu-" + std::to_string(i), "queue-gpu", gpu_request(), {{"resource_type", "gpu"}});
  }
  int completed = 0;
  int maxAdmitted = 0;
  while (completed < 216) {
    s.sched.admit_cycle(s.cluster);
    auto counts = s.sched.queue_snapshot();
    maxAdmitted = std::max(maxAdmitted, counts["queue-gpu"].admitted);
    REQUIRE(counts["queue-gpu"].admitted <= 4);
    REQUIRE(s.sched.quota_safe());
    // complete one admitted workload per round
    for (int i = 0; i < 216; ++i) {
      std::string id = "gpu-" + std::to_string(i);
      bool admitted = false;
      for (const auto& a : s.sched.queue_snapshot()) {
        (void)a;
      }
      try {
        s.sched.complete(id, s.cluster);
        admitted = true;
      } catch (const UnknownWorkloadError&) {
      }
      if (admitted) {
        ++completed;
        break;
      }
    }
  }
  CHECK(maxAdmitted == 4);
  CHECK(s.cluster.conserved());
}

TEST_CASE("property: randomized fuzz keeps quota safety and conservation") {
  Rng rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    Setup s = make_setup(2 + static_cast<std::int64_t>(rng.next_below(3)));
    std::vector<std::string> admitted;
    int counter = 0;
    for (int event = 0; event < 2000; ++event) {
      auto roll = rng.next_below(10);
      if (roll < 6) {
        bool gpu = rng.next_below(2) == 0;
        std::string id = "t" + std::to_string(counter++);
        if (gpu) {
          s.sched.enqueue(id, "queue-gpu", gpu_request(), {{"resource_type", "gpu"}},
                          static_cast<int>(rng.next_below(3)));
        } else {
          s.sched.enqueue(id, "queue-cpu", cpu_request(250 + 250 * rng.next_below(6)),
                          {{"resource_type", "cpu"}}, static_cast<int>(rng.next_below(3)));
        }
      } else if (!admitted.empty()) {
        std::size_t pick = rng.next_below(admitted.size());
        s.sched.complete(admitted[pick], s.cluster);
        admitted.erase(admitted.begin() + static_cast<std::ptrdiff_t>(pick));
      }
      for (const auto& a : s.sched.admit_cycle(s.cluster)) admitted.push_back(a.taskId);
      REQUIRE(s.sched.quota_safe());
      REQUIRE(s.cluster.conserved());
    }
    // drain
    while (!admitted.empty()) {
      s.sched.complete(admitted.back(), s.cluster);
      admitted.pop_back();
      s.sched.admit_cycle(s.cluster);
      for (const auto& a : s.sched.admit_cycle(s.cluster)) admitted.push_back(a.taskId);
      REQUIRE(s.sched.quota_safe());
    }
    for (const auto& n : s.cluster.nodes()) {
      // everything still admitted was drained; only pending remain
      (void)n;
    }
  }
}

TEST_CASE("determinism: same event stream gives the same admission sequence") {
  auto run = [] {
    Setup s = make_setup(2);
    std::vector<std::string> log;
    Rng rng(5);
    std::vector<std::string> admitted;
    int counter = 0;
    for (int event = 0; event < 300; ++event) {
      if (rng.next_below(3) != 0) {
        std::string id = "t" + std::to_string(counter++);
        s.sched.enqueue(id, rng.next_below(2) ? "queue-gpu" : "queue-cpu",
                        rng.next_below(2) ? gpu_request() : cpu_request(), {},
                        static_cast<int>(rng.next_below(2)));
      } else if (!admitted.empty()) {
        s.sched.complete(admitted.front(), s.cluster);
        admitted.erase(admitted.begin());
      }
      for (const auto& a : s.sched.admit_cycle(s.cluster)) {
        admitted.push_back(a.taskId);
        log.push_back(a.taskId + "@" + a.node + "/" + a.flavor);
      }
    }
    return log;
  };
  CHECK(run() == run());
}

TEST_CASE("queue config loads against the sample cluster") {
  auto clusterText = testing::read_file(testing::config_path("cluster.yaml"));
  auto clusterResult = cluster::load_cluster_config(clusterText);
  REQUIRE(clusterResult.ok());

  auto queueText = testing::read_file(testing::config_path("queues.yaml"));
  auto result = load_queue_config(queueText, &clusterResult.config->cluster);
  REQUIRE_MESSAGE(result.ok(), format_diagnostics(result.diagnostics));
  CHECK(result.warnings.empty());
  const auto& sched = *result.scheduler;
  CHECK(sched.flavors().size() == 3);
  CHECK(sched.local_queues().size() == 3);
  REQUIRE(sched.cluster_queues().size() == 1);
  const auto& cq = sched.cluster_queues()[0];
  CHECK(cq.name == "cluster-queue");
  REQUIRE(cq.quotas.size() == 3);
  CHECK(cq.quotas[2].quota.get("claims/qpu") == 1);
}

TEST_CASE("queue config rejects dangling references") {
  const char* text =
      "apiVersion: kueue.x-k8s.io/v1beta1\n"
      "kind: LocalQueue\n"
      "metadata:\n"
      "  name: queue-x\n"
      "spec:\n"
      "  clusterQueue: nowhere\n";
  auto result = load_queue_config(text);
  CHECK(!result.ok());
}
