#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqflow/cutting/execute.hpp"
#include "hqflow/cutting/workload.hpp"
#include "hqflow/engine/artifact_store.hpp"

namespace hqflow::engine {

struct PayloadError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Simulation knobs shared by every payload in a run.
struct RunConfig {
  std::uint64_t seed = 42;
  cutting::ExecMode mode = cutting::ExecMode::Exact;
  std::int64_t shots = 4096;
  cutting::WorkloadConfig workload;
  int retryBudget = 0;  // fail-fast default; retries are a config hook
};

/// What a payload sees: its substituted invocation, artifact reads/writes
/// routed through the task's volume mounts, and the run configuration.
/// Secrets are only reachable as read-only mounted paths.
class PayloadContext {
 public:
  PayloadContext(std::string taskId, const std::map<std::string, std::string>& params,
                 const std::vector<std::string>& command, const std::vector<std::string>& args,
                 const std::vector<wfspec::EnvVar>& env, const std::vector<wfspec::VolumeMount>& mounts,
                 ArtifactStore& store, const RunConfig& config)
      : taskId_(std::move(taskId)),
        params_(params),
        command_(command),
        args_(args),
        env_(env),
        mounts_(mounts),
        store_(store),
        config_(config) {}

  const std::map<std::string, std::string>& params() const { return params_; }
  const std::vector<std::string>& command() const { return command_; }
  const std::vector<std::string>& args() const { return args_; }
  std::optional<std::string> env_value(const std::string& name) const;
  const RunConfig& config() const { return config_; }

  std::string read_artifact(const std::string& absPath) { return store_.read(taskId_, mounts_, absPath); }
  bool artifact_exists(const std::string& absPath) const {
    return store_.exists(taskId_, mounts_, absPath);
  }
  void write_artifact(const std::string& absPath, std::string bytes) {
    store_.write(taskId_, mounts_, absPath, std::move(bytes));
  }

 private:
  std::string taskId_;
  const std::map<std::string, std::string>& params_;
  const std::vector<std::string>& command_;
  const std::vector<std::string>& args_;
  const std::vector<wfspec::EnvVar>& env_;
  const std::vector<wfspec::VolumeMount>& mounts_;
  ArtifactStore& store_;
  const RunConfig& config_;
};

struct PayloadResult {
  double costSeconds = 1e-4;  // simulated compute cost hint
};

using PayloadFn = std::function<PayloadResult(PayloadContext&)>;

/// Container images map to registered payload functions; submitting a spec
/// with an unregistered image fails that task at start.
class PayloadRegistry {
 public:
  void register_image(const std::string& image, PayloadFn fn) { payloads_[image] = std::move(fn); }
  const PayloadFn* find(const std::string& image) const {
    auto it = payloads_.find(image);
    return it == payloads_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, PayloadFn> payloads_;
};

inline constexpr const char* kQuantumWorkflowImage = "docker.io/hqflow/quantum-workflow:latest";

/// Payloads of the reference circuit-cutting image: subcircuit generation,
/// per-backend execution, reconstruction.
void register_quantum_workflow_payloads(PayloadRegistry& registry,
                                        const std::string& image = kQuantumWorkflowImage);

}  // namespace hqflow::engine
