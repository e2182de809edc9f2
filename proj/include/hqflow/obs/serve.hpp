#pragma once

#include <memory>
#include <string>

namespace hqflow::obs {

/// Plaintext read-only /metrics endpoint. Loopback by default, no auth;
/// this is a simulation tool. Port 0 binds any free port.
class MetricsServer {
 public:
  MetricsServer();
  ~MetricsServer();
  MetricsServer(const MetricsServer&) = delete;
  MetricsServer& operator=(const MetricsServer&) = delete;

  /// Starts serving `text` at GET /metrics; returns the bound port or -1.
  int start(std::string text, const std::string& host = "127.0.0.1", int port = 0);
  void wait();  // blocks until stop() (CLI foreground mode)
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hqflow::obs
