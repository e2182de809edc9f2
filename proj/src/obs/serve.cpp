#include "hqflow/obs/serve.hpp"

#include <thread>

#include <httplib.h>

namespace hqflow::obs {

struct MetricsServer::Impl {
  httplib::Server server;
  std::thread thread;
  std::string text;
};

MetricsServer::MetricsServer() : impl_(std::make_unique<Impl>()) {}

MetricsServer::~MetricsServer() { stop(); }

int MetricsServer::start(std::string text, const std::string& host, int port) {
  impl_->text = std::move(text);
  impl_->server.Get("/metrics", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(impl_->text, "text/plain; version=0.0.4; charset=utf-8");
  });
  int boundPort = port;
  if (port == 0) {
    boundPort = impl_->server.bind_to_any_port(host);
    if (boundPort < 0) return -1;
  } else {
    if (!impl_->server.bind_to_port(host, port)) return -1;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return boundPort;
}

void MetricsServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void MetricsServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace hqflow::obs
