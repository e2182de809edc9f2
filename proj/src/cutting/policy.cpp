#include "hqflow/cutting/policy.hpp"

#include <stdexcept>

namespace hqflow::cutting {

const char* to_string(BackendRole role) {
  switch (role) {
    case BackendRole::QPU: return "QPU";
    case BackendRole::CPU: return "CPU";
    case BackendRole::GPU: return "GPU";
  }
  return "?";
}

BackendRole backend_role_from_string(const std::string& s) {
  if (s == "QPU" || s == "qpu") return BackendRole::QPU;
  if (s == "CPU" || s == "cpu") return BackendRole::CPU;
  if (s == "GPU" || s == "gpu") return BackendRole::GPU;
  throw std::invalid_argument("unknown backend role '" + s + "'");
}

BackendRole select_backend(int numQubits) {
  if (numQubits <= 5) return BackendRole::QPU;  // small circuits
  if (numQubits <= 20) return BackendRole::CPU; // medium circuits
  return BackendRole::GPU;                      // big circuits
}

}  // namespace hqflow::cutting
