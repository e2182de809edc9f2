#pragma once

#include <functional>
#include <string>

namespace hqflow::cutting {

enum class BackendRole { QPU, CPU, GPU };

const char* to_string(BackendRole role);
BackendRole backend_role_from_string(const std::string& s);

/// Pluggable fragment-routing policy keyed on qubit count.
using BackendPolicy = std::function<BackendRole(int numQubits)>;

/// Shipped default: small circuits to the QPU, medium to CPU, big to GPU.
BackendRole select_backend(int numQubits);

inline BackendPolicy default_policy() {
  return [](int numQubits) { return select_backend(numQubits); };
}

}  // namespace hqflow::cutting
