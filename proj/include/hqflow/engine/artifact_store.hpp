#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqflow/cluster/config.hpp"
#include "hqflow/wfspec/spec.hpp"

namespace hqflow::engine {

enum class ArtifactErrorKind { UnknownMount, ReadOnlyMount, MissingArtifact };

struct ArtifactError : std::runtime_error {
  ArtifactError(ArtifactErrorKind kind, const std::string& path, const std::string& msg)
      : std::runtime_error(msg), kind(kind), path(path) {}
  ArtifactErrorKind kind;
  std::string path;
};

/// Shared-volume stand-in: blobs keyed by (volume, relative path). Task
/// writes stage privately and commit atomically at task success, so
/// concurrent siblings never observe partial writes. Secret-backed volumes
/// resolve reads from the secret store and reject writes.
class ArtifactStore {
 public:
  void declare_volume(const wfspec::VolumeDecl& decl);
  void set_secrets(const cluster::SecretData* secrets) { secrets_ = secrets; }

  /// Path resolution uses the task's mount table (longest prefix wins).
  struct Resolved {
    std::string volume;
    std::string key;
    bool readOnly = false;
    bool secret = false;
    std::string secretName;
  };
  Resolved resolve(const std::vector<wfspec::VolumeMount>& mounts, const std::string& absPath) const;

  std::string read(const std::string& taskId, const std::vector<wfspec::VolumeMount>& mounts,
                   const std::string& absPath);
  bool exists(const std::string& taskId, const std::vector<wfspec::VolumeMount>& mounts,
              const std::string& absPath) const;
  void write(const std::string& taskId, const std::vector<wfspec::VolumeMount>& mounts,
             const std::string& absPath, std::string bytes);

  void commit(const std::string& taskId);
  void discard(const std::string& taskId);

  std::optional<std::string> read_committed(const std::string& volume, const std::string& key) const;
  /// Committed blobs as (volume/key -> bytes), deterministic order.
  const std::map<std::string, std::string>& committed() const { return committed_; }

  std::uint64_t bytes_read() const { return bytesRead_; }
  std::uint64_t bytes_written() const { return bytesWritten_; }

 private:
  std::map<std::string, wfspec::VolumeDecl> volumes_;
  std::map<std::string, std::string> committed_;                          // "volume/key" -> bytes
  std::map<std::string, std::map<std::string, std::string>> staged_;      // taskId -> key -> bytes
  const cluster::SecretData* secrets_ = nullptr;
  std::uint64_t bytesRead_ = 0;
  std::uint64_t bytesWritten_ = 0;
};

}  // namespace hqflow::engine
