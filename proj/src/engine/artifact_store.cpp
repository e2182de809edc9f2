#include "hqflow/engine/artifact_store.hpp"

#include <algorithm>

namespace hqflow::engine {

namespace {

std::string strip_trailing_slash(std::string s) {
  while (s.size() > 1 && s.back() == '/') s.pop_back();
  return s;
}

}  // namespace

void ArtifactStore::declare_volume(const wfspec::VolumeDecl& decl) { volumes_[decl.name] = decl; }

ArtifactStore::Resolved ArtifactStore::resolve(const std::vector<wfspec::VolumeMount>& mounts,
                                               const std::string& absPath) const {
  const wfspec::VolumeMount* best = nullptr;
  std::size_t bestLen = 0;
  for (const auto& m : mounts) {
    const std::string prefix = strip_trailing_slash(m.mountPath);
    if (absPath == prefix ||
        (absPath.size() > prefix.size() && absPath.rfind(prefix + "/", 0) == 0)) {
      if (prefix.size() >= bestLen) {
        best = &m;
        bestLen = prefix.size();
      }
    }
  }
  if (!best) {
    throw ArtifactError(ArtifactErrorKind::UnknownMount, absPath,
                        "path '" + absPath + "' is not under any volume mount");
  }
  auto volIt = volumes_.find(best->volumeName);
  if (volIt == volumes_.end()) {
    throw ArtifactError(ArtifactErrorKind::UnknownMount, absPath,
                        "mount references undeclared volume '" + best->volumeName + "'");
  }
  Resolved r;
  r.volume = best->volumeName;
  r.key = absPath.size() > bestLen ? absPath.substr(bestLen + 1) : "";
  r.readOnly = best->readOnly;
  r.secret = volIt->second.kind == wfspec::VolumeDecl::Kind::Secret;
  r.secretName = r.secret ? volIt->second.ref : "";
  return r;
}

std::string ArtifactStore::read(const std::string& taskId, const std::vector<wfspec::VolumeMount>& mounts,
                                const std::string& absPath) {
  Resolved r = resolve(mounts, absPath);
  if (r.secret) {
    if (secrets_) {
      auto sIt = secrets_->find(r.secretName);
      if (sIt != secrets_->end()) {
        auto kIt = sIt->second.find(r.key);
        if (kIt != sIt->second.end()) {
          bytesRead_ += kIt->second.size();
          return kIt->second;
        }
      }
    }
    throw ArtifactError(ArtifactErrorKind::MissingArtifact, absPath,
                        "secret path '" + absPath + "' not found");
  }
  auto tIt = staged_.find(taskId);
  if (tIt != staged_.end()) {
    auto kIt = tIt->second.find(r.volume + "/" + r.key);
    if (kIt != tIt->second.end()) {
      bytesRead_ += kIt->second.size();
      return kIt->second;
    }
  }
  auto cIt = committed_.find(r.volume + "/" + r.key);
  if (cIt == committed_.end()) {
    throw ArtifactError(ArtifactErrorKind::MissingArtifact, absPath,
                        "artifact '" + absPath + "' does not exist");
  }
  bytesRead_ += cIt->second.size();
  return cIt->second;
}

bool ArtifactStore::exists(const std::string& taskId, const std::vector<wfspec::VolumeMount>& mounts,
                           const std::string& absPath) const {
  Resolved r = resolve(mounts, absPath);
  if (r.secret) {
    if (!secrets_) return false;
    auto sIt = secrets_->find(r.secretName);
    return sIt != secrets_->end() && sIt->second.count(r.key) > 0;
  }
  auto tIt = staged_.find(taskId);
  if (tIt != staged_.end() && tIt->second.count(r.volume + "/" + r.key)) return true;
  return committed_.count(r.volume + "/" + r.key) > 0;
}

void ArtifactStore::write(const std::string& taskId, const std::vector<wfspec::VolumeMount>& mounts,
                          const std::string& absPath, std::string bytes) {
  Resolved r = resolve(mounts, absPath);
  if (r.secret || r.readOnly) {
    throw ArtifactError(ArtifactErrorKind::ReadOnlyMount, absPath,
                        "mount of '" + absPath + "' is read-only");
  }
  bytesWritten_ += bytes.size();
  staged_[taskId][r.volume + "/" + r.key] = std::move(bytes);
}

void ArtifactStore::commit(const std::string& taskId) {
  auto it = staged_.find(taskId);
  if (it == staged_.end()) return;
  for (auto& [key, bytes] : it->second) committed_[key] = std::move(bytes);
  staged_.erase(it);
}

void ArtifactStore::discard(const std::string& taskId) { staged_.erase(taskId); }

std::optional<std::string> ArtifactStore::read_committed(const std::string& volume,
                                                         const std::string& key) const {
  auto it = committed_.find(volume + "/" + key);
  if (it == committed_.end()) return std::nullopt;
  return it->second;
}

}  // namespace hqflow::engine
