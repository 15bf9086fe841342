#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace qcb {

inline constexpr const char* kArtifactVersion = "qcb-1";

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string content_hash(std::string_view text);

// Text payloads on disk, keyed by a content hash of what produced them.
// Every file carries the hash of its payload; a mismatch on read deletes
// the file and reports a miss.
class Cache {
 public:
  Cache() = default;
  explicit Cache(std::filesystem::path dir);
  // The explicit directory if given, else $QCB_CACHE_DIR, else disabled.
  static Cache open(const std::string& dir = "");

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }

  static std::string key(std::string_view datum, std::string_view op, std::string_view params);
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& payload) const;

 private:
  std::filesystem::path path(const std::string& key) const { return dir_ / (key + ".txt"); }
  std::filesystem::path dir_;
};

}  // namespace qcb
