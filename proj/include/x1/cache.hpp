#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace x1 {

inline constexpr int kCacheVersion = 1;

// Text records under one directory, one file per key. A record whose version
// or key line does not match is treated as absent.
class Cache {
 public:
  Cache() = default;  // disabled: get misses, put is a no-op
  explicit Cache(std::filesystem::path dir);
  // X1_CACHE_DIR when set, else `fallback` (empty disables).
  static Cache from_env(const std::string& fallback);

  bool enabled() const { return !dir_.empty(); }
  const std::filesystem::path& dir() const { return dir_; }

  std::optional<std::string> get(const std::string& key) const;
  // Written to a temporary file and renamed into place.
  void put(const std::string& key, const std::string& body) const;
  std::vector<std::string> keys() const;
  std::size_t clear() const;

 private:
  std::filesystem::path path(const std::string& key) const;
  std::filesystem::path dir_;
};

// Stable short id for key construction (FNV-1a, hex).
std::string cache_id(const std::string& text);

}  // namespace x1
