#include "x1/cache.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "x1/integer.hpp"

namespace x1 {

namespace {

const std::string kSuffix = ".x1rec";

std::string header(const std::string& key) { return "x1-cache " + std::to_string(kCacheVersion) + " " + key; }

}  // namespace

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

Cache Cache::from_env(const std::string& fallback) {
  const char* env = std::getenv("X1_CACHE_DIR");
  return Cache(env && *env ? std::string(env) : fallback);
}

std::filesystem::path Cache::path(const std::string& key) const {
  for (char c : key)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
      throw Error("domain", "cache key has an unsafe character: " + key);
  return dir_ / (key + kSuffix);
}

std::optional<std::string> Cache::get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path(key));
  if (!in) return std::nullopt;
  std::string first;
  if (!std::getline(in, first) || first != header(key)) return std::nullopt;
  std::stringstream body;
  body << in.rdbuf();
  return body.str();
}

void Cache::put(const std::string& key, const std::string& body) const {
  if (!enabled()) return;
  const auto target = path(key);
  auto tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << header(key) << "\n" << body;
    if (!out.flush()) throw Error("io", "cannot write cache record " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::vector<std::string> Cache::keys() const {
  std::vector<std::string> out;
  if (!enabled() || !std::filesystem::exists(dir_)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir_)) {
    const std::string name = e.path().filename().string();
    if (name.size() > kSuffix.size() && name.ends_with(kSuffix)) out.push_back(name.substr(0, name.size() - kSuffix.size()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Cache::clear() const {
  std::size_t n = 0;
  for (const auto& k : keys()) n += std::filesystem::remove(path(k));
  return n;
}

std::string cache_id(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace x1
