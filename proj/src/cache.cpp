#include "qcb/cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace qcb {

std::string content_hash(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

Cache Cache::open(const std::string& dir) {
  if (!dir.empty()) return Cache(dir);
  if (const char* env = std::getenv("QCB_CACHE_DIR"); env && *env) return Cache(env);
  return Cache();
}

std::string Cache::key(std::string_view datum, std::string_view op, std::string_view params) {
  std::string all;
  for (std::string_view part : {std::string_view(kArtifactVersion), datum, op, params}) {
    all += std::to_string(part.size());
    all += ':';
    all += part;
  }
  return content_hash(all);
}

std::optional<std::string> Cache::get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(path(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::string head;
  std::getline(in, head);
  std::ostringstream body;
  body << in.rdbuf();
  const std::string payload = body.str();
  if (head != "qcb-cache " + content_hash(payload)) {
    in.close();
    std::error_code ec;
    std::filesystem::remove(path(key), ec);
    return std::nullopt;
  }
  return payload;
}

void Cache::put(const std::string& key, const std::string& payload) const {
  if (!enabled()) return;
  std::ostringstream tmpname;
  tmpname << key << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const std::filesystem::path tmp = dir_ / tmpname.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << "qcb-cache " << content_hash(payload) << '\n' << payload;
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path(key));
}

}  // namespace qcb
