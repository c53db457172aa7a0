#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace recmle::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest::RunManifest(std::string subcommand, std::vector<std::string> args)
    : subcommand_(std::move(subcommand)), args_(std::move(args)), started_(utc_timestamp()) {}

void RunManifest::add_output(std::string path, std::string_view bytes) {
  outputs_.emplace_back(std::move(path), fnv1a64(bytes));
}

Json RunManifest::finish() {
  Json j;
  j["subcommand"] = subcommand_;
  j["flags"] = args_;
  if (seed_) {
    j["seed"] = *seed_;
  } else {
    j["seed"] = nullptr;
  }
  j["version"] = RECMLE_VERSION;
  j["started_utc"] = started_;
  j["finished_utc"] = utc_timestamp();
  Json outs = Json::array();
  for (const auto& [path, digest] : outputs_) {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest));
    outs.push_back({{"path", path}, {"fnv1a64", hex}});
  }
  j["outputs"] = std::move(outs);
  return j;
}

}  // namespace recmle::cli
