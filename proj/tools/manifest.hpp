#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recmle/report_json.hpp"

namespace recmle::cli {

std::uint64_t fnv1a64(std::string_view bytes);

std::string utc_timestamp();

// Records one subcommand invocation and digests of everything it wrote.
class RunManifest {
 public:
  RunManifest(std::string subcommand, std::vector<std::string> args);

  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_output(std::string path, std::string_view bytes);
  Json finish();

 private:
  std::string subcommand_;
  std::vector<std::string> args_;
  std::optional<std::uint64_t> seed_;
  std::string started_;
  std::vector<std::pair<std::string, std::uint64_t>> outputs_;
};

}  // namespace recmle::cli
