#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "pathbs/grid.hpp"

namespace pathbs::cli {

using nlohmann::json;

// Effective configuration of a run: canonical key -> string value map. The
// hash is FNV-1a over the sorted "key=value\n" serialization, so a report's
// stored config re-hashes to the stored config_hash.
class RunConfig {
public:
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }
  void set_num(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  std::string canonical() const;
  std::uint64_t hash() const;
  json to_json() const;
  static std::uint64_t hash_of(const json& config_object);

private:
  std::map<std::string, std::string> kv_;
};

std::string fmt17(double v);

// Undiscounted geometric Brownian motion on a grid.
SampledPath gbm_path(double s0, double mu, double sigma, const TimeGrid& grid, std::uint64_t seed);

// Joins directory and filename; creates the directory if needed.
std::string out_path(const std::string& dir, const std::string& name);

void write_json_file(const std::string& path, const json& j);

}  // namespace pathbs::cli
