#include "cli/common.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "pathbs/rng.hpp"

namespace pathbs::cli {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void RunConfig::set_num(const std::string& key, double value) { set(key, fmt17(value)); }

void RunConfig::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

std::string RunConfig::canonical() const {
  std::string s;
  for (const auto& [k, v] : kv_) {
    s += k;
    s += '=';
    s += v;
    s += '\n';
  }
  return s;
}

namespace {
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}
}  // namespace

std::uint64_t RunConfig::hash() const { return fnv1a(canonical()); }

json RunConfig::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : kv_) j[k] = v;
  return j;
}

std::uint64_t RunConfig::hash_of(const json& config_object) {
  RunConfig c;
  for (auto it = config_object.begin(); it != config_object.end(); ++it)
    c.set(it.key(), it.value().get<std::string>());
  return c.hash();
}

SampledPath gbm_path(double s0, double mu, double sigma, const TimeGrid& grid,
                     std::uint64_t seed) {
  if (!(s0 > 0.0) || !(sigma > 0.0)) throw std::invalid_argument("gbm_path: bad parameters");
  SplitMix64 rng(seed);
  std::vector<double> v{s0};
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double h = grid[k + 1] - grid[k];
    v.push_back(v.back() *
                std::exp((mu - 0.5 * sigma * sigma) * h + sigma * std::sqrt(h) * rng.normal()));
  }
  return SampledPath::scalar(grid, std::move(v));
}

std::string out_path(const std::string& dir, const std::string& name) {
  namespace fs = std::filesystem;
  fs::path d = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(d);
  return (d / name).string();
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << j.dump(2) << "\n";
}

}  // namespace pathbs::cli
