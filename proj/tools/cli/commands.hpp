#pragma once

#include <cstdint>
#include <string>

#include <CLI11.hpp>

namespace pathbs::cli {

struct CommonOpts {
  std::string out_dir = ".";
  std::uint64_t seed = 12345;
  std::string config_file;
};

// Adds --out-dir / --seed / --config to a subcommand; PATHBS_OUT_DIR
// overrides the default output directory.
void add_common(CLI::App& sub, CommonOpts& opts);

void register_pde(CLI::App& app);
void register_hedge(CLI::App& app);
void register_ftdt(CLI::App& app);
void register_bounds(CLI::App& app);
void register_enlarged(CLI::App& app);
void register_deceive(CLI::App& app);
void register_sewbench(CLI::App& app);

}  // namespace pathbs::cli
