#include "cli/app.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace pathbs::cli {

void add_common(CLI::App& sub, CommonOpts& opts) {
  if (const char* env = std::getenv("PATHBS_OUT_DIR")) opts.out_dir = env;
  sub.add_option("--out-dir", opts.out_dir, "Directory for CSV/JSON artifacts");
  sub.add_option("--seed", opts.seed, "Base 64-bit seed; all randomness derives from it");
  sub.add_option("--config", opts.config_file,
                 "Flat key=value config file; explicit flags override its values");
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Expands `--config file` into `--key=value` tokens appended after the
// explicit flags. Explicit flags win: file keys already given on the command
// line are dropped. Unknown file keys surface as unrecognized flags.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string config_file;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_file = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_file = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (config_file.empty()) return out;
  std::ifstream in(config_file);
  if (!in) throw std::invalid_argument("cannot open config file " + config_file);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line is not key=value: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("config line has empty key");
    const std::string flag = "--" + key;
    bool overridden = false;
    for (const auto& a : out)
      if (a == flag || a.rfind(flag + "=", 0) == 0) overridden = true;
    if (!overridden) out.push_back(flag + "=" + value);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"pathwise pricing and hedging toolkit"};
  app.require_subcommand(1);

  register_pde(app);
  register_hedge(app);
  register_ftdt(app);
  register_bounds(app);
  register_enlarged(app);
  register_deceive(app);
  register_sewbench(app);

  try {
    auto expanded = expand_config(args);
    // CLI11 consumes a reversed argv-style vector
    std::vector<std::string> rev(expanded.rbegin(), expanded.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace pathbs::cli
