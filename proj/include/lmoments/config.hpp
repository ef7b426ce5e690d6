#pragma once

#include <string>
#include <vector>

#include "lmoments/experiments.hpp"

namespace CLI {
class App;
}

namespace lmoments {

// Everything a CLI run depends on. Loaded from an INI/TOML-style file via
// --config (flat, top-level keys named like the long flags); flags win.
struct RunConfig {
  std::vector<u64> q_list;
  std::vector<double> k_list;
  MollifierConfig mollifier;
  double ctol = 10.0;
  double residual_threshold = 1e-9;
  double zero_threshold = 1e-10;
  std::string zero_policy = "abort";
  std::string cache_dir;
  std::string out;
  std::string format = "csv";
  u64 seed = 42;
  unsigned workers = 1;
  bool timing = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  // Throws InputError on non-positive tolerances or unknown enum values.
  void validate() const;

  // Config-file text that parses back to an equal RunConfig.
  std::string to_ini() const;

  AfeParams afe_params() const;
  VerifyOptions verify_options() const;
  ScanConfig scan_config() const;
};

inline constexpr const char* kCacheDirEnv = "LMOMENTS_CACHE_DIR";

// Registers every run option on `app`. Call finalize_config after parsing.
void bind_options(CLI::App& app, RunConfig& config, std::vector<u64>& single_q);
void finalize_config(RunConfig& config, const std::vector<u64>& single_q);

}  // namespace lmoments
