#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lmoments/lfunction.hpp"
#include "lmoments/mollifier.hpp"
#include "lmoments/verifier.hpp"

namespace lmoments {

enum class ZeroPolicy { abort, skip };

struct MomentRow {
  u64 q = 0;
  double k = 0.0;
  double moment = 0.0;
  double normalizer = 0.0;  // phi*(q) (log q)^(k^2)
  double ratio = 0.0;
  u64 flagged = 0;
  double seconds = 0.0;

  friend bool operator==(const MomentRow&, const MomentRow&) = default;
};

struct PropositionRow {
  u64 q = 0;
  double k = 0.0;
  double prop22 = 0.0;
  double prop23 = 0.0;
  double prop24 = 0.0;

  friend bool operator==(const PropositionRow&, const PropositionRow&) = default;
};

// Sum over primitive chi of |L(1/2,chi)|^(2k), accumulated in log space.
// Characters with |L| < zero_threshold abort (InputError naming them) or are
// skipped and counted, per policy.
MomentRow compute_moment(const CharacterGroup& group, const CentralValueTable& lvalues, double k,
                         ZeroPolicy policy = ZeroPolicy::abort, double zero_threshold = 1e-10);

// Mollifier choice for the proposition series.
struct MollifierConfig {
  std::string mode = "relaxed";  // "paper" or "relaxed"
  int N_param = 2;
  int M_param = 1;
  std::vector<double> cuts = {31.0, 97.0};
  std::vector<int> ells = {8, 6};

  friend bool operator==(const MollifierConfig&, const MollifierConfig&) = default;
};

EllSchedule make_schedule(const MollifierConfig& config, u64 q);
PrimeBlocks make_blocks(const MollifierConfig& config, const EllSchedule& schedule);

struct ScanConfig {
  MollifierConfig mollifier;
  AfeParams afe;
  std::optional<std::filesystem::path> cache_dir;
  ZeroPolicy zero_policy = ZeroPolicy::abort;
  unsigned workers = 1;
  bool record_timing = false;
};

struct ScanResult {
  std::vector<MomentRow> moments;
  std::vector<PropositionRow> propositions;
};

// Every (q, k) pair; rows sorted by q then k. Proposition rows only for k < 0.
ScanResult scan(std::vector<u64> q_list, std::vector<double> k_list, const ScanConfig& config);

u64 nearest_prime(u64 target);
std::vector<u64> default_q_grid();
std::vector<double> default_k_grid();

enum class Format { csv, json };

std::string moments_to_csv(const std::vector<MomentRow>& rows);
std::string propositions_to_csv(const std::vector<PropositionRow>& rows);
std::string moments_to_json(const std::vector<MomentRow>& rows);
std::string propositions_to_json(const std::vector<PropositionRow>& rows);
std::vector<MomentRow> moments_from_json(const std::string& text);
std::vector<PropositionRow> propositions_from_json(const std::string& text);

// Writes text to path; IoError if the path is not writable.
void write_file(const std::filesystem::path& path, const std::string& text);
void emit(const std::vector<MomentRow>& rows, const std::filesystem::path& path, Format format);
void emit(const std::vector<PropositionRow>& rows, const std::filesystem::path& path,
          Format format);

}  // namespace lmoments
