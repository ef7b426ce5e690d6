#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmoments/lfunction.hpp"
#include "lmoments/mollifier.hpp"

namespace lmoments {

enum class CheckStatus { pass, fail, skipped };

const char* to_string(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  // Worst signed slack over the instance; >= 0 means the inequality held with
  // room to spare, negative values are compared against `tolerance`.
  double margin = 0.0;
  std::optional<u32> witness;
  double tolerance = 0.0;
  std::string note;
  std::vector<std::pair<std::string, double>> details;

  double detail(const std::string& key) const;
};

struct VerifyOptions {
  // Stands in for the implicit constants attached to e^(-l_j) error terms.
  double ctol = 10.0;
  double zero_threshold = 1e-10;
  double holder_slack = 1e-9;
  std::size_t truncation_samples = 10'000;
  u64 seed = 42;
  unsigned workers = 1;
  bool diagonal_length_guard = true;
};

struct InstanceDescriptor {
  u64 q = 0;
  double k = 0.0;
  double c = 0.0;
  std::string mode;
  int N_param = 0;
  int M_param = 0;
  std::vector<double> cuts;
  std::vector<int> ells;
  u64 seed = 0;
};

// Sum*|N(chi,k)|^2, Sum*|N(chi,k)^2 M(chi,1-k)^(-k/(1-k))|^2 and
// Sum*|L(1/2,chi) M(chi,k-1)|^2, each divided by phi*(q) (log q)^(k^2).
struct PropositionRatios {
  double prop22 = 0.0;
  double prop23 = 0.0;
  double prop24 = 0.0;
};

PropositionRatios proposition_ratios(const CharacterGroup& group, const CentralValueTable& lvalues,
                                     const MollifierEvaluation& ev);

struct VerificationReport {
  InstanceDescriptor instance;
  std::vector<CheckResult> checks;
  std::optional<PropositionRatios> ratios;
  std::vector<std::string> warnings;

  bool any_failed() const;
  const CheckResult& check(const std::string& name) const;
  nlohmann::ordered_json to_json() const;
};

// c = -k/(1-k), the exponent the Hoelder step is specialised to.
inline double holder_c(double k) { return -k / (1.0 - k); }

CheckResult check_truncation_bound(std::size_t samples, u64 seed);

CheckResult check_ccond(double k, double c);

CheckResult check_positivity_and_reciprocal(const MollifierEvaluation& ev,
                                            std::span<const double> alphas);

CheckResult check_firstdecomp(const CharacterGroup& group, const CentralValueTable& lvalues,
                              const MollifierEvaluation& ev, double k, double c,
                              const VerifyOptions& opts = {});

CheckResult check_holder_chain(const CharacterGroup& group, const CentralValueTable& lvalues,
                               const MollifierEvaluation& ev, double k,
                               const VerifyOptions& opts = {});

CheckResult check_regime_bounds(const MollifierEvaluation& ev, double k,
                                const VerifyOptions& opts = {});

// Sum_n k^(2 Omega(n)) b(n) / (n w(n)^2) for one block.
double diagonal_block_factor(std::span<const u64> block, int ell, double k);

CheckResult check_diagonal_identity(const CharacterGroup& group, const PrimeBlocks& blocks,
                                    std::span<const int> ells, double k,
                                    const VerifyOptions& opts = {});

CheckResult check_subset_decomposition(const MollifierEvaluation& ev, double k,
                                       const VerifyOptions& opts = {});

// Every check in a fixed order on one (q, k, mollifier) instance.
VerificationReport run_verification(const CharacterGroup& group, const CentralValueTable& lvalues,
                                    const EllSchedule& schedule, const PrimeBlocks& blocks,
                                    double k, const InstanceDescriptor& instance,
                                    const VerifyOptions& opts = {});

}  // namespace lmoments
