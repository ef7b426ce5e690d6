#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lmoments/characters.hpp"

namespace lmoments {

// Parameters of the smoothed approximate functional equation.
//
// The cutoff is V(y) = Q(s', pi y^2) with s' = (1/2 + parity)/2 and Q the
// regularized upper incomplete gamma function; this makes the two-sum
// expression exact, and Q(s', x) <= x^(s'-1) e^-x gives Gaussian decay.
// Both sums are cut where pi n^2 / q exceeds `tail`.
struct AfeParams {
  double tail = 40.0;
  // Split parameter of the unbalanced recomputation used for residuals.
  double shift = 1.7;
  double residual_threshold = 1e-9;
  double conjugate_tolerance = 1e-10;
  double zero_threshold = 1e-10;
};

inline constexpr const char* kSmoothingName = "incgamma-theta";
inline constexpr int kCacheFormatVersion = 1;

struct GaussSumTable {
  std::vector<cplx> tau;  // indexed by a; tau[0] is the principal Gauss sum (-1)
};

// tau(chi_a) = sum_n chi_a(n) e(n/q) for all a, in one batch transform.
GaussSumTable gauss_sums(const CharacterGroup& group);

// L(1/2, chi_a) for the phi*(q) primitive characters of one modulus.
struct CentralValueTable {
  u64 q = 0;
  std::string method;  // "afe" or "oracle"
  std::string smoothing;
  double truncation = 0.0;
  // Indexed by a; entry 0 (principal character) is unused and left at 0.
  std::vector<cplx> values;
  std::vector<double> residuals;
  // Characters failing the residual threshold or conjugate symmetry.
  std::vector<u32> invalid;
  // Characters with |L| below the zero threshold.
  std::vector<u32> near_zero;

  bool valid() const { return invalid.empty(); }
  double max_residual() const;
  cplx value(CharacterId chi) const;
};

CentralValueTable central_values_afe(const CharacterGroup& group, const AfeParams& params = {});

// Per-character direct summation of the same formula: O(q) per Gauss sum and
// O(sqrt q) per AFE half, no transforms. Reference path for benchmarking.
CentralValueTable central_values_direct(const CharacterGroup& group,
                                        const AfeParams& params = {});

// Euler-Maclaurin evaluation of zeta(1/2, x) for 0 < x <= 1. `order` is the
// number of Bernoulli correction terms. Throws InputError naming the required
// order if the remainder bound exceeds 1e-12.
double hurwitz_zeta_half(double x, int order);

// L(1/2, chi_a) = q^(-1/2) sum_r chi_a(r) zeta(1/2, r/q). Independent of the
// AFE and of the batch transform.
cplx hurwitz_oracle(const CharacterGroup& group, CharacterId chi, int terms = 8);

// Reuses zeta(1/2, r/q) across all characters of one modulus.
class HurwitzOracle {
 public:
  HurwitzOracle(const CharacterGroup& group, int terms = 8);
  cplx operator()(CharacterId chi) const;

 private:
  const CharacterGroup* group_;
  std::vector<double> zeta_;
};

CentralValueTable central_values_oracle(const CharacterGroup& group, int terms = 8);

// Defect of `value` as L(1/2, chi_a): max of |value - L_X| with L_X the
// unbalanced AFE at split X = params.shift, and |value - omega conj(value)|.
double functional_equation_residual(const CharacterGroup& group, CharacterId chi, cplx value,
                                    const AfeParams& params = {});

// Cache I/O. See README for the file layout.
std::filesystem::path cache_path(const std::filesystem::path& dir, u64 q,
                                 int version = kCacheFormatVersion);
void write_table(const CentralValueTable& table, const std::filesystem::path& path);
CentralValueTable read_table(const std::filesystem::path& path);
std::string serialize_table(const CentralValueTable& table);

enum class CacheStatus { hit, computed, recomputed };

struct CachedTable {
  CentralValueTable table;
  CacheStatus status = CacheStatus::computed;
  std::string warning;
};

// Returns the cached table when its header matches (q, method, smoothing,
// truncation, format version); otherwise computes, validates and persists.
// Throws ValidationError if the fresh table is invalid (nothing is written).
CachedTable load_or_compute(const CharacterGroup& group, const std::filesystem::path& cache_dir,
                            const AfeParams& params = {});

}  // namespace lmoments
