#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmoments/characters.hpp"

namespace lmoments {

// The sequence l_1 > l_2 > ... of even truncation degrees, one per prime block.
struct EllSchedule {
  int N_param = 0;
  int M_param = 0;
  double q = 0.0;
  std::vector<int> ells;
  std::size_t R = 0;
  bool relaxed = false;
  // l_j > l_{j+1}^2 for all consecutive pairs; false when R == 0.
  bool valid_decreasing = false;
  // sum 1/l_j <= 2/l_R, decided in exact rational arithmetic.
  bool valid_sumbound = false;
  // R == 0.
  bool degenerate = false;
  // The recurrence hit a fixed point above 10^M; R was cut at the stall.
  bool stalled = false;
  // First recurrence value that failed l > 10^M (paper mode only).
  std::optional<int> next_ell;
};

// l_1 = 2 ceil(N log log q), l_{j+1} = 2 ceil(N log l_j), natural logs; R is the
// last index with l_R > 10^M. q is real so that huge moduli can be explored.
EllSchedule build_schedule(int N_param, int M_param, double q);

// Explicit even degrees; flags are computed the same way.
EllSchedule relaxed_schedule(std::vector<int> ells, double q);

struct PrimeBlocks {
  std::vector<std::vector<u64>> blocks;
  std::vector<double> cuts;
  bool any_empty = false;
};

// Default cuts are q^(1/l_j^2). P_1 holds the odd primes up to the first cut,
// P_j the primes in (cut_{j-1}, cut_j]. Explicit cuts must be strictly
// increasing, >= 3, and one per schedule entry.
PrimeBlocks build_blocks(const EllSchedule& schedule,
                         const std::optional<std::vector<double>>& relaxed_cuts = std::nullopt);

inline constexpr int kMaxDoubleEll = 64;

// E_l(x) = sum_{j<=l} x^j / j!, ascending with compensated summation.
// Degrees above max_ell are rejected (double precision stops being adequate).
cplx truncated_exp(int ell, cplx x, int max_ell = kMaxDoubleEll);

// P_j(chi_a) = sum_{p in P_j} chi_a(p) / sqrt(p); result[j][a].
std::vector<std::vector<cplx>> power_sums(const CharacterGroup& group, const PrimeBlocks& blocks);

// Per-character mollifier pieces for all characters (principal included).
// Flat arrays are indexed [a * R + j].
struct MollifierEvaluation {
  u64 q = 0;
  double k = 0.0;
  std::size_t R = 0;
  u32 characters = 0;
  std::vector<int> ells;
  std::vector<cplx> P;
  std::vector<cplx> N;       // N_j(chi, k)
  std::vector<cplx> N_km1;   // N_j(chi, k - 1)
  std::vector<double> Q;     // Q_j(chi, k), non-negative
  std::vector<char> small;   // |P_j| <= l_j / (10 (1 + |k|))
  std::vector<double> alphas;
  std::vector<std::vector<double>> M;  // M[alpha index][a * R + j]
  std::vector<cplx> N_prod;
  std::vector<cplx> N_km1_prod;
  std::vector<std::vector<double>> M_prod;  // [alpha index][a]
  bool degenerate = false;

  std::size_t at(u32 a, std::size_t j) const { return static_cast<std::size_t>(a) * R + j; }
  // Throws InputError if alpha was not evaluated.
  std::size_t alpha_index(double alpha) const;
  double M_value(double alpha, u32 a, std::size_t j) const {
    return M[alpha_index(alpha)][at(a, j)];
  }
  double M_product(double alpha, u32 a) const { return M_prod[alpha_index(alpha)][a]; }
};

// N_j = E_{l_j}(k P_j), M_j = E_{l_j}(alpha Re P_j),
// Q_j = (12 (1+|k|) |P_j| / l_j)^((2 - k/(1-k)) l_j). Requires k < 0.
MollifierEvaluation evaluate(const CharacterGroup& group, const EllSchedule& schedule,
                             const PrimeBlocks& blocks, double k, std::span<const double> alphas,
                             unsigned workers = 1);

struct DirichletCoeff {
  u64 n;
  double coeff;  // alpha^Omega(n) / (w(n) sqrt(n))
  unsigned omega;
  u64 w;
};

inline constexpr std::size_t kDefaultExpansionCap = 10'000'000;

// All n built from block primes with Omega(n) <= ell, ascending in n.
// sum_n coeff(n) chi(n) equals E_ell(alpha P(chi)) for every chi.
std::vector<DirichletCoeff> expand_coeffs(std::span<const u64> block, int ell, double alpha,
                                          std::size_t cap = kDefaultExpansionCap);

// Number of monomials of degree <= ell in |block| variables.
double expansion_size(std::size_t block_size, int ell);

}  // namespace lmoments
