#include "lmoments/mollifier.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "lmoments/errors.hpp"
#include "lmoments/numeric.hpp"

namespace lmoments {
namespace {

constexpr double kMaxCut = 1e8;

void compute_flags(EllSchedule& s) {
  s.R = s.ells.size();
  s.degenerate = s.R == 0;
  s.valid_decreasing = s.R > 0;
  for (std::size_t j = 0; j + 1 < s.R; ++j) {
    const long long next = s.ells[j + 1];
    if (!(s.ells[j] > next * next)) s.valid_decreasing = false;
  }
  if (s.R == 0) {
    s.valid_sumbound = false;
    return;
  }
  boost::rational<long long> sum(0);
  for (int l : s.ells) sum += boost::rational<long long>(1, l);
  s.valid_sumbound = sum <= boost::rational<long long>(2, s.ells.back());
}

}  // namespace

EllSchedule build_schedule(int N_param, int M_param, double q) {
  if (N_param < 1 || M_param < 1) throw InputError("build_schedule: N and M must be >= 1");
  if (M_param > 9) throw InputError("build_schedule: M above 9 is out of range");
  if (!(q >= 17.0)) throw InputError("build_schedule: q must be >= 17 so that log log q > 0");
  EllSchedule s;
  s.N_param = N_param;
  s.M_param = M_param;
  s.q = q;
  const double threshold = std::pow(10.0, M_param);
  auto step = [&](double x) { return 2 * static_cast<int>(std::ceil(N_param * std::log(x))); };
  int ell = step(std::log(q));
  while (ell > threshold) {
    s.ells.push_back(ell);
    const int next = step(ell);
    if (next >= ell) {
      s.stalled = true;
      break;
    }
    ell = next;
  }
  if (!s.stalled) s.next_ell = ell;
  compute_flags(s);
  return s;
}

EllSchedule relaxed_schedule(std::vector<int> ells, double q) {
  for (int l : ells) {
    if (l <= 0 || l % 2 != 0)
      throw InputError("relaxed_schedule: every ell must be a positive even integer, got " +
                       std::to_string(l));
  }
  EllSchedule s;
  s.q = q;
  s.relaxed = true;
  s.ells = std::move(ells);
  compute_flags(s);
  return s;
}

PrimeBlocks build_blocks(const EllSchedule& schedule,
                         const std::optional<std::vector<double>>& relaxed_cuts) {
  PrimeBlocks b;
  if (relaxed_cuts) {
    const auto& cuts = *relaxed_cuts;
    if (cuts.size() != schedule.R)
      throw InputError("build_blocks: need one cut per ell (" + std::to_string(schedule.R) +
                       "), got " + std::to_string(cuts.size()));
    for (std::size_t j = 0; j < cuts.size(); ++j) {
      if (!(cuts[j] >= 3.0)) throw InputError("build_blocks: cuts must be >= 3");
      if (j > 0 && !(cuts[j] > cuts[j - 1]))
        throw InputError("build_blocks: cuts must be strictly increasing");
    }
    b.cuts = cuts;
  } else {
    for (int l : schedule.ells)
      b.cuts.push_back(std::pow(schedule.q, 1.0 / (static_cast<double>(l) * l)));
  }
  const double top = b.cuts.empty() ? 0.0 : b.cuts.back();
  if (top > kMaxCut) throw InputError("build_blocks: cut above 1e8 is out of range");
  const auto primes = sieve_primes(static_cast<u64>(std::floor(top)));

  b.blocks.resize(b.cuts.size());
  double lower = 2.0;  // P_1 excludes the prime 2
  for (std::size_t j = 0; j < b.cuts.size(); ++j) {
    for (u64 p : primes) {
      const auto pd = static_cast<double>(p);
      if (pd > lower && pd <= b.cuts[j]) b.blocks[j].push_back(p);
    }
    if (b.blocks[j].empty()) b.any_empty = true;
    lower = std::max(lower, b.cuts[j]);
  }
  return b;
}

cplx truncated_exp(int ell, cplx x, int max_ell) {
  if (ell < 0) throw InputError("truncated_exp: ell must be non-negative");
  if (ell > max_ell)
    throw InputError("truncated_exp: ell=" + std::to_string(ell) +
                     " exceeds the double-precision limit " + std::to_string(max_ell));
  CompensatedSum re, im;
  cplx term{1.0, 0.0};
  re.add(1.0);
  for (int j = 1; j <= ell; ++j) {
    term *= x / static_cast<double>(j);
    re.add(term.real());
    im.add(term.imag());
  }
  return {re.value(), im.value()};
}

std::vector<std::vector<cplx>> power_sums(const CharacterGroup& group, const PrimeBlocks& blocks) {
  std::vector<std::vector<cplx>> out;
  out.reserve(blocks.blocks.size());
  for (const auto& block : blocks.blocks) {
    std::vector<Term> terms;
    for (u64 p : block) {
      if (p % group.modulus() == 0)
        throw InputError("power_sums: block prime " + std::to_string(p) + " equals the modulus");
      terms.push_back({p, {1.0 / std::sqrt(static_cast<double>(p)), 0.0}});
    }
    out.push_back(batch_char_sums(group, terms));
  }
  return out;
}

std::size_t MollifierEvaluation::alpha_index(double alpha) const {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (std::abs(alphas[i] - alpha) <= 1e-14 * std::max(1.0, std::abs(alpha))) return i;
  }
  throw InputError("mollifier evaluation has no data for alpha=" + std::to_string(alpha));
}

MollifierEvaluation evaluate(const CharacterGroup& group, const EllSchedule& schedule,
                             const PrimeBlocks& blocks, double k, std::span<const double> alphas,
                             unsigned workers) {
  if (!(k < 0.0)) throw InputError("evaluate: k must be negative");
  if (blocks.blocks.size() != schedule.R)
    throw InputError("evaluate: block count differs from schedule length");
  MollifierEvaluation ev;
  ev.q = group.modulus();
  ev.k = k;
  ev.R = schedule.R;
  ev.ells = schedule.ells;
  ev.characters = static_cast<u32>(group.phi());
  ev.degenerate = schedule.R == 0;
  for (double alpha : alphas) {
    const bool seen = std::any_of(ev.alphas.begin(), ev.alphas.end(),
                                  [&](double x) { return x == alpha; });
    if (!seen) ev.alphas.push_back(alpha);
  }

  const auto sums = power_sums(group, blocks);
  const std::size_t R = ev.R;
  const std::size_t cells = static_cast<std::size_t>(ev.characters) * R;
  ev.P.resize(cells);
  ev.N.resize(cells);
  ev.N_km1.resize(cells);
  ev.Q.resize(cells);
  ev.small.resize(cells);
  ev.M.assign(ev.alphas.size(), std::vector<double>(cells));
  ev.N_prod.assign(ev.characters, {1.0, 0.0});
  ev.N_km1_prod.assign(ev.characters, {1.0, 0.0});
  ev.M_prod.assign(ev.alphas.size(), std::vector<double>(ev.characters, 1.0));

  const double absk = std::abs(k);
  const double q_exponent = 2.0 - k / (1.0 - k);
  parallel_for(ev.characters, workers, [&](std::size_t a) {
    for (std::size_t j = 0; j < R; ++j) {
      const std::size_t i = a * R + j;
      const int ell = schedule.ells[j];
      const cplx p = sums[j][a];
      ev.P[i] = p;
      ev.N[i] = truncated_exp(ell, k * p);
      ev.N_km1[i] = truncated_exp(ell, (k - 1.0) * p);
      const double base = 12.0 * (1.0 + absk) * std::abs(p) / ell;
      ev.Q[i] = std::pow(base, q_exponent * ell);
      ev.small[i] = std::abs(p) <= ell / (10.0 * (1.0 + absk));
      ev.N_prod[a] *= ev.N[i];
      ev.N_km1_prod[a] *= ev.N_km1[i];
      for (std::size_t t = 0; t < ev.alphas.size(); ++t) {
        const double m = truncated_exp(ell, cplx{ev.alphas[t] * p.real(), 0.0}).real();
        ev.M[t][i] = m;
        ev.M_prod[t][a] *= m;
      }
    }
  });
  return ev;
}

double expansion_size(std::size_t block_size, int ell) {
  // C(block_size + ell, ell)
  double c = 1.0;
  for (int i = 1; i <= ell; ++i) c = c * static_cast<double>(block_size + i) / i;
  return c;
}

std::vector<DirichletCoeff> expand_coeffs(std::span<const u64> block, int ell, double alpha,
                                          std::size_t cap) {
  if (ell < 0) throw InputError("expand_coeffs: ell must be non-negative");
  const double size = expansion_size(block.size(), ell);
  if (size > static_cast<double>(cap))
    throw InputError("expand_coeffs: expansion would hold about " + std::to_string(size) +
                     " terms, above the cap of " + std::to_string(cap));

  std::vector<DirichletCoeff> out;
  out.reserve(static_cast<std::size_t>(size));
  // Depth-first over exponent vectors with total degree <= ell.
  auto rec = [&](auto&& self, std::size_t i, u64 n, unsigned omega, u64 w) -> void {
    if (i == block.size()) {
      const double c = std::pow(alpha, static_cast<double>(omega)) /
                       (static_cast<double>(w) * std::sqrt(static_cast<double>(n)));
      out.push_back({n, c, omega, w});
      return;
    }
    const u64 p = block[i];
    u64 pn = 1;
    u64 fact = 1;
    for (unsigned e = 0; omega + e <= static_cast<unsigned>(ell); ++e) {
      if (e > 0) {
        if (e > 20) throw InputError("expand_coeffs: exponent above 20 overflows w(n)");
        if (pn > UINT64_MAX / p || n > UINT64_MAX / (pn * p))
          throw InputError("expand_coeffs: support exceeds 64-bit integers");
        pn *= p;
        fact *= e;
      }
      self(self, i + 1, n * pn, omega + e, w * fact);
    }
  };
  rec(rec, 0, 1, 0, 1);
  std::sort(out.begin(), out.end(),
            [](const DirichletCoeff& x, const DirichletCoeff& y) { return x.n < y.n; });
  return out;
}

}  // namespace lmoments
