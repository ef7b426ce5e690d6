#include "lmoments/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lmoments/errors.hpp"
#include "lmoments/numeric.hpp"

namespace lmoments {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Tracks the smallest margin and where it occurred.
struct Worst {
  double margin = kInf;
  std::optional<u32> witness;

  void update(double m, std::optional<u32> at = std::nullopt) {
    if (m < margin) {
      margin = m;
      witness = at;
    }
  }
  double finite() const { return std::isfinite(margin) ? margin : 0.0; }
};

CheckResult skipped(std::string name, std::string why, double tolerance = 0.0) {
  CheckResult r;
  r.name = std::move(name);
  r.status = CheckStatus::skipped;
  r.note = std::move(why);
  r.tolerance = tolerance;
  return r;
}

double rel_err(double x, double ref) {
  return std::abs(x - ref) / std::max(std::abs(ref), std::numeric_limits<double>::min());
}

bool has_near_zero(const CentralValueTable& lvalues, double threshold, u32* first) {
  for (u32 a = 1; a < lvalues.values.size(); ++a) {
    if (std::abs(lvalues.values[a]) < threshold) {
      if (first) *first = a;
      return true;
    }
  }
  return false;
}

double normalizer(u64 q, double k) {
  return static_cast<double>(q - 2) * std::pow(std::log(static_cast<double>(q)), k * k);
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skipped:
      return "skipped-degenerate";
  }
  return "?";
}

double CheckResult::detail(const std::string& key) const {
  for (const auto& [k, v] : details)
    if (k == key) return v;
  throw InputError("check " + name + " has no detail " + key);
}

bool VerificationReport::any_failed() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

const CheckResult& VerificationReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw InputError("report has no check named " + name);
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json inst;
  inst["q"] = instance.q;
  inst["k"] = instance.k;
  inst["c"] = instance.c;
  inst["mode"] = instance.mode;
  inst["N"] = instance.N_param;
  inst["M"] = instance.M_param;
  inst["cuts"] = instance.cuts;
  inst["ells"] = instance.ells;
  inst["seed"] = instance.seed;

  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["status"] = to_string(c.status);
    j["margin"] = c.margin;
    j["witness"] = c.witness ? nlohmann::ordered_json(*c.witness) : nlohmann::ordered_json();
    j["tolerance"] = c.tolerance;
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.details.empty()) {
      nlohmann::ordered_json d;
      for (const auto& [k, v] : c.details) d[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json();
      j["details"] = d;
    }
    list.push_back(std::move(j));
  }

  nlohmann::ordered_json out;
  out["instance"] = inst;
  out["checks"] = list;
  if (ratios) {
    out["ratios"] = {{"prop22", ratios->prop22}, {"prop23", ratios->prop23},
                     {"prop24", ratios->prop24}};
  }
  if (!warnings.empty()) out["warnings"] = warnings;
  return out;
}

CheckResult check_truncation_bound(std::size_t samples, u64 seed) {
  CheckResult r;
  r.name = "truncation_bound";
  r.tolerance = 1e-12;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_k(1, 60);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Worst worst;
  double violations = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const int K = pick_k(rng);
    const double a = 1.0 - unit(rng);  // (0, 1]
    const double radius = a * K / 10.0 * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    const cplx z = std::polar(radius, angle);

    const double lhs = std::abs(truncated_exp(K, z) - std::exp(z));
    const double mid =
        radius == 0.0 ? 0.0 : std::exp(K * std::log(radius) - std::lgamma(K + 1.0));
    const double rhs = std::pow(a * std::numbers::e / 10.0, K);
    const double m = std::min(mid + r.tolerance - lhs, rhs + r.tolerance - mid);
    if (m < 0) ++violations;
    worst.update(m);
  }
  r.margin = worst.finite();
  r.status = violations == 0 ? CheckStatus::pass : CheckStatus::fail;
  r.details = {{"samples", static_cast<double>(samples)}, {"violations", violations}};
  return r;
}

CheckResult check_ccond(double k, double c) {
  CheckResult r;
  r.name = "ccond";
  const double value = c / 2.0 - c / (2.0 * k);
  const double c_max = -2.0 * k / (1.0 - k);
  r.margin = std::min({value, 1.0 - value, c, c_max - c});
  r.status = (k < 0 && r.margin > 0) ? CheckStatus::pass : CheckStatus::fail;
  r.details = {{"window_value", value}, {"c", c}, {"c_max", c_max}};
  return r;
}

CheckResult check_positivity_and_reciprocal(const MollifierEvaluation& ev,
                                            std::span<const double> alphas) {
  CheckResult r;
  r.name = "positivity_and_reciprocal";
  r.tolerance = 1e-12;
  Worst product;
  double min_m = kInf;
  for (double alpha : alphas) {
    const std::size_t plus = ev.alpha_index(alpha);
    const std::size_t minus = ev.alpha_index(-alpha);
    for (u32 a = 0; a < ev.characters; ++a) {
      for (std::size_t j = 0; j < ev.R; ++j) min_m = std::min(min_m, ev.M[plus][ev.at(a, j)]);
      product.update(ev.M_prod[plus][a] * ev.M_prod[minus][a] - 1.0, a);
    }
  }
  r.margin = product.finite();
  r.witness = product.witness;
  const bool positive = ev.R == 0 || min_m > 0.0;
  r.status = positive && r.margin >= -r.tolerance ? CheckStatus::pass : CheckStatus::fail;
  r.details = {{"min_M_factor", std::isfinite(min_m) ? min_m : 1.0}};
  return r;
}

CheckResult check_firstdecomp(const CharacterGroup& group, const CentralValueTable& lvalues,
                              const MollifierEvaluation& ev, double k, double c,
                              const VerifyOptions& opts) {
  CheckResult r;
  r.name = "firstdecomp";
  r.tolerance = 1e-12;
  Worst termwise;
  double rearrangement = 0.0;
  double skipped_chars = 0;
  CompensatedSum lhs, middle;
  for (u32 a = 1; a < group.phi(); ++a) {
    const double n2 = std::norm(ev.N_prod[a]);
    const double m_minus = ev.M_product(k - 1.0, a);
    const double m_plus = ev.M_product(1.0 - k, a);
    const double rhs = n2 * std::pow(m_minus * m_plus, c);
    lhs.add(n2);
    middle.add(rhs);
    termwise.update((rhs - n2) / std::max(rhs, std::numeric_limits<double>::min()), a);

    const double L = std::abs(lvalues.values[a]);
    if (L < opts.zero_threshold) {
      ++skipped_chars;
      continue;
    }
    const double rewritten =
        std::pow(L, -c) * std::pow(L * m_minus, c) * n2 * std::pow(m_plus, c);
    rearrangement = std::max(rearrangement, rel_err(rewritten, rhs));
  }
  r.margin = termwise.finite();
  r.witness = termwise.witness;
  const bool ok = r.margin >= -r.tolerance && rearrangement <= 1e-10 &&
                  lhs.value() <= middle.value() * (1.0 + r.tolerance);
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  r.details = {{"lhs", lhs.value()},
               {"middle", middle.value()},
               {"rearrangement_rel_err", rearrangement},
               {"skipped_near_zero", skipped_chars}};
  return r;
}

CheckResult check_holder_chain(const CharacterGroup& group, const CentralValueTable& lvalues,
                               const MollifierEvaluation& ev, double k,
                               const VerifyOptions& opts) {
  const double c = holder_c(k);
  CheckResult r;
  r.name = "holder_chain";
  r.tolerance = opts.holder_slack;

  const double p1 = -2.0 * k / c;
  const double p2 = 2.0 / c;
  const double p3 = 1.0 / (1.0 + (1.0 - k) * c / (2.0 * k));
  const double reciprocal_sum = 1.0 / p1 + 1.0 / p2 + 1.0 / p3;
  r.details.emplace_back("exponent_reciprocal_sum", reciprocal_sum);

  u32 zero_at = 0;
  if (has_near_zero(lvalues, opts.zero_threshold, &zero_at)) {
    r.status = CheckStatus::skipped;
    r.witness = zero_at;
    r.note = "near-zero L-value; negative powers undefined for this modulus";
    return r;
  }

  std::vector<double> log_moment;
  CompensatedSum lhs, middle, s2, s3;
  for (u32 a = 1; a < group.phi(); ++a) {
    const double L = std::abs(lvalues.values[a]);
    const double n2 = std::norm(ev.N_prod[a]);
    const double m_minus = ev.M_product(k - 1.0, a);
    const double m_plus = ev.M_product(1.0 - k, a);
    log_moment.push_back(2.0 * k * std::log(L));
    lhs.add(n2);
    middle.add(n2 * std::pow(m_minus * m_plus, c));
    s2.add(L * L * m_minus * m_minus);
    s3.add(n2 * n2 * std::pow(m_plus, 2.0 * c));
  }
  const double log_s1 = log_sum_exp(log_moment);
  const double rhs = std::exp(log_s1 / (2.0 * (1.0 - k)) +
                              (-k / (2.0 * (1.0 - k))) * std::log(s2.value()) +
                              0.5 * std::log(s3.value()));
  r.margin = (rhs - lhs.value()) / rhs;
  const bool chain = lhs.value() <= rhs * (1.0 + r.tolerance) &&
                     middle.value() <= rhs * (1.0 + r.tolerance);
  const bool exponents = std::abs(reciprocal_sum - 1.0) <= 1e-12;
  r.status = chain && exponents ? CheckStatus::pass : CheckStatus::fail;
  r.details.emplace_back("lhs", lhs.value());
  r.details.emplace_back("middle", middle.value());
  r.details.emplace_back("rhs", rhs);
  r.details.emplace_back("moment", std::exp(log_s1));
  return r;
}

CheckResult check_regime_bounds(const MollifierEvaluation& ev, double k,
                                const VerifyOptions& opts) {
  CheckResult r;
  r.name = "regime_bounds";
  r.tolerance = 1e-12;
  const double c = holder_c(k);
  const double absk = std::abs(k);
  double min_ctol = 0.0;
  double max_large_ratio = 0.0;
  double small_count = 0, large_count = 0;
  std::optional<u32> ctol_witness, large_witness;

  for (u32 a = 1; a < ev.characters; ++a) {
    for (std::size_t j = 0; j < ev.R; ++j) {
      const std::size_t i = ev.at(a, j);
      const double ell = ev.ells[j];
      const cplx p = ev.P[i];
      const cplx n = ev.N[i];
      const double m = ev.M_value(1.0 - k, a, j);
      const double combo = std::norm(n) * std::norm(n) * std::pow(m, 2.0 * c);
      if (ev.small[i]) {
        ++small_count;
        const double scale = std::exp(-ell);
        const double e1 = std::abs(n * std::exp(-k * p) - 1.0) / scale;
        const double e3 = std::abs(m * std::exp(-(1.0 - k) * p.real()) - 1.0) / scale;
        const double target = std::exp(2.0 * k * p.real());
        const double e2 = std::abs(combo - target) / (scale * target);
        const double need = std::max({e1, e2, e3});
        if (need > min_ctol) {
          min_ctol = need;
          ctol_witness = a;
        }
      } else {
        ++large_count;
        const double bound = std::pow(12.0 * (1.0 + absk) * std::abs(p) / ell, ell);
        const double q2 = ev.Q[i] * ev.Q[i];
        const double ratio =
            std::max({std::abs(n) / bound, std::abs(m) / bound, combo / q2});
        if (ratio > max_large_ratio) {
          max_large_ratio = ratio;
          large_witness = a;
        }
      }
    }
  }
  const bool small_ok = min_ctol <= opts.ctol;
  const bool large_ok = max_large_ratio <= 1.0 + r.tolerance;
  r.status = small_ok && large_ok ? CheckStatus::pass : CheckStatus::fail;
  const double small_margin = (opts.ctol - min_ctol) / opts.ctol;
  const double large_margin = large_count > 0 ? 1.0 - max_large_ratio : kInf;
  if (small_margin <= large_margin) {
    r.margin = small_margin;
    r.witness = ctol_witness;
  } else {
    r.margin = large_margin;
    r.witness = large_witness;
  }
  r.details = {{"ctol", opts.ctol},
               {"min_passing_ctol", min_ctol},
               {"max_large_ratio", max_large_ratio},
               {"small_cells", small_count},
               {"large_cells", large_count}};
  return r;
}

double diagonal_block_factor(std::span<const u64> block, int ell, double k) {
  CompensatedSum s;
  for (const auto& t : expand_coeffs(block, ell, k)) s.add(t.coeff * t.coeff);
  return s.value();
}

CheckResult check_diagonal_identity(const CharacterGroup& group, const PrimeBlocks& blocks,
                                    std::span<const int> ells, double k,
                                    const VerifyOptions& opts) {
  const std::string name = "diagonal_identity";
  if (ells.size() != blocks.blocks.size())
    throw InputError("check_diagonal_identity: one ell per block required");
  const u64 q = group.modulus();
  const double phi = static_cast<double>(group.phi());

  double log_length = 0.0;
  std::vector<std::vector<DirichletCoeff>> expansions;
  for (std::size_t j = 0; j < ells.size(); ++j) {
    expansions.push_back(expand_coeffs(blocks.blocks[j], ells[j], k));
    log_length += std::log(static_cast<double>(expansions.back().back().n));
  }
  const double length = std::exp(log_length);
  if (opts.diagonal_length_guard && length >= static_cast<double>(q)) {
    auto r = skipped(name, "Dirichlet polynomial length >= q; off-diagonal terms survive", 1e-10);
    r.details = {{"length", length}};
    return r;
  }

  std::vector<cplx> total(group.phi(), {1.0, 0.0});
  double product = 1.0;
  // Bucket distribution of the full product over the cyclic index group.
  std::vector<double> classes(group.phi(), 0.0);
  classes[0] = 1.0;
  for (const auto& exp : expansions) {
    std::vector<Term> terms;
    std::vector<double> block_classes(group.phi(), 0.0);
    CompensatedSum factor;
    for (const auto& t : exp) {
      terms.push_back({t.n, {t.coeff, 0.0}});
      factor.add(t.coeff * t.coeff);
      block_classes[group.index().ind(t.n)] += t.coeff;
    }
    const auto values = batch_char_sums(group, terms);
    for (u32 a = 0; a < group.phi(); ++a) total[a] *= values[a];
    product *= factor.value();
    if (q <= 5000) {
      std::vector<double> next(group.phi(), 0.0);
      for (u64 x = 0; x < group.phi(); ++x) {
        if (classes[x] == 0.0) continue;
        for (u64 y = 0; y < group.phi(); ++y)
          next[(x + y) % group.phi()] += classes[x] * block_classes[y];
      }
      classes = std::move(next);
    }
  }

  CompensatedSum all;
  for (const auto& v : total) all.add(std::norm(v));
  const double diagonal = phi * product;

  CheckResult r;
  r.name = name;
  r.tolerance = 1e-10;
  const double err = rel_err(all.value(), diagonal);
  r.margin = r.tolerance - err;
  r.status = err <= r.tolerance ? CheckStatus::pass : CheckStatus::fail;
  const double principal = std::norm(total[0]);
  r.details = {{"sum_all", all.value()},
               {"phi_times_product", diagonal},
               {"rel_err", err},
               {"length", length},
               {"sum_primitive", all.value() - principal},
               {"phi_star_times_product", static_cast<double>(group.phi_star()) * product},
               {"principal_abs2", principal}};
  if (q <= 5000) {
    CompensatedSum parseval;
    for (double x : classes) parseval.add(x * x);
    r.details.emplace_back("congruence_identity_rel_err",
                           rel_err(all.value(), phi * parseval.value()));
  }
  if (length >= static_cast<double>(q))
    r.note = "Dirichlet polynomial length >= q; diagonal-only evaluation is not exact";
  return r;
}

CheckResult check_subset_decomposition(const MollifierEvaluation& ev, double k,
                                       const VerifyOptions& opts) {
  const std::string name = "subset_decomposition";
  if (ev.R > 20) return skipped(name, "R > 20; subset enumeration too large", 1e-10);
  CheckResult r;
  r.name = name;
  r.tolerance = 1e-10;
  double worst_identity = 0.0;
  double min_ctol = 0.0;
  std::optional<u32> witness;
  const std::size_t subsets = std::size_t{1} << ev.R;
  std::vector<double> na(ev.R), qb(ev.R);
  for (u32 a = 1; a < ev.characters; ++a) {
    double product = 1.0;
    for (std::size_t j = 0; j < ev.R; ++j) {
      const std::size_t i = ev.at(a, j);
      na[j] = std::norm(ev.N_km1[i]);
      qb[j] = ev.Q[i] * ev.Q[i];
      product *= na[j] + qb[j];
      const double m2 = std::pow(ev.M_value(k - 1.0, a, j), 2.0);
      const double need = (m2 / (na[j] + qb[j]) - 1.0) / std::exp(-ev.ells[j]);
      min_ctol = std::max(min_ctol, need);
    }
    CompensatedSum expansion;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      double term = 1.0;
      for (std::size_t j = 0; j < ev.R; ++j) term *= (mask >> j & 1) ? na[j] : qb[j];
      expansion.add(term);
    }
    const double err = rel_err(expansion.value(), product);
    if (err > worst_identity) {
      worst_identity = err;
      witness = a;
    }
  }
  r.margin = r.tolerance - worst_identity;
  r.witness = witness;
  const bool ok = worst_identity <= r.tolerance && min_ctol <= opts.ctol;
  r.status = ok ? CheckStatus::pass : CheckStatus::fail;
  r.details = {{"identity_rel_err", worst_identity},
               {"min_passing_ctol", min_ctol},
               {"subsets", static_cast<double>(subsets)}};
  return r;
}

PropositionRatios proposition_ratios(const CharacterGroup& group, const CentralValueTable& lvalues,
                                     const MollifierEvaluation& ev) {
  const double k = ev.k;
  const double c = holder_c(k);
  CompensatedSum s22, s23, s24;
  for (u32 a = 1; a < group.phi(); ++a) {
    const double n2 = std::norm(ev.N_prod[a]);
    s22.add(n2);
    s23.add(n2 * n2 * std::pow(ev.M_product(1.0 - k, a), 2.0 * c));
    s24.add(std::norm(lvalues.values[a]) * std::pow(ev.M_product(k - 1.0, a), 2.0));
  }
  const double norm = normalizer(group.modulus(), k);
  return {s22.value() / norm, s23.value() / norm, s24.value() / norm};
}

VerificationReport run_verification(const CharacterGroup& group, const CentralValueTable& lvalues,
                                    const EllSchedule& schedule, const PrimeBlocks& blocks,
                                    double k, const InstanceDescriptor& instance,
                                    const VerifyOptions& opts) {
  if (!(k < 0.0)) throw InputError("verify: k must be negative");
  VerificationReport report;
  report.instance = instance;
  report.instance.q = group.modulus();
  report.instance.k = k;
  report.instance.c = holder_c(k);
  report.instance.seed = opts.seed;

  const double c = holder_c(k);
  report.checks.push_back(check_truncation_bound(opts.truncation_samples, opts.seed));
  report.checks.push_back(check_ccond(k, c));

  const bool all_empty =
      std::all_of(blocks.blocks.begin(), blocks.blocks.end(),
                  [](const auto& b) { return b.empty(); });
  if (schedule.degenerate || all_empty) {
    report.warnings.push_back(schedule.degenerate
                                  ? "schedule has R = 0: mollifier is identically 1"
                                  : "all prime blocks are empty: mollifier is identically 1");
    for (const char* name : {"positivity_and_reciprocal", "firstdecomp", "holder_chain",
                             "regime_bounds", "diagonal_identity", "subset_decomposition"}) {
      report.checks.push_back(skipped(name, "degenerate mollifier parameters"));
    }
    return report;
  }
  if (blocks.any_empty) report.warnings.push_back("some prime blocks are empty");
  if (!schedule.valid_decreasing) report.warnings.push_back("schedule fails l_j > l_{j+1}^2");

  const std::vector<double> alphas = {1.0, -1.0, 1.0 - k, k - 1.0};
  const auto ev = evaluate(group, schedule, blocks, k, alphas, opts.workers);
  const std::vector<double> pr = {1.0, 1.0 - k};
  report.checks.push_back(check_positivity_and_reciprocal(ev, pr));
  report.checks.push_back(check_firstdecomp(group, lvalues, ev, k, c, opts));
  report.checks.push_back(check_holder_chain(group, lvalues, ev, k, opts));
  report.checks.push_back(check_regime_bounds(ev, k, opts));
  report.checks.push_back(check_diagonal_identity(group, blocks, schedule.ells, k, opts));
  report.checks.push_back(check_subset_decomposition(ev, k, opts));
  report.ratios = proposition_ratios(group, lvalues, ev);
  return report;
}

}  // namespace lmoments
