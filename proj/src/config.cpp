#include "lmoments/config.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <sstream>

#include "lmoments/errors.hpp"

namespace lmoments {
namespace {

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class F>
std::string array(const std::vector<T>& xs, F&& fmt) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out + "]";
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

void RunConfig::validate() const {
  if (!(ctol > 0) || !(residual_threshold > 0) || !(zero_threshold > 0))
    throw InputError("tolerances must be positive");
  if (mollifier.mode != "paper" && mollifier.mode != "relaxed")
    throw InputError("mode must be paper or relaxed, got " + mollifier.mode);
  if (zero_policy != "abort" && zero_policy != "skip")
    throw InputError("zero-policy must be abort or skip");
  if (format != "csv" && format != "json") throw InputError("format must be csv or json");
  if (mollifier.mode == "relaxed" && mollifier.cuts.size() != mollifier.ells.size())
    throw InputError("relaxed mode needs as many cuts as ells");
}

std::string RunConfig::to_ini() const {
  auto ull = [](u64 x) { return std::to_string(x); };
  auto integer = [](int x) { return std::to_string(x); };
  std::ostringstream o;
  o << "q-list=" << array(q_list, ull) << "\n";
  o << "k=" << array(k_list, real17) << "\n";
  o << "mode=" << quoted(mollifier.mode) << "\n";
  o << "N=" << mollifier.N_param << "\n";
  o << "M=" << mollifier.M_param << "\n";
  o << "cuts=" << array(mollifier.cuts, real17) << "\n";
  o << "ells=" << array(mollifier.ells, integer) << "\n";
  o << "ctol=" << real17(ctol) << "\n";
  o << "residual-threshold=" << real17(residual_threshold) << "\n";
  o << "zero-threshold=" << real17(zero_threshold) << "\n";
  o << "zero-policy=" << quoted(zero_policy) << "\n";
  o << "cache-dir=" << quoted(cache_dir) << "\n";
  o << "out=" << quoted(out) << "\n";
  o << "format=" << quoted(format) << "\n";
  o << "seed=" << seed << "\n";
  o << "workers=" << workers << "\n";
  o << "timing=" << (timing ? "true" : "false") << "\n";
  return o.str();
}

AfeParams RunConfig::afe_params() const {
  AfeParams p;
  p.residual_threshold = residual_threshold;
  p.zero_threshold = zero_threshold;
  return p;
}

VerifyOptions RunConfig::verify_options() const {
  VerifyOptions v;
  v.ctol = ctol;
  v.zero_threshold = zero_threshold;
  v.seed = seed;
  v.workers = workers;
  return v;
}

ScanConfig RunConfig::scan_config() const {
  ScanConfig s;
  s.mollifier = mollifier;
  s.afe = afe_params();
  if (!cache_dir.empty()) s.cache_dir = cache_dir;
  s.zero_policy = zero_policy == "skip" ? ZeroPolicy::skip : ZeroPolicy::abort;
  s.workers = workers;
  s.record_timing = timing;
  return s;
}

void bind_options(CLI::App& app, RunConfig& c, std::vector<u64>& single_q) {
  app.set_config("--config", "", "Run configuration file (flat key = value)");
  app.add_option("--q", single_q, "Prime modulus (comma list allowed)")->delimiter(',');
  app.add_option("--q-list", c.q_list, "Comma-separated prime moduli")->delimiter(',');
  app.add_option("--k", c.k_list, "Moment exponent(s), comma-separated")->delimiter(',');
  app.add_option("--mode", c.mollifier.mode, "Mollifier mode: paper or relaxed");
  app.add_option("--N", c.mollifier.N_param, "Schedule parameter N (paper mode)");
  app.add_option("--M", c.mollifier.M_param, "Schedule parameter M (paper mode)");
  app.add_option("--cuts", c.mollifier.cuts, "Block cut points (relaxed mode)")->delimiter(',');
  app.add_option("--ells", c.mollifier.ells, "Even truncation degrees (relaxed mode)")
      ->delimiter(',');
  app.add_option("--ctol", c.ctol, "Constant for e^-l error terms");
  app.add_option("--residual-threshold", c.residual_threshold,
                 "Maximum functional-equation residual");
  app.add_option("--zero-threshold", c.zero_threshold, "|L| below this counts as a zero");
  app.add_option("--zero-policy", c.zero_policy, "abort or skip near-zero L-values");
  app.add_option("--cache-dir", c.cache_dir, "L-value cache directory")->envname(kCacheDirEnv);
  app.add_option("--out", c.out, "Output file (verify) or directory (scan)");
  app.add_option("--format", c.format, "csv or json");
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--workers", c.workers, "Worker threads");
  app.add_flag("--timing", c.timing, "Record wall time in moment tables");
}

void finalize_config(RunConfig& c, const std::vector<u64>& single_q) {
  for (u64 q : single_q) c.q_list.push_back(q);
  c.validate();
}

}  // namespace lmoments
