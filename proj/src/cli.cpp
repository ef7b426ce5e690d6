#include "lmoments/cli.hpp"

#include <CLI11.hpp>

#include <nlohmann/json.hpp>

#include <iostream>

#include "lmoments/config.hpp"
#include "lmoments/errors.hpp"

namespace lmoments {
namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultCacheDir = ".lmoments_cache";

fs::path cache_dir_or_default(const RunConfig& c) {
  return c.cache_dir.empty() ? fs::path(kDefaultCacheDir) : fs::path(c.cache_dir);
}

void require_primes(const RunConfig& c) {
  if (c.q_list.empty()) throw InputError("no modulus given (use --q or --q-list)");
  for (u64 q : c.q_list) {
    if (q < 3 || !is_prime(q)) throw InputError("q=" + std::to_string(q) + ": not prime");
  }
}

const char* status_name(CacheStatus s) {
  switch (s) {
    case CacheStatus::hit:
      return "cache hit";
    case CacheStatus::computed:
      return "computed";
    case CacheStatus::recomputed:
      return "recomputed";
  }
  return "?";
}

int cmd_lvalues(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_primes(c);
  for (u64 q : c.q_list) {
    const auto group = make_group(q);
    const auto cached = load_or_compute(group, cache_dir_or_default(c), c.afe_params());
    if (!cached.warning.empty()) err << "warning: q=" << q << ": " << cached.warning << "\n";
    out << "q=" << q << " characters=" << group.phi_star()
        << " max_residual=" << cached.table.max_residual()
        << " near_zero=" << cached.table.near_zero.size() << " (" << status_name(cached.status)
        << ")\n";
  }
  return kExitOk;
}

CentralValueTable lvalues_for(const CharacterGroup& group, const RunConfig& c, std::ostream& err) {
  if (c.cache_dir.empty()) {
    auto t = central_values_afe(group, c.afe_params());
    if (!t.valid())
      throw ValidationError("L-value table for q=" + std::to_string(group.modulus()) +
                            " failed validation");
    return t;
  }
  auto cached = load_or_compute(group, c.cache_dir, c.afe_params());
  if (!cached.warning.empty()) err << "warning: " << cached.warning << "\n";
  return std::move(cached.table);
}

InstanceDescriptor describe(const RunConfig& c) {
  InstanceDescriptor d;
  d.mode = c.mollifier.mode;
  d.N_param = c.mollifier.N_param;
  d.M_param = c.mollifier.M_param;
  if (c.mollifier.mode == "relaxed") {
    d.cuts = c.mollifier.cuts;
    d.ells = c.mollifier.ells;
  }
  return d;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_primes(c);
  const std::vector<double> ks = c.k_list.empty() ? std::vector<double>{-0.5} : c.k_list;
  for (double k : ks)
    if (!(k < 0)) throw InputError("verify needs k < 0");

  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  bool failed = false;
  for (u64 q : c.q_list) {
    const auto group = make_group(q);
    const auto lvalues = lvalues_for(group, c, err);
    const auto schedule = make_schedule(c.mollifier, q);
    const auto blocks = make_blocks(c.mollifier, schedule);
    auto instance = describe(c);
    if (c.mollifier.mode == "paper") {
      instance.ells = schedule.ells;
      instance.cuts = blocks.cuts;
    }
    for (double k : ks) {
      const auto report =
          run_verification(group, lvalues, schedule, blocks, k, instance, c.verify_options());
      std::size_t n_fail = 0, n_skip = 0;
      for (const auto& chk : report.checks) {
        if (chk.status == CheckStatus::fail) {
          ++n_fail;
          err << "FAIL q=" << q << " k=" << k << " " << chk.name << " margin=" << chk.margin
              << "\n";
        }
        if (chk.status == CheckStatus::skipped) ++n_skip;
      }
      for (const auto& w : report.warnings)
        err << "WARNING q=" << q << " k=" << k << ": " << w << "\n";
      err << "q=" << q << " k=" << k << ": " << report.checks.size() << " checks, " << n_fail
          << " failed, " << n_skip << " skipped\n";
      failed = failed || report.any_failed();
      reports.push_back(report.to_json());
    }
  }
  const std::string text =
      (reports.size() == 1 ? reports.front() : reports).dump(2) + "\n";
  if (c.out.empty())
    out << text;
  else
    write_file(c.out, text);
  return failed ? kExitCheckFailed : kExitOk;
}

int cmd_scan(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto q_list = c.q_list.empty() ? default_q_grid() : c.q_list;
  const auto k_list = c.k_list.empty() ? default_k_grid() : c.k_list;
  const auto result = scan(q_list, k_list, c.scan_config());
  const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  const Format format = c.format == "json" ? Format::json : Format::csv;
  const std::string ext = c.format == "json" ? ".json" : ".csv";
  emit(result.moments, dir / ("moments" + ext), format);
  emit(result.propositions, dir / ("propositions" + ext), format);
  out << (dir / ("moments" + ext)).string() << "\n"
      << (dir / ("propositions" + ext)).string() << "\n";
  err << "scan: " << result.moments.size() << " moment rows, " << result.propositions.size()
      << " proposition rows\n";
  return kExitOk;
}

int cmd_mollifier(const RunConfig& c, std::ostream& out, std::ostream&) {
  require_primes(c);
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (u64 q : c.q_list) {
    const auto s = make_schedule(c.mollifier, q);
    const auto b = make_blocks(c.mollifier, s);
    nlohmann::ordered_json j;
    j["q"] = q;
    j["mode"] = c.mollifier.mode;
    j["log"] = "natural";
    if (!s.relaxed) {
      j["N"] = s.N_param;
      j["M"] = s.M_param;
    }
    j["ells"] = s.ells;
    j["R"] = s.R;
    j["cuts"] = b.cuts;
    j["blocks"] = b.blocks;
    j["valid_decreasing"] = s.valid_decreasing;
    j["valid_sumbound"] = s.valid_sumbound;
    j["degenerate"] = s.degenerate;
    j["stalled"] = s.stalled;
    j["any_empty_block"] = b.any_empty;
    all.push_back(j);
  }
  out << (all.size() == 1 ? all.front() : all).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Central values, mollifiers and negative moments of Dirichlet L-functions",
               "lmoments"};
  app.require_subcommand(1);
  RunConfig config;
  std::vector<u64> single_q;
  bind_options(app, config, single_q);
  auto* lv = app.add_subcommand("lvalues", "Compute, validate and cache L(1/2, chi)");
  auto* vf = app.add_subcommand("verify", "Run the inequality checks; exit 2 on failure");
  auto* sc = app.add_subcommand("scan", "Moment and proposition ratio tables over a q grid");
  auto* ml = app.add_subcommand("mollifier", "Print the schedule, blocks and validity flags");
  for (auto* sub : {lv, vf, sc, ml}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    finalize_config(config, single_q);
    if (*lv) return cmd_lvalues(config, out, err);
    if (*vf) return cmd_verify(config, out, err);
    if (*sc) return cmd_scan(config, out, err);
    if (*ml) return cmd_mollifier(config, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace lmoments
