#include "lmoments/experiments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "lmoments/errors.hpp"
#include "lmoments/numeric.hpp"

namespace lmoments {
namespace {

std::string real17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

MomentRow compute_moment(const CharacterGroup& group, const CentralValueTable& lvalues, double k,
                         ZeroPolicy policy, double zero_threshold) {
  if (lvalues.q != group.modulus()) throw InputError("compute_moment: table is for another q");
  MomentRow row;
  row.q = group.modulus();
  row.k = k;
  std::vector<double> logs;
  logs.reserve(group.phi_star());
  std::string flagged_ids;
  for (u32 a = 1; a < group.phi(); ++a) {
    const double L = std::abs(lvalues.values[a]);
    if (L < zero_threshold) {
      ++row.flagged;
      flagged_ids += (flagged_ids.empty() ? "" : ",") + std::to_string(a);
      continue;
    }
    logs.push_back(k == 0.0 ? 0.0 : 2.0 * k * std::log(L));
  }
  if (row.flagged > 0 && policy == ZeroPolicy::abort)
    throw InputError("near-zero L(1/2, chi) for q=" + std::to_string(row.q) + " at a=" +
                     flagged_ids);
  row.moment = sum_of_exps(logs);
  row.normalizer = static_cast<double>(group.phi_star()) *
                   std::pow(std::log(static_cast<double>(row.q)), k * k);
  row.ratio = row.moment / row.normalizer;
  return row;
}

EllSchedule make_schedule(const MollifierConfig& config, u64 q) {
  if (config.mode == "paper") return build_schedule(config.N_param, config.M_param, q);
  if (config.mode == "relaxed") return relaxed_schedule(config.ells, static_cast<double>(q));
  throw InputError("unknown mollifier mode: " + config.mode);
}

PrimeBlocks make_blocks(const MollifierConfig& config, const EllSchedule& schedule) {
  if (config.mode == "relaxed") return build_blocks(schedule, config.cuts);
  return build_blocks(schedule);
}

ScanResult scan(std::vector<u64> q_list, std::vector<double> k_list, const ScanConfig& config) {
  for (u64 q : q_list) {
    if (q < 3 || !is_prime(q)) throw InputError("scan: " + std::to_string(q) + " is not prime");
  }
  std::sort(q_list.begin(), q_list.end());
  q_list.erase(std::unique(q_list.begin(), q_list.end()), q_list.end());
  std::sort(k_list.begin(), k_list.end());
  k_list.erase(std::unique(k_list.begin(), k_list.end()), k_list.end());

  std::vector<ScanResult> per_q(q_list.size());
  std::vector<std::exception_ptr> errors(q_list.size());
  parallel_for(q_list.size(), config.workers, [&](std::size_t i) {
    try {
      const auto group = make_group(q_list[i]);
      const auto lvalues = config.cache_dir
                               ? load_or_compute(group, *config.cache_dir, config.afe).table
                               : central_values_afe(group, config.afe);
      if (!lvalues.valid())
        throw ValidationError("L-value table for q=" + std::to_string(q_list[i]) + " is invalid");
      const auto schedule = make_schedule(config.mollifier, q_list[i]);
      const auto blocks = make_blocks(config.mollifier, schedule);
      for (double k : k_list) {
        const auto start = std::chrono::steady_clock::now();
        auto row = compute_moment(group, lvalues, k, config.zero_policy, config.afe.zero_threshold);
        if (k < 0.0) {
          const std::vector<double> alphas = {1.0 - k, k - 1.0};
          const auto ev = evaluate(group, schedule, blocks, k, alphas);
          const auto r = proposition_ratios(group, lvalues, ev);
          per_q[i].propositions.push_back({q_list[i], k, r.prop22, r.prop23, r.prop24});
        }
        if (config.record_timing)
          row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                            .count();
        per_q[i].moments.push_back(row);
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ScanResult out;
  for (auto& r : per_q) {
    out.moments.insert(out.moments.end(), r.moments.begin(), r.moments.end());
    out.propositions.insert(out.propositions.end(), r.propositions.begin(),
                            r.propositions.end());
  }
  return out;
}

u64 nearest_prime(u64 target) {
  if (target <= 3) return 3;
  for (u64 d = 0;; ++d) {
    if (is_prime(target - d)) return target - d;
    if (is_prime(target + d)) return target + d;
  }
}

std::vector<u64> default_q_grid() {
  std::vector<u64> grid;
  for (u64 t : {503, 1009, 2003, 5003, 10007, 20011, 50021, 100003})
    grid.push_back(nearest_prime(t));
  return grid;
}

std::vector<double> default_k_grid() { return {-1.0, -0.75, -0.5, -0.25, 0.0, 1.0}; }

std::string moments_to_csv(const std::vector<MomentRow>& rows) {
  std::string out = "q,k,moment,normalizer,ratio,flagged,seconds\n";
  for (const auto& r : rows) {
    out += std::to_string(r.q) + "," + real17(r.k) + "," + real17(r.moment) + "," +
           real17(r.normalizer) + "," + real17(r.ratio) + "," + std::to_string(r.flagged) +
           "," + real17(r.seconds) + "\n";
  }
  return out;
}

std::string propositions_to_csv(const std::vector<PropositionRow>& rows) {
  std::string out = "q,k,prop22_ratio,prop23_ratio,prop24_ratio\n";
  for (const auto& r : rows) {
    out += std::to_string(r.q) + "," + real17(r.k) + "," + real17(r.prop22) + "," +
           real17(r.prop23) + "," + real17(r.prop24) + "\n";
  }
  return out;
}

std::string moments_to_json(const std::vector<MomentRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j.push_back({{"q", r.q},
                 {"k", r.k},
                 {"moment", r.moment},
                 {"normalizer", r.normalizer},
                 {"ratio", r.ratio},
                 {"flagged", r.flagged},
                 {"seconds", r.seconds}});
  }
  return j.dump(2) + "\n";
}

std::string propositions_to_json(const std::vector<PropositionRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    j.push_back({{"q", r.q},
                 {"k", r.k},
                 {"prop22_ratio", r.prop22},
                 {"prop23_ratio", r.prop23},
                 {"prop24_ratio", r.prop24}});
  }
  return j.dump(2) + "\n";
}

std::vector<MomentRow> moments_from_json(const std::string& text) {
  std::vector<MomentRow> rows;
  for (const auto& j : nlohmann::json::parse(text)) {
    rows.push_back({j.at("q").get<u64>(), j.at("k").get<double>(), j.at("moment").get<double>(),
                    j.at("normalizer").get<double>(), j.at("ratio").get<double>(),
                    j.at("flagged").get<u64>(), j.at("seconds").get<double>()});
  }
  return rows;
}

std::vector<PropositionRow> propositions_from_json(const std::string& text) {
  std::vector<PropositionRow> rows;
  for (const auto& j : nlohmann::json::parse(text)) {
    rows.push_back({j.at("q").get<u64>(), j.at("k").get<double>(),
                    j.at("prop22_ratio").get<double>(), j.at("prop23_ratio").get<double>(),
                    j.at("prop24_ratio").get<double>()});
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

void emit(const std::vector<MomentRow>& rows, const std::filesystem::path& path, Format format) {
  write_file(path, format == Format::csv ? moments_to_csv(rows) : moments_to_json(rows));
}

void emit(const std::vector<PropositionRow>& rows, const std::filesystem::path& path,
          Format format) {
  write_file(path, format == Format::csv ? propositions_to_csv(rows) : propositions_to_json(rows));
}

}  // namespace lmoments
