#include "lmoments/lfunction.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "lmoments/errors.hpp"

namespace lmoments {
namespace {

using std::numbers::pi;

double shape(int parity) { return (0.5 + parity) / 2.0; }

// Largest n with pi n^2 scale / q <= tail.
u64 afe_length(u64 q, double scale, double tail) {
  return static_cast<u64>(std::floor(std::sqrt(tail * static_cast<double>(q) / (pi * scale))));
}

// Bound on the discarded tail of one AFE half; uses Gamma(s,x) <= x^(s-1) e^-x
// for s <= 1 and a geometric bound on sum_{n > N} exp(-pi n^2 scale / q).
double afe_tail_bound(u64 q, double scale, double tail) {
  const double next = static_cast<double>(afe_length(q, scale, tail) + 1);
  const double ratio = std::exp(-2.0 * pi * scale * next / static_cast<double>(q));
  double worst = 0.0;
  for (int parity : {0, 1}) {
    const double s = shape(parity);
    worst = std::max(worst, std::pow(tail, s - 1.0) / std::tgamma(s));
  }
  return worst * std::exp(-tail) / (1.0 - ratio);
}

// w(n) = n^(-1/2) Q(s', pi n^2 scale / q) for 1 <= n <= N; w[0] = 0.
std::vector<double> afe_weights(u64 q, int parity, double scale, double tail) {
  const u64 len = afe_length(q, scale, tail);
  const double s = shape(parity);
  std::vector<double> w(len + 1, 0.0);
  for (u64 n = 1; n <= len; ++n) {
    const double nd = static_cast<double>(n);
    const double x = pi * nd * nd * scale / static_cast<double>(q);
    w[n] = boost::math::gamma_q(s, x) / std::sqrt(nd);
  }
  return w;
}

std::vector<cplx> weighted_char_sums(const CharacterGroup& group, const std::vector<double>& w) {
  const u64 q = group.modulus();
  std::vector<cplx> buckets(group.phi(), {0.0, 0.0});
  for (u64 n = 1; n < w.size(); ++n) {
    if (n % q == 0) continue;
    buckets[group.index().ind(n)] += w[n];
  }
  return transform_buckets(std::move(buckets));
}

cplx direct_weighted_sum(const CharacterGroup& group, CharacterId chi,
                         const std::vector<double>& w) {
  cplx s{0.0, 0.0};
  for (u64 n = 1; n < w.size(); ++n) s += group(chi, n) * w[n];
  return s;
}

cplx root_number(const CharacterGroup& group, CharacterId chi, cplx tau) {
  const double sq = std::sqrt(static_cast<double>(group.modulus()));
  return group.parity(chi) == 0 ? tau / sq : tau / (cplx{0.0, 1.0} * sq);
}

void check_tail(u64 q, const AfeParams& params) {
  for (double scale : {1.0, params.shift, 1.0 / params.shift}) {
    if (afe_tail_bound(q, scale, params.tail) >= 1e-12)
      throw InputError("AFE tail parameter too small for a 1e-12 tail bound");
  }
}

CentralValueTable empty_table(const CharacterGroup& group, const AfeParams& params) {
  CentralValueTable t;
  t.q = group.modulus();
  t.method = "afe";
  t.smoothing = kSmoothingName;
  t.truncation = params.tail;
  t.values.assign(group.phi(), {0.0, 0.0});
  t.residuals.assign(group.phi(), 0.0);
  return t;
}

void validate_table(const CharacterGroup& group, CentralValueTable& t, const AfeParams& params) {
  t.invalid.clear();
  t.near_zero.clear();
  for (u32 a = 1; a < group.phi(); ++a) {
    const cplx v = t.values[a];
    const cplx partner = std::conj(t.values[group.conjugate(CharacterId{a}).a]);
    const bool bad = !(t.residuals[a] <= params.residual_threshold) ||
                     !(std::abs(v - partner) <= params.conjugate_tolerance);
    if (bad) t.invalid.push_back(a);
    if (std::abs(v) < params.zero_threshold) t.near_zero.push_back(a);
  }
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_real(const std::string& s) {
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw IoError("malformed number: " + s);
  return v;
}

}  // namespace

double CentralValueTable::max_residual() const {
  double m = 0.0;
  for (double r : residuals) m = std::max(m, r);
  return m;
}

cplx CentralValueTable::value(CharacterId chi) const {
  if (chi.a == 0 || chi.a >= values.size())
    throw InputError("central value requested for a non-primitive character id");
  return values[chi.a];
}

GaussSumTable gauss_sums(const CharacterGroup& group) {
  const u64 q = group.modulus();
  std::vector<cplx> buckets(group.phi());
  for (u64 n = 1; n < q; ++n) {
    buckets[group.index().ind(n)] =
        std::polar(1.0, 2.0 * pi * static_cast<double>(n) / static_cast<double>(q));
  }
  return {transform_buckets(std::move(buckets))};
}

CentralValueTable central_values_afe(const CharacterGroup& group, const AfeParams& params) {
  const u64 q = group.modulus();
  check_tail(q, params);
  const auto tau = gauss_sums(group).tau;

  // [parity][0] balanced, [1] first half at X, [2] second half at 1/X
  std::vector<cplx> sums[2][3];
  for (int parity : {0, 1}) {
    sums[parity][0] = weighted_char_sums(group, afe_weights(q, parity, 1.0, params.tail));
    sums[parity][1] = weighted_char_sums(group, afe_weights(q, parity, params.shift, params.tail));
    sums[parity][2] =
        weighted_char_sums(group, afe_weights(q, parity, 1.0 / params.shift, params.tail));
  }

  auto t = empty_table(group, params);
  for (u32 a = 1; a < group.phi(); ++a) {
    const CharacterId chi{a};
    const u32 bar = group.conjugate(chi).a;
    const int parity = group.parity(chi);
    const cplx omega = root_number(group, chi, tau[a]);
    const auto& s = sums[parity];
    const cplx value = s[0][a] + omega * s[0][bar];
    const cplx shifted = s[1][a] + omega * s[2][bar];
    t.values[a] = value;
    t.residuals[a] = std::max(std::abs(value - shifted), std::abs(value - omega * std::conj(value)));
  }
  validate_table(group, t, params);
  return t;
}

namespace {

struct DirectContext {
  std::vector<cplx> additive;  // e(n/q)
  std::vector<double> weights[2][3];
};

DirectContext direct_context(const CharacterGroup& group, const AfeParams& params) {
  const u64 q = group.modulus();
  DirectContext ctx;
  ctx.additive.resize(q);
  for (u64 n = 0; n < q; ++n)
    ctx.additive[n] = std::polar(1.0, 2.0 * pi * static_cast<double>(n) / static_cast<double>(q));
  for (int parity : {0, 1}) {
    ctx.weights[parity][0] = afe_weights(q, parity, 1.0, params.tail);
    ctx.weights[parity][1] = afe_weights(q, parity, params.shift, params.tail);
    ctx.weights[parity][2] = afe_weights(q, parity, 1.0 / params.shift, params.tail);
  }
  return ctx;
}

cplx direct_tau(const CharacterGroup& group, CharacterId chi, const DirectContext& ctx) {
  cplx tau{0.0, 0.0};
  for (u64 n = 1; n < group.modulus(); ++n) tau += group(chi, n) * ctx.additive[n];
  return tau;
}

double direct_residual(const CharacterGroup& group, CharacterId chi, cplx value, cplx omega,
                       const DirectContext& ctx) {
  const auto& w = ctx.weights[group.parity(chi)];
  const CharacterId bar = group.conjugate(chi);
  const cplx shifted = direct_weighted_sum(group, chi, w[1]) +
                       omega * direct_weighted_sum(group, bar, w[2]);
  return std::max(std::abs(value - shifted), std::abs(value - omega * std::conj(value)));
}

}  // namespace

CentralValueTable central_values_direct(const CharacterGroup& group, const AfeParams& params) {
  check_tail(group.modulus(), params);
  const auto ctx = direct_context(group, params);
  auto t = empty_table(group, params);
  for (u32 a = 1; a < group.phi(); ++a) {
    const CharacterId chi{a};
    const cplx omega = root_number(group, chi, direct_tau(group, chi, ctx));
    const auto& w = ctx.weights[group.parity(chi)];
    const cplx value = direct_weighted_sum(group, chi, w[0]) +
                       omega * direct_weighted_sum(group, group.conjugate(chi), w[0]);
    t.values[a] = value;
    t.residuals[a] = direct_residual(group, chi, value, omega, ctx);
  }
  validate_table(group, t, params);
  return t;
}

double functional_equation_residual(const CharacterGroup& group, CharacterId chi, cplx value,
                                    const AfeParams& params) {
  if (chi.a == 0) throw InputError("functional_equation_residual: principal character");
  const auto ctx = direct_context(group, params);
  const cplx omega = root_number(group, chi, direct_tau(group, chi, ctx));
  return direct_residual(group, chi, value, omega, ctx);
}

std::filesystem::path cache_path(const std::filesystem::path& dir, u64 q, int version) {
  return dir / ("lvalues_q" + std::to_string(q) + "_v" + std::to_string(version) + ".csv");
}

std::string serialize_table(const CentralValueTable& table) {
  std::string out = "q,method,smoothing,truncation,format_version\n";
  out += std::to_string(table.q) + "," + table.method + "," + table.smoothing + "," +
         format_real(table.truncation) + "," + std::to_string(kCacheFormatVersion) + "\n";
  out += "a,re,im,residual\n";
  for (u32 a = 1; a < table.values.size(); ++a) {
    out += std::to_string(a) + "," + format_real(table.values[a].real()) + "," +
           format_real(table.values[a].imag()) + "," + format_real(table.residuals[a]) + "\n";
  }
  return out;
}

void write_table(const CentralValueTable& table, const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << serialize_table(table);
    if (!f) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename into " + path.string() + ": " + ec.message());
}

CentralValueTable read_table(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::string line;
  try {
    if (!std::getline(f, line) || line != "q,method,smoothing,truncation,format_version")
      throw IoError("bad header line");
    if (!std::getline(f, line)) throw IoError("missing parameter line");
    const auto head = split_csv(line);
    if (head.size() != 5) throw IoError("bad parameter line");
    CentralValueTable t;
    t.q = std::stoull(head[0]);
    t.method = head[1];
    t.smoothing = head[2];
    t.truncation = parse_real(head[3]);
    if (std::stoi(head[4]) != kCacheFormatVersion) throw IoError("format version mismatch");
    if (t.q < 3) throw IoError("bad modulus");
    if (!std::getline(f, line) || line != "a,re,im,residual") throw IoError("bad row header");
    t.values.assign(t.q - 1, {0.0, 0.0});
    t.residuals.assign(t.q - 1, 0.0);
    u64 expected = 1;
    while (std::getline(f, line)) {
      const auto row = split_csv(line);
      if (row.size() != 4) throw IoError("bad row: " + line);
      const u64 a = std::stoull(row[0]);
      if (a != expected || a >= t.q - 1) throw IoError("rows out of order");
      t.values[a] = {parse_real(row[1]), parse_real(row[2])};
      t.residuals[a] = parse_real(row[3]);
      ++expected;
    }
    if (expected != t.q - 1) throw IoError("truncated table");
    return t;
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(std::string("corrupt cache file: ") + e.what());
  }
}

CachedTable load_or_compute(const CharacterGroup& group, const std::filesystem::path& cache_dir,
                            const AfeParams& params) {
  const auto path = cache_path(cache_dir, group.modulus());
  CachedTable result;
  if (std::filesystem::exists(path)) {
    try {
      auto t = read_table(path);
      if (t.q == group.modulus() && t.method == "afe" && t.smoothing == kSmoothingName &&
          t.truncation == params.tail) {
        validate_table(group, t, params);
        if (t.valid()) {
          result.table = std::move(t);
          result.status = CacheStatus::hit;
          return result;
        }
        result.warning = "cached table fails validation; recomputing";
      } else {
        result.warning = "cache parameters differ; recomputing";
      }
    } catch (const IoError& e) {
      result.warning = std::string("corrupt cache (") + e.what() + "); recomputing";
    }
    result.status = CacheStatus::recomputed;
  }

  auto t = central_values_afe(group, params);
  if (!t.valid()) {
    std::string ids;
    for (u32 a : t.invalid) ids += (ids.empty() ? "" : ",") + std::to_string(a);
    throw ValidationError("L-value table for q=" + std::to_string(group.modulus()) +
                          " failed validation for characters " + ids);
  }
  write_table(t, path);
  result.table = std::move(t);
  return result;
}

}  // namespace lmoments
