#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lmoments/arith.hpp"
#include "lmoments/errors.hpp"
#include "lmoments/lfunction.hpp"
#include "oracles.hpp"

using namespace lmoments;
namespace fs = std::filesystem;

namespace {

struct GoldenRow {
  u64 q;
  u32 a;
  cplx value;
};

std::vector<GoldenRow> load_golden() {
  std::ifstream f(std::string(LMOMENTS_TEST_DATA_DIR) + "/central_values.csv");
  std::string line;
  std::getline(f, line);
  std::vector<GoldenRow> rows;
  while (std::getline(f, line)) {
    std::stringstream ss(line);
    std::string q, a, re, im;
    std::getline(ss, q, ',');
    std::getline(ss, a, ',');
    std::getline(ss, re, ',');
    std::getline(ss, im, ',');
    rows.push_back({std::stoull(q), static_cast<u32>(std::stoul(a)), {std::stod(re), std::stod(im)}});
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("lmoments_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(GaussSums, SmallExamples) {
  const auto g5 = make_group(5);
  EXPECT_LT(std::abs(gauss_sums(g5).tau[2] - std::sqrt(5.0)), 1e-14);
  const auto g3 = make_group(3);
  EXPECT_LT(std::abs(gauss_sums(g3).tau[1] - cplx(0.0, std::sqrt(3.0))), 1e-14);
}

TEST(GaussSums, MatchDirectSummation) {
  const u64 q = 101;
  const auto g = make_group(q);
  const oracle::BruteCharacters ref(q, g.index().generator());
  const auto tau = gauss_sums(g).tau;
  for (u32 a = 1; a < q - 1; ++a) {
    cplx direct = 0.0;
    for (u64 n = 1; n < q; ++n)
      direct += ref(a, n) * std::polar(1.0, 2.0 * std::numbers::pi * n / static_cast<double>(q));
    ASSERT_LT(std::abs(tau[a] - direct), 1e-11);
  }
}

TEST(GaussSums, Modulus) {
  for (u64 q : {101ull, 1009ull, 10007ull}) {
    const auto g = make_group(q);
    const auto tau = gauss_sums(g).tau;
    const double rq = std::sqrt(static_cast<double>(q));
    for (u32 a = 1; a < q - 1; ++a) ASSERT_LE(std::abs(std::abs(tau[a]) - rq), 1e-9 * rq);
  }
}

TEST(HurwitzZeta, KnownValues) {
  EXPECT_NEAR(hurwitz_zeta_half(1.0, 8), -1.4603545088095868, 1e-14);
  // zeta(1/2, 1/2) = (sqrt 2 - 1) zeta(1/2)
  EXPECT_NEAR(hurwitz_zeta_half(0.5, 8), (std::sqrt(2.0) - 1.0) * -1.4603545088095868, 1e-14);
}

TEST(HurwitzZeta, InsufficientOrderNamesRequirement) {
  try {
    hurwitz_zeta_half(0.5, 1);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("required order"), std::string::npos);
  }
}

TEST(HurwitzOracle, SmoothedPartialSumsForModulusThree) {
  // Average of three consecutive partial sums of sum chi(n) n^-1/2 near 10^6.
  long double s = 0.0L;
  long double acc = 0.0L;
  const long N = 1'000'000;
  for (long n = 1; n <= N + 2; ++n) {
    const int r = n % 3;
    if (r == 1) s += 1.0L / std::sqrt(static_cast<long double>(n));
    if (r == 2) s -= 1.0L / std::sqrt(static_cast<long double>(n));
    if (n >= N) acc += s;
  }
  const double smoothed = static_cast<double>(acc / 3.0L);
  const auto g = make_group(3);
  EXPECT_NEAR(hurwitz_oracle(g, {1}).real(), smoothed, 1e-8);
}

TEST(HurwitzOracle, SymmetryExamples) {
  const auto g = make_group(5);
  EXPECT_LT(std::abs(hurwitz_oracle(g, {1}) - std::conj(hurwitz_oracle(g, {3}))), 1e-13);
  EXPECT_LE(std::abs(hurwitz_oracle(g, {2}).imag()), 1e-11);
  EXPECT_THROW(hurwitz_oracle(g, {0}), InputError);
}

TEST(CentralValues, GoldenValues) {
  for (const auto& row : load_golden()) {
    const auto g = make_group(row.q);
    const auto afe = central_values_afe(g);
    const auto hz = hurwitz_oracle(g, {row.a});
    EXPECT_LT(std::abs(afe.values[row.a] - row.value), 1e-13) << row.q << " " << row.a;
    EXPECT_LT(std::abs(hz - row.value), 1e-12) << row.q << " " << row.a;
  }
}

TEST(CentralValues, SmallExamples) {
  const auto g3 = make_group(3);
  EXPECT_EQ(g3.parity({1}), 1);
  EXPECT_LT(std::abs(central_values_afe(g3).values[1] - hurwitz_oracle(g3, {1})), 1e-10);
  const auto g5 = make_group(5);
  const auto t5 = central_values_afe(g5);
  EXPECT_LT(std::abs(t5.values[2] - hurwitz_oracle(g5, {2})), 1e-10);
  EXPECT_LT(std::abs(t5.values[2].imag()), 1e-12);
  const auto t7 = central_values_afe(make_group(7));
  EXPECT_LT(std::abs(t7.values[1] - std::conj(t7.values[5])), 1e-12);
}

TEST(CentralValues, OracleEquivalenceSmallPrimes) {
  for (u64 q : sieve_primes(499)) {
    if (q < 3) continue;
    const auto g = make_group(q);
    const auto afe = central_values_afe(g);
    ASSERT_TRUE(afe.valid()) << q;
    const HurwitzOracle hz(g);
    for (u32 a = 1; a < g.phi(); ++a) ASSERT_LE(std::abs(afe.values[a] - hz({a})), 1e-8) << q << " " << a;
  }
}

TEST(CentralValues, ConjugateSymmetryAndResiduals) {
  for (u64 q : {1009ull, 10007ull}) {
    const auto g = make_group(q);
    const auto t = central_values_afe(g);
    EXPECT_TRUE(t.valid());
    EXPECT_LE(t.max_residual(), 1e-9);
    EXPECT_EQ(t.smoothing, kSmoothingName);
    for (u32 a = 1; a < g.phi(); ++a)
      ASSERT_LE(std::abs(t.values[a] - std::conj(t.values[g.conjugate({a}).a])), 1e-10);
  }
}

TEST(CentralValues, DirectPathAgrees) {
  const auto g = make_group(1009);
  const auto fast = central_values_afe(g);
  const auto slow = central_values_direct(g);
  for (u32 a = 1; a < g.phi(); ++a) ASSERT_LT(std::abs(fast.values[a] - slow.values[a]), 1e-12);
}

TEST(Residual, ExactAndPerturbed) {
  const auto g = make_group(101);
  const HurwitzOracle hz(g);
  for (u32 a : {1u, 2u, 37u, 50u}) {
    const cplx v = hz({a});
    EXPECT_LE(functional_equation_residual(g, {a}, v), 1e-9);
    EXPECT_GE(functional_equation_residual(g, {a}, v + 1e-3), 5e-4);
    EXPECT_GE(functional_equation_residual(g, {a}, v + cplx(0.0, 1e-3)), 5e-4);
  }
}

TEST(Residual, ConjugateMismatchFlagged) {
  const auto g = make_group(101);
  const cplx v = hurwitz_oracle(g, {1});
  ASSERT_GT(std::abs(v.imag()), 1e-3);
  EXPECT_GT(functional_equation_residual(g, {1}, std::conj(v)), 1e-4);
}

TEST(Cache, ColdThenWarmIsByteIdentical) {
  TempDir dir;
  const auto g = make_group(101);
  const auto cold = load_or_compute(g, dir.path());
  EXPECT_EQ(cold.status, CacheStatus::computed);
  const auto path = cache_path(dir.path(), 101);
  ASSERT_TRUE(fs::exists(path));
  const auto bytes = slurp(path);

  const auto warm = load_or_compute(g, dir.path());
  EXPECT_EQ(warm.status, CacheStatus::hit);
  EXPECT_EQ(serialize_table(warm.table), bytes);
  for (u32 a = 1; a < g.phi(); ++a) EXPECT_EQ(warm.table.values[a], cold.table.values[a]);
  EXPECT_EQ(slurp(path), bytes);
}

TEST(Cache, VersionMismatchRecomputes) {
  TempDir dir;
  const auto g = make_group(101);
  load_or_compute(g, dir.path());
  const auto path = cache_path(dir.path(), 101);
  auto text = slurp(path);
  const auto pos = text.find(",1\n");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 3, ",0\n");
  std::ofstream(path, std::ios::binary) << text;

  const auto again = load_or_compute(g, dir.path());
  EXPECT_EQ(again.status, CacheStatus::recomputed);
  EXPECT_FALSE(again.warning.empty());
  EXPECT_EQ(load_or_compute(g, dir.path()).status, CacheStatus::hit);
}

TEST(Cache, ParameterMismatchRecomputes) {
  TempDir dir;
  const auto g = make_group(101);
  load_or_compute(g, dir.path());
  AfeParams longer;
  longer.tail = 45.0;
  EXPECT_EQ(load_or_compute(g, dir.path(), longer).status, CacheStatus::recomputed);
}

TEST(Cache, CorruptFileRecomputesWithWarning) {
  TempDir dir;
  const auto g = make_group(101);
  load_or_compute(g, dir.path());
  const auto path = cache_path(dir.path(), 101);
  auto text = slurp(path);
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text.substr(0, text.size() / 2);
  EXPECT_THROW(read_table(path), IoError);

  const auto again = load_or_compute(g, dir.path());
  EXPECT_EQ(again.status, CacheStatus::recomputed);
  EXPECT_NE(again.warning.find("corrupt"), std::string::npos);
  EXPECT_EQ(slurp(path), text);
}

TEST(Cache, TamperedValueFailsValidation) {
  TempDir dir;
  const auto g = make_group(101);
  const auto fresh = load_or_compute(g, dir.path());
  auto t = fresh.table;
  t.values[3] += cplx(0.0, 1e-6);
  write_table(t, cache_path(dir.path(), 101));
  const auto again = load_or_compute(g, dir.path());
  EXPECT_EQ(again.status, CacheStatus::recomputed);
  EXPECT_EQ(again.table.values[3], fresh.table.values[3]);
}

TEST(Cache, Layout) {
  const auto t = central_values_afe(make_group(5));
  const auto text = serialize_table(t);
  EXPECT_EQ(text.rfind("q,method,smoothing,truncation,format_version\n5,afe,incgamma-theta,40,1\n"
                       "a,re,im,residual\n1,",
                       0),
            0u);
}
