#include <gtest/gtest.h>

#include <random>

#include "lmoments/characters.hpp"
#include "lmoments/errors.hpp"
#include "oracles.hpp"

using namespace lmoments;

namespace {
const cplx I{0.0, 1.0};
}

TEST(Group, Sizes) {
  const auto g5 = make_group(5);
  EXPECT_EQ(g5.phi(), 4u);
  EXPECT_EQ(g5.phi_star(), 3u);
  const auto g3 = make_group(3);
  EXPECT_EQ(g3.phi(), 2u);
  EXPECT_EQ(g3.phi_star(), 1u);
  EXPECT_EQ(make_group(10007).phi(), 10006u);
}

TEST(Group, RejectsBadModulus) {
  EXPECT_THROW(make_group(9), InputError);
  EXPECT_THROW(make_group(2), InputError);
  EXPECT_THROW(make_group(1), InputError);
}

TEST(EvalChar, Examples) {
  const auto g = make_group(5);
  EXPECT_LT(std::abs(eval_char(g, {1}, 2) - I), 1e-15);
  EXPECT_LT(std::abs(eval_char(g, {2}, 4) - 1.0), 1e-15);
  EXPECT_LT(std::abs(eval_char(g, {0}, 7) - 1.0), 1e-15);
  EXPECT_EQ(eval_char(g, {1}, 10), cplx(0.0, 0.0));
}

TEST(EvalChar, MatchesBruteForceDiscreteLog) {
  const u64 q = 101;
  const auto g = make_group(q);
  const oracle::BruteCharacters ref(q, g.index().generator());
  for (u32 a = 0; a < q - 1; ++a)
    for (u64 n = 0; n < 2 * q; ++n) ASSERT_LT(std::abs(g({a}, n) - ref(a, n)), 1e-12);
}

TEST(EvalChar, CompletelyMultiplicativeAndUnitModulus) {
  const u64 q = 1009;
  const auto g = make_group(q);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<u64> da(0, q - 2), dn(1, 1'000'000);
  for (int i = 0; i < 10'000; ++i) {
    const CharacterId chi{static_cast<u32>(da(rng))};
    const u64 m = dn(rng), n = dn(rng);
    ASSERT_LT(std::abs(g(chi, m * n) - g(chi, m) * g(chi, n)), 1e-12);
    if (m % q) ASSERT_LT(std::abs(std::abs(g(chi, m)) - 1.0), 1e-12);
  }
}

TEST(EvalChar, ParityAndConjugate) {
  const auto g = make_group(7);
  for (u32 a = 0; a < 6; ++a) {
    const CharacterId chi{a};
    EXPECT_EQ(g.parity(chi), static_cast<int>(a % 2));
    for (u64 n = 1; n < 7; ++n)
      EXPECT_LT(std::abs(g(g.conjugate(chi), n) - std::conj(g(chi, n))), 1e-15);
  }
}

TEST(Orthogonality, Examples) {
  const auto g5 = make_group(5);
  EXPECT_LT(std::abs(orthogonality_sum(g5, 6).value - 4.0), 1e-12);
  EXPECT_LT(std::abs(orthogonality_sum(g5, 2).value), 1e-12);
  EXPECT_LT(std::abs(orthogonality_sum(make_group(7), 8).value - 6.0), 1e-12);
  const auto deg = orthogonality_sum(g5, 10);
  EXPECT_TRUE(deg.degenerate);
  EXPECT_EQ(deg.value, cplx(0.0, 0.0));
}

TEST(Orthogonality, AllResidues) {
  for (u64 q : {101ull, 1009ull}) {
    const auto g = make_group(q);
    const double phi = static_cast<double>(g.phi());
    for (u64 n = 1; n < 3 * q; ++n) {
      if (n % q == 0) continue;
      const cplx expected = (n % q == 1) ? cplx(phi) : cplx(0.0);
      ASSERT_LE(std::abs(orthogonality_sum(g, n).value - expected), 1e-9 * phi) << q << " " << n;
    }
  }
}

TEST(BatchSums, SingleTerms) {
  const auto g = make_group(5);
  const std::vector<Term> one{{1, 1.0}};
  for (const auto& v : batch_char_sums(g, one)) EXPECT_LT(std::abs(v - 1.0), 1e-15);
  const std::vector<Term> two{{2, 1.0}};
  const auto r = batch_char_sums(g, two);
  ASSERT_EQ(r.size(), 4u);
  for (u32 a = 0; a < 4; ++a) EXPECT_LT(std::abs(r[a] - std::pow(I, static_cast<int>(a))), 1e-15);
}

TEST(BatchSums, MatchesBruteForceOracle) {
  const u64 q = 101;
  const auto g = make_group(q);
  const oracle::BruteCharacters ref(q, g.index().generator());
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<u64> dn(1, 100'000);
  std::normal_distribution<double> dc;
  std::vector<Term> terms;
  while (terms.size() < 50) {
    const u64 n = dn(rng);
    if (n % q) terms.push_back({n, {dc(rng), dc(rng)}});
  }
  const auto fast = batch_char_sums(g, terms);
  const auto naive = naive_char_sums(g, terms);
  for (u32 a = 0; a < q - 1; ++a) {
    cplx expected = 0.0;
    for (const auto& t : terms) expected += t.c * ref(a, t.n);
    ASSERT_LE(std::abs(fast[a] - expected), 1e-12 * std::max(1.0, std::abs(expected)));
    ASSERT_LE(std::abs(naive[a] - expected), 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(BatchSums, NonSmoothLength) {
  // q - 1 = 2 * 5003 has a large prime factor.
  const u64 q = 10007;
  const auto g = make_group(q);
  std::vector<Term> terms;
  for (u64 n = 1; n < 400; ++n) terms.push_back({n, 1.0 / std::sqrt(static_cast<double>(n))});
  const auto fast = batch_char_sums(g, terms);
  const auto naive = naive_char_sums(g, terms);
  for (u32 a = 0; a < q - 1; a += 97) ASSERT_LT(std::abs(fast[a] - naive[a]), 1e-11);
}

TEST(BatchSums, RejectsMultipleOfModulus) {
  const auto g = make_group(5);
  const std::vector<Term> bad{{10, 1.0}};
  EXPECT_THROW(batch_char_sums(g, bad), InputError);
}
