#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <cmath>
#include <string>

#include "lmoments/errors.hpp"
#include "lmoments/lfunction.hpp"

namespace lmoments {
namespace {

constexpr int kDirectTerms = 16;
constexpr double kRemainderLimit = 1e-12;

// B_{2j} / (2j)!
double bernoulli_ratio(int j) {
  return boost::math::bernoulli_b2n<double>(j) /
         boost::math::unchecked_factorial<double>(static_cast<unsigned>(2 * j));
}

}  // namespace

double hurwitz_zeta_half(double x, int order) {
  if (!(x > 0.0) || x > 1.0) throw InputError("hurwitz_zeta_half: x must lie in (0, 1]");
  if (order < 1) throw InputError("hurwitz_zeta_half: order must be >= 1");
  constexpr double s = 0.5;

  double sum = 0.0;
  for (int n = kDirectTerms - 1; n >= 0; --n) sum += 1.0 / std::sqrt(n + x);
  const double y = kDirectTerms + x;
  sum += std::pow(y, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(y, -s);

  // term_j = B_2j/(2j)! * s(s+1)...(s+2j-2) * y^(-s-2j+1)
  double rising = s;
  double ypow = std::pow(y, -s - 1.0);
  for (int j = 1; j <= order; ++j) {
    sum += bernoulli_ratio(j) * rising * ypow;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    ypow /= y * y;
  }

  // For real s the remainder is bounded by the first omitted term.
  double bound = std::abs(bernoulli_ratio(order + 1) * rising * ypow);
  if (bound > kRemainderLimit) {
    int required = order + 1;
    while (bound > kRemainderLimit && required < 60) {
      rising *= (s + 2 * required - 1) * (s + 2 * required);
      ypow /= y * y;
      ++required;
      bound = std::abs(bernoulli_ratio(required) * rising * ypow);
    }
    throw InputError("hurwitz_zeta_half: Euler-Maclaurin remainder above 1e-12 at order " +
                     std::to_string(order) + "; required order " +
                     std::to_string(required - 1));
  }
  return sum;
}

HurwitzOracle::HurwitzOracle(const CharacterGroup& group, int terms) : group_(&group) {
  const u64 q = group.modulus();
  zeta_.assign(q, 0.0);
  for (u64 r = 1; r < q; ++r)
    zeta_[r] = hurwitz_zeta_half(static_cast<double>(r) / static_cast<double>(q), terms);
}

cplx HurwitzOracle::operator()(CharacterId chi) const {
  if (chi.a == 0) throw InputError("hurwitz_oracle: principal character has no central value");
  const u64 q = group_->modulus();
  cplx sum{0.0, 0.0};
  for (u64 r = 1; r < q; ++r) sum += (*group_)(chi, r) * zeta_[r];
  return sum / std::sqrt(static_cast<double>(q));
}

cplx hurwitz_oracle(const CharacterGroup& group, CharacterId chi, int terms) {
  if (chi.a == 0) throw InputError("hurwitz_oracle: principal character has no central value");
  const u64 q = group.modulus();
  cplx sum{0.0, 0.0};
  for (u64 r = 1; r < q; ++r)
    sum += group(chi, r) *
           hurwitz_zeta_half(static_cast<double>(r) / static_cast<double>(q), terms);
  return sum / std::sqrt(static_cast<double>(q));
}

CentralValueTable central_values_oracle(const CharacterGroup& group, int terms) {
  HurwitzOracle oracle(group, terms);
  CentralValueTable t;
  t.q = group.modulus();
  t.method = "oracle";
  t.smoothing = "euler-maclaurin";
  t.truncation = terms;
  t.values.assign(group.phi(), {0.0, 0.0});
  t.residuals.assign(group.phi(), 0.0);
  for (u32 a = 1; a < group.phi(); ++a) t.values[a] = oracle(CharacterId{a});
  return t;
}

}  // namespace lmoments
