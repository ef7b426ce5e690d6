#include "lmoments/characters.hpp"

#include <numbers>
#include <string>

#include "lmoments/dft.hpp"
#include "lmoments/errors.hpp"

namespace lmoments {

CharacterGroup::CharacterGroup(u64 q) {
  if (q < 3 || !is_prime(q))
    throw InputError("make_group: " + std::to_string(q) + " is not an odd prime");
  index_ = build_index_table(q, primitive_root(q));
  const u64 n = q - 1;
  roots_.resize(n);
  for (u64 e = 0; e < n; ++e) {
    roots_[e] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) /
                                    static_cast<double>(n));
  }
}

int CharacterGroup::parity(CharacterId chi) const {
  return (*this)(chi, modulus() - 1).real() < 0.0 ? 1 : 0;
}

CharacterGroup make_group(u64 q) { return CharacterGroup(q); }

OrthogonalitySum orthogonality_sum(const CharacterGroup& group, u64 n) {
  if (n % group.modulus() == 0) return {{0.0, 0.0}, true};
  const Term t{n, {1.0, 0.0}};
  const auto values = batch_char_sums(group, std::span(&t, 1));
  cplx total{0.0, 0.0};
  for (const auto& v : values) total += v;
  return {total, false};
}

std::vector<cplx> transform_buckets(std::vector<cplx> buckets) {
  dft_backward(buckets);
  return buckets;
}

std::vector<cplx> batch_char_sums(const CharacterGroup& group, std::span<const Term> coeffs) {
  const u64 q = group.modulus();
  std::vector<cplx> buckets(group.phi(), {0.0, 0.0});
  for (const auto& t : coeffs) {
    if (t.n % q == 0)
      throw InputError("batch_char_sums: key " + std::to_string(t.n) + " is divisible by q");
    buckets[group.index().ind(t.n)] += t.c;
  }
  return transform_buckets(std::move(buckets));
}

std::vector<cplx> naive_char_sums(const CharacterGroup& group, std::span<const Term> coeffs) {
  std::vector<cplx> out(group.phi(), {0.0, 0.0});
  for (u32 a = 0; a < group.phi(); ++a) {
    cplx s{0.0, 0.0};
    for (const auto& t : coeffs) s += t.c * group(CharacterId{a}, t.n);
    out[a] = s;
  }
  return out;
}

}  // namespace lmoments
