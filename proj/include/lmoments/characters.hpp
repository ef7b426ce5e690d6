#pragma once

#include <compare>
#include <complex>
#include <span>
#include <vector>

#include "lmoments/arith.hpp"

namespace lmoments {

using cplx = std::complex<double>;

// chi_a(n) = exp(2 pi i a ind(n) / (q-1)); a = 0 is the principal character.
struct CharacterId {
  u32 a = 0;

  friend auto operator<=>(const CharacterId&, const CharacterId&) = default;
};

// Dirichlet characters modulo an odd prime q. Holds the index table and one
// table of (q-1)-th roots of unity, so memory is O(q) for the whole group.
class CharacterGroup {
 public:
  explicit CharacterGroup(u64 q);

  u64 modulus() const { return index_.modulus(); }
  u64 phi() const { return modulus() - 1; }
  u64 phi_star() const { return modulus() - 2; }
  const IndexTable& index() const { return index_; }

  // exp(2 pi i e / (q-1)).
  cplx root(u64 e) const { return roots_[e % phi()]; }

  cplx operator()(CharacterId chi, u64 n) const {
    if (n % modulus() == 0) return {0.0, 0.0};
    return roots_[(static_cast<u64>(chi.a) * index_.ind(n)) % phi()];
  }

  // 0 for even characters, 1 for odd; read off chi(q-1) = +-1.
  int parity(CharacterId chi) const;

  CharacterId conjugate(CharacterId chi) const {
    return {static_cast<u32>((phi() - chi.a) % phi())};
  }

 private:
  IndexTable index_;
  std::vector<cplx> roots_;
};

// Throws InputError for composite or even q.
CharacterGroup make_group(u64 q);

inline cplx eval_char(const CharacterGroup& group, CharacterId chi, u64 n) {
  return group(chi, n);
}

struct OrthogonalitySum {
  cplx value;
  bool degenerate = false;  // q | n
};

// Sum over all characters mod q of chi(n), via the batch transform.
OrthogonalitySum orthogonality_sum(const CharacterGroup& group, u64 n);

struct Term {
  u64 n;
  cplx c;
};

// result[a] = sum_n c_n chi_a(n) for every a in [0, q-2]. Coefficients are
// bucketed by ind(n mod q) and pushed through one length-(q-1) DFT.
// Throws InputError if some n is divisible by q.
std::vector<cplx> batch_char_sums(const CharacterGroup& group, std::span<const Term> coeffs);

// Same contract, starting from coefficients already bucketed by index.
std::vector<cplx> transform_buckets(std::vector<cplx> buckets);

// Double loop reference for batch_char_sums.
std::vector<cplx> naive_char_sums(const CharacterGroup& group, std::span<const Term> coeffs);

}  // namespace lmoments
