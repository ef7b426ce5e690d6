#pragma once

#include <cstdint>
#include <vector>

namespace lmoments {

using u64 = std::uint64_t;
using u32 = std::uint32_t;

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Canonical factorization; primes strictly increasing, n == 1 has no factors.
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;
};

// Primes in [2, limit], ascending. Plain Eratosthenes up to 10^7, segmented
// above that.
std::vector<u64> sieve_primes(u64 limit);

Factorization factorize(u64 n);

// Omega(n): prime factors counted with multiplicity.
unsigned big_omega(u64 n);

// Multiplicative, w(p^e) = e!. Throws InputError if the value overflows 64 bits.
u64 w_value(u64 n);

u64 mul_mod(u64 a, u64 b, u64 m);
u64 pow_mod(u64 base, u64 exp, u64 m);

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(u64 n);

// Smallest primitive root modulo an odd prime q.
u64 primitive_root(u64 q);

// Discrete logarithms to base g modulo a prime q.
class IndexTable {
 public:
  IndexTable() = default;

  u64 modulus() const { return q_; }
  u64 generator() const { return g_; }

  // ind(n) for n coprime to q; n is reduced mod q first.
  u32 ind(u64 n) const { return ind_[n % q_]; }

  // g^e mod q.
  u64 power(u64 e) const { return pow_[e % (q_ - 1)]; }

 private:
  friend IndexTable build_index_table(u64 q, u64 g);

  u64 q_ = 0;
  u64 g_ = 0;
  std::vector<u32> ind_;
  std::vector<u32> pow_;
};

// Built in O(q) by walking the powers of g. Throws InputError when g is not a
// primitive root (the walk revisits 1 early).
IndexTable build_index_table(u64 q, u64 g);

}  // namespace lmoments
