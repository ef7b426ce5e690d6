#include "lmoments/arith.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lmoments/errors.hpp"

namespace lmoments {
namespace {

constexpr u64 kPlainSieveLimit = 10'000'000;

std::vector<u64> plain_sieve(u64 limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<u64> primes;
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

std::vector<u64> segmented_sieve(u64 limit) {
  const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<u64> base = plain_sieve(root);
  std::vector<u64> primes;
  for (u64 p : base)
    if (p <= limit) primes.push_back(p);

  const u64 segment = std::max<u64>(root, 1u << 20);
  std::vector<bool> composite;
  for (u64 low = root + 1; low <= limit; low += segment) {
    const u64 high = std::min(limit, low + segment - 1);
    composite.assign(high - low + 1, false);
    for (u64 p : base) {
      if (p * p > high) break;
      u64 start = std::max(p * p, (low + p - 1) / p * p);
      for (u64 j = start; j <= high; j += p) composite[j - low] = true;
    }
    for (u64 i = low; i <= high; ++i)
      if (!composite[i - low]) primes.push_back(i);
  }
  return primes;
}

}  // namespace

std::vector<u64> sieve_primes(u64 limit) {
  if (limit < 2) return {};
  if (limit <= kPlainSieveLimit) return plain_sieve(limit);
  return segmented_sieve(limit);
}

Factorization factorize(u64 n) {
  if (n == 0) throw InputError("factorize: n must be positive");
  Factorization f;
  f.n = n;
  auto take = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) f.factors.push_back({p, e});
  };
  take(2);
  take(3);
  // 6k +- 1 wheel
  for (u64 p = 5; p <= n / p; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) f.factors.push_back({n, 1});
  return f;
}

unsigned big_omega(u64 n) {
  unsigned total = 0;
  for (const auto& pp : factorize(n).factors) total += pp.exponent;
  return total;
}

u64 w_value(u64 n) {
  u64 w = 1;
  for (const auto& pp : factorize(n).factors) {
    for (unsigned i = 2; i <= pp.exponent; ++i) {
      if (w > UINT64_MAX / i) throw InputError("w_value: result overflows 64 bits");
      w *= i;
    }
  }
  return w;
}

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These bases are deterministic for n < 3.3e24.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 primitive_root(u64 q) {
  if (q < 3 || !is_prime(q))
    throw InputError("primitive_root: " + std::to_string(q) + " is not an odd prime");
  const auto f = factorize(q - 1);
  for (u64 g = 2; g < q; ++g) {
    bool generates = true;
    for (const auto& pp : f.factors) {
      if (pow_mod(g, (q - 1) / pp.prime, q) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) return g;
  }
  throw ValidationError("primitive_root: none found for " + std::to_string(q));
}

IndexTable build_index_table(u64 q, u64 g) {
  if (q < 3 || !is_prime(q))
    throw InputError("build_index_table: " + std::to_string(q) + " is not an odd prime");
  if (q > (u64{1} << 32))
    throw InputError("build_index_table: modulus exceeds 32-bit index range");
  IndexTable t;
  t.q_ = q;
  t.g_ = g % q;
  t.ind_.assign(q, 0);
  t.pow_.assign(q - 1, 0);
  std::vector<bool> seen(q, false);
  u64 x = 1;
  for (u64 e = 0; e < q - 1; ++e) {
    if (seen[x])
      throw InputError("build_index_table: " + std::to_string(g) +
                       " is not a primitive root mod " + std::to_string(q));
    seen[x] = true;
    t.ind_[x] = static_cast<u32>(e);
    t.pow_[e] = static_cast<u32>(x);
    x = mul_mod(x, t.g_, q);
  }
  return t;
}

}  // namespace lmoments
