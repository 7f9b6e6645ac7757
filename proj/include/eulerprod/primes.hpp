// primes.hpp
//
// Prime sieve, Moebius function and divisor enumeration for the Witt
// inversion and the coefficient sieves.

#ifndef EULERPROD_PRIMES_HPP
#define EULERPROD_PRIMES_HPP

#include <cstdint>
#include <vector>

namespace eulerprod {

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint32_t p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::uint64_t q = static_cast<std::uint64_t>(p) * p; q <= n; q += p)
      composite[static_cast<std::uint32_t>(q)] = true;
  }
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int moebius(int n) {
  int mu = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

inline std::vector<int> divisors(int n) {
  std::vector<int> small, large;
  for (int d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace eulerprod

#endif  // EULERPROD_PRIMES_HPP
