#ifndef MODMASS_ARITH_HPP
#define MODMASS_ARITH_HPP

#include "modmass/complex.hpp"

#include <cstdint>
#include <vector>

// Exact integer arithmetic helpers: divisors, sigma_nu, Pochhammer symbols,
// factorials, a prime sieve.

namespace modmass {

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  if (n < 2) return ps;
  std::vector<bool> comp(n + 1, false);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (comp[p]) continue;
    ps.push_back(p);
    for (std::uint64_t m = p * p; m <= n; m += p) comp[m] = true;
  }
  return ps;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  for (auto it = large.rbegin(); it != large.rend(); ++it) small.push_back(*it);
  return small;
}

inline std::uint64_t tau(std::uint64_t n) { return divisors(n).size(); }

// sigma_nu(n) = sum_{d | n} d^nu, exact for non-negative integer nu.
inline Integer sigma_int(std::uint64_t n, unsigned nu) {
  if (n == 0) throw DomainError("sigma_int: n must be >= 1");
  Integer s = 0;
  for (auto d : divisors(n)) s += pow(Integer(d), nu);
  return s;
}

inline Complex sigma_nu(std::uint64_t n, const Complex& nu) {
  if (n == 0) throw DomainError("sigma_nu: n must be >= 1");
  Complex s(Real(0));
  for (auto d : divisors(n)) s += pow(Real(d), nu);
  return s;
}

inline Integer factorial(unsigned n) {
  Integer f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

inline Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  Integer b = 1;
  for (unsigned i = 0; i < k; ++i) {
    b *= n - i;
    b /= i + 1;
  }
  return b;
}

// (x)_l = x (x+1) ... (x+l-1), with (x)_0 = 1.
inline Complex pochhammer(const Complex& x, unsigned l) {
  Complex p(Real(1));
  for (unsigned i = 0; i < l; ++i) p *= x + Complex(Real(i));
  return p;
}

inline Rational pochhammer_rat(const Rational& x, unsigned l) {
  Rational p = 1;
  for (unsigned i = 0; i < l; ++i) p *= x + i;
  return p;
}

}  // namespace modmass

#endif
