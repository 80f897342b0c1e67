#ifndef MERTENS_MPCORE_HPP
#define MERTENS_MPCORE_HPP

// Precision management, cached constants and the elementary arithmetic
// helpers (sieve, Moebius, totient, factorisation) used by every module.

#include "mertens/errors.hpp"
#include "mertens/real.hpp"

#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace mertens {

/// Decimal guard digits carried above the requested target.
inline constexpr long kGuardDigits = 30;

/// Working precision plus the constants every stage needs. Immutable once
/// built, so one instance can be shared freely.
class PrecisionContext {
 public:
  PrecisionContext(long target_digits, long working_digits)
      : target_digits_(target_digits),
        working_digits_(working_digits),
        bits_(bits_for_digits(working_digits)),
        gamma_(const_euler(bits_)),
        pi_(const_pi(bits_)),
        exp_minus_gamma_(exp(-gamma_)) {}

  long target_digits() const { return target_digits_; }
  long working_digits() const { return working_digits_; }
  mpfr_prec_t bits() const { return bits_; }

  const Real& gamma() const { return gamma_; }
  const Real& pi() const { return pi_; }
  const Real& exp_minus_gamma() const { return exp_minus_gamma_; }

  Real real(long x) const { return Real(x, bits_); }
  Real zero() const { return Real(0, bits_); }
  Complex complex_zero() const { return Complex(bits_); }
  /// 10^{-k} at working precision.
  Real epsilon(long k) const { return pow10(-k, bits_); }

 private:
  long target_digits_;
  long working_digits_;
  mpfr_prec_t bits_;
  Real gamma_;
  Real pi_;
  Real exp_minus_gamma_;
};

inline PrecisionContext make_context(long target_digits) {
  if (target_digits < 10) throw PreconditionError("target_digits must be at least 10, got " + std::to_string(target_digits));
  return PrecisionContext(target_digits, target_digits + kGuardDigits);
}

/// Sieve of Eratosthenes; all primes <= limit in ascending order.
inline std::vector<std::int64_t> primes_upto(std::int64_t limit) {
  std::vector<std::int64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(static_cast<size_t>(limit) + 1, false);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (composite[static_cast<size_t>(i)]) continue;
    primes.push_back(i);
    for (std::int64_t j = i * i; j <= limit; j += i) composite[static_cast<size_t>(j)] = true;
  }
  return primes;
}

/// Prime factorisation as (prime, exponent) pairs, ascending primes.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline int moebius(std::int64_t k) {
  if (k < 1) throw PreconditionError("moebius: k must be positive");
  int mu = 1;
  for (auto [p, e] : factorize(k)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> d;
  for (std::int64_t i = 1; i <= n; ++i)
    if (n % i == 0) d.push_back(i);
  return d;
}

inline std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (auto [p, e] : factorize(n)) out.push_back(p);
  return out;
}

inline bool coprime(std::int64_t a, std::int64_t b) { return std::gcd(a, b) == 1; }

inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t powmod(std::int64_t base, std::int64_t e, std::int64_t m) {
  std::int64_t result = 1 % m;
  base = mod(base, m);
  while (e > 0) {
    if (e & 1) result = static_cast<std::int64_t>((static_cast<__int128>(result) * base) % m);
    base = static_cast<std::int64_t>((static_cast<__int128>(base) * base) % m);
    e >>= 1;
  }
  return result;
}

}  // namespace mertens

#endif  // MERTENS_MPCORE_HPP
