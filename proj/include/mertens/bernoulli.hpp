#ifndef MERTENS_BERNOULLI_HPP
#define MERTENS_BERNOULLI_HPP

// Exact Bernoulli numbers and polynomials, and the generalised
// chi-Bernoulli numbers B_n(chi) = f^{n-1} sum_{a=0}^{f-1} chi(a) B_n(a/f)
// with f the modulus of chi.
//
// B_n(chi) is assembled exactly in Q(zeta_d): the rational weights are
// accumulated per character exponent, the resulting polynomial in zeta_d is
// reduced modulo the cyclotomic polynomial Phi_d, and only then converted
// to floating point. Vanishing values (B_0(chi) for non-principal chi, wrong
// parity) therefore come out as exact zeros.

#include "mertens/chargroup.hpp"
#include "mertens/mpcore.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

namespace mertens {

namespace detail {

inline std::mutex& bernoulli_mutex() {
  static std::mutex m;
  return m;
}

inline std::vector<Rational>& bernoulli_table() {
  static std::vector<Rational> table;
  return table;
}

// Akiyama-Tanigawa; yields B_1 = +1/2 which we flip afterwards.
inline void extend_bernoulli_table(std::vector<Rational>& table, std::size_t upto) {
  if (table.size() > upto) return;
  const std::size_t n = upto + 1;
  std::vector<Rational> out(n);
  std::vector<Rational> a(n);
  for (std::size_t m = 0; m < n; ++m) {
    a[m] = Rational(1, static_cast<unsigned long>(m + 1));
    for (std::size_t j = m; j >= 1; --j) {
      a[j - 1] = Rational(static_cast<long>(j)) * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
    out[m] = a[0];
  }
  if (n > 1) out[1] = -out[1];
  table = std::move(out);
}

inline Integer binomial(long n, long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace detail

/// Exact B_j with the convention B_1 = -1/2.
inline Rational bernoulli_number(long j) {
  if (j < 0) throw PreconditionError("bernoulli_number: index must be >= 0");
  std::lock_guard<std::mutex> lock(detail::bernoulli_mutex());
  auto& table = detail::bernoulli_table();
  if (table.size() <= static_cast<std::size_t>(j)) {
    std::size_t upto = std::max<std::size_t>(static_cast<std::size_t>(j), 2 * table.size());
    detail::extend_bernoulli_table(table, std::max<std::size_t>(upto, 64));
  }
  return table[static_cast<std::size_t>(j)];
}

/// Exact B_n(x) = sum_j C(n, j) B_j x^{n-j}.
inline Rational bernoulli_poly(long n, const Rational& x) {
  Rational acc(0);
  Rational xpow(1);
  for (long j = n; j >= 0; --j) {
    acc += Rational(detail::binomial(n, j)) * bernoulli_number(j) * xpow;
    xpow *= x;
  }
  acc.canonicalize();
  return acc;
}

inline Real bernoulli_poly(long n, const Rational& x, const PrecisionContext& ctx) {
  if (x < 0 || x > 1) throw PreconditionError("bernoulli_poly: x must lie in [0, 1]");
  return Real(bernoulli_poly(n, x), ctx.bits());
}

/// f^n B_n(a/f) for a = 0..f-1, as integers over a common denominator.
struct BernoulliResidueRow {
  std::vector<Integer> numerators;
  Integer denominator;
};

inline BernoulliResidueRow bernoulli_residue_row(std::int64_t f, long n) {
  // f^n B_n(a/f) = sum_i C(n,i) B_i f^i a^{n-i}; clear denominators first,
  // then evaluate the integer polynomial in a by Horner.
  Integer den(1);
  for (long i = 0; i <= n; ++i) {
    Rational b = bernoulli_number(i);
    if (b != 0) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), b.get_den_mpz_t());
  }
  std::vector<Integer> coeff(static_cast<std::size_t>(n) + 1);
  Integer fpow(1);
  for (long i = 0; i <= n; ++i) {
    Rational b = bernoulli_number(i);
    if (b != 0) coeff[static_cast<std::size_t>(i)] = detail::binomial(n, i) * fpow * (den / b.get_den()) * b.get_num();
    fpow *= f;
  }
  BernoulliResidueRow row;
  row.denominator = den;
  row.numerators.resize(static_cast<std::size_t>(f));
  for (std::int64_t a = 0; a < f; ++a) {
    Integer acc(0);
    for (long i = 0; i <= n; ++i) {
      mpz_mul_ui(acc.get_mpz_t(), acc.get_mpz_t(), static_cast<unsigned long>(a));
      acc += coeff[static_cast<std::size_t>(i)];
    }
    row.numerators[static_cast<std::size_t>(a)] = std::move(acc);
  }
  return row;
}

namespace detail {

inline std::vector<Integer> compute_cyclotomic(std::int64_t d, const std::map<std::int64_t, std::vector<Integer>>& known) {
  // x^d - 1 divided by Phi_e for every proper divisor e
  std::vector<Integer> poly(static_cast<std::size_t>(d) + 1, Integer(0));
  poly[0] = -1;
  poly[static_cast<std::size_t>(d)] = 1;
  for (std::int64_t e : divisors(d)) {
    if (e == d) continue;
    const auto& div = known.at(e);
    const std::size_t dd = div.size() - 1;
    std::vector<Integer> quot(poly.size() - dd, Integer(0));
    for (std::size_t k = poly.size(); k-- > dd;) {
      Integer c = poly[k];
      quot[k - dd] = c;
      for (std::size_t j = 0; j <= dd; ++j) poly[k - dd + j] -= c * div[j];
    }
    poly = std::move(quot);
  }
  return poly;
}

}  // namespace detail

/// Integer coefficients of the cyclotomic polynomial Phi_d, low degree first.
inline std::vector<Integer> cyclotomic_polynomial(std::int64_t d) {
  static std::mutex m;
  static std::map<std::int64_t, std::vector<Integer>> known;
  std::lock_guard<std::mutex> lock(m);
  if (auto it = known.find(d); it != known.end()) return it->second;
  for (std::int64_t e : divisors(d))
    if (!known.count(e)) known.emplace(e, detail::compute_cyclotomic(e, known));
  return known.at(d);
}

/// Reduce sum_t c_t x^t modulo Phi_d; result has degree < phi(d).
inline std::vector<Integer> cyclotomic_reduce(std::vector<Integer> coeffs, std::int64_t d) {
  const auto phi = cyclotomic_polynomial(d);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t k = coeffs.size(); k-- > deg;) {
    if (coeffs[k] == 0) continue;
    Integer c = coeffs[k];
    for (std::size_t j = 0; j <= deg; ++j) coeffs[k - deg + j] -= c * phi[j];
  }
  coeffs.resize(std::min(coeffs.size(), deg));
  return coeffs;
}

/// Memoised B_n(chi) values. Keys are (modulus, group index, n, bits);
/// writes are idempotent so concurrent callers can race on a key safely.
class ChiBernoulliCache {
 public:
  Complex get(const Character& chi, long n, const PrecisionContext& ctx) {
    const Key key{chi.modulus, chi.index, n, ctx.bits()};
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = values_.find(key);
      if (it != values_.end()) return it->second;
    }
    Complex v = compute(chi, n, ctx);
    std::lock_guard<std::mutex> lock(mutex_);
    values_.emplace(key, v);
    return v;
  }

  /// B_0(chi) .. B_T(chi).
  std::vector<Complex> range(const Character& chi, long T, const PrecisionContext& ctx) {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(T) + 1);
    for (long n = 0; n <= T; ++n) out.push_back(get(chi, n, ctx));
    return out;
  }

 private:
  using Key = std::tuple<std::int64_t, std::size_t, long, mpfr_prec_t>;

  const BernoulliResidueRow& row(std::int64_t f, long n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(f, n);
    auto it = rows_.find(key);
    if (it == rows_.end()) it = rows_.emplace(key, std::make_unique<BernoulliResidueRow>(bernoulli_residue_row(f, n))).first;
    return *it->second;
  }

  Complex compute(const Character& chi, long n, const PrecisionContext& ctx) {
    const std::int64_t f = chi.modulus;
    const std::int64_t d = chi.order;
    const BernoulliResidueRow& r = row(f, n);
    std::vector<Integer> bucket(static_cast<std::size_t>(d), Integer(0));
    for (std::int64_t a = 0; a < f; ++a) {
      const std::int64_t t = chi.exponent[static_cast<std::size_t>(a)];
      if (t >= 0) bucket[static_cast<std::size_t>(t)] += r.numerators[static_cast<std::size_t>(a)];
    }
    bucket = cyclotomic_reduce(std::move(bucket), d);
    // B_n(chi) = f^{n-1} sum_a chi(a) B_n(a/f) = (1/(f den)) sum_t zeta^t I_t
    Integer scale = r.denominator * f;
    Complex acc(ctx.bits());
    for (std::size_t t = 0; t < bucket.size(); ++t) {
      if (bucket[t] == 0) continue;
      Rational w(bucket[t], scale);
      w.canonicalize();
      Complex term = unit_root(static_cast<long>(t), d, ctx.bits());
      term *= Real(w, ctx.bits());
      acc += term;
    }
    return acc;
  }

  std::mutex mutex_;
  std::map<Key, Complex> values_;
  std::map<std::pair<std::int64_t, long>, std::unique_ptr<BernoulliResidueRow>> rows_;
};

inline ChiBernoulliCache& default_chi_bernoulli_cache() {
  static ChiBernoulliCache cache;
  return cache;
}

inline Complex chi_bernoulli(const Character& chi, long n, const PrecisionContext& ctx) {
  if (n < 0) throw PreconditionError("chi_bernoulli: n must be >= 0");
  return default_chi_bernoulli_cache().get(chi, n, ctx);
}

}  // namespace mertens

#endif  // MERTENS_BERNOULLI_HPP
