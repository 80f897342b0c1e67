#ifndef MERTENS_MERTENS_HPP
#define MERTENS_MERTENS_HPP

// The constant C(q, a) in  prod_{p <= x, p = a (q)} (1 - 1/p) ~ C(q, a) (log x)^{-1/phi(q)}.
//
//   phi(q) log C(q, a) = -gamma + sum_{p <= P} alpha(p; q, a) log(1 - 1/p) - S(q, a) - E
//   S(q, a) = sum_{chi != chi_0} conj(chi)(a) sum_{m <= M} (1/m) sum_{k <= K} (mu(k)/k) log L_P(chi^k, k m)
//
// with alpha(p; q, a) = phi(q) - 1 for p = a (mod q) and -1 otherwise, and E
// the truncation error collected in ErrorLedger.

#include "mertens/bernoulli.hpp"
#include "mertens/chargroup.hpp"
#include "mertens/errors.hpp"
#include "mertens/lfunc.hpp"
#include "mertens/mpcore.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace mertens {

struct ComputeParams {
  std::int64_t P = 0;  // prime cutoff
  long K = 0;          // Moebius index truncation
  long M = 0;          // power truncation
  std::int64_t N = 0;  // Euler-Maclaurin length, multiple of q
  long T = 0;          // Euler-Maclaurin order, even

  friend bool operator==(const ComputeParams&, const ComputeParams&) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << P << "," << K << "," << M << "," << N << "," << T;
    return os.str();
  }
};

inline void validate_params(std::int64_t q, const ComputeParams& p) {
  if (p.P < q) throw PreconditionError("params: prime cutoff P must be >= q");
  if (p.K < 2 || p.M < 2) throw PreconditionError("params: K and M must be >= 2");
  if (p.N <= 0 || p.N % q != 0) throw PreconditionError("params: N must be a positive multiple of q");
  if (p.T < 2 || p.T % 2 != 0) throw PreconditionError("params: T must be even and >= 2");
}

/// Parse "P,K,M,N,T".
inline ComputeParams parse_params(const std::string& text) {
  ComputeParams p;
  char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  std::istringstream is(text);
  if (!(is >> p.P >> c1 >> p.K >> c2 >> p.M >> c3 >> p.N >> c4 >> p.T) || c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
    throw PreconditionError("params: expected P,K,M,N,T, got '" + text + "'");
  std::string rest;
  if (is >> rest) throw PreconditionError("params: trailing input in '" + text + "'");
  return p;
}

inline int alpha(std::int64_t p, std::int64_t q, std::int64_t a) {
  return mod(p - a, q) == 0 ? static_cast<int>(euler_phi(q) - 1) : -1;
}

inline Real finite_euler_product_log(std::int64_t q, std::int64_t a, std::int64_t P, const PrecisionContext& ctx) {
  if (!coprime(a, q)) throw PreconditionError("finite_euler_product_log: a must be coprime to q");
  const mpfr_prec_t prec = ctx.bits();
  Real acc(0, prec);
  for (std::int64_t p : primes_upto(P)) {
    Real inv(1, prec);
    inv /= static_cast<long>(p);
    acc += log1p(-inv) * alpha(p, q, a);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Error ledger

inline Real error_e1(std::int64_t q, std::int64_t P, long K, mpfr_prec_t prec = 128) {
  // 2 P (phi - 1) / (2 K (P - 1) (P^K - 1))
  Real p(static_cast<long>(P), prec);
  Real num = p * (2 * (euler_phi(q) - 1));
  Real den = Real(2 * K, prec) * (p - 1) * (pow_si(p, K) - 1);
  return num / den;
}

inline Real error_e2(std::int64_t q, std::int64_t P, long M, mpfr_prec_t prec = 128) {
  // P (phi - 1) / (M (M - 1) (P - 1) P^M)
  Real p(static_cast<long>(P), prec);
  Real num = p * (euler_phi(q) - 1);
  Real den = Real(M * (M - 1), prec) * (p - 1) * pow_si(p, M);
  return num / den;
}

/// 2 (phi - 1) (KM + T - 2)^{T-2} q^T |B_T| / ((N - 1) U N^{T-1} T!)
inline Real error_e4(std::int64_t q, const ComputeParams& params, const Real& U, mpfr_prec_t prec = 128) {
  if (!(U.sign() > 0)) throw NumericalError("error_e4: minimum |L| is not positive");
  if (params.T < 2 || params.T % 2 != 0) throw PreconditionError("error_e4: T must be even and >= 2");
  const long T = params.T;
  Real num = Real(2 * (euler_phi(q) - 1), prec);
  num *= pow_si(Real(params.K * params.M + T - 2, prec), T - 2);
  num *= pow_si(Real(static_cast<long>(q), prec), T);
  num *= Real(abs(bernoulli_number(T)), prec);
  Real n(static_cast<long>(params.N), prec);
  Real fact(prec);
  mpfr_fac_ui(fact.get(), static_cast<unsigned long>(T), MPFR_RNDN);
  Real den = (n - 1) * U.with_prec(prec) * pow_si(n, T - 1) * fact;
  Real e = num / den;
  if (e.is_zero() || !e.is_finite()) throw NumericalError("error_e4: bound underflowed or overflowed");
  return e;
}

struct ErrorLedger {
  Real e1;
  Real e2;
  Real e4;
  /// Terms dropped below working precision inside the L-value logs.
  Real e_tail;
  /// min |L_{T,N}| over the Euler-Maclaurin evaluations.
  Real U;

  Real total() const { return e1 + e2 + e4 + e_tail; }
};

// ---------------------------------------------------------------------------
// Parameter selection

/// Schedules that satisfy the a-priori budget, cheapest first. The first
/// entry is what choose_params returns; later ones are escalation steps.
inline std::vector<ComputeParams> candidate_params(std::int64_t q, long target_digits) {
  if (q < 3) throw PreconditionError("choose_params: q must be >= 3");
  if (target_digits < 10) throw PreconditionError("choose_params: target_digits must be >= 10");
  const double t = static_cast<double>(target_digits) / 100.0;
  const std::int64_t phi = euler_phi(q);
  const mpfr_prec_t prec = 128;

  ComputeParams base;
  base.P = std::max<std::int64_t>(96 * q, static_cast<std::int64_t>(std::ceil(9600.0 * t)));
  // E_final / C = E / phi(q); leave one digit for the certified-digit rule
  const Real budget = pow10(-(target_digits + 2), prec) * static_cast<long>(phi);
  const Real em_budget = pow10(-(target_digits + 5), prec) * static_cast<long>(phi);
  const bool fixed_schedule = target_digits == 100 && q <= 100;
  if (fixed_schedule) {
    base.K = 26;
    base.M = 26;
  } else {
    base.K = 2;
    while (error_e1(q, base.P, base.K) > budget / 4) ++base.K;
    base.M = 2;
    while (error_e2(q, base.P, base.M) > budget / 4) ++base.M;
  }
  const Real e12 = error_e1(q, base.P, base.K) + error_e2(q, base.P, base.M);
  const Real half(Rational(1, 2), prec);

  auto admissible = [&](const ComputeParams& p) {
    const Real e4 = error_e4(q, p, half);
    return e4 <= em_budget && e12 + e4 <= budget;
  };

  std::vector<ComputeParams> out;
  if (fixed_schedule) {
    ComputeParams fixed = base;
    if (q <= 10) {
      fixed.N = (16800 / q + 1) * q;
      fixed.T = 88;
      out.push_back(fixed);
    } else if (q >= 90 && q <= 100) {
      fixed.N = (40320 / q + 1) * q;
      fixed.T = 204;
      out.push_back(fixed);
    }
  }

  // c on a geometric grid, T stepping by 4; per c keep the smallest
  // admissible T. The base grid is scanned first, then a wider one.
  auto scan = [&](double c_lo, double c_hi, long T_lo, long T_hi) {
    constexpr int kGridSteps = 12;
    const double ratio = std::pow(40320.0 / 16800.0, 1.0 / kGridSteps);
    for (double c = c_lo; c <= c_hi * 1.0000001; c *= ratio) {
      ComputeParams p = base;
      p.N = (static_cast<std::int64_t>(std::floor(c)) / q + 1) * q;
      for (long T = T_lo; T <= T_hi; T += 4) {
        p.T = T;
        if (admissible(p)) {
          if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
          break;
        }
      }
    }
  };
  const double c_lo = 16800.0 * t;
  const double c_hi = 40320.0 * t;
  const long T_lo = std::max(4L, 4 * static_cast<long>(std::floor(22.0 * t)));
  const long T_hi = std::max(T_lo, 4 * static_cast<long>(std::ceil(51.0 * t)));
  scan(c_lo, c_hi, T_lo, T_hi);
  const double widen = std::max(1.0, static_cast<double>(q) / 100.0);
  scan(c_lo, 4.0 * c_hi * widen, T_lo, 2 * T_hi);
  if (out.empty())
    throw BudgetError("choose_params: no (N, T) schedule meets 10^-" + std::to_string(target_digits) + " for q = " + std::to_string(q));
  return out;
}

inline ComputeParams choose_params(std::int64_t q, long target_digits) { return candidate_params(q, target_digits).front(); }

// ---------------------------------------------------------------------------
// Shared log L cache

class LogLCache {
 public:
  using Key = std::pair<std::size_t, long>;  // (group index of chi^k, n = k m)

  LogLCache(std::int64_t q, ComputeParams params) : q_(q), params_(params) {}

  std::int64_t modulus() const { return q_; }
  const ComputeParams& params() const { return params_; }
  std::size_t size() const { return entries_.size(); }
  const std::map<Key, LogLValue>& entries() const { return entries_; }

  bool contains(std::size_t index, long n) const { return entries_.count({index, n}) != 0; }

  const LogLValue& at(std::size_t index, long n) const {
    auto it = entries_.find({index, n});
    if (it == entries_.end())
      throw std::logic_error("LogLCache: missing entry (chi " + std::to_string(index) + ", n = " + std::to_string(n) + ")");
    return it->second;
  }

  void insert(LogLValue v) {
    const Key key{v.index, v.n};
    if (entries_.count(key)) throw std::logic_error("LogLCache: entry written twice");
    if (v.method == LMethod::EulerMaclaurin && (!U_ || v.em_abs < *U_)) U_ = v.em_abs;
    entries_.emplace(key, std::move(v));
  }

  /// min |L_{T,N}| over Euler-Maclaurin entries, if any.
  const std::optional<Real>& U() const { return U_; }

 private:
  std::int64_t q_;
  ComputeParams params_;
  std::map<Key, LogLValue> entries_;
  std::optional<Real> U_;
};

/// Keys (index of chi^k, k m) needed by S(q, a), in canonical order.
inline std::vector<LogLCache::Key> required_keys(const CharGroup& group, const ComputeParams& params) {
  std::vector<LogLCache::Key> keys;
  for (const Character& chi : group.characters()) {
    if (chi.is_principal()) continue;
    for (long m = 1; m <= params.M; ++m)
      for (long k = 1; k <= params.K; ++k) {
        if (moebius(k) == 0) continue;
        keys.emplace_back(group.power_index(chi.index, k), k * m);
      }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

inline LogLCache build_l_cache(const CharGroup& group, const ComputeParams& params, const PrecisionContext& ctx) {
  const std::int64_t q = group.modulus();
  validate_params(q, params);
  LogLCache cache(q, params);
  LFunctionEngine engine(q, EMSchedule{params.N, params.T}, ctx);
  for (const auto& [index, n] : required_keys(group, params)) cache.insert(engine.log_l_truncated(group[index], n, params.P));
  return cache;
}

inline LogLCache build_l_cache(std::int64_t q, const ComputeParams& params, const PrecisionContext& ctx) {
  return build_l_cache(CharGroup(q), params, ctx);
}

struct SSum {
  Complex value;
  /// sum_{chi, m, k} |log L error| / (m k) over entries that were dropped or
  /// truncated below working precision.
  Real tail_error;
};

inline SSum s_sum_detail(const CharGroup& group, std::int64_t a, const LogLCache& cache, const PrecisionContext& ctx) {
  const std::int64_t q = group.modulus();
  if (!coprime(a, q)) throw PreconditionError("s_sum: a must be coprime to q");
  if (cache.modulus() != q) throw PreconditionError("s_sum: cache was built for another modulus");
  const auto& params = cache.params();
  const mpfr_prec_t prec = ctx.bits();
  SSum out{Complex(prec), Real(0, prec)};
  for (const Character& chi : group.characters()) {
    if (chi.is_principal()) continue;
    Complex inner(prec);
    Real inner_tail(0, prec);
    for (long m = 1; m <= params.M; ++m) {
      for (long k = 1; k <= params.K; ++k) {
        const int mu = moebius(k);
        if (mu == 0) continue;
        const LogLValue& v = cache.at(group.power_index(chi.index, k), k * m);
        const long w = mu * k * m;
        inner += v.value / w;
        if (v.method != LMethod::EulerMaclaurin) inner_tail += v.error_bound / (k * m);
      }
    }
    // conj(chi)(a)
    const std::int64_t t = chi.exponent_at(a);
    out.value += inner * unit_root(mod(-t, chi.order), chi.order, prec);
    out.tail_error += inner_tail;
  }
  return out;
}

inline Complex s_sum(const CharGroup& group, std::int64_t a, const LogLCache& cache, const PrecisionContext& ctx) {
  return s_sum_detail(group, a, cache, ctx).value;
}

// ---------------------------------------------------------------------------
// Results

struct MertensResult {
  std::int64_t q = 0;
  std::int64_t a = 0;
  /// C~(q, a) truncated to working_digits decimals.
  std::string value;
  /// E_final, rounded up.
  std::string error_bound;
  long certified_digits = 0;
  ComputeParams params;
  double imag_residue = 0.0;
  double wall_time = 0.0;

  Real value_real;
  Real error_real;
  ErrorLedger ledger;
};

inline long certified_digits_from(const Real& error_bound, const Real& value, long working_digits) {
  if (error_bound.is_zero()) return working_digits;
  Real r = log10(error_bound / abs(value));
  const double d = std::floor(-r.to_double()) - 1;
  return std::clamp(static_cast<long>(d), 0L, working_digits);
}

inline MertensResult compute_constant(const CharGroup& group, std::int64_t a, const LogLCache& cache, const PrecisionContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t q = group.modulus();
  if (q < 3) throw PreconditionError("compute_constant: q must be >= 3");
  if (!coprime(a, q)) throw PreconditionError("compute_constant: gcd(a, q) must be 1");
  const ComputeParams& params = cache.params();
  const mpfr_prec_t prec = ctx.bits();
  const long phi = static_cast<long>(euler_phi(q));

  SSum s = s_sum_detail(group, mod(a, q), cache, ctx);
  Real exponent = -ctx.gamma() + finite_euler_product_log(q, mod(a, q), params.P, ctx) - s.value.re;
  exponent /= phi;
  Real c = exp(exponent);

  MertensResult r;
  r.q = q;
  r.a = mod(a, q);
  r.params = params;
  r.ledger.e1 = error_e1(q, params.P, params.K, prec);
  r.ledger.e2 = error_e2(q, params.P, params.M, prec);
  r.ledger.U = cache.U() ? *cache.U() : Real(1, prec);
  r.ledger.e4 = cache.U() ? error_e4(q, params, *cache.U(), prec) : Real(0, prec);
  r.ledger.e_tail = s.tail_error;
  r.error_real = c * r.ledger.total() / phi;
  r.value_real = c;
  r.imag_residue = (abs(s.value.im) / phi).to_double();
  if (!(abs(s.value.im) < ctx.epsilon(ctx.target_digits()) * phi))
    throw NumericalError("compute_constant: imaginary part of S(" + std::to_string(q) + ", " + std::to_string(a) + ") exceeds budget");
  r.value = to_fixed_truncated(c, static_cast<int>(ctx.working_digits()));
  r.error_bound = r.error_real.to_sci(6, MPFR_RNDU);
  r.certified_digits = certified_digits_from(r.error_real, c, ctx.working_digits());
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline MertensResult compute_constant(std::int64_t q, std::int64_t a, const ComputeParams& params, const PrecisionContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  if (q < 3) throw PreconditionError("compute_constant: q must be >= 3");
  if (!coprime(a, q)) throw PreconditionError("compute_constant: gcd(a, q) must be 1");
  CharGroup group(q);
  LogLCache cache = build_l_cache(group, params, ctx);
  MertensResult r = compute_constant(group, a, cache, ctx);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::vector<MertensResult> compute_all_residues(std::int64_t q, const ComputeParams& params, const PrecisionContext& ctx) {
  const auto start = std::chrono::steady_clock::now();
  if (q < 3) throw PreconditionError("compute_all_residues: q must be >= 3");
  CharGroup group(q);
  LogLCache cache = build_l_cache(group, params, ctx);
  const double build_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<MertensResult> out;
  for (std::int64_t a = 1; a < q; ++a) {
    if (!coprime(a, q)) continue;
    out.push_back(compute_constant(group, a, cache, ctx));
    out.back().wall_time += build_time / static_cast<double>(euler_phi(q));
  }
  return out;
}

/// choose_params + compute_all_residues, moving to the next candidate
/// schedule while the a-posteriori ledger misses the target.
inline std::vector<MertensResult> compute_all_residues_auto(std::int64_t q, const PrecisionContext& ctx) {
  const auto candidates = candidate_params(q, ctx.target_digits());
  for (const auto& params : candidates) {
    auto results = compute_all_residues(q, params, ctx);
    bool ok = true;
    for (const auto& r : results) ok = ok && r.certified_digits >= ctx.target_digits();
    if (ok) return results;
  }
  throw BudgetError("compute: no candidate schedule certified " + std::to_string(ctx.target_digits()) + " digits for q = " + std::to_string(q));
}

}  // namespace mertens

#endif  // MERTENS_MERTENS_HPP
