#ifndef MERTENS_LFUNC_HPP
#define MERTENS_LFUNC_HPP

// Dirichlet L-values at positive integers and logarithms of their Euler
// products with the small primes removed.
//
//   principal chi        zeta(n) * prod_{p | q} (1 - p^{-n})
//   chi_f(-1) = (-1)^n   closed form through B_n(chi_f) and the root number
//   otherwise            chi-twisted Euler-Maclaurin, N terms, order T
//
// Imprimitive characters are reduced to the inducing primitive character
// first and the missing Euler factors multiplied back.

#include "mertens/bernoulli.hpp"
#include "mertens/chargroup.hpp"
#include "mertens/errors.hpp"
#include "mertens/mpcore.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace mertens {

enum class LMethod { ExactParity, EulerMaclaurin, ZetaPrincipal, TailBound };

inline const char* to_string(LMethod m) {
  switch (m) {
    case LMethod::ExactParity: return "exact-parity";
    case LMethod::EulerMaclaurin: return "euler-maclaurin";
    case LMethod::ZetaPrincipal: return "zeta-principal";
    case LMethod::TailBound: return "tail-bound";
  }
  return "?";
}

/// Euler-Maclaurin length N (a multiple of the modulus) and order T (even).
struct EMSchedule {
  std::int64_t N = 0;
  long T = 0;
};

struct LValue {
  Complex value;
  Real error_bound;
  LMethod method;
  /// |L_{T,N}(chi_f, n)| when the Euler-Maclaurin route was used.
  Real em_abs;
  /// Magnitude of the j = T Euler-Maclaurin term.
  Real em_last_term;
};

struct LogLValue {
  std::size_t index = 0;
  long n = 0;
  std::int64_t cutoff = 0;
  Complex value;
  LMethod method = LMethod::TailBound;
  Real error_bound;
  Real em_abs;
  /// Magnitude of the j = T Euler-Maclaurin term (zero for other methods).
  Real em_last_term;
};

struct EulerMaclaurinResult {
  Complex value;
  /// Closed-form remainder bound plus any partial-sum truncation.
  Real error_bound;
  Real last_term;
};

/// S_c = sum_{1 <= r < N, r = c (mod m)} r^{-s}. For s >= 2 the sum stops
/// once the remaining tail is below 10^{-(working+10)}; `tail_bound` carries
/// what was dropped.
struct ResidueSums {
  std::int64_t modulus = 1;
  std::int64_t N = 0;
  long s = 0;
  std::vector<Real> sums;
  Real tail_bound;
};

/// B^{1-n}/(n-1): bound on |log L_B(chi, n)| for any character.
inline Real tail_log_bound(std::int64_t B, long n, mpfr_prec_t prec = 128) {
  if (n < 2) throw PreconditionError("tail_log_bound: n must be >= 2");
  if (B < 1) throw PreconditionError("tail_log_bound: B must be >= 1");
  Real b(static_cast<long>(B), prec);
  return pow_si(b, 1 - n) / (n - 1);
}

inline Real zeta_int(long n, const PrecisionContext& ctx) {
  if (n <= 1) throw PreconditionError("zeta_int: n must be >= 2");
  Real r(ctx.bits());
  mpfr_zeta_ui(r.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  return r;
}

inline Complex gauss_sum(const Character& chi, const PrecisionContext& ctx) {
  if (!chi.primitive) throw PreconditionError("gauss_sum: character must be primitive");
  const std::int64_t q = chi.modulus;
  const std::int64_t d = chi.order;
  Complex tau(ctx.bits());
  for (std::int64_t r = 1; r <= q; ++r) {
    const std::int64_t t = chi.exponent_at(r);
    if (t < 0) continue;
    // chi(r) e(r/q) = e^{2 pi i (t q + r d) / (d q)}
    tau += unit_root(mod(t * q + r * d, d * q), d * q, ctx.bits());
  }
  return tau;
}

inline Complex root_number(const Character& chi, const PrecisionContext& ctx) {
  if (!chi.primitive) throw PreconditionError("root_number: character must be primitive");
  Complex w = gauss_sum(chi, ctx);
  w /= sqrt(ctx.real(chi.modulus));
  // divide by i^e
  return w * i_power(-chi.parity, ctx.bits());
}

/// Root number from the theta series c = sum_{n>=1} chi(n) n^e e^{-pi n^2/q}
/// through W = c / conj(c).
inline Complex root_number_theta(const Character& chi, const PrecisionContext& ctx) {
  if (!chi.primitive) throw PreconditionError("root_number_theta: character must be primitive");
  const std::int64_t q = chi.modulus;
  const mpfr_prec_t prec = ctx.bits();
  const auto roots = root_table(chi.order, prec);
  const Real eps = ctx.epsilon(ctx.working_digits() + 10);
  Complex c(prec);
  for (std::int64_t n = 1;; ++n) {
    Real weight = exp(-(ctx.pi() * (n * n)) / q);
    if (chi.parity == 1) weight *= n;
    if (weight < eps && n > 1) break;
    const std::int64_t t = chi.exponent_at(n);
    if (t < 0) continue;
    c += roots[static_cast<std::size_t>(t)] * weight;
  }
  if (abs(c) < ctx.epsilon(ctx.working_digits() / 2))
    throw NumericalError("root_number_theta: theta series vanishes numerically for character " + std::to_string(chi.index) + " mod " + std::to_string(q));
  return c / conj(c);
}

inline Complex l_exact_matching_parity(const Character& chi, long n, const PrecisionContext& ctx,
                                       ChiBernoulliCache& bcache = default_chi_bernoulli_cache()) {
  if (!chi.primitive) throw PreconditionError("l_exact_matching_parity: character must be primitive");
  if (n < 1) throw PreconditionError("l_exact_matching_parity: n must be >= 1");
  if ((n - chi.parity) % 2 != 0) throw PreconditionError("l_exact_matching_parity: parity of chi does not match n");
  if (chi.is_principal() && n == 1) throw PreconditionError("l_exact_matching_parity: zeta(1) diverges");
  const std::int64_t f = chi.modulus;
  const mpfr_prec_t prec = ctx.bits();
  // 1/2 (-1)^{n-1+(n+e)/2} W sqrt(f) (2 pi / f)^n conj(B_n(chi)) / n!
  const long sign_exp = n - 1 + (n + chi.parity) / 2;
  Real scale = sqrt(ctx.real(f));
  scale *= pow_si(ctx.pi() * 2 / f, n);
  Real fact(prec);
  mpfr_fac_ui(fact.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  scale /= fact;
  scale /= 2;
  if (sign_exp % 2 != 0) scale = -scale;
  Complex v = root_number(chi, ctx) * conj(bcache.get(chi, n, ctx));
  return v * scale;
}

inline ResidueSums residue_power_sums(std::int64_t modulus, std::int64_t N, long s, const PrecisionContext& ctx) {
  if (s < 1) throw PreconditionError("residue_power_sums: s must be >= 1");
  const mpfr_prec_t prec = ctx.bits();
  ResidueSums out;
  out.modulus = modulus;
  out.N = N;
  out.s = s;
  out.sums.assign(static_cast<std::size_t>(modulus), Real(0, prec));
  out.tail_bound = Real(0, prec);
  const Real eps = ctx.epsilon(ctx.working_digits() + 10);
  Real term(prec);
  for (std::int64_t r = 1; r < N; ++r) {
    if (s >= 2 && r >= 2) {
      // sum_{k >= r} k^{-s} <= r^{-s} + r^{1-s}/(s-1)
      Real rr(static_cast<long>(r), 64);
      Real tail = pow_si(rr, -s) + pow_si(rr, 1 - s) / (s - 1);
      if (tail < eps) {
        out.tail_bound = tail.with_prec(prec);
        break;
      }
    }
    mpfr_ui_pow_ui(term.get(), static_cast<unsigned long>(r), static_cast<unsigned long>(s), MPFR_RNDN);
    mpfr_ui_div(term.get(), 1, term.get(), MPFR_RNDN);
    out.sums[static_cast<std::size_t>(r % modulus)] += term;
  }
  return out;
}

/// Regroup residue sums mod m into residue sums mod f, f | m.
inline ResidueSums fold_residue_sums(const ResidueSums& src, std::int64_t f) {
  if (src.modulus % f != 0) throw PreconditionError("fold_residue_sums: target modulus must divide source modulus");
  ResidueSums out;
  out.modulus = f;
  out.N = src.N;
  out.s = src.s;
  const mpfr_prec_t prec = src.sums.empty() ? 64 : src.sums.front().prec();
  out.sums.assign(static_cast<std::size_t>(f), Real(0, prec));
  for (std::int64_t c = 0; c < src.modulus; ++c) out.sums[static_cast<std::size_t>(c % f)] += src.sums[static_cast<std::size_t>(c)];
  out.tail_bound = src.tail_bound;
  return out;
}

/// Closed-form remainder bound (f^T |B_T| / T!) s(s+1)...(s+T-2) N^{1-s-T}.
inline Real euler_maclaurin_remainder_bound(std::int64_t f, long s, std::int64_t N, long T, mpfr_prec_t prec) {
  Real b(abs(bernoulli_number(T)), prec);
  Real fT = pow_si(Real(static_cast<long>(f), prec), T);
  Real fact(prec);
  mpfr_fac_ui(fact.get(), static_cast<unsigned long>(T), MPFR_RNDN);
  Real rising(1, prec);
  for (long i = 0; i <= T - 2; ++i) rising *= (s + i);
  Real nn(static_cast<long>(N), prec);
  return fT * b / fact * rising * pow_si(nn, 1 - s - T);
}

inline EulerMaclaurinResult l_euler_maclaurin(const Character& chi, long s, std::int64_t N, long T, const PrecisionContext& ctx,
                                              const ResidueSums& sums,
                                              ChiBernoulliCache& bcache = default_chi_bernoulli_cache()) {
  if (chi.is_principal()) throw PreconditionError("l_euler_maclaurin: character must be non-principal");
  if (s < 1) throw PreconditionError("l_euler_maclaurin: s must be >= 1");
  if (N <= 0 || N % chi.modulus != 0) throw PreconditionError("l_euler_maclaurin: N must be a positive multiple of the modulus");
  if (T < 2 || T % 2 != 0) throw PreconditionError("l_euler_maclaurin: T must be even and >= 2");
  if (sums.modulus != chi.modulus || sums.N != N || sums.s != s) throw PreconditionError("l_euler_maclaurin: residue sums do not match");
  const mpfr_prec_t prec = ctx.bits();
  const auto roots = root_table(chi.order, prec);

  // sum_{r < N} chi(r) r^{-s}, grouped by exponent
  std::vector<Real> by_exp(static_cast<std::size_t>(chi.order), Real(0, prec));
  for (std::int64_t c = 0; c < chi.modulus; ++c) {
    const std::int64_t t = chi.exponent[static_cast<std::size_t>(c)];
    if (t >= 0) by_exp[static_cast<std::size_t>(t)] += sums.sums[static_cast<std::size_t>(c)];
  }
  Complex head(prec);
  for (std::int64_t t = 0; t < chi.order; ++t) head += roots[static_cast<std::size_t>(t)] * by_exp[static_cast<std::size_t>(t)];

  // N^{-s} sum_{j=1}^T (-1)^{j-1} B_j(chi)/j! * s(s+1)...(s+j-2) / N^{j-1}
  Complex corr(prec);
  Real factor(1, prec);  // s(s+1)...(s+j-2) / (j! N^{j-1})
  Real last(prec);
  for (long j = 1; j <= T; ++j) {
    if (j > 1) {
      factor *= (s + j - 2);
      factor /= j;
      factor /= static_cast<long>(N);
    }
    Complex term = bcache.get(chi, j, ctx) * factor;
    if (j == T) last = abs(term);
    if ((j - 1) % 2 == 0)
      corr += term;
    else
      corr -= term;
  }
  Real n_pow = pow_si(Real(static_cast<long>(N), prec), -s);
  corr *= n_pow;
  last *= n_pow;

  EulerMaclaurinResult res{head - corr, euler_maclaurin_remainder_bound(chi.modulus, s, N, T, prec), last};
  res.error_bound += sums.tail_bound;
  return res;
}

inline EulerMaclaurinResult l_euler_maclaurin(const Character& chi, long s, std::int64_t N, long T, const PrecisionContext& ctx) {
  if (N <= 0 || N % chi.modulus != 0) throw PreconditionError("l_euler_maclaurin: N must be a positive multiple of the modulus");
  return l_euler_maclaurin(chi, s, N, T, ctx, residue_power_sums(chi.modulus, N, s, ctx));
}

/// Evaluation state shared across many (character, n) requests for one
/// modulus: residue power sums, prime power tables, primitive reductions.
/// Results are pure functions of their key.
class LFunctionEngine {
 public:
  LFunctionEngine(std::int64_t modulus, EMSchedule schedule, const PrecisionContext& ctx,
                  ChiBernoulliCache& bcache = default_chi_bernoulli_cache())
      : modulus_(modulus), schedule_(schedule), ctx_(ctx), bcache_(bcache) {
    if (schedule.N > 0 && schedule.N % modulus != 0)
      throw PreconditionError("LFunctionEngine: N must be a multiple of the modulus");
  }

  const PrecisionContext& context() const { return ctx_; }
  const EMSchedule& schedule() const { return schedule_; }

  LValue l_value(const Character& chi, long n) {
    check_member(chi);
    if (n < 1) throw PreconditionError("l_value: n must be >= 1");
    const mpfr_prec_t prec = ctx_.bits();
    if (chi.is_principal()) {
      if (n == 1) throw PreconditionError("l_value: L(chi_0, 1) diverges");
      Real z = zeta_int(n, ctx_);
      for (std::int64_t p : prime_divisors(modulus_)) z *= (Real(1, prec) - pow_si(Real(static_cast<long>(p), prec), -n));
      return LValue{Complex(std::move(z)), Real(0, prec), LMethod::ZetaPrincipal, Real(0, prec), Real(0, prec)};
    }
    const Character& prim = primitive_of(chi);
    LValue out{Complex(prec), Real(0, prec), LMethod::ExactParity, Real(0, prec), Real(0, prec)};
    if ((n - prim.parity) % 2 == 0) {
      out.value = l_exact_matching_parity(prim, n, ctx_, bcache_);
    } else {
      if (schedule_.N <= 0) throw PreconditionError("l_value: Euler-Maclaurin schedule required");
      auto em = l_euler_maclaurin(prim, n, schedule_.N, schedule_.T, ctx_, sums(prim.modulus, n), bcache_);
      out.method = LMethod::EulerMaclaurin;
      out.em_abs = abs(em.value);
      out.value = std::move(em.value);
      out.error_bound = std::move(em.error_bound);
      out.em_last_term = std::move(em.last_term);
    }
    // multiply back prod_{p | q} (1 - chi_f(p) p^{-n}); |factor| <= prod (1 + p^{-n})
    const auto roots = root_table(prim.order, prec);
    for (std::int64_t p : prime_divisors(modulus_)) {
      const std::int64_t t = prim.exponent_at(p);
      if (t < 0) continue;
      Real pn = pow_si(Real(static_cast<long>(p), prec), -n);
      out.value -= out.value * roots[static_cast<std::size_t>(t)] * pn;
      out.error_bound *= (Real(1, prec) + pn);
    }
    return out;
  }

  LogLValue log_l_truncated(const Character& chi, long n, std::int64_t cutoff) {
    check_member(chi);
    if (chi.is_principal() && n == 1) throw PreconditionError("log_l_truncated: L(chi_0, 1) diverges");
    if (cutoff < modulus_) throw PreconditionError("log_l_truncated: cutoff must be >= modulus");
    const mpfr_prec_t prec = ctx_.bits();
    const Real eps = ctx_.epsilon(ctx_.working_digits() + 10);
    LogLValue out;
    out.index = chi.index;
    out.n = n;
    out.cutoff = cutoff;
    out.value = Complex(prec);
    out.error_bound = Real(0, prec);
    out.em_abs = Real(0, prec);
    out.em_last_term = Real(0, prec);
    if (n >= 2) {
      Real lemma = tail_log_bound(cutoff, n, prec);
      if (lemma < eps) {
        out.method = LMethod::TailBound;
        out.error_bound = std::move(lemma);
        return out;
      }
    }
    LValue l = l_value(chi, n);
    out.method = l.method;
    out.em_abs = l.em_abs;
    out.em_last_term = l.em_last_term;

    // L(chi, n) * prod_{p <= P} (1 - chi(p) p^{-n})
    Complex prod = l.value;
    const auto roots = root_table(chi.order, prec);
    const auto& primes = primes_for(cutoff);
    const auto& powers = prime_powers(n, cutoff);
    Real dropped(0, prec);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (i >= powers.size()) {
        // p^{-n} below working precision from here on; account the tail
        dropped = tail_log_bound(primes[i] - 1, n, prec);
        break;
      }
      const std::int64_t t = chi.exponent_at(primes[i]);
      if (t < 0) continue;
      prod -= prod * roots[static_cast<std::size_t>(t)] * powers[i];
    }
    out.value = log(prod);
    if (!(abs(out.value) < Real(1, prec) / 2))
      throw NumericalError("log_l_truncated: |log| >= 1/2 for character " + std::to_string(chi.index) + " mod " + std::to_string(modulus_) +
                           ", n = " + std::to_string(n) + "; principal branch is not safe");
    // |log(x + e) - log x| <= |e| / (|x| - |e|) ~ |e| / |x|
    if (!l.error_bound.is_zero()) out.error_bound = l.error_bound / abs(l.value) * 2;
    out.error_bound += dropped;
    return out;
  }

  const ResidueSums& sums(std::int64_t f, long s) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(f, s);
    if (auto it = folded_.find(key); it != folded_.end()) return *it->second;
    auto base = base_sums_.find(s);
    if (base == base_sums_.end())
      base = base_sums_.emplace(s, std::make_unique<ResidueSums>(residue_power_sums(modulus_, schedule_.N, s, ctx_))).first;
    auto folded = std::make_unique<ResidueSums>(f == modulus_ ? *base->second : fold_residue_sums(*base->second, f));
    return *folded_.emplace(key, std::move(folded)).first->second;
  }

  const Character& primitive_of(const Character& chi) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = primitive_.find(chi.index);
    if (it == primitive_.end()) it = primitive_.emplace(chi.index, std::make_unique<Character>(induced_primitive(chi))).first;
    return *it->second;
  }

 private:
  void check_member(const Character& chi) const {
    if (chi.modulus != modulus_) throw PreconditionError("LFunctionEngine: character has modulus " + std::to_string(chi.modulus) + ", engine expects " + std::to_string(modulus_));
  }

  const std::vector<std::int64_t>& primes_for(std::int64_t cutoff) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (primes_cutoff_ != cutoff) {
      primes_ = primes_upto(cutoff);
      primes_cutoff_ = cutoff;
      powers_.clear();
    }
    return primes_;
  }

  /// p^{-n} for the primes <= cutoff, stopping where the Euler product tail
  /// drops below working precision.
  const std::vector<Real>& prime_powers(long n, std::int64_t cutoff) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = powers_.find(n); it != powers_.end()) return *it->second;
    const mpfr_prec_t prec = ctx_.bits();
    const Real eps = ctx_.epsilon(ctx_.working_digits() + 10);
    auto v = std::make_unique<std::vector<Real>>();
    for (std::int64_t p : primes_) {
      if (p > cutoff) break;
      if (n >= 2 && p > 2 && tail_log_bound(p - 1, n, 64) < eps) break;
      v->push_back(pow_si(Real(static_cast<long>(p), prec), -n));
    }
    return *powers_.emplace(n, std::move(v)).first->second;
  }

  std::int64_t modulus_;
  EMSchedule schedule_;
  const PrecisionContext& ctx_;
  ChiBernoulliCache& bcache_;
  std::mutex mutex_;
  std::map<long, std::unique_ptr<ResidueSums>> base_sums_;
  std::map<std::pair<std::int64_t, long>, std::unique_ptr<ResidueSums>> folded_;
  std::map<std::size_t, std::unique_ptr<Character>> primitive_;
  std::int64_t primes_cutoff_ = -1;
  std::vector<std::int64_t> primes_;
  std::map<long, std::unique_ptr<std::vector<Real>>> powers_;
};

inline LValue l_value(const Character& chi, long n, const PrecisionContext& ctx, EMSchedule schedule) {
  LFunctionEngine engine(chi.modulus, schedule, ctx);
  return engine.l_value(chi, n);
}

inline LogLValue log_l_truncated(const Character& chi, long n, std::int64_t cutoff, const PrecisionContext& ctx, EMSchedule schedule) {
  LFunctionEngine engine(chi.modulus, schedule, ctx);
  return engine.log_l_truncated(chi, n, cutoff);
}

}  // namespace mertens

#endif  // MERTENS_LFUNC_HPP
