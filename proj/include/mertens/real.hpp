#ifndef MERTENS_REAL_HPP
#define MERTENS_REAL_HPP

// Thin RAII layer over MPFR (reals) and GMP (exact integers/rationals).
// Every Real carries its own binary precision; binary operators produce a
// result at the larger of the two operand precisions, round-to-nearest.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace mertens {

using Integer = mpz_class;
using Rational = mpq_class;

/// Binary precision needed to carry `digits` decimal digits (ceiling).
inline mpfr_prec_t bits_for_digits(long digits) {
  return static_cast<mpfr_prec_t>(std::ceil(static_cast<double>(digits) * 3.321928094887362)) + 1;
}

class Real {
 public:
  explicit Real(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(long x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(const Integer& x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
  }
  Real(const Rational& x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
  }
  Real(const std::string& decimal, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_str(v_, decimal.c_str(), 10, MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  /// Same value, new precision (rounded when narrowing).
  Real with_prec(mpfr_prec_t prec) const {
    Real r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { widen(o); mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator+=(long x) { mpfr_add_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator-=(long x) { mpfr_sub_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator*=(long x) { mpfr_mul_si(v_, v_, x, MPFR_RNDN); return *this; }
  Real& operator/=(long x) { mpfr_div_si(v_, v_, x, MPFR_RNDN); return *this; }

  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  friend Real operator+(Real a, long b) { return a += b; }
  friend Real operator-(Real a, long b) { return a -= b; }
  friend Real operator*(Real a, long b) { return a *= b; }
  friend Real operator/(Real a, long b) { return a /= b; }
  friend Real operator*(long b, Real a) { return a *= b; }

  friend int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const Real& a, const Real& b) { return cmp(a, b) < 0; }
  friend bool operator>(const Real& a, const Real& b) { return cmp(a, b) > 0; }
  friend bool operator<=(const Real& a, const Real& b) { return cmp(a, b) <= 0; }
  friend bool operator>=(const Real& a, const Real& b) { return cmp(a, b) >= 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Scientific notation with `sig` significant digits; `rnd` picks the
  /// direction (RNDU for published error bounds).
  std::string to_sci(int sig, mpfr_rnd_t rnd = MPFR_RNDN) const {
    if (mpfr_zero_p(v_)) return "0";
    mpfr_exp_t e10 = 0;
    char* s = mpfr_get_str(nullptr, &e10, 10, static_cast<size_t>(sig), v_, rnd);
    std::string digits(s);
    mpfr_free_str(s);
    std::string sign;
    if (digits[0] == '-') {
      sign = "-";
      digits.erase(0, 1);
    }
    std::string out = sign + digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(static_cast<long>(e10) - 1);
    return out;
  }

 private:
  void widen(const Real& o) {
    if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
  }

  mpfr_t v_;
};

inline Real exp(const Real& x) { Real r(x.prec()); mpfr_exp(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real log(const Real& x) { Real r(x.prec()); mpfr_log(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real log1p(const Real& x) { Real r(x.prec()); mpfr_log1p(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real log10(const Real& x) { Real r(x.prec()); mpfr_log10(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real sqrt(const Real& x) { Real r(x.prec()); mpfr_sqrt(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real abs(const Real& x) { Real r(x.prec()); mpfr_abs(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real atan2(const Real& y, const Real& x) {
  Real r(std::max(x.prec(), y.prec()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}
inline Real pow_si(const Real& x, long n) { Real r(x.prec()); mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN); return r; }
inline Real pow(const Real& x, const Real& y) { Real r(x.prec()); mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN); return r; }
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }

/// 10^e at the given precision.
inline Real pow10(long e, mpfr_prec_t prec) {
  Real ten(10, prec);
  return pow_si(ten, e);
}

inline Real const_pi(mpfr_prec_t prec) { Real r(prec); mpfr_const_pi(r.get(), MPFR_RNDN); return r; }
inline Real const_euler(mpfr_prec_t prec) { Real r(prec); mpfr_const_euler(r.get(), MPFR_RNDN); return r; }

/// Truncating (round-toward-zero) fixed-point decimal with `frac_digits`
/// digits after the point.
inline std::string to_fixed_truncated(const Real& x, int frac_digits) {
  Real scaled = x * pow10(frac_digits, x.prec() + 64);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), scaled.get(), MPFR_RNDZ);
  bool neg = sgn(z) < 0;
  if (neg) z = -z;
  std::string s = z.get_str();
  if (s.size() <= static_cast<size_t>(frac_digits)) s.insert(0, static_cast<size_t>(frac_digits) + 1 - s.size(), '0');
  std::string out = s.substr(0, s.size() - static_cast<size_t>(frac_digits));
  if (frac_digits > 0) out += "." + s.substr(s.size() - static_cast<size_t>(frac_digits));
  return neg ? "-" + out : out;
}

struct Complex {
  Real re;
  Real im;

  explicit Complex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  explicit Complex(Real r) : re(std::move(r)), im(re.prec()) {}

  mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  Complex& operator*=(const Real& x) { re *= x; im *= x; return *this; }
  Complex& operator/=(const Real& x) { re /= x; im /= x; return *this; }
  Complex& operator*=(long x) { re *= x; im *= x; return *this; }
  Complex& operator/=(long x) { re /= x; im /= x; return *this; }
  Complex& operator/=(const Complex& o) {
    Real den = o.re * o.re + o.im * o.im;
    Real r = (re * o.re + im * o.im) / den;
    Real i = (im * o.re - re * o.im) / den;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  Complex operator-() const { return Complex(-re, -im); }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator*(Complex a, const Real& b) { return a *= b; }
  friend Complex operator*(const Real& b, Complex a) { return a *= b; }
  friend Complex operator/(Complex a, const Real& b) { return a /= b; }
  friend Complex operator*(Complex a, long b) { return a *= b; }
  friend Complex operator/(Complex a, long b) { return a /= b; }
};

inline Complex conj(const Complex& z) { return Complex(z.re, -z.im); }
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { Real r(z.prec()); mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN); return r; }

/// Principal branch logarithm.
inline Complex log(const Complex& z) {
  Real modulus_sq = norm(z);
  Real lg = log(modulus_sq) / 2;
  return Complex(std::move(lg), atan2(z.im, z.re));
}

inline Complex exp(const Complex& z) {
  Real m = exp(z.re);
  Real c(z.prec()), s(z.prec());
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
  return Complex(m * c, m * s);
}

/// e^{2 pi i t / d}.
inline Complex unit_root(long t, long d, mpfr_prec_t prec) {
  Real angle = const_pi(prec + 16) * (2 * t);
  angle /= d;
  Real c(prec), s(prec);
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return Complex(std::move(c), std::move(s));
}

/// i^e for e in {0, 1, 2, 3}.
inline Complex i_power(int e, mpfr_prec_t prec) {
  switch (((e % 4) + 4) % 4) {
    case 0: return Complex(Real(1, prec), Real(0, prec));
    case 1: return Complex(Real(0, prec), Real(1, prec));
    case 2: return Complex(Real(-1, prec), Real(0, prec));
    default: return Complex(Real(0, prec), Real(-1, prec));
  }
}

}  // namespace mertens

#endif  // MERTENS_REAL_HPP
