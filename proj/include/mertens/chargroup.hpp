#ifndef MERTENS_CHARGROUP_HPP
#define MERTENS_CHARGROUP_HPP

// Dirichlet characters modulo q with exact values. A character of order d
// stores, for each residue r mod q, either "zero" (gcd(r, q) > 1) or an
// exponent t in [0, d) meaning chi(r) = e^{2 pi i t / d}.
//
// The group (Z/q)^* is split into cyclic components, one per odd prime
// power and one or two for the power of 2 (<-1> x <5> when 8 | q). A
// character is the vector c of its exponents on the component generators;
// group indices enumerate these vectors lexicographically, so index 0 is
// always the principal character.

#include "mertens/errors.hpp"
#include "mertens/mpcore.hpp"

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace mertens {

/// Value of a character at one argument: zero, or e^{2 pi i exponent/order}.
struct CharValue {
  bool zero = false;
  std::int64_t exponent = 0;
  std::int64_t order = 1;

  bool is_one() const { return !zero && exponent == 0; }
  Complex to_complex(mpfr_prec_t prec) const {
    if (zero) return Complex(prec);
    return unit_root(exponent, order, prec);
  }
};

struct Character {
  std::int64_t modulus = 1;
  std::int64_t order = 1;
  /// Per residue 0..modulus-1: -1 for zero, otherwise the exponent t.
  std::vector<std::int64_t> exponent{0};
  std::int64_t conductor = 1;
  int parity = 0;
  bool primitive = true;
  std::size_t index = 0;
  /// Exponent vector on the group's component generators.
  std::vector<std::int64_t> coords;

  bool is_principal() const { return order == 1; }
  bool is_real() const { return order <= 2; }
  bool vanishes_at(std::int64_t n) const { return exponent[static_cast<size_t>(mod(n, modulus))] < 0; }
  std::int64_t exponent_at(std::int64_t n) const { return exponent[static_cast<size_t>(mod(n, modulus))]; }
};

inline CharValue eval_char(const Character& chi, std::int64_t n) {
  std::int64_t t = chi.exponent_at(n);
  if (t < 0) return CharValue{true, 0, chi.order};
  return CharValue{false, t, chi.order};
}

/// e^{2 pi i t/d} for t = 0..d-1.
inline std::vector<Complex> root_table(std::int64_t d, mpfr_prec_t prec) {
  std::vector<Complex> roots;
  roots.reserve(static_cast<size_t>(d));
  for (std::int64_t t = 0; t < d; ++t) roots.push_back(unit_root(t, d, prec));
  return roots;
}

/// Least divisor f of the modulus with chi(r) = 1 for every r = 1 (mod f)
/// coprime to the modulus.
inline std::int64_t conductor(const Character& chi) {
  const std::int64_t q = chi.modulus;
  if (q == 1) return 1;
  for (std::int64_t f : divisors(q)) {
    bool ok = true;
    for (std::int64_t r = 1; ok && r < q; r += f)
      if (std::gcd(r, q) == 1 && chi.exponent[static_cast<size_t>(r)] != 0) ok = false;
    if (ok) return f;
  }
  return q;
}

namespace detail {

inline std::int64_t primitive_root_prime_power(std::int64_t p, int alpha) {
  const std::int64_t pm1 = p - 1;
  const auto factors = prime_divisors(pm1);
  std::int64_t g = 2;
  for (;; ++g) {
    bool ok = true;
    for (std::int64_t r : factors)
      if (powmod(g, pm1 / r, p) == 1) ok = false;
    if (ok) break;
  }
  if (alpha >= 2 && powmod(g, pm1, p * p) == 1) g += p;
  return g;
}

}  // namespace detail

class CharGroup {
 public:
  explicit CharGroup(std::int64_t q) : modulus_(q) {
    if (q < 1) throw PreconditionError("character_group: modulus must be >= 1");
    build_components();
    build_dlog();
    build_characters();
  }

  std::int64_t modulus() const { return modulus_; }
  std::size_t size() const { return chars_.size(); }
  const Character& operator[](std::size_t i) const { return chars_.at(i); }
  const std::vector<Character>& characters() const { return chars_; }
  std::size_t principal_index() const { return 0; }
  const Character& principal() const { return chars_.front(); }

  const std::vector<std::int64_t>& component_orders() const { return orders_; }
  const std::vector<std::int64_t>& generators() const { return gens_; }
  /// Exponent of lcm of component orders.
  std::int64_t exponent() const { return exponent_; }

  std::size_t index_of(const std::vector<std::int64_t>& coords) const {
    std::size_t idx = 0;
    for (size_t i = 0; i < orders_.size(); ++i)
      idx = idx * static_cast<size_t>(orders_[i]) + static_cast<size_t>(mod(coords[i], orders_[i]));
    return idx;
  }

  std::size_t power_index(std::size_t i, std::int64_t k) const {
    std::vector<std::int64_t> c = chars_.at(i).coords;
    for (size_t j = 0; j < c.size(); ++j) c[j] = mod(c[j] * mod(k, orders_[j]), orders_[j]);
    return index_of(c);
  }

  std::size_t conj_index(std::size_t i) const { return power_index(i, -1); }

  std::size_t product_index(std::size_t i, std::size_t j) const {
    std::vector<std::int64_t> c = chars_.at(i).coords;
    const auto& d = chars_.at(j).coords;
    for (size_t k = 0; k < c.size(); ++k) c[k] = mod(c[k] + d[k], orders_[k]);
    return index_of(c);
  }

  /// Member whose values agree with `exponent_of(r)` on the generators. The
  /// callback returns chi(g) as (exponent, order) for a generator g.
  template <typename F>
  std::size_t index_from_generator_values(F&& value_at) const {
    std::vector<std::int64_t> c(orders_.size());
    for (size_t i = 0; i < orders_.size(); ++i) {
      CharValue v = value_at(gens_[i]);
      if (v.zero) throw PreconditionError("index_from_generator_values: character vanishes at a generator");
      // e^{2 pi i t/d} = e^{2 pi i c/n}  =>  c = t n / d
      const std::int64_t num = v.exponent * orders_[i];
      if (num % v.order != 0) throw PreconditionError("index_from_generator_values: value is not a character of this group");
      c[i] = mod(num / v.order, orders_[i]);
    }
    return index_of(c);
  }

 private:
  void build_components() {
    for (auto [p, alpha] : factorize(modulus_)) {
      std::int64_t pa = 1;
      for (int i = 0; i < alpha; ++i) pa *= p;
      const std::int64_t rest = modulus_ / pa;
      auto lift = [&](std::int64_t g_local) {
        // G = g (mod p^alpha), G = 1 (mod rest)
        for (std::int64_t j = 0; j < rest; ++j) {
          const std::int64_t G = g_local + j * pa;
          if (G % rest == 1 % rest) return G % modulus_;
        }
        throw PreconditionError("character_group: CRT lift failed");
      };
      if (p == 2) {
        if (alpha == 1) continue;
        gens_.push_back(lift(pa - 1));
        orders_.push_back(2);
        if (alpha >= 3) {
          gens_.push_back(lift(5));
          orders_.push_back(pa / 4);
        }
      } else {
        gens_.push_back(lift(detail::primitive_root_prime_power(p, alpha)));
        orders_.push_back(pa / p * (p - 1));
      }
    }
    exponent_ = 1;
    for (auto n : orders_) exponent_ = std::lcm(exponent_, n);
  }

  void build_dlog() {
    const size_t s = orders_.size();
    dlog_.assign(static_cast<size_t>(modulus_), {});
    size_t total = 1;
    for (auto n : orders_) total *= static_cast<size_t>(n);
    std::vector<std::int64_t> e(s, 0);
    for (size_t idx = 0; idx < total; ++idx) {
      size_t rem = idx;
      std::int64_t r = 1 % modulus_;
      for (size_t i = s; i-- > 0;) {
        e[i] = static_cast<std::int64_t>(rem % static_cast<size_t>(orders_[i]));
        rem /= static_cast<size_t>(orders_[i]);
        r = r * powmod(gens_[i], e[i], modulus_) % modulus_;
      }
      dlog_[static_cast<size_t>(r)] = e;
    }
  }

  void build_characters() {
    const size_t s = orders_.size();
    size_t total = 1;
    for (auto n : orders_) total *= static_cast<size_t>(n);
    chars_.reserve(total);
    std::vector<std::int64_t> c(s, 0);
    for (size_t idx = 0; idx < total; ++idx) {
      // coords from mixed radix (first component most significant)
      size_t rem = idx;
      for (size_t i = s; i-- > 0;) {
        c[i] = static_cast<std::int64_t>(rem % static_cast<size_t>(orders_[i]));
        rem /= static_cast<size_t>(orders_[i]);
      }
      chars_.push_back(make_character(c, idx));
    }
  }

  Character make_character(const std::vector<std::int64_t>& c, std::size_t idx) const {
    Character chi;
    chi.modulus = modulus_;
    chi.index = idx;
    chi.coords = c;
    std::int64_t d = 1;
    for (size_t i = 0; i < c.size(); ++i) d = std::lcm(d, orders_[i] / std::gcd(c[i], orders_[i]));
    chi.order = d;
    chi.exponent.assign(static_cast<size_t>(modulus_), -1);
    for (std::int64_t r = 0; r < modulus_; ++r) {
      if (std::gcd(r, modulus_) != 1) continue;
      const auto& e = dlog_[static_cast<size_t>(r)];
      std::int64_t tD = 0;
      for (size_t i = 0; i < c.size(); ++i) tD = mod(tD + c[i] * e[i] % orders_[i] * (exponent_ / orders_[i]), exponent_);
      chi.exponent[static_cast<size_t>(r)] = tD / (exponent_ / d);
    }
    const std::int64_t t_minus_one = chi.exponent[static_cast<size_t>(mod(-1, modulus_))];
    chi.parity = (t_minus_one == 0) ? 0 : 1;
    chi.conductor = conductor(chi);
    chi.primitive = chi.conductor == modulus_;
    return chi;
  }

  std::int64_t modulus_;
  std::vector<std::int64_t> gens_;
  std::vector<std::int64_t> orders_;
  std::int64_t exponent_ = 1;
  std::vector<std::vector<std::int64_t>> dlog_;
  std::vector<Character> chars_;
};

inline CharGroup character_group(std::int64_t q) { return CharGroup(q); }

inline const Character& char_power(const CharGroup& group, const Character& chi, std::int64_t k) {
  if (chi.modulus != group.modulus()) throw PreconditionError("char_power: character is not a member of this group");
  return group[group.power_index(chi.index, k)];
}

inline const Character& char_conj(const CharGroup& group, const Character& chi) {
  return group[group.conj_index(chi.index)];
}

/// The primitive character mod conductor(chi) inducing chi.
inline Character induced_primitive(const Character& chi) {
  if (chi.primitive) return chi;
  const std::int64_t f = chi.conductor;
  const std::int64_t q = chi.modulus;
  CharGroup small(f);
  auto value_at = [&](std::int64_t g) {
    for (std::int64_t n = g; n < g + q * f + 1; n += f)
      if (std::gcd(n, q) == 1) return eval_char(chi, n);
    throw PreconditionError("induced_primitive: no coprime lift");
  };
  return small[small.index_from_generator_values(value_at)];
}

}  // namespace mertens

#endif  // MERTENS_CHARGROUP_HPP
