#ifndef MERTENS_VERIFY_HPP
#define MERTENS_VERIFY_HPP

// Identity checks over computed constants:
//
//   prod_{(a, q) = 1} C(q, a) = e^{-gamma} q / phi(q)
//   C(q1, a) = prod_{0 <= j < q2/q1, (a + j q1, q2) = 1} C(q2, a + j q1) * prod_{p | q2, p = a (q1)} (1 - 1/p)
//
// Tolerances come from the stored error bounds: a product of values with
// relative errors r_i is off by at most |prod| (exp(sum r_i) - 1).

#include "mertens/errors.hpp"
#include "mertens/mpcore.hpp"
#include "mertens/record.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace mertens {

enum class IdentityKind { ProductOverA, Subprogression };

inline const char* to_string(IdentityKind k) { return k == IdentityKind::ProductOverA ? "product-over-a" : "subprogression"; }

struct IdentityCheck {
  IdentityKind kind = IdentityKind::ProductOverA;
  std::int64_t q1 = 0;  // q for product-over-a
  std::int64_t q2 = 0;
  std::int64_t a = 0;
  Real discrepancy;
  Real tolerance;
  /// discrepancy / |right-hand side|
  Real relative;
  bool pass = false;
};

struct VerificationReport {
  std::vector<IdentityCheck> checks;
  std::size_t passed = 0;
  std::size_t failed = 0;
  /// Closed-form identity counts for the requested qmax.
  std::int64_t identity_total = 0;
  std::int64_t identity_independent = 0;

  bool ok() const { return failed == 0; }
};

struct IdentityEnumeration {
  std::int64_t total = 0;
  std::int64_t independent = 0;
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> triples;  // (q1, q2, a)
};

inline IdentityEnumeration enumerate_identities(std::int64_t qmax) {
  if (qmax < 3) throw PreconditionError("enumerate_identities: qmax must be >= 3");
  IdentityEnumeration out;
  for (std::int64_t q2 = 3; q2 <= qmax; ++q2) {
    out.total += q2 - 1 - euler_phi(q2);
    for (std::int64_t p : prime_divisors(q2))
      if (p < q2) out.independent += euler_phi(q2 / p);
    for (std::int64_t q1 : divisors(q2)) {
      if (q1 == 1 || q1 == q2) continue;
      for (std::int64_t a = 1; a <= q1; ++a)
        if (coprime(a, q1)) out.triples.emplace_back(q1, q2, a);
    }
  }
  return out;
}

namespace detail {

struct Operand {
  Real value;
  Real rel;  // relative error bound, including the truncation of the string
};

inline Operand operand(const ResultRecord& r, mpfr_prec_t prec) {
  Real v(r.value, prec);
  if (!(v.sign() > 0)) throw PreconditionError("verify: non-positive value for (" + std::to_string(r.q) + ", " + std::to_string(r.a) + ")");
  Real err(r.error_bound, prec);
  err += pow10(-fraction_digits(r.value), prec);
  return Operand{v, err / v};
}

inline mpfr_prec_t common_bits(const std::vector<const ResultRecord*>& rs) {
  mpfr_prec_t bits = 64;
  for (const auto* r : rs) bits = std::max(bits, record_bits(*r));
  return bits;
}

inline IdentityCheck finish(IdentityCheck c, const Real& lhs, const Real& rhs, const Real& tolerance) {
  c.discrepancy = abs(lhs - rhs);
  c.tolerance = tolerance;
  c.relative = c.discrepancy / abs(rhs);
  c.pass = c.discrepancy <= c.tolerance;
  return c;
}

/// One record per residue of q, with the most certified digits when several exist.
inline std::map<std::int64_t, const ResultRecord*> residues_of(const std::vector<ResultRecord>& records, std::int64_t q) {
  std::map<std::int64_t, const ResultRecord*> out;
  for (const auto& r : records) {
    if (r.q != q) continue;
    auto [it, fresh] = out.emplace(r.a, &r);
    if (!fresh && r.certified_digits > it->second->certified_digits) it->second = &r;
  }
  return out;
}

inline bool covers(const std::map<std::int64_t, const ResultRecord*>& by_a, std::int64_t q) {
  for (std::int64_t a = 1; a < q; ++a)
    if (coprime(a, q) && !by_a.count(a)) return false;
  return true;
}

}  // namespace detail

/// prod_a C(q, a) against e^{-gamma} q / phi(q). `results` must cover every
/// residue coprime to q.
inline IdentityCheck check_product_over_a(const std::vector<ResultRecord>& results, std::int64_t q) {
  const auto by_a = detail::residues_of(results, q);
  if (!detail::covers(by_a, q)) throw PreconditionError("check_product_over_a: results do not cover every residue mod " + std::to_string(q));
  std::vector<const ResultRecord*> used;
  for (const auto& [a, r] : by_a)
    if (coprime(a, q)) used.push_back(r);
  const mpfr_prec_t prec = detail::common_bits(used);

  Real prod(1, prec);
  Real rel_sum(0, prec);
  for (const auto* r : used) {
    auto op = detail::operand(*r, prec);
    prod *= op.value;
    rel_sum += op.rel;
  }
  Real rhs = exp(-const_euler(prec)) * static_cast<long>(q) / static_cast<long>(euler_phi(q));
  Real tol = abs(prod) * (exp(rel_sum) - 1) + pow10(-(prec * 3 / 10 - 5), prec);
  IdentityCheck c;
  c.kind = IdentityKind::ProductOverA;
  c.q1 = q;
  return detail::finish(std::move(c), prod, rhs, tol);
}

inline IdentityCheck check_subprogression(std::int64_t q1, std::int64_t q2, std::int64_t a, const std::vector<ResultRecord>& results) {
  if (!(1 < q1 && q1 < q2) || q2 % q1 != 0) throw PreconditionError("check_subprogression: need q1 | q2 with 1 < q1 < q2");
  if (!coprime(a, q1)) throw PreconditionError("check_subprogression: a must be coprime to q1");
  a = mod(a, q1);
  const auto lhs_by_a = detail::residues_of(results, q1);
  const auto rhs_by_a = detail::residues_of(results, q2);
  auto lhs_it = lhs_by_a.find(mod(a, q1));
  if (lhs_it == lhs_by_a.end()) throw PreconditionError("check_subprogression: missing C(" + std::to_string(q1) + ", " + std::to_string(a) + ")");

  std::vector<const ResultRecord*> rhs_records;
  for (std::int64_t j = 0; j < q2 / q1; ++j) {
    const std::int64_t b = a + j * q1;
    if (!coprime(b, q2)) continue;
    auto it = rhs_by_a.find(mod(b, q2));
    if (it == rhs_by_a.end()) throw PreconditionError("check_subprogression: missing C(" + std::to_string(q2) + ", " + std::to_string(b) + ")");
    rhs_records.push_back(it->second);
  }
  std::vector<const ResultRecord*> all = rhs_records;
  all.push_back(lhs_it->second);
  const mpfr_prec_t prec = detail::common_bits(all);

  auto lhs = detail::operand(*lhs_it->second, prec);
  Real rhs(1, prec);
  Real rel_sum(0, prec);
  for (const auto* r : rhs_records) {
    auto op = detail::operand(*r, prec);
    rhs *= op.value;
    rel_sum += op.rel;
  }
  for (std::int64_t p : prime_divisors(q2))
    if (mod(p - a, q1) == 0) rhs *= Real(1, prec) - Real(Rational(1, static_cast<unsigned long>(p)), prec);

  Real tol = abs(rhs) * (exp(rel_sum) - 1) + lhs.value * lhs.rel + pow10(-(prec * 3 / 10 - 5), prec);
  IdentityCheck c;
  c.kind = IdentityKind::Subprogression;
  c.q1 = q1;
  c.q2 = q2;
  c.a = a;
  return detail::finish(std::move(c), lhs.value, rhs, tol);
}

/// Every product-over-a check for fully covered q <= qmax, and every
/// enumerable subprogression identity whose moduli are both fully covered.
inline VerificationReport verify_records(const std::vector<ResultRecord>& records, std::int64_t qmax) {
  VerificationReport report;
  const auto counts = enumerate_identities(std::max<std::int64_t>(qmax, 3));
  report.identity_total = counts.total;
  report.identity_independent = counts.independent;

  std::map<std::int64_t, bool> covered;
  for (const auto& r : records)
    if (r.q <= qmax && !covered.count(r.q)) covered[r.q] = detail::covers(detail::residues_of(records, r.q), r.q);

  auto add = [&](IdentityCheck c) {
    (c.pass ? report.passed : report.failed) += 1;
    report.checks.push_back(std::move(c));
  };
  for (const auto& [q, full] : covered)
    if (full) add(check_product_over_a(records, q));
  for (const auto& [q1, q2, a] : counts.triples) {
    auto i1 = covered.find(q1);
    auto i2 = covered.find(q2);
    if (i1 == covered.end() || i2 == covered.end() || !i1->second || !i2->second) continue;
    add(check_subprogression(q1, q2, a, records));
  }
  return report;
}

}  // namespace mertens

#endif  // MERTENS_VERIFY_HPP
