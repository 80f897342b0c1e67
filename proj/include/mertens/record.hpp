#ifndef MERTENS_RECORD_HPP
#define MERTENS_RECORD_HPP

// The persisted form of a MertensResult: decimal strings only, so a record
// read back from disk is bit-identical to the one written.

#include "mertens/mertens.hpp"

#include <cstdint>
#include <string>
#include <tuple>

namespace mertens {

inline constexpr const char* kToolVersion = "mertens-cpp 1.0.0";

struct ResultRecord {
  std::int64_t q = 0;
  std::int64_t a = 0;
  std::string value;
  std::string error_bound;
  long certified_digits = 0;
  ComputeParams params;
  double wall_time_s = 0.0;
  std::string tool_version = kToolVersion;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;

  /// Dedup key: (q, a, params).
  auto key() const { return std::make_tuple(q, a, params.P, params.K, params.M, params.N, params.T); }
};

inline ResultRecord to_record(const MertensResult& r) {
  ResultRecord rec;
  rec.q = r.q;
  rec.a = r.a;
  rec.value = r.value;
  rec.error_bound = r.error_bound;
  rec.certified_digits = r.certified_digits;
  rec.params = r.params;
  rec.wall_time_s = r.wall_time;
  return rec;
}

/// Digits after the decimal point in a fixed-point string.
inline long fraction_digits(const std::string& s) {
  const auto dot = s.find('.');
  return dot == std::string::npos ? 0 : static_cast<long>(s.size() - dot - 1);
}

/// Precision that holds the record's value string exactly enough to
/// reproduce every stored digit.
inline mpfr_prec_t record_bits(const ResultRecord& r) { return bits_for_digits(fraction_digits(r.value) + 10); }

}  // namespace mertens

#endif  // MERTENS_RECORD_HPP
