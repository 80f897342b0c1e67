#ifndef MERTENS_STORE_HPP
#define MERTENS_STORE_HPP

// Append-only results file, one JSON object per line:
//   {"q":3,"a":1,"value":"1.40...","error_bound":"8.11e-106","certified_digits":104,
//    "params":{"P":9600,"K":26,"M":26,"N":16803,"T":88},"wall_time_s":0.3,"tool_version":"..."}
// (q, a, params) is the dedup key.

#include "mertens/errors.hpp"
#include "mertens/record.hpp"
#include "mertens/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mertens {

inline nlohmann::ordered_json to_json(const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["q"] = r.q;
  j["a"] = r.a;
  j["value"] = r.value;
  j["error_bound"] = r.error_bound;
  j["certified_digits"] = r.certified_digits;
  j["params"] = {{"P", r.params.P}, {"K", r.params.K}, {"M", r.params.M}, {"N", r.params.N}, {"T", r.params.T}};
  j["wall_time_s"] = r.wall_time_s;
  j["tool_version"] = r.tool_version;
  return j;
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
  ResultRecord r;
  r.q = j.at("q").get<std::int64_t>();
  r.a = j.at("a").get<std::int64_t>();
  r.value = j.at("value").get<std::string>();
  r.error_bound = j.at("error_bound").get<std::string>();
  r.certified_digits = j.at("certified_digits").get<long>();
  const auto& p = j.at("params");
  r.params = ComputeParams{p.at("P").get<std::int64_t>(), p.at("K").get<long>(), p.at("M").get<long>(), p.at("N").get<std::int64_t>(),
                           p.at("T").get<long>()};
  r.wall_time_s = j.at("wall_time_s").get<double>();
  r.tool_version = j.at("tool_version").get<std::string>();
  return r;
}

inline std::string serialize(const ResultRecord& r) { return to_json(r).dump(); }

inline ResultRecord parse_record(const std::string& line) {
  try {
    return record_from_json(nlohmann::json::parse(line));
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("results store: malformed record: ") + e.what());
  }
}

class ResultsStore {
 public:
  explicit ResultsStore(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  std::vector<ResultRecord> load() const {
    std::vector<ResultRecord> out;
    std::ifstream in(path_);
    if (!in) return out;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out.push_back(parse_record(line));
      } catch (const PreconditionError& e) {
        throw PreconditionError(path_.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    return out;
  }

  /// Existing record with the same key, if any.
  std::optional<ResultRecord> find(std::int64_t q, std::int64_t a, const ComputeParams& params) const {
    ResultRecord probe;
    probe.q = q;
    probe.a = a;
    probe.params = params;
    for (auto& r : load())
      if (r.key() == probe.key()) return r;
    return std::nullopt;
  }

  /// Appends records whose key is not yet present; returns how many were written.
  std::size_t append(const std::vector<ResultRecord>& records) {
    std::set<decltype(ResultRecord{}.key())> seen;
    for (const auto& r : load()) seen.insert(r.key());
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    if (!out) throw PreconditionError("results store: cannot open " + path_.string() + " for appending");
    std::size_t written = 0;
    for (const auto& r : records) {
      if (!seen.insert(r.key()).second) continue;
      out << serialize(r) << '\n';
      ++written;
    }
    out.flush();
    if (!out) throw PreconditionError("results store: write to " + path_.string() + " failed");
    return written;
  }

 private:
  std::filesystem::path path_;
};

inline nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json j;
  j["summary"] = {{"checked", report.checks.size()},
                  {"passed", report.passed},
                  {"failed", report.failed},
                  {"identity_total", report.identity_total},
                  {"identity_independent", report.identity_independent}};
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json e;
    e["kind"] = to_string(c.kind);
    if (c.kind == IdentityKind::ProductOverA) {
      e["q"] = c.q1;
    } else {
      e["q1"] = c.q1;
      e["q2"] = c.q2;
      e["a"] = c.a;
    }
    e["discrepancy"] = c.discrepancy.to_sci(6, MPFR_RNDU);
    e["tolerance"] = c.tolerance.to_sci(6, MPFR_RNDD);
    e["relative"] = c.relative.to_sci(6, MPFR_RNDU);
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

}  // namespace mertens

#endif  // MERTENS_STORE_HPP
