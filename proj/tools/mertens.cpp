// mertens: compute and verify the constants C(q, a).
//
//   mertens characters --q Q
//   mertens compute --q Q [--a A] [--digits D] [--out PATH] [--params P,K,M,N,T]
//   mertens verify --results PATH [--qmax Q] [--report PATH]
//
// Relative paths resolve against $MERTENS_WORKDIR when it is set.
//
// Exit codes: 0 ok, 2 bad input, 3 error budget not met, 4 verification
// failed, 5 numerical failure (branch safety, vanishing L-value).

#include "mertens/chargroup.hpp"
#include "mertens/mertens.hpp"
#include "mertens/record.hpp"
#include "mertens/store.hpp"
#include "mertens/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mertens;

namespace {

enum Exit : int { kOk = 0, kUsage = 2, kBudget = 3, kVerify = 4, kNumerical = 5 };

fs::path resolve(const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return path;
  if (const char* wd = std::getenv("MERTENS_WORKDIR"); wd && *wd) return fs::path(wd) / path;
  return path;
}

/// Value truncated to `digits` decimals, cut from the stored string.
std::string shown(const std::string& value, long digits) {
  const auto dot = value.find('.');
  if (dot == std::string::npos || digits <= 0) return value.substr(0, dot);
  return value.substr(0, std::min(value.size(), dot + 1 + static_cast<std::size_t>(digits)));
}

void print_row(const ResultRecord& r, bool cached) {
  std::cout << std::setw(4) << r.q << " " << std::setw(4) << r.a << "  " << shown(r.value, std::min(40L, r.certified_digits)) << "  "
            << r.certified_digits << (cached ? "  (cached)" : "") << "\n";
}

int cmd_characters(std::int64_t q) {
  CharGroup group(q);
  const std::int64_t shown_residues = std::min<std::int64_t>(q, 12);
  std::cout << "index order conductor parity primitive  values on r = 0.." << shown_residues - 1 << " (t/d means e^{2 pi i t/d})\n";
  for (const auto& chi : group.characters()) {
    std::cout << std::setw(5) << chi.index << " " << std::setw(5) << chi.order << " " << std::setw(9) << chi.conductor << " "
              << std::setw(6) << chi.parity << " " << std::setw(9) << (chi.primitive ? "yes" : "no") << " ";
    for (std::int64_t r = 0; r < shown_residues; ++r) {
      const auto v = eval_char(chi, r);
      std::cout << " " << (v.zero ? std::string("0") : std::to_string(v.exponent) + "/" + std::to_string(v.order));
    }
    std::cout << "\n";
  }
  return kOk;
}

int cmd_compute(std::int64_t q, std::optional<std::int64_t> a, long digits, const std::string& out, const std::string& params_text) {
  if (q < 3) throw PreconditionError("compute: q must be >= 3");
  if (a && !coprime(*a, q)) throw PreconditionError("compute: gcd(" + std::to_string(*a) + ", " + std::to_string(q) + ") != 1");
  const PrecisionContext ctx = make_context(digits);
  std::vector<ComputeParams> schedule;
  if (!params_text.empty()) {
    schedule.push_back(parse_params(params_text));
    validate_params(q, schedule.front());
  } else {
    schedule = candidate_params(q, digits);
  }

  std::vector<std::int64_t> residues;
  if (a) {
    residues.push_back(mod(*a, q));
  } else {
    for (std::int64_t r = 1; r < q; ++r)
      if (coprime(r, q)) residues.push_back(r);
  }

  ResultsStore store(resolve(out));
  // resume: every residue already stored under some schedule we would use
  for (const auto& params : schedule) {
    std::vector<ResultRecord> hit;
    for (auto r : residues)
      if (auto rec = store.find(q, r, params); rec && rec->certified_digits >= digits) hit.push_back(*rec);
    if (hit.size() == residues.size()) {
      for (const auto& rec : hit) print_row(rec, true);
      std::cout << "0 new records appended to " << store.path().string() << "\n";
      return kOk;
    }
  }

  std::vector<MertensResult> results;
  for (const auto& params : schedule) {
    if (a) {
      results = {compute_constant(q, *a, params, ctx)};
    } else {
      results = compute_all_residues(q, params, ctx);
    }
    const bool met = std::all_of(results.begin(), results.end(), [&](const auto& r) { return r.certified_digits >= digits; });
    if (met) break;
    if (&params != &schedule.back()) std::cerr << "warning: schedule " << params.to_string() << " certified fewer than " << digits << " digits; escalating\n";
  }

  std::vector<ResultRecord> records;
  for (const auto& r : results) records.push_back(to_record(r));
  const std::size_t written = store.append(records);
  for (const auto& rec : records) print_row(rec, false);
  std::cout << written << " new records appended to " << store.path().string() << "\n";

  const bool met = std::all_of(records.begin(), records.end(), [&](const auto& r) { return r.certified_digits >= digits; });
  if (!met) {
    std::cerr << "error: error budget 10^-" << digits << " not met\n";
    return kBudget;
  }
  return kOk;
}

int cmd_verify(const std::string& results, std::int64_t qmax, const std::string& report_path) {
  const fs::path path = resolve(results);
  if (!fs::exists(path)) throw PreconditionError("verify: results file " + path.string() + " does not exist");
  const auto records = ResultsStore(path).load();
  if (records.empty()) std::cerr << "warning: " << path.string() << " holds no records; nothing to check\n";
  const VerificationReport report = verify_records(records, qmax);

  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << to_string(c.kind) << " ";
    if (c.kind == IdentityKind::ProductOverA)
      std::cout << "q=" << c.q1;
    else
      std::cout << "(" << c.q1 << ", " << c.q2 << ", " << c.a << ")";
    std::cout << "  discrepancy " << c.discrepancy.to_sci(3, MPFR_RNDU) << "  tolerance " << c.tolerance.to_sci(3, MPFR_RNDD) << "\n";
  }
  std::cout << report.passed << " passed, " << report.failed << " failed; identities up to q=" << qmax << ": " << report.identity_total
            << " total, " << report.identity_independent << " independent\n";

  if (!report_path.empty()) {
    const fs::path rp = resolve(report_path);
    if (rp.has_parent_path()) fs::create_directories(rp.parent_path());
    std::ofstream os(rp);
    if (!os) throw PreconditionError("verify: cannot write report " + rp.string());
    os << to_json(report).dump(2) << "\n";
  }
  return report.ok() ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mertens constants for primes in arithmetic progressions"};
  app.require_subcommand(1);

  std::int64_t q = 0;
  std::int64_t a = 0;
  long digits = 100;
  std::string out = "mertens_results.jsonl";
  std::string params;
  std::string results;
  std::int64_t qmax = 100;
  std::string report;

  auto* characters = app.add_subcommand("characters", "List the Dirichlet characters mod q");
  characters->add_option("--q", q, "modulus")->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{100000}));

  auto* compute = app.add_subcommand("compute", "Compute C(q, a) and append to the results store");
  compute->add_option("--q", q, "modulus")->required();
  auto* a_opt = compute->add_option("--a", a, "residue class (default: all)");
  compute->add_option("--digits", digits, "target decimal digits")->capture_default_str();
  compute->add_option("--out", out, "results store (JSON lines)")->capture_default_str();
  compute->add_option("--params", params, "override schedule as P,K,M,N,T");

  auto* verify = app.add_subcommand("verify", "Check the product and subprogression identities");
  verify->add_option("--results", results, "results store")->required();
  verify->add_option("--qmax", qmax, "largest modulus to check")->capture_default_str();
  verify->add_option("--report", report, "write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*characters) return cmd_characters(q);
    if (*compute) return cmd_compute(q, a_opt->count() ? std::optional<std::int64_t>(a) : std::nullopt, digits, out, params);
    if (*verify) return cmd_verify(results, qmax, report);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
