// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "mertens/bernoulli.hpp"
#include "mertens/lfunc.hpp"
#include "mertens/mertens.hpp"
#include "mertens/record.hpp"
#include "mertens/verify.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace mertens;

namespace {

using Golden = std::map<std::int64_t, std::string>;

const std::map<std::int64_t, Golden> kTier1 = {
    {3, {{1, "1.4034774468278563951360958591826816440307"}, {2, "0.6000732161773216733074128367849176047200"}}},
    {4, {{1, "1.2923041571286886071091383898704320653429"}, {3, "0.8689277682343238299091527791046529122939"}}},
    {5,
     {{1, "1.2252384385390845800576097747492205275405"},
      {2, "0.5469758454112634802383012874308140377519"},
      {3, "0.8059510404482678640573768602784309320812"},
      {4, "1.2993645479149779881608400149642659095025"}}},
    {9,
     {{1, "1.1738495868654491902701394683919739604995"},
      {2, "0.5455303829342851960446307443914437164832"},
      {4, "1.1336038613343693249917335959075962374233"},
      {5, "0.9412310917798332515572574704874703583166"},
      {7, "1.0547066156548587451082819988401491024340"},
      {8, "1.1686623008402869661248081381642176283145"}}},
    {15,
     {{1, "1.1617073088517756555676638861655356817964"},
      {2, "0.5531662836641193792434413294289420522197"},
      {4, "1.1368510737193937042392719219836177668605"},
      {7, "0.9888090824844727678176951687669703243697"},
      {8, "1.1248826700801117041084787027689447040760"},
      {11, "1.0546877248711663022320456767412694068618"},
      {13, "1.0747134726382660587745323674368168616132"},
      {14, "1.1429505393911402552425384830238885435764"}}},
    {21,
     {{1, "1.1141670280743936828731735756576813156065"},
      {2, "0.5383301255587159174351133305605833477678"},
      {4, "1.1185837991946284893102162561180399170905"},
      {5, "0.8804463747350350872193530732768812838973"},
      {8, "1.0809444954913878156248769107211013330026"},
      {10, "1.0855302392682037293388720447231438521276"},
      {11, "1.0128344672130266463968855892485398266065"},
      {13, "1.0371155725767642823358797876916780548258"},
      {16, "1.1035547306497255785825571380877055652196"},
      {17, "1.0486412692857397440465915448981610476825"},
      {19, "1.0574758123265342759648524359814135750529"},
      {20, "1.1027671924237418176511972126578877947364"}}},
};

const Golden kQ39 = {
    {1, "1.0558043473142841979273107487867952159449"},  {2, "0.5203026628809482277529964233919621231701"},
    {4, "1.0467551202397323195593324251885584436643"},  {5, "0.8477108709928609050405112584700448177533"},
    {7, "0.9131634445753290856338897033232908456824"},  {8, "1.0491976120090375508070956898591030898489"},
    {10, "1.0644889181790139210569905090072544013982"}, {11, "0.9611802851802015744645440449091664544815"},
    {14, "1.0471282217602293552090665345631733882042"}, {16, "1.0694449785599316393966557136726680120488"},
    {17, "1.0027080336857767080150127190485342860222"}, {19, "1.0063790089466405557887479935647072297591"},
    {20, "1.0467993224064620442361201103591601719183"}, {22, "1.0521884311669460927257333479303503936214"},
    {23, "1.0114747946261577434516887836293420101981"}, {25, "1.0597693417994788378992764465883123963780"},
    {28, "1.0529671095629036217092386664444649064610"}, {29, "1.0267423753797454160121131413618162768076"},
    {31, "1.0297283934645776984576326942483733223668"}, {32, "1.0482866374125031516972329668035300513497"},
    {34, "1.0472581549429544593781995140831083054063"}, {35, "1.0562593819557667826211305540931669587921"},
    {37, "1.0385638656749415055234884100430210797446"}, {38, "1.0674150481593719996424991312912670083485"},
};

const Golden kQ84 = {
    {1, "1.0762168747360169189445984481112147917766"},  {5, "0.8423464320992898808305526411222358430753"},
    {11, "0.9670462929845278524311619985091112662169"}, {13, "0.9746953940834972813365085898448043371424"},
    {17, "0.9978335235521385853486954919220491056500"}, {19, "1.0042721918535182457015722654932145385404"},
    {23, "1.0128902359146896167524723309894756202191"}, {25, "1.0625109746049189658962532302336200526631"},
    {29, "1.0217856732501917185719533836132834670012"}, {31, "1.0324778423499473481419749332801549343076"},
    {37, "1.0448633446823406686188909998297275362347"}, {41, "1.0483511545557197512968002104563579599259"},
    {43, "1.0352625518417795493214543003655548678836"}, {47, "1.0452307283367875092541042542165185077145"},
    {53, "1.0473484822398583732227792995221792774100"}, {55, "1.0640407032516661060398721577715786126086"},
    {59, "1.0509180585081298515408918851194537493615"}, {61, "1.0529772913206146375443030010561915545034"},
    {65, "1.0629584657266981779431184953028111293016"}, {67, "1.0527738780397628191309530077617335181157"},
    {71, "1.0578974865179095395282678213164071324168"}, {73, "1.0513835694502728488866738616694632680665"},
    {79, "1.0561713512739106221130859861434109044623"}, {83, "1.0519063079499187595778933301342325552061"},
};

const PrecisionContext& ctx100() {
  static const PrecisionContext ctx = make_context(100);
  return ctx;
}

/// Every residue of q at 100 digits, computed once.
const std::vector<MertensResult>& run100(std::int64_t q) {
  static std::map<std::int64_t, std::vector<MertensResult>> cache;
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, compute_all_residues(q, choose_params(q, 100), ctx100())).first;
  return it->second;
}

/// Compares the first 40 fraction digits of each residue with the table.
bool matches_table(std::int64_t q, const Golden& golden, std::ostream& why) {
  const auto& rs = run100(q);
  bool ok = rs.size() == golden.size();
  if (!ok) why << " q=" << q << " residue count " << rs.size();
  for (const auto& r : rs) {
    auto g = golden.find(r.a);
    if (g == golden.end()) {
      why << " unexpected a=" << r.a;
      ok = false;
      continue;
    }
    const std::string got = to_fixed_truncated(r.value_real, 40);
    if (got != g->second) {
      why << " C(" << q << "," << r.a << ")=" << got;
      ok = false;
    }
    if (r.certified_digits < 100) {
      why << " C(" << q << "," << r.a << ") certified " << r.certified_digits;
      ok = false;
    }
  }
  return ok;
}

std::vector<ResultRecord> records_of(std::initializer_list<std::int64_t> qs) {
  std::vector<ResultRecord> out;
  for (auto q : qs)
    for (const auto& r : run100(q)) out.push_back(to_record(r));
  return out;
}

oracle::BruteCharacter as_brute(const Character& chi) { return {chi.modulus, chi.order, chi.exponent}; }

// ---- criteria ----

bool crit_tier1_tables(std::ostream& why) {
  bool ok = true;
  for (const auto& [q, g] : kTier1) ok &= matches_table(q, g, why);
  return ok;
}

bool crit_table_q39(std::ostream& why) { return matches_table(39, kQ39, why); }

bool crit_table_q84(std::ostream& why) { return matches_table(84, kQ84, why); }

bool crit_identities(std::ostream& why) {
  const auto recs = records_of({3, 4, 5, 7, 9, 15, 21});
  bool ok = true;
  for (std::int64_t q : {3, 4, 5, 9, 15, 21}) {
    auto c = check_product_over_a(recs, q);
    const bool good = c.pass && c.relative.to_double() <= 1e-95;
    if (!good) why << " product q=" << q << " rel=" << c.relative.to_sci(3);
    ok &= good;
  }
  const std::vector<std::pair<std::int64_t, std::int64_t>> pairs = {{3, 9}, {3, 15}, {5, 15}, {3, 21}, {7, 21}};
  for (auto [q1, q2] : pairs) {
    for (std::int64_t a = 1; a < q1; ++a) {
      if (!coprime(a, q1)) continue;
      auto c = check_subprogression(q1, q2, a, recs);
      const bool good = c.pass && c.relative.to_double() <= 1e-95;
      if (!good) why << " (" << q1 << "," << q2 << "," << a << ") rel=" << c.relative.to_sci(3);
      ok &= good;
    }
  }
  return ok;
}

bool crit_identity_counts(std::ostream& why) {
  const auto start = std::chrono::steady_clock::now();
  const auto e = enumerate_identities(100);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  why << " total=" << e.total << " independent=" << e.independent << " time=" << secs << "s";
  if (e.independent != 1408) {
    // the closed form sum_{q<=100} sum_{p|q, p<q} phi(q/p) is what is implemented;
    // 1408 is that sum plus pi(100) phi(1) = 25 terms with q1 = q2
    std::int64_t n1 = static_cast<std::int64_t>(primes_upto(100).size());
    why << " (expected 1408; the implemented closed form gives " << e.independent << ", and adding the n = 1 term pi(100) phi(1) = " << n1
        << " gives " << e.independent + n1 << ")";
  }
  return e.total == 1907 && e.independent == 1408 && static_cast<std::int64_t>(e.triples.size()) == e.total && secs < 1.0;
}

bool crit_l_values(std::ostream& why) {
  bool ok = true;
  {
    // direct Hurwitz oracle, 30 digits
    auto ctx = make_context(40);
    for (std::int64_t q = 3; q <= 12; ++q) {
      LFunctionEngine engine(q, EMSchedule{q * (600 / q + 1), 60}, ctx);
      const CharGroup group(q);
      for (const auto& chi : group.characters()) {
        if (chi.is_principal()) continue;
        for (long n = 2; n <= 6; ++n) {
          Complex got = engine.l_value(chi, n).value;
          Complex ref = oracle::l_value(as_brute(chi), n, ctx.bits());
          if (!(abs(got - ref) <= abs(ref) * ctx.epsilon(30))) {
            why << " oracle q=" << q << " chi=" << chi.index << " n=" << n;
            ok = false;
          }
        }
      }
    }
  }
  {
    // closed form vs Euler-Maclaurin at 50 working digits
    auto ctx = make_context(20);
    const Real tol = ctx.epsilon(45);
    for (std::int64_t q = 3; q <= 20; ++q) {
      const CharGroup group(q);
      for (const auto& chi : group.characters()) {
        if (!chi.primitive || chi.is_principal()) continue;
        for (long n = 1; n <= 6; ++n) {
          if ((n - chi.parity) % 2 != 0) continue;
          Complex exact = l_exact_matching_parity(chi, n, ctx);
          // long enough that the remainder bound sits below the 50-digit tolerance
          auto em = l_euler_maclaurin(chi, n, q * (2000 / q + 1), 40, ctx);
          if (!(abs(exact - em.value) <= em.error_bound + tol && abs(exact - em.value) <= tol)) {
            why << " exact/EM q=" << q << " chi=" << chi.index << " n=" << n;
            ok = false;
          }
        }
      }
    }
  }
  return ok;
}

bool crit_root_numbers(std::ostream& why) {
  auto ctx = make_context(40);
  const Real tol = ctx.epsilon(50);
  bool ok = true;
  for (std::int64_t q = 3; q <= 30; ++q) {
    const CharGroup group(q);
    for (const auto& chi : group.characters()) {
      if (!chi.primitive) continue;
      Complex w = root_number(chi, ctx);
      Complex wt = root_number_theta(chi, ctx);
      bool good = abs(w - wt) < tol && abs(abs(w) - 1) < tol;
      if (chi.is_real()) good = good && abs(w.re - 1) < tol && abs(w.im) < tol;
      if (!good) why << " q=" << q << " chi=" << chi.index;
      ok &= good;
    }
  }
  return ok;
}

bool crit_error_ledger(std::ostream& why) {
  bool ok = true;
  for (std::int64_t q : {3, 7}) {
    const auto ctx = make_context(50);
    const PrecisionContext guarded(50, 50 + 60);
    const auto params = choose_params(q, 50);
    const auto base = compute_all_residues(q, params, ctx);
    const auto fine = compute_all_residues(q, params, guarded);
    for (std::size_t i = 0; i < base.size(); ++i) {
      Real diff = abs(base[i].value_real.with_prec(guarded.bits()) - fine[i].value_real);
      if (!(diff < base[i].error_real) || base[i].certified_digits < 50) {
        why << " guard q=" << q << " a=" << base[i].a << " diff=" << diff.to_sci(3) << " bound=" << base[i].error_real.to_sci(3);
        ok = false;
      }
    }
  }
  // each a-priori term strictly decreases in its own truncation parameter
  const std::int64_t q = 7, P = 1344;
  const Real U(Rational(1, 2), 128);
  auto decreasing = [](const std::vector<Real>& v) { return v[1] < v[0] && v[2] < v[1]; };
  std::vector<Real> e1, e2, e4;
  for (long step = 0; step < 3; ++step) {
    e1.push_back(error_e1(q, P, 10 + 2 * step));
    e2.push_back(error_e2(q, P, 10 + 2 * step));
    e4.push_back(error_e4(q, ComputeParams{P, 10, 10, 700 + 70 * step, 20}, U));
  }
  if (!decreasing(e1)) why << " E1 not decreasing in K";
  if (!decreasing(e2)) why << " E2 not decreasing in M";
  if (!decreasing(e4)) why << " E4 not decreasing in N";
  ok = ok && decreasing(e1) && decreasing(e2) && decreasing(e4);
  return ok;
}

/// Is sum_t counts[t] zeta_E^t zero in Q(zeta_E)?
bool vanishes(std::vector<Integer> counts, std::int64_t E) {
  for (const auto& c : cyclotomic_reduce(std::move(counts), E))
    if (c != 0) return false;
  return true;
}

bool crit_character_group(std::ostream& why) {
  bool ok = true;
  auto fail = [&](const std::string& what) {
    why << " " << what;
    ok = false;
  };
  for (std::int64_t q = 1; q <= 200; ++q) {
    CharGroup g(q);
    if (static_cast<std::int64_t>(g.size()) != euler_phi(q)) fail("size q=" + std::to_string(q));
    int principal = 0;
    for (const auto& chi : g.characters()) {
      principal += chi.is_principal();
      const bool good = euler_phi(q) % chi.order == 0 && q % chi.conductor == 0 && chi.primitive == (chi.conductor == q) &&
                        char_power(g, chi, chi.order).is_principal() && chi.conductor == conductor(chi) &&
                        (q % 4 != 2 || !chi.primitive);
      if (!good) fail("q=" + std::to_string(q) + " chi=" + std::to_string(chi.index));
    }
    if (principal != 1) fail("principal count q=" + std::to_string(q));
  }
  // orthogonality, exactly in Q(zeta_E)
  for (std::int64_t q = 2; q <= 30; ++q) {
    CharGroup g(q);
    const std::int64_t E = g.exponent();
    auto lifted = [&](const Character& chi, std::int64_t r) { return chi.exponent_at(r) * (E / chi.order); };
    for (const auto& chi : g.characters()) {
      if (chi.is_principal()) continue;
      std::vector<Integer> counts(static_cast<std::size_t>(E), Integer(0));
      for (std::int64_t a = 1; a < q; ++a)
        if (coprime(a, q)) counts[static_cast<std::size_t>(lifted(chi, a))] += 1;
      if (!vanishes(counts, E)) fail("sum over a, q=" + std::to_string(q));
    }
    for (std::int64_t a = 1; a < q; ++a) {
      if (!coprime(a, q) || a == 1) continue;
      std::vector<Integer> counts(static_cast<std::size_t>(E), Integer(0));
      for (const auto& chi : g.characters()) counts[static_cast<std::size_t>(lifted(chi, a))] += 1;
      if (!vanishes(counts, E)) fail("sum over chi, q=" + std::to_string(q) + " a=" + std::to_string(a));
    }
  }
  // conductors and primitivity against brute-force enumeration
  for (std::int64_t q = 1; q <= 24; ++q) {
    CharGroup g(q);
    const auto brute = oracle::all_characters(q);
    std::multiset<std::pair<std::int64_t, std::int64_t>> lib, ref;
    for (const auto& chi : g.characters()) lib.insert({chi.order, chi.conductor});
    for (const auto& c : brute) ref.insert({c.order, oracle::conductor_by_periodicity(c)});
    if (brute.size() != g.size() || lib != ref) fail("brute force q=" + std::to_string(q));
  }
  return ok;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "tier-1 moduli 3,4,5,9,15,21 match tabulated digits, >= 100 certified", crit_tier1_tables},
      {2, "q = 39 matches table", crit_table_q39},
      {3, "q = 84 matches table", crit_table_q84},
      {4, "product and subprogression identities hold to 1e-95", crit_identities},
      {5, "identity counts 1907 / 1408 for q <= 100 in under 1 s", crit_identity_counts},
      {6, "L-values: Hurwitz oracle (q <= 12) and closed form vs Euler-Maclaurin (q <= 20)", crit_l_values},
      {7, "root numbers: Gauss vs theta, unit modulus, W = 1 for real characters", crit_root_numbers},
      {8, "error ledger: +60 guard recompute within bound, a-priori terms monotone", crit_error_ledger},
      {9, "character group: orthogonality, size phi(q) to 200, conductors vs brute force", crit_character_group},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::ostringstream why;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      why << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s (%.1fs)%s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs, ok ? "" : why.str().c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
