#include "mertens/bernoulli.hpp"
#include "mertens/chargroup.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace mertens;

namespace {

// Exponent of chi(r) written over a common denominator E.
std::int64_t lifted(const Character& chi, std::int64_t r, std::int64_t E) { return chi.exponent_at(r) * (E / chi.order); }

/// Is sum_t counts[t] zeta_E^t zero in Q(zeta_E)?
bool vanishes(std::vector<Integer> counts, std::int64_t E) {
  for (const auto& c : cyclotomic_reduce(std::move(counts), E))
    if (c != 0) return false;
  return true;
}

const Character* find_order(const CharGroup& g, std::int64_t d) {
  for (const auto& chi : g.characters())
    if (chi.order == d) return &chi;
  return nullptr;
}

}  // namespace

TEST(CharGroup, ModThree) {
  CharGroup g(3);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_TRUE(g.principal().is_principal());
  EXPECT_EQ(g.principal().conductor, 1);
  const Character& chi = g[1];
  EXPECT_EQ(chi.order, 2);
  EXPECT_EQ(chi.conductor, 3);
  EXPECT_EQ(chi.parity, 1);
  EXPECT_TRUE(chi.primitive);
  EXPECT_TRUE(eval_char(chi, 1).is_one());
  EXPECT_EQ(eval_char(chi, 2).exponent, 1);
  EXPECT_EQ(eval_char(chi, 5).exponent, 1);
  EXPECT_TRUE(eval_char(chi, 3).zero);
}

TEST(CharGroup, ModNineHasImprimitiveQuadraticCharacter) {
  CharGroup g(9);
  ASSERT_EQ(g.size(), 6u);
  const Character* chi = find_order(g, 2);
  ASSERT_NE(chi, nullptr);
  EXPECT_EQ(chi->conductor, 3);
  EXPECT_FALSE(chi->primitive);
  Character prim = induced_primitive(*chi);
  EXPECT_EQ(prim.modulus, 3);
  EXPECT_TRUE(prim.primitive);
  EXPECT_EQ(prim.order, 2);
  for (std::int64_t n = 1; n < 200; ++n)
    if (coprime(n, 9)) {
      EXPECT_EQ(eval_char(*chi, n).exponent, eval_char(prim, n).exponent) << n;
    }
}

TEST(CharGroup, DegenerateModuli) {
  for (std::int64_t q : {1, 2}) {
    CharGroup g(q);
    ASSERT_EQ(g.size(), 1u);
    EXPECT_TRUE(g.principal().is_principal());
    EXPECT_EQ(g.principal().conductor, 1);
  }
  EXPECT_THROW(CharGroup(0), PreconditionError);
}

TEST(CharGroup, OrderFourModFive) {
  CharGroup g(5);
  for (const auto& chi : g.characters()) {
    if (chi.order != 4 || eval_char(chi, 2).exponent != 1) continue;  // chi(2) = i
    EXPECT_EQ(eval_char(chi, 4).exponent, 2);                          // chi(4) = -1
    const Character& sq = char_power(g, chi, 2);
    EXPECT_EQ(sq.order, 2);
    for (std::int64_t r = 1; r < 5; ++r) EXPECT_EQ(sq.exponent_at(r) * 2 % 4, 2 * chi.exponent_at(r) % 4);
    return;
  }
  FAIL() << "no character with chi(2) = i";
}

TEST(CharGroup, PowersAndConjugates) {
  for (std::int64_t q = 3; q <= 60; ++q) {
    CharGroup g(q);
    for (const auto& chi : g.characters()) {
      EXPECT_EQ(char_power(g, chi, 1).index, chi.index);
      EXPECT_TRUE(char_power(g, chi, chi.order).is_principal());
      const Character& cj = char_conj(g, chi);
      for (std::int64_t r = 1; r < q; ++r) {
        if (!coprime(r, q)) continue;
        EXPECT_EQ(mod(cj.exponent_at(r) * (g.exponent() / cj.order) + lifted(chi, r, g.exponent()), g.exponent()), 0);
        const Character& c3 = char_power(g, chi, 3);
        EXPECT_EQ(lifted(c3, r, g.exponent()), mod(3 * lifted(chi, r, g.exponent()), g.exponent()));
      }
      // parity of chi^k is k e mod 2
      for (std::int64_t k = 0; k < 4; ++k) EXPECT_EQ(char_power(g, chi, k).parity, (k * chi.parity) % 2);
    }
  }
}

TEST(CharGroup, CharacterInvariants) {
  for (std::int64_t q = 1; q <= 60; ++q) {
    CharGroup g(q);
    std::set<std::vector<std::int64_t>> tables;
    int principal = 0;
    for (const auto& chi : g.characters()) {
      principal += chi.is_principal();
      tables.insert(chi.exponent);
      EXPECT_EQ(euler_phi(q) % chi.order, 0);
      EXPECT_EQ(q % chi.conductor, 0);
      EXPECT_EQ(chi.primitive, chi.conductor == q);
      for (std::int64_t r = 0; r < q; ++r) EXPECT_EQ(eval_char(chi, r).zero, !coprime(r, q) && q > 1);
      // complete multiplicativity in exponent arithmetic
      for (std::int64_t r = 1; r < q; ++r)
        for (std::int64_t s = 1; s < q; ++s)
          if (coprime(r * s, q)) {
            EXPECT_EQ(chi.exponent_at(r * s), (chi.exponent_at(r) + chi.exponent_at(s)) % chi.order);
          }
      // order is minimal
      for (std::int64_t k = 1; k < chi.order; ++k) EXPECT_FALSE(char_power(g, chi, k).is_principal());
      // chi(-1) = (-1)^e
      const std::int64_t tm1 = chi.exponent_at(-1);
      EXPECT_EQ(tm1, chi.parity == 0 ? 0 : chi.order / 2);
    }
    EXPECT_EQ(principal, 1);
    EXPECT_EQ(tables.size(), g.size());
    EXPECT_EQ(g[g.principal_index()].index, 0u);
  }
}

TEST(CharGroup, GroupSizeIsPhiUpTo200) {
  for (std::int64_t q = 1; q <= 200; ++q) EXPECT_EQ(static_cast<std::int64_t>(CharGroup(q).size()), oracle::phi(q)) << q;
}

TEST(CharGroup, ColumnOrthogonalityIsExact) {
  for (std::int64_t q = 2; q <= 60; ++q) {
    CharGroup g(q);
    for (const auto& chi : g.characters()) {
      if (chi.is_principal()) continue;
      std::vector<Integer> counts(static_cast<std::size_t>(chi.order), Integer(0));
      for (std::int64_t a = 1; a < q; ++a)
        if (coprime(a, q)) counts[static_cast<std::size_t>(chi.exponent_at(a))] += 1;
      EXPECT_TRUE(vanishes(counts, chi.order)) << "q=" << q << " chi=" << chi.index;
    }
  }
}

TEST(CharGroup, RowOrthogonalityIsExact) {
  for (std::int64_t q = 3; q <= 30; ++q) {
    CharGroup g(q);
    const std::int64_t E = g.exponent();
    for (std::int64_t a = 1; a < q; ++a) {
      if (!coprime(a, q)) continue;
      for (std::int64_t b = 1; b < q; ++b) {
        if (!coprime(b, q)) continue;
        std::vector<Integer> counts(static_cast<std::size_t>(E), Integer(0));
        for (const auto& chi : g.characters()) counts[static_cast<std::size_t>(mod(lifted(chi, a, E) - lifted(chi, b, E), E))] += 1;
        if (a == b) {
          EXPECT_EQ(counts[0], euler_phi(q));
        } else {
          EXPECT_TRUE(vanishes(counts, E)) << q << " " << a << " " << b;
        }
      }
    }
  }
}

TEST(CharGroup, AgreesWithBruteForceEnumeration) {
  for (std::int64_t q = 1; q <= 24; ++q) {
    CharGroup g(q);
    auto brute = oracle::all_characters(q);
    ASSERT_EQ(brute.size(), g.size()) << q;
    std::multiset<std::int64_t> orders_lib, orders_brute;
    std::multiset<std::pair<std::int64_t, std::int64_t>> cond_lib, cond_brute;
    for (const auto& chi : g.characters()) {
      orders_lib.insert(chi.order);
      cond_lib.insert({chi.order, chi.conductor});
      EXPECT_EQ(chi.conductor, conductor(chi));
    }
    for (const auto& c : brute) {
      orders_brute.insert(c.order);
      cond_brute.insert({c.order, oracle::conductor_by_periodicity(c)});
      // each brute character appears in the library group with the same values
      const auto idx = std::find_if(g.characters().begin(), g.characters().end(), [&](const Character& chi) {
        for (std::int64_t r = 0; r < q; ++r) {
          const std::int64_t t = chi.exponent[static_cast<std::size_t>(r)];
          const std::int64_t u = c.exponent[static_cast<std::size_t>(r)];
          if ((t < 0) != (u < 0)) return false;
          if (t >= 0 && t * c.order != u * chi.order) return false;
        }
        return true;
      });
      ASSERT_NE(idx, g.characters().end()) << "q=" << q;
      EXPECT_EQ(idx->conductor, oracle::conductor_by_periodicity(c)) << "q=" << q;
    }
    EXPECT_EQ(orders_lib, orders_brute) << q;
    EXPECT_EQ(cond_lib, cond_brute) << q;
  }
}

TEST(CharGroup, InducedPrimitiveAgreesOnCoprimeArguments) {
  for (std::int64_t q = 2; q <= 48; ++q) {
    CharGroup g(q);
    for (const auto& chi : g.characters()) {
      Character prim = induced_primitive(chi);
      EXPECT_EQ(prim.modulus, chi.conductor);
      EXPECT_TRUE(prim.primitive);
      EXPECT_EQ(prim.parity, chi.parity);
      for (std::int64_t n = 1; n < 3 * q; ++n)
        if (coprime(n, q)) {
          EXPECT_EQ(prim.exponent_at(n) * chi.order, chi.exponent_at(n) * prim.order) << q << " " << n;
        }
    }
  }
}

TEST(CharGroup, CongruentTwoModFourHasNoPrimitiveCharacters) {
  for (std::int64_t q = 6; q <= 98; q += 4) {
    const CharGroup group(q);
    for (const auto& chi : group.characters()) {
      EXPECT_FALSE(chi.primitive);
      EXPECT_EQ(chi.conductor % 2, 1);
    }
  }
}

TEST(CharGroup, IndexingIsStable) {
  CharGroup a(63), b(63);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].exponent, b[i].exponent);
    EXPECT_EQ(a.index_of(a[i].coords), i);
  }
}
