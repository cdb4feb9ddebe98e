#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polytheta/error.hpp"
#include "polytheta/theta.hpp"

using namespace polytheta;
using namespace polytheta::atoms;

namespace {

oracle::Dense dense(const Series& s) { return {s.coeffs().begin(), s.coeffs().end()}; }

oracle::Dense oracle_expression(const ThetaExpression& e, std::size_t order) {
  oracle::Dense acc(order, 0);
  for (const auto& t : e.terms) {
    oracle::Term ot{t.multiplier, t.shift, {}};
    for (const auto& a : t.atoms) ot.atoms.push_back({a.i, a.j});
    auto p = oracle::product(ot, order);
    for (std::size_t n = 0; n < order; ++n) acc[n] += p[n];
  }
  return acc;
}

ProductTerm random_term(std::mt19937_64& rng) {
  ProductTerm t;
  t.multiplier = 1 + static_cast<Coeff>(rng() % 4);
  t.shift = static_cast<std::int64_t>(rng() % 6);
  const int n = 1 + static_cast<int>(rng() % 4);
  for (int k = 0; k < n; ++k) {
    std::int64_t i = static_cast<std::int64_t>(rng() % 7), j = static_cast<std::int64_t>(rng() % 7);
    if (i == 0 && j == 0) j = 1;
    t.atoms.push_back({i, j});
  }
  return t;
}

}  // namespace

TEST(Theta, AtomSeriesMatchesDirectSummation) {
  for (std::int64_t i = 0; i <= 9; ++i)
    for (std::int64_t j = 0; j <= 9; ++j) {
      if (i + j == 0) continue;
      EXPECT_EQ(dense(atom_series({i, j}, 300)), oracle::theta(i, j, 300)) << i << "," << j;
    }
}

TEST(Theta, NamedAtomsHaveTheirFamilies) {
  EXPECT_EQ(phi(3), (ThetaAtom{3, 3}));
  EXPECT_EQ(psi(2), (ThetaAtom{2, 6}));
  EXPECT_EQ(X(4), (ThetaAtom{4, 8}));
  EXPECT_EQ(Y(1), (ThetaAtom{1, 5}));
  // phi(q) = 1 + 2q + 2q^4 + ...
  auto s = atom_series(phi(), 10);
  EXPECT_EQ(dense(s), (oracle::Dense{1, 2, 0, 0, 2, 0, 0, 0, 0, 2}));
}

TEST(Theta, CanonicalizeRules) {
  auto t = canonicalize(ProductTerm{1, 0, {{5, 1}, {0, 4}}});
  EXPECT_EQ(t.multiplier, 2);
  ASSERT_EQ(t.atoms.size(), 2u);
  EXPECT_EQ(t.atoms[0], (ThetaAtom{1, 5}));
  EXPECT_EQ(t.atoms[1], (ThetaAtom{4, 12}));
  EXPECT_THROW(canonicalize(ProductTerm{1, 0, {{0, 0}}}), DomainError);
  EXPECT_THROW(canonicalize(ProductTerm{1, 0, {{-1, 3}}}), DomainError);
  EXPECT_THROW(canonicalize(ProductTerm{0, 0, {{1, 3}}}), DomainError);
  EXPECT_THROW(canonicalize(ProductTerm{1, -1, {{1, 3}}}), DomainError);
  EXPECT_THROW(canonicalize(ProductTerm{1, 0, {}}), DomainError);
}

TEST(ThetaProperty, CanonicalizeIsIdempotentAndPreservesSeries) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = random_term(rng);
    auto c = canonicalize(t);
    EXPECT_EQ(canonicalize(c), c);
    for (const auto& a : c.atoms) EXPECT_TRUE(is_canonical(a));
    EXPECT_EQ(product_series(c, 120), product_series(t, 120));
  }
}

TEST(ThetaProperty, CombineLikeTermsPreservesSeries) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    ThetaExpression e;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) e.terms.push_back(random_term(rng));
    e.terms.push_back(e.terms.front());
    auto c = combine_like_terms(e);
    EXPECT_LT(c.terms.size(), e.terms.size());
    EXPECT_EQ(combine_like_terms(c), c);
    EXPECT_EQ(dense(expression_series(c, 100)), oracle_expression(e, 100));
  }
}

TEST(Theta, ProductSeriesMatchesOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = random_term(rng);
    oracle::Term ot{t.multiplier, t.shift, {}};
    for (const auto& a : t.atoms) ot.atoms.push_back({a.i, a.j});
    EXPECT_EQ(dense(product_series(t, 200)), oracle::product(ot, 200));
  }
}

TEST(Theta, DissectMatchesAtomSeries) {
  for (std::int64_t i = 1; i <= 6; ++i)
    for (std::int64_t j = i; j <= 6; ++j)
      for (int n = 2; n <= 5; ++n) {
        ThetaExpression d;
        try {
          d = dissect({i, j}, n);
        } catch (const DomainError&) {
          continue;
        }
        EXPECT_EQ(d.terms.size(), static_cast<std::size_t>(n));
        EXPECT_EQ(oracle_expression(d, 256), oracle::theta(i, j, 256)) << i << "," << j << " n=" << n;
      }
}

TEST(Theta, DissectRejectsBadInput) {
  EXPECT_THROW(dissect({1, 5}, 1), DomainError);
  EXPECT_THROW(dissect({5, 1}, 2), DomainError);
}

TEST(Theta, ProductSplitIdentity) {
  // Every pair with equal i + j.
  for (std::int64_t s = 2; s <= 10; ++s)
    for (std::int64_t i1 = 1; 2 * i1 <= s; ++i1)
      for (std::int64_t i2 = 1; 2 * i2 <= s; ++i2) {
        ThetaAtom a{i1, s - i1}, b{i2, s - i2};
        ThetaExpression e;
        try {
          e = product_split(a, b);
        } catch (const DomainError&) {
          continue;
        }
        ThetaExpression lhs{{ProductTerm{1, 0, {a, b}}}};
        EXPECT_EQ(oracle_expression(e, 200), oracle_expression(lhs, 200))
            << "(" << i1 << "," << s - i1 << ") (" << i2 << "," << s - i2 << ")";
      }
  EXPECT_THROW(product_split({1, 2}, {1, 3}), DomainError);
}

TEST(Theta, ClassicalIdentities) {
  // phi(q) = phi(q^4) + 2q psi(q^8)
  ThetaExpression rhs{{ProductTerm{1, 0, {phi(4)}}, ProductTerm{2, 1, {psi(8)}}}};
  EXPECT_EQ(atom_series(phi(), 500), expression_series(rhs, 500));
  // phi(q)^2 counts representations as a sum of two squares.
  auto sq = product_series(ProductTerm{1, 0, {phi(), phi()}}, 200);
  for (std::int64_t n = 0; n < 200; ++n) {
    std::int64_t count = 0;
    for (std::int64_t x = -15; x <= 15; ++x)
      for (std::int64_t y = -15; y <= 15; ++y)
        if (x * x + y * y == n) ++count;
    EXPECT_EQ(sq[static_cast<std::size_t>(n)], count) << n;
  }
}
