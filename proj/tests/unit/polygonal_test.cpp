#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "polytheta/error.hpp"
#include "polytheta/polygonal.hpp"

using namespace polytheta;

namespace {

PolygonalSum sum_of(std::initializer_list<std::pair<Coeff, int>> terms) {
  PolygonalSum s;
  for (auto [c, m] : terms) s.terms.push_back(term_from_polygonal(c, m));
  return s;
}

std::vector<oracle::Family> families(const PolygonalSum& s) {
  std::vector<oracle::Family> f;
  for (const auto& t : s.terms) f.push_back({t.coeff, t.A, t.B});
  return f;
}

QuadTerm random_term(std::mt19937_64& rng, int max_coeff = 4) {
  const Coeff c = 1 + static_cast<Coeff>(rng() % max_coeff);
  const std::int64_t A = 1 + static_cast<std::int64_t>(rng() % 8);
  std::vector<std::int64_t> bs;
  for (std::int64_t B = -A; B <= A; ++B)
    if (((A - B) % 2) == 0) bs.push_back(B);
  return make_quad_term(c, A, bs[rng() % bs.size()]);
}

}  // namespace

TEST(Polygonal, ValuesMatchClosedForm) {
  for (int m = 3; m <= 12; ++m)
    for (std::int64_t x = -30; x <= 30; ++x) EXPECT_EQ(polygonal_value(m, x), oracle::polygonal(m, x));
  EXPECT_EQ(polygonal_value(5, -1), 2);
  EXPECT_EQ(polygonal_value(8, 1), 1);
  EXPECT_EQ(polygonal_value(8, -1), 5);
  EXPECT_THROW(polygonal_value(2, 1), DomainError);
}

TEST(Polygonal, TermConstruction) {
  auto p5 = term_from_polygonal(3, 5);
  EXPECT_EQ(p5, (QuadTerm{3, 3, -1}));
  EXPECT_THROW(make_quad_term(1, 3, 0), DomainError);
  EXPECT_THROW(make_quad_term(1, 1, 3), DomainError);
  EXPECT_THROW(make_quad_term(0, 1, 1), DomainError);
  EXPECT_THROW(make_quad_term(1, 0, 0), DomainError);
  EXPECT_THROW(term_from_polygonal(1, 2), DomainError);
}

TEST(Polygonal, TermSeriesCountsArguments) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    auto t = random_term(rng);
    auto s = term_series(t, 400);
    oracle::Dense expect(400, 0);
    for (auto v : oracle::family(t.coeff, t.A, t.B, 399)) ++expect[static_cast<std::size_t>(v)];
    EXPECT_EQ(oracle::Dense(s.coeffs().begin(), s.coeffs().end()), expect);
  }
  // Over the naturals only x >= 0 contributes.
  auto nat = term_series(term_from_polygonal(1, 4), 50, VariableDomain::naturals);
  for (std::size_t n = 0; n < 50; ++n) {
    const bool square = [&] {
      for (std::size_t x = 0; x * x <= n; ++x)
        if (x * x == n) return true;
      return false;
    }();
    EXPECT_EQ(nat[n], square ? 1 : 0) << n;
  }
}

TEST(Polygonal, TermValuesSortedDistinct) {
  auto v = term_values(term_from_polygonal(1, 5), 40);
  EXPECT_EQ(v, (std::vector<std::int64_t>{0, 1, 2, 5, 7, 12, 15, 22, 26, 35, 40}));
}

TEST(PolygonalProperty, RepresentationSeriesMatchesNestedLoops) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    PolygonalSum s;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) s.terms.push_back(random_term(rng));
    const std::int64_t bound = 250;
    auto series = representation_series(s, bound);
    auto expect = oracle::representations(families(s), bound);
    ASSERT_EQ(series.order(), static_cast<std::size_t>(bound + 1));
    EXPECT_EQ(oracle::Dense(series.coeffs().begin(), series.coeffs().end()), expect) << describe(s);
  }
}

TEST(PolygonalProperty, SieveMatchesSeriesPositivity) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 60; ++trial) {
    PolygonalSum s;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) s.terms.push_back(random_term(rng));
    const std::int64_t bound = 600;
    auto bits = value_set(s, bound);
    auto series = representation_series(s, bound);
    auto brute = oracle::represented(families(s), bound);
    for (std::int64_t n = 0; n <= bound; ++n) {
      const auto idx = static_cast<std::size_t>(n);
      ASSERT_EQ(bits.test(idx), series[idx] > 0) << describe(s) << " n=" << n;
      ASSERT_EQ(bits.test(idx), static_cast<bool>(brute[idx])) << describe(s) << " n=" << n;
    }
  }
}

TEST(Polygonal, ClassicalUniversalSums) {
  // Three triangular numbers and four squares cover everything.
  EXPECT_TRUE(certify_universal(sum_of({{1, 3}, {1, 3}, {1, 3}}), 20000).universal_up_to_bound);
  EXPECT_TRUE(certify_universal(sum_of({{1, 4}, {1, 4}, {1, 4}, {1, 4}}), 20000).universal_up_to_bound);
  // Three squares miss 7 first.
  auto v = certify_universal(sum_of({{1, 4}, {1, 4}, {1, 4}}), 100);
  EXPECT_FALSE(v.universal_up_to_bound);
  EXPECT_EQ(v.missing.front(), 7);
  EXPECT_EQ(v.bound, 100);
}

TEST(Polygonal, EvenSquaresMissOne) {
  auto v = certify_universal(sum_of({{2, 4}, {2, 4}, {2, 4}, {2, 4}}), 1000);
  EXPECT_FALSE(v.universal_up_to_bound);
  ASSERT_FALSE(v.missing.empty());
  EXPECT_EQ(v.missing.front(), 1);
  for (auto m : v.missing) EXPECT_EQ(m % 2, 1);
}

TEST(Polygonal, TriangularVersusSquareWitness) {
  auto v = equivalent_upto(sum_of({{1, 3}}), sum_of({{1, 4}}), 100);
  EXPECT_FALSE(v.equivalent);
  EXPECT_EQ(v.witness, 3);
  EXPECT_TRUE(v.witness_in_first);
  auto back = equivalent_upto(sum_of({{1, 4}}), sum_of({{1, 3}}), 100);
  EXPECT_EQ(back.witness, 3);
  EXPECT_FALSE(back.witness_in_first);
}

TEST(Polygonal, TriangularEqualsHexagonal) {
  auto v = equivalent_upto(sum_of({{1, 3}}), sum_of({{1, 6}}), 50000);
  EXPECT_TRUE(v.equivalent);
  EXPECT_FALSE(v.witness);
}

TEST(PolygonalProperty, RescaleSidesShareValueSets) {
  for (std::int64_t a = 1; a <= 7; ++a)
    for (std::int64_t b = 0; 2 * b <= a; ++b) {
      auto [lhs, rhs] = rescale_equivalence(a, b);
      EXPECT_TRUE(equivalent_upto(lhs, rhs, 5000).equivalent) << "a=" << a << " b=" << b;
      // The same through the brute-force oracle on a smaller range.
      EXPECT_EQ(oracle::represented(families(lhs), 500), oracle::represented(families(rhs), 500));
    }
  EXPECT_THROW(rescale_equivalence(0, 0), DomainError);
  EXPECT_THROW(rescale_equivalence(3, 2), DomainError);
}

TEST(PolygonalProperty, EqualKeysMeanEqualValueSets) {
  std::mt19937_64 rng(7);
  std::vector<QuadTerm> pool;
  for (int i = 0; i < 400; ++i) pool.push_back(random_term(rng, 6));
  int collisions = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      if (canonical_key(pool[i]) != canonical_key(pool[j])) continue;
      ++collisions;
      const auto limit = 3000;
      EXPECT_EQ(term_values(pool[i], limit), term_values(pool[j], limit));
    }
  EXPECT_GT(collisions, 0);
}

TEST(Polygonal, CanonicalKeyExamples) {
  EXPECT_EQ(canonical_key(term_from_polygonal(1, 3)), canonical_key(term_from_polygonal(1, 6)));
  EXPECT_EQ(canonical_key(term_from_polygonal(2, 3)), canonical_key(make_quad_term(1, 2, 2)));
  EXPECT_NE(canonical_key(term_from_polygonal(1, 5)), canonical_key(term_from_polygonal(1, 8)));
  // Sum keys ignore order.
  auto a = sum_of({{2, 5}, {1, 8}, {4, 5}});
  auto b = sum_of({{4, 5}, {2, 5}, {1, 8}});
  EXPECT_EQ(canonical_key(a), canonical_key(b));
}

TEST(Polygonal, Describe) {
  EXPECT_EQ(describe(sum_of({{2, 5}, {4, 5}, {1, 8}, {1, 8}})), "2p5 + 4p5 + p8 + p8");
  PolygonalSum odd{{make_quad_term(1, 5, 1)}};
  EXPECT_EQ(describe(odd), "x(5x+1)/2");
  PolygonalSum square{{make_quad_term(1, 2, 0)}};
  EXPECT_EQ(describe(square), "p4");
}

TEST(Polygonal, EmptyOrInvalidInputs) {
  EXPECT_THROW(value_set(PolygonalSum{}, 10), DomainError);
  EXPECT_THROW(certify_universal(sum_of({{1, 3}}), 0), DomainError);
}
