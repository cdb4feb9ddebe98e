#include <gtest/gtest.h>

#include <random>

#include "polytheta/dsl.hpp"

using namespace polytheta;
using namespace polytheta::atoms;

namespace {

ParseError parse_error(auto&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError";
  return ParseError({}, "");
}

ThetaAtom random_atom(std::mt19937_64& rng) {
  switch (rng() % 6) {
    case 0: return phi(1 + static_cast<std::int64_t>(rng() % 9));
    case 1: return psi(1 + static_cast<std::int64_t>(rng() % 9));
    case 2: return X(1 + static_cast<std::int64_t>(rng() % 9));
    case 3: return Y(1 + static_cast<std::int64_t>(rng() % 9));
    default: {
      std::int64_t i = static_cast<std::int64_t>(rng() % 12), j = static_cast<std::int64_t>(rng() % 12);
      if (i == 0 && j == 0) i = 1;
      return f(i, j);
    }
  }
}

ProductTerm random_term(std::mt19937_64& rng) {
  ProductTerm t;
  t.multiplier = 1 + static_cast<Coeff>(rng() % 3 == 0 ? rng() % 50 : 0);
  t.shift = rng() % 2 ? static_cast<std::int64_t>(rng() % 20) : 0;
  const int n = 1 + static_cast<int>(rng() % 5);
  for (int k = 0; k < n; ++k) {
    if (!t.atoms.empty() && rng() % 3 == 0) t.atoms.push_back(t.atoms.back());
    else t.atoms.push_back(random_atom(rng));
  }
  return t;
}

QuadTerm random_quad(std::mt19937_64& rng) {
  if (rng() % 2) return term_from_polygonal(1 + static_cast<Coeff>(rng() % 12), 3 + static_cast<int>(rng() % 8));
  const std::int64_t A = 1 + static_cast<std::int64_t>(rng() % 15);
  std::int64_t B = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(A + 1));
  if ((A - B) % 2) --B;
  if (rng() % 2) B = -B;
  return make_quad_term(1 + static_cast<Coeff>(rng() % 5), A, B);
}

}  // namespace

TEST(Dsl, ParsesProductTerms) {
  auto t = parse_product_term("Y(q)*Y(q^2)*Y(q^4)^2");
  EXPECT_EQ(t, (ProductTerm{1, 0, {Y(1), Y(2), Y(4), Y(4)}}));
  auto u = parse_product_term(" 2 * q^3 * f(q, q^5) * psi(q^12) ");
  EXPECT_EQ(u, (ProductTerm{2, 3, {f(1, 5), psi(12)}}));
  EXPECT_EQ(parse_product_term("q*f(1,q^4)"), (ProductTerm{1, 1, {f(0, 4)}}));
  EXPECT_THROW(parse_product_term("phi(q) + phi(q)"), ParseError);
}

TEST(Dsl, ParsesExpressions) {
  auto e = parse_theta_expression("X(q^8)*X(q^16) + q*X(q^16)*Y(q^4)");
  ASSERT_EQ(e.terms.size(), 2u);
  EXPECT_EQ(e.terms[1].shift, 1);
  EXPECT_TRUE(parse_theta_expression("0").terms.empty());
}

TEST(Dsl, ParsesSums) {
  auto s = parse_polygonal_sum("p5 + 2*p8 + 3p_5 + x(3x-1)/2 + 4*x(6x+4)/2");
  ASSERT_EQ(s.terms.size(), 5u);
  EXPECT_EQ(s.terms[0], term_from_polygonal(1, 5));
  EXPECT_EQ(s.terms[1], term_from_polygonal(2, 8));
  EXPECT_EQ(s.terms[2], term_from_polygonal(3, 5));
  EXPECT_EQ(s.terms[3], (QuadTerm{1, 3, -1}));
  EXPECT_EQ(s.terms[4], (QuadTerm{4, 6, 4}));
}

TEST(Dsl, ErrorsCarrySpans) {
  auto e = parse_error([] { parse_theta_expression("phi(q) + psy(q)"); });
  EXPECT_EQ(e.span().line, 1u);
  EXPECT_EQ(e.span().col_start, 10u);
  EXPECT_EQ(e.span().col_end, 12u);
  EXPECT_NE(e.message().find("psy"), std::string::npos);
  EXPECT_EQ(std::string(e.what()).rfind("1:10:", 0), 0u);

  auto neg = parse_error([] { parse_theta_expression("f(q^-2, q)"); });
  EXPECT_NE(neg.message().find("negative"), std::string::npos);

  auto small = parse_error([] { parse_polygonal_sum("p5 + p2"); });
  EXPECT_EQ(small.span().col_start, 6u);

  auto bad_family = parse_error([] { parse_polygonal_sum("x(3x+0)/2"); });
  EXPECT_EQ(bad_family.span().col_start, 1u);
  EXPECT_EQ(bad_family.span().col_end, 9u);

  auto origin = parse_error([] { parse_polygonal_sum("p5 +", TextOrigin{7, 10}); });
  EXPECT_EQ(origin.span().line, 7u);
  EXPECT_GE(origin.span().col_start, 13u);

  EXPECT_THROW(parse_theta_expression("f(1,1)"), ParseError);
  EXPECT_THROW(parse_theta_expression("φ(q)"), ParseError);
  EXPECT_THROW(parse_theta_expression("phi(q)^0"), ParseError);
  EXPECT_THROW(parse_theta_expression(""), ParseError);
  EXPECT_THROW(parse_polygonal_sum("0*p5"), ParseError);
}

TEST(Dsl, SerializeForms) {
  EXPECT_EQ(serialize(ProductTerm{1, 0, {Y(1), Y(2), Y(4), Y(4)}}), "Y(q)*Y(q^2)*Y(q^4)^2");
  EXPECT_EQ(serialize(ProductTerm{2, 1, {psi(12), f(2, 7)}}), "2*q*psi(q^12)*f(q^2, q^7)");
  EXPECT_EQ(serialize(ThetaExpression{}), "0");
  EXPECT_EQ(serialize(term_from_polygonal(2, 8)), "2*p8");
  EXPECT_EQ(serialize(QuadTerm{1, 3, 1}), "x(3x+1)/2");
}

TEST(DslProperty, ExpressionRoundTrip) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    ThetaExpression e;
    const int n = 1 + static_cast<int>(rng() % 4);
    for (int k = 0; k < n; ++k) e.terms.push_back(random_term(rng));
    const auto text = serialize(e);
    EXPECT_EQ(parse_theta_expression(text), e) << text;
  }
}

TEST(DslProperty, SumRoundTrip) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    PolygonalSum s;
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) s.terms.push_back(random_quad(rng));
    const auto text = serialize(s);
    EXPECT_EQ(parse_polygonal_sum(text), s) << text;
  }
}

TEST(DslProperty, SerializeAfterParseIsIdempotent) {
  // Random spacing and spelling variants normalize in one pass.
  std::mt19937_64 rng(3);
  const std::vector<std::string> pieces = {"phi(q^3)", "f(q^2 , q^6)", "Y( q )", "psi(q)^3", "f(1,q^5)",
                                           "X(q^4)^ 2"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) {
      if (t) text += rng() % 2 ? " + " : "+";
      if (rng() % 3 == 0) text += std::to_string(1 + rng() % 9) + " *";
      if (rng() % 3 == 0) text += "q^" + std::to_string(rng() % 5) + "*";
      const int atoms = 1 + static_cast<int>(rng() % 3);
      for (int a = 0; a < atoms; ++a) {
        if (a) text += rng() % 2 ? " * " : "*";
        text += pieces[rng() % pieces.size()];
      }
    }
    const auto once = serialize(parse_theta_expression(text));
    EXPECT_EQ(serialize(parse_theta_expression(once)), once) << text;
  }
}
