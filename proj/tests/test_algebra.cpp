#include "helpers.hpp"

using namespace cmg;
using namespace th;

namespace {

/// Random r x c operator with polynomial coefficients of degree <= 2 at orders 0..max_order.
Op random_poly_op(Rng& rng, std::size_t r, std::size_t c, int max_order, int depth) {
  Op p(r, c, depth);
  for (int k = 0; k <= max_order; ++k) {
    Matrix<RF> m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = RF(random_poly<GaussQ>(rng, static_cast<int>(rng.integer(0, 2)), 2));
    p.add(k, m);
  }
  return p;
}

/// Random operator I + (negative orders) with constant coefficients.
Op random_unitriangular(Rng& rng, std::size_t r, int depth) {
  Op p = Op::identity(r, depth);
  for (int k = 1; k <= 2; ++k) {
    const M c = rng.matrix<GaussQ>(r, r, 2);
    p.add(-k, c.map([](const Q& a) { return RF(a); }));
  }
  return p;
}

}  // namespace

TEST(Scalar, ExactArithmetic) {
  const Q a = q(1, 3), b(mpq_class(2), mpq_class(-1));
  EXPECT_EQ(a + a + a, q(1));
  EXPECT_EQ(b * b.conj(), q(5));
  EXPECT_EQ((a / b) * b, a);
  EXPECT_TRUE(cmg::is_zero(a - a));
}

TEST(Scalar, NumericToleranceIsRelative) {
  numeric_tolerance() = 1e-9;
  EXPECT_TRUE(scalar_equal(Cplx(1e12), Cplx(1e12 + 1)));
  EXPECT_FALSE(scalar_equal(Cplx(1.0), Cplx(1.0 + 1e-6)));
}

TEST(Poly, DivisionAndGcd) {
  const P a = poly({-1, 0, 1});  // z^2 - 1
  const P b = poly({1, 1});
  auto [quo, rem] = divmod(a, b);
  EXPECT_EQ(quo, poly({-1, 1}));
  EXPECT_TRUE(rem.is_zero());
}

TEST(RatFun, NormalizesToLowestTerms) {
  const RF f = rf({-1, 0, 1}, {1, 1});
  EXPECT_TRUE(f.is_polynomial());
  EXPECT_EQ(f, rf({-1, 1}));
  const RF g = rf({2}, {0, 2});
  EXPECT_EQ(g.den(), poly({0, 1}));  // monic denominator
}

TEST(Laurent, SimplePole) {
  const Q lambda = q(3, 2);
  const RF f(P(q(1)), P::linear_root(lambda));
  const auto jet = laurent_expand<GaussQ>({f}, lambda, -1, 0);
  EXPECT_EQ(jet.at(-1)[0], q(1));
  EXPECT_EQ(jet.at(0)[0], q(0));
  EXPECT_FALSE(jet.pole_overflow);
}

TEST(Laurent, GeometricSeries) {
  const RF f = rf({1}, {0, -1, 1});  // 1 / (z (z - 1))
  const auto c = laurent_coefficients(f, q(0), -1, 1);
  EXPECT_EQ(c, (std::vector<Q>{q(-1), q(-1), q(-1)}));
}

TEST(Laurent, PolynomialWindow) {
  const auto c = laurent_coefficients(x_pow(2), q(0), -1, 2);
  EXPECT_EQ(c, (std::vector<Q>{q(0), q(0), q(0), q(1)}));
}

TEST(Laurent, OverflowFlag) {
  bool overflow = false;
  laurent_coefficients(x_pow(-3), q(0), -1, 1, &overflow);
  EXPECT_TRUE(overflow);
}

TEST(Laurent, AgreesWithEvaluationNumerically) {
  numeric_tolerance() = 1e-9;
  Rng rng(11);
  for (int c = 0; c < 10; ++c) {
    const RatFun<Cplx> f(random_poly<Cplx>(rng, 3), Poly<Cplx>::linear_root(Cplx(0.5)) * Poly<Cplx>::linear_root(Cplx(-2.0)));
    const auto co = laurent_coefficients(f, Cplx(0.5), -1, 30);
    const Cplx z(0.5 + 0.01, 0.0);
    Cplx sum{};
    for (int k = -1; k <= 30; ++k) sum += co[static_cast<std::size_t>(k + 1)] * std::pow(z - Cplx(0.5), k);
    EXPECT_NEAR(std::abs(sum - f(z)), 0.0, 1e-7 * std::max(1.0, std::abs(f(z))));
  }
}

TEST(Pdo, Leibniz) {
  const Op d = op({{1, RF(q(1))}});
  const Op x = op({{0, x_pow(1)}});
  EXPECT_EQ(pdo_mul(d, x, 8), op({{1, x_pow(1)}, {0, RF(q(1))}}));
}

TEST(Pdo, NegativeOrderCommutation) {
  const Op dinv = op({{-1, RF(q(1))}}, 2);
  const Op x = op({{0, x_pow(1)}}, 2);
  EXPECT_EQ(pdo_mul(dinv, x, 2), op({{-1, x_pow(1)}, {-2, RF(q(-1))}}, 2));
}

TEST(Pdo, EulerSquare) {
  const Op e = op({{1, x_pow(1)}});
  EXPECT_EQ(pdo_mul(e, e, 8), op({{2, x_pow(2)}, {1, x_pow(1)}}));
  // apply both sides to x^m
  for (int m = 0; m <= 3; ++m) {
    Matrix<RF> phi(1, 1);
    phi(0, 0) = x_pow(m);
    EXPECT_EQ(pdo_apply(pdo_mul(e, e, 8), phi)(0, 0), x_pow(m) * RF(q(m * m)));
  }
}

TEST(Pdo, StarProduct) {
  const Op d = op({{1, RF(q(1))}});
  const Op x = op({{0, x_pow(1)}});
  EXPECT_EQ(pdo_star_mul(d, x), op({{1, x_pow(1)}}));
  Rng rng(3);
  const Op a = random_poly_op(rng, 2, 2, 1, 8);
  EXPECT_EQ(pdo_star_mul(Op::identity(2, 8), a), a);
}

TEST(Pdo, StarAssociativeAndTransposeRule) {
  Rng rng(5);
  for (int c = 0; c < 10; ++c) {
    const Op a = random_poly_op(rng, 2, 2, 1, 8), b = random_poly_op(rng, 2, 2, 1, 8), e = random_poly_op(rng, 2, 2, 1, 8);
    EXPECT_EQ(pdo_star_mul(pdo_star_mul(a, b), e), pdo_star_mul(a, pdo_star_mul(b, e)));
    EXPECT_EQ(pdo_star_mul(a, b).transpose(), pdo_mul(b.transpose(), a.transpose(), 8));
  }
}

TEST(Pdo, MulAssociativeThroughTruncation) {
  Rng rng(7);
  for (int c = 0; c < 10; ++c) {
    const int depth = 4;
    Op a = random_poly_op(rng, 2, 2, 1, depth) + random_unitriangular(rng, 2, depth);
    const Op b = random_unitriangular(rng, 2, depth), e = random_poly_op(rng, 2, 2, 2, depth);
    EXPECT_EQ(pdo_mul(pdo_mul(a, b, depth), e, depth), pdo_mul(a, pdo_mul(b, e, depth), depth));
  }
}

TEST(Pdo, BExamples) {
  EXPECT_EQ(pdo_b(op({{0, x_pow(1)}})), op({{1, RF(q(1))}}));
  EXPECT_EQ(pdo_b(op({{1, x_pow(2)}})), op({{2, x_pow(1)}}));
  EXPECT_THROW(pdo_b(op({{0, x_pow(-1)}})), Error);
}

TEST(Pdo, BInvolutionAndTransposeRule) {
  Rng rng(9);
  for (int c = 0; c < 10; ++c) {
    const Op a = random_poly_op(rng, 2, 2, 2, 8), e = random_poly_op(rng, 2, 2, 2, 8);
    EXPECT_EQ(pdo_b(pdo_b(a)), a);
    EXPECT_EQ(pdo_b(pdo_mul(a, e, 8)).transpose(), pdo_mul(pdo_b(e).transpose(), pdo_b(a).transpose(), 8));
  }
}

TEST(Pdo, InverseTransposeRuleForConstantCoefficients) {
  Rng rng(13);
  const int depth = 6;
  for (int c = 0; c < 5; ++c) {
    const Op a = random_unitriangular(rng, 2, depth);
    const Op ainv = pdo_invert(a, depth);
    // b(A)^t and b(A^{-1})^t are multiplication operators in x; their product is I + O(x^{-depth-1})
    const Matrix<RF> lhs = pdo_b(a).transpose().coeff(0);
    const Matrix<RF> rhs = pdo_b(ainv).transpose().coeff(0);
    const Matrix<RF> prod = rhs * lhs;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto ser = expand_at_infinity(prod(i, j), -depth, 0);
        for (const auto& [k, v] : ser) EXPECT_EQ(v, (k == 0 && i == j) ? q(1) : q(0)) << "order " << k;
      }
  }
}

TEST(Pdo, InvertNeumann) {
  const Op a = op({{0, RF(q(1))}, {-1, RF(q(1))}}, 3);
  EXPECT_EQ(pdo_invert(a, 3), op({{0, RF(q(1))}, {-1, RF(q(-1))}, {-2, RF(q(1))}, {-3, RF(q(-1))}}, 3));
  EXPECT_EQ(pdo_invert(Op::identity(2, 4), 4), Op::identity(2, 4));
  EXPECT_THROW(pdo_invert(op({{0, RF(q(2))}}, 3), 3), Error);
}

TEST(Pdo, InvertKOperator) {
  Rng rng(17);
  const auto p = random_point<GaussQ>(rng, 2, 2);
  const Op k = kw(p, 6);
  EXPECT_EQ(pdo_mul(pdo_invert(k, 6), k, 6), Op::identity(2, 6));
}

TEST(Pdo, IsDifferential) {
  EXPECT_TRUE(is_differential(op({{2, RF(q(1))}, {1, x_pow(1)}}), 8));
  EXPECT_FALSE(is_differential(op({{-1, RF(q(1))}}), 8));
  const Op k = op({{0, RF(q(1))}, {-1, RF(q(-1)) * x_pow(-1)}});
  const Op prod = pdo_mul(k, op({{1, RF(q(1))}}), 8);
  EXPECT_TRUE(is_differential(prod, 8));
  EXPECT_EQ(prod, op({{1, RF(q(1))}, {0, RF(q(-1)) * x_pow(-1)}}));
}

TEST(Pdo, StarActionAssociative) {
  Rng rng(19);
  for (int c = 0; c < 5; ++c) {
    const Op d = random_poly_op(rng, 2, 2, 1, 8), e = random_poly_op(rng, 2, 2, 1, 8);
    Matrix<RF> phi(1, 2);
    phi(0, 0) = RF(random_poly<GaussQ>(rng, 3));
    phi(0, 1) = RF(random_poly<GaussQ>(rng, 3));
    EXPECT_EQ(star_act(star_act(phi, d), e), star_act(phi, pdo_star_mul(d, e)));
  }
}

TEST(Serialize, RoundTrips) {
  Rng rng(23);
  const Op a = random_poly_op(rng, 2, 1, 2, 5);
  EXPECT_EQ(pdo_from_json<GaussQ>(pdo_to_json(a), "op", 8), a);
  const Q s(mpq_class(3, 7), mpq_class(-2, 5));
  EXPECT_EQ(scalar_from_json<GaussQ>(scalar_to_json(s), "s"), s);
  const RF f = rf({1, 2, 3}, {0, 1});
  EXPECT_EQ(ratfun_from_json<GaussQ>(ratfun_to_json(f), "f"), f);
  EXPECT_THROW(scalar_from_json<GaussQ>(json::parse("\"x\""), "s"), Error);
}
