#include "helpers.hpp"

using namespace cmg;
using namespace th;

namespace {

using PM = PolyMatrix<Q>;

GammaJet<Q> random_jet(Rng& rng, const std::vector<Q>& lambdas, std::size_t r) {
  return jet_of_polymat(random_loop_at<Q>(rng, r, lambdas, 2), lambdas);
}

}  // namespace

TEST(Jet, OfPolynomialMatrix) {
  PM g(2, 2);
  g(0, 0) = g(1, 1) = poly({1});
  g(0, 1) = poly({0, 1});
  const auto j = jet_of_polymat(g, {q(2)});
  EXPECT_EQ(j.values[0], (M{{q(1), q(2)}, {q(0), q(1)}}));
  EXPECT_EQ(j.derivs[0], (M{{q(0), q(1)}, {q(0), q(0)}}));
  PM id(2, 2);
  id(0, 0) = id(1, 1) = poly({1});
  EXPECT_EQ(jet_of_polymat(id, {q(0), q(3)}), GammaJet<Q>::identity({q(0), q(3)}, 2));
}

TEST(Jet, GroupLaws) {
  Rng rng(1);
  const std::vector<Q> ls{q(0), q(1), q(-2)};
  for (int c = 0; c < 5; ++c) {
    const auto a = random_jet(rng, ls, 2), b = random_jet(rng, ls, 2), e = random_jet(rng, ls, 2);
    const auto id = GammaJet<Q>::identity(ls, 2);
    EXPECT_EQ(jet_mul(id, a), a);
    EXPECT_EQ(jet_mul(a, id), a);
    EXPECT_EQ(jet_mul(jet_mul(a, b), e), jet_mul(a, jet_mul(b, e)));
    EXPECT_EQ(jet_mul(a, jet_inverse(a)), id);
  }
  EXPECT_THROW(jet_mul(GammaJet<Q>::identity({q(0)}, 1), GammaJet<Q>::identity({q(1)}, 1)), Error);
}

TEST(Jet, ScalarExponentialNumeric) {
  // e^{xz} at lambda: value e^{x lambda}, derivative x e^{x lambda}
  const double x = 0.7, l = 1.3;
  const auto j = GammaJet<Cplx>::scalar({Cplx(l)}, 2, {Cplx(std::exp(x * l))}, {Cplx(x * std::exp(x * l))});
  EXPECT_NEAR(std::abs(j.values[0](1, 1) - std::exp(x * l)), 0, 1e-12);
  EXPECT_NEAR(std::abs(j.derivs[0](0, 0) - x * std::exp(x * l)), 0, 1e-12);
}

TEST(Action, SinglePointExample) {
  const auto p = point1(q(0), q(2));
  GammaJet<Q> j;
  j.lambdas = {q(0)};
  j.values = {M{{q(1)}}};
  j.derivs = {M{{q(3)}}};
  EXPECT_EQ(act(p, j).alpha[0], q(-1));
}

TEST(Action, IdentityAndConstantScalar) {
  Rng rng(2);
  const auto p = random_point<Q>(rng, 3, 2);
  EXPECT_EQ(act(p, GammaJet<Q>::identity(p.lambda, 2)), canonicalize(p));
  const auto c = GammaJet<Q>::scalar(p.lambda, 2, {q(5), q(5), q(5)}, {q(0), q(0), q(0)});
  EXPECT_EQ(act(p, c), canonicalize(p));
}

TEST(Action, RightActionAndFiber) {
  Rng rng(3);
  for (int c = 0; c < 10; ++c) {
    const auto p = random_point<Q>(rng, static_cast<std::size_t>(rng.integer(1, 3)), 2);
    const auto a = random_jet(rng, p.lambda, 2), b = random_jet(rng, p.lambda, 2);
    const auto moved = act(p, a);
    EXPECT_EQ(act(moved, b), act(p, jet_mul(a, b)));
    EXPECT_TRUE(moment_residual(from_cd_coords(moved)).is_zero());
    for (std::size_t i = 0; i < p.n; ++i) EXPECT_EQ((moved.v(i) * moved.w(i))(0, 0), q(-1));
  }
}

TEST(Action, ScalarY) {
  const Quadruple<Q> quad(M{{q(4)}}, M{{q(2)}}, M{{q(1)}}, M{{q(-1)}});
  EXPECT_EQ(act_scalar_Y(quad, M{{q(1)}}, M{{q(0)}}), quad);
  EXPECT_EQ(act_scalar_Y(quad, M{{q(2)}}, M{{q(6)}}).X, (M{{q(4 - 3)}}));
  EXPECT_THROW(act_scalar_Y(quad, M{{q(0)}}, M{{q(1)}}), Error);
  const Quadruple<Q> two(M{{q(0), q(0)}, {q(0), q(0)}}, M{{q(1), q(0)}, {q(0), q(2)}}, M{{q(1)}, {q(1)}},
                         M{{q(-1), q(-1)}});
  try {
    act_scalar_Y(two, M{{q(1)}}, M{{q(0)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::YNotScalar);
  }
}

TEST(Action, ScalarYAgreesInTheMergingLimit) {
  // n = 1 has scalar Y; compare the two formulas directly
  Rng rng(4);
  for (int c = 0; c < 5; ++c) {
    const auto p = random_point<Q>(rng, 1, 2);
    const auto j = random_jet(rng, p.lambda, 2);
    const auto direct = act_scalar_Y(from_cd_coords(p), j.values[0], j.derivs[0]);
    EXPECT_EQ(canonicalize(direct), act(p, j));
  }
}

TEST(GammaAlg, Membership) {
  PM upper(2, 2);
  upper(0, 0) = upper(1, 1) = poly({1});
  upper(0, 1) = poly({0, 1});
  PM diag(2, 2);
  diag(0, 0) = poly({0, 1});
  diag(1, 1) = poly({1});
  PM id(1, 1);
  id(0, 0) = poly({1});
  EXPECT_TRUE(is_gamma_alg(EntireDescriptor<Q>::of_poly(P()), upper));
  EXPECT_FALSE(is_gamma_alg(EntireDescriptor<Q>::of_poly(P()), diag));
  EXPECT_TRUE(is_gamma_alg(EntireDescriptor<Q>::of_poly(poly({0, 0, 1})), id));
  EXPECT_FALSE(is_gamma_alg(EntireDescriptor<Q>::opaque("exp(exp(z))"), id));
  Rng rng(5);
  EXPECT_TRUE(is_gamma_alg(EntireDescriptor<Q>::of_poly(P()), random_unimodular<Q>(rng, 3, 4, 2)));
}
