#include "cmg/flows.hpp"
#include "helpers.hpp"

using namespace cmg;
using namespace th;

namespace {

using MC = Matrix<Cplx>;

CMPoint<Cplx> numeric_point(Rng& rng, std::size_t n, std::size_t r) { return convert<Cplx>(random_point<Q>(rng, n, r)); }

}  // namespace

TEST(Hamiltonian, TraceIdentities) {
  Rng rng(1);
  for (int c = 0; c < 10; ++c) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4)), r = static_cast<std::size_t>(rng.integer(1, 3));
    const auto quad = from_cd_coords(random_point<Q>(rng, n, r));
    EXPECT_EQ(hamiltonian(quad, 0, identity<Q>(r)), q(-static_cast<long>(n)));
    for (unsigned k = 0; k <= 3; ++k) EXPECT_EQ(hamiltonian(quad, k, identity<Q>(r)), -matrix_power(quad.Y, k).trace());
    const M alpha = rng.matrix<Q>(r, r);
    M g = identity<Q>(n);
    if (n > 1) g(0, 1) = q(2);
    EXPECT_EQ(hamiltonian(gl_conjugate(g, quad), 2, alpha), hamiltonian(quad, 2, alpha));
  }
}

TEST(VectorField, LowOrders) {
  Rng rng(2);
  const auto quad = from_cd_coords(random_point<Q>(rng, 2, 2));
  const M alpha = rng.matrix<Q>(2, 2);
  const auto d0 = vector_field(quad, 0, alpha);
  EXPECT_TRUE(d0.X.is_zero());
  EXPECT_TRUE(d0.Y.is_zero());
  EXPECT_EQ(d0.v, quad.v * alpha);
  EXPECT_EQ(d0.w, -(alpha * quad.w));
  EXPECT_EQ(vector_field(quad, 1, alpha).X, quad.v * alpha * quad.w);
  const auto q1 = from_cd_coords(point1(q(3), q(1)));
  const M a1{{q(5)}};
  EXPECT_EQ(vector_field(q1, 2, a1).X, q1.v * a1 * q1.w * q(6));
}

TEST(Flow, ScalarShiftsX) {
  Rng rng(3);
  const auto quad = from_cd_coords(random_point<Q>(rng, 3, 1));
  EXPECT_EQ(flow_scalar(quad, poly({4})), quad);
  EXPECT_EQ(flow_scalar(quad, poly({0, 0, 1})).X, quad.X - quad.Y * q(2));
  EXPECT_EQ(flow_scalar(quad, poly({0, 7})).X, quad.X - identity<Q>(3) * q(7));
}

TEST(Flow, ClosedIdentityAtZero) {
  Rng rng(4);
  const auto p = random_point<Q>(rng, 3, 2);
  const M nil{{q(0), q(1)}, {q(0), q(0)}};
  EXPECT_EQ(flow_closed(p, 2, nil, q(0)), canonicalize(p));
}

TEST(Flow, ClosedScalarAlphaMatchesScalarLoop) {
  Rng rng(5);
  for (int c = 0; c < 5; ++c) {
    const auto p = random_point<Q>(rng, 3, 2);
    const Q t = rng.scalar<Q>();
    for (unsigned k = 0; k <= 3; ++k) {
      const auto moved = flow_closed(p, k, identity<Q>(2), t);
      // time-t flow of J_{k,I} = -tr Y^k is the scalar loop exp(t z^k)
      std::vector<Q> cs(k + 1);
      cs[k] = t;
      EXPECT_EQ(from_cd_coords(moved).X, flow_scalar(from_cd_coords(canonicalize(p)), P(cs)).X);
    }
  }
}

TEST(Flow, NilpotentExactAgreesWithClosed) {
  Rng rng(6);
  const M nil{{q(0), q(1)}, {q(0), q(0)}};
  for (int c = 0; c < 5; ++c) {
    const auto p = random_point<Q>(rng, 3, 2);
    const Q t = rng.scalar<Q>();
    for (unsigned k = 0; k <= 3; ++k) {
      const auto by_chart = flow_closed(p, k, nil, t);
      const auto direct = flow_nilpotent(from_cd_coords(p), k, nil, t);
      EXPECT_TRUE(moment_residual(direct).is_zero());
      EXPECT_EQ(canonicalize(direct), by_chart);
      EXPECT_EQ(direct.Y, from_cd_coords(p).Y);
    }
  }
  const auto quad = from_cd_coords(random_point<Q>(rng, 2, 2));
  EXPECT_EQ(flow_nilpotent(quad, 1, nil, q(2)).X, quad.X + quad.v * nil * quad.w * q(2));
  EXPECT_THROW(flow_nilpotent(quad, 1, identity<Q>(2), q(1)), Error);
  EXPECT_THROW(flow_closed(random_point<Q>(rng, 2, 2), 1, M{{q(1), q(1)}, {q(0), q(2)}}, q(1)), Error);
}

TEST(Flow, RungeKuttaAgreesWithClosed) {
  numeric_tolerance() = 1e-8;
  Rng rng(7);
  for (int c = 0; c < 4; ++c) {
    const auto p = numeric_point(rng, 2, 2);
    const MC alpha = rng.matrix<Cplx>(2, 2, 1) * Cplx(0.2);
    const unsigned k = static_cast<unsigned>(c % 3);
    const auto closed = flow_closed(p, k, alpha, Cplx(0.5));
    const auto rk = flow_numeric(from_cd_coords(p), k, alpha, Cplx(0.5), 2000);
    EXPECT_TRUE(on_fiber(rk));
    EXPECT_EQ(canonicalize(rk), closed);
  }
}

TEST(Flow, RungeKuttaLinearAtOrderZero) {
  numeric_tolerance() = 1e-8;
  Rng rng(8);
  const auto p = numeric_point(rng, 2, 2);
  const MC alpha = rng.matrix<Cplx>(2, 2, 1);
  const auto rk = flow_numeric(from_cd_coords(p), 0, alpha, Cplx(0.3), 1000);
  EXPECT_EQ(rk.v, p.vrow * matrix_exp(alpha * Cplx(0.3)));
}

TEST(Poisson, BracketRelations) {
  numeric_tolerance() = 1e-6;
  Rng rng(9);
  for (int c = 0; c < 4; ++c) {
    const auto quad = from_cd_coords(numeric_point(rng, 2, 2));
    const MC a = rng.matrix<Cplx>(2, 2, 1), b = rng.matrix<Cplx>(2, 2, 1);
    const unsigned k = static_cast<unsigned>(c % 2), l = 1;
    const Cplx got = poisson_bracket(quad, k, a, l, b);
    const Cplx want = hamiltonian(quad, k + l, a * b - b * a);
    EXPECT_LT(std::abs(got - want), 1e-6 * std::max(1.0, std::abs(want)));
    EXPECT_LT(std::abs(poisson_bracket(quad, k, a, l, a)), 1e-6 * std::max(1.0, std::abs(hamiltonian(quad, k + l, a))));
  }
  const auto q1 = from_cd_coords(numeric_point(rng, 3, 1));
  EXPECT_LT(std::abs(poisson_bracket(q1, 1, MC{{Cplx(2)}}, 2, MC{{Cplx(-1)}})), 1e-6);
  numeric_tolerance() = 1e-9;
}
