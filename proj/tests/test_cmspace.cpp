#include "helpers.hpp"

using namespace cmg;
using namespace th;

TEST(Moment, ScalarExamples) {
  EXPECT_TRUE(moment_residual(Quadruple<Q>(M{{q(2)}}, M{{q(5)}}, M{{q(1)}}, M{{q(-1)}})).is_zero());
  EXPECT_EQ(moment_residual(Quadruple<Q>(M{{q(2)}}, M{{q(5)}}, M{{q(1)}}, M{{q(1)}})), (M{{q(2)}}));
}

TEST(Moment, ChartOutputIsOnFiber) {
  Rng rng(1);
  for (int c = 0; c < 20; ++c) {
    const auto p = random_point<Q>(rng, static_cast<std::size_t>(rng.integer(1, 4)), static_cast<std::size_t>(rng.integer(1, 3)));
    EXPECT_TRUE(moment_residual(from_cd_coords(p)).is_zero());
  }
}

TEST(Moment, NumericRelativeTolerance) {
  numeric_tolerance() = 1e-9;
  Rng rng(2);
  const auto q = from_cd_coords(convert<Cplx>(random_point<Q>(rng, 3, 2)));
  EXPECT_TRUE(on_fiber(q));
  auto bad = q;
  bad.X(0, 1) += Cplx(1e-3);
  EXPECT_FALSE(on_fiber(bad));
}

TEST(Chart, CdTwoPoints) {
  CMPoint<Q> p;
  p.n = 2;
  p.lambda = {q(0), q(1)};
  p.alpha = {q(0), q(0)};
  p.vrow = M{{q(1)}, {q(1)}};
  p.wcol = M{{q(-1), q(-1)}};
  const auto quad = from_cd_coords(p);
  EXPECT_EQ(quad.X, (M{{q(0), q(1)}, {q(-1), q(0)}}));
  EXPECT_TRUE(moment_residual(quad).is_zero());
}

TEST(Chart, CdSinglePoint) {
  const auto quad = from_cd_coords(point1(q(3), q(7)));
  EXPECT_EQ(quad.X, (M{{q(7)}}));
  EXPECT_EQ(quad.Y, (M{{q(3)}}));
}

TEST(Chart, RepeatedPositionsRejected) {
  CMPoint<Q> p;
  p.n = 2;
  p.lambda = {q(1), q(1)};
  p.alpha = {q(0), q(0)};
  p.vrow = M{{q(1)}, {q(1)}};
  p.wcol = M{{q(-1), q(-1)}};
  try {
    from_cd_coords(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RepeatedEigenvalues);
  }
}

TEST(Chart, CprimeTwoPoints) {
  const auto quad = from_cprime_coords<Q>({q(0), q(1)}, {q(0), q(0)}, M{{q(1)}, {q(1)}}, M{{q(-1), q(-1)}});
  EXPECT_EQ(quad.Y(0, 1), q(-1));
  EXPECT_EQ(quad.Y(1, 0), q(1));
  EXPECT_TRUE(moment_residual(quad).is_zero());
  EXPECT_EQ(from_cprime_coords<Q>({q(4)}, {q(9)}, M{{q(1)}}, M{{q(-1)}}).Y, (M{{q(9)}}));
}

TEST(Canonical, TorusRescalingAndPermutation) {
  Rng rng(3);
  for (int c = 0; c < 10; ++c) {
    const auto p = random_point<Q>(rng, 3, 2);
    const auto quad = from_cd_coords(p);
    M torus = identity<Q>(3);
    torus(1, 1) = q(2);  // (v_1, w_1) -> (2 v_1, w_1 / 2)
    EXPECT_EQ(canonicalize(gl_conjugate(torus, quad)), canonicalize(quad));
    // swap indices 0 and 2
    M perm(3, 3);
    perm(0, 2) = perm(2, 0) = perm(1, 1) = q(1);
    EXPECT_EQ(canonicalize(gl_conjugate(perm, quad)), canonicalize(quad));
    EXPECT_EQ(canonicalize(from_cd_coords(canonicalize(quad))), canonicalize(quad));
  }
}

TEST(Canonical, NumericDiagonalizesY) {
  numeric_tolerance() = 1e-9;
  Rng rng(4);
  const auto p = random_point<Q>(rng, 3, 1);
  const auto qn = from_cd_coords(convert<Cplx>(p));
  M g{{q(1), q(2), q(0)}, {q(0), q(1), q(-1)}, {q(1), q(0), q(1)}};
  const auto moved = gl_conjugate(convert<Cplx>(g), qn);
  EXPECT_EQ(canonicalize(moved), convert<Cplx>(canonicalize(from_cd_coords(p))));
}

TEST(Canonical, ExactNeedsDiagonalY) {
  Rng rng(5);
  const auto quad = from_cd_coords(random_point<Q>(rng, 2, 1));
  M g{{q(1), q(1)}, {q(0), q(1)}};
  try {
    canonicalize(gl_conjugate(g, quad));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonDiagonalExact);
  }
}

TEST(Bispectral, SinglePoint) {
  const auto quad = from_cd_coords(point1(q(5), q(2)));
  const auto b = bisp_involution(quad);
  EXPECT_EQ(b.X, (M{{q(-5)}}));
  EXPECT_EQ(b.Y, (M{{q(-2)}}));
  EXPECT_EQ(b.v, (M{{q(1)}}));
  EXPECT_EQ(b.w, (M{{q(-1)}}));
}

TEST(Bispectral, InvolutionPreservesFiber) {
  Rng rng(6);
  for (int c = 0; c < 10; ++c) {
    const auto quad = from_cd_coords(random_point<Q>(rng, 3, 2));
    EXPECT_TRUE(moment_residual(bisp_involution(quad)).is_zero());
    EXPECT_EQ(bisp_involution(bisp_involution(quad)), quad);
  }
}

TEST(Bispectral, AlternativeSignReadingIsSameClass) {
  Rng rng(8);
  for (int c = 0; c < 5; ++c) {
    const auto quad = from_cd_coords(random_point<Q>(rng, 3, 2));
    const auto b = bisp_involution(quad);
    const Quadruple<Q> alt(b.X, b.Y, quad.w.transpose(), quad.v.transpose());
    // (v, w) and (-v, -w) differ by the torus element -I; compare in the chart where Y is diagonal again
    EXPECT_EQ(canonicalize(bisp_involution(alt)), canonicalize(bisp_involution(b)));
  }
}

TEST(Embed, RankOneToTwo) {
  const auto e = embed_rank(from_cd_coords(point1(q(0), q(1))));
  EXPECT_EQ(e.r, 2u);
  EXPECT_EQ(e.v, (M{{q(1), q(0)}}));
  EXPECT_EQ(e.w, (M{{q(-1)}, {q(0)}}));
  EXPECT_TRUE(moment_residual(e).is_zero());
}

TEST(Serialize, PointRoundTrip) {
  Rng rng(7);
  const auto p = random_point<Q>(rng, 2, 2);
  EXPECT_EQ(cmpoint_from_json<Q>(cmpoint_to_json(p)), p);
  const auto quad = from_cd_coords(p);
  EXPECT_EQ(quadruple_from_json<Q>(quadruple_to_json(quad)), quad);
}
