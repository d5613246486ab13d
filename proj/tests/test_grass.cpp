#include "helpers.hpp"

using namespace cmg;
using namespace th;

namespace {

std::vector<RF> row(std::initializer_list<RF> xs) { return std::vector<RF>(xs); }

CellPoint<Q> cell(M a, M b) { return CellPoint<Q>{std::move(a), std::move(b)}; }

}  // namespace

TEST(Beta, MembershipOfSimplePole) {
  const auto w = beta(point1(q(0), q(0)));
  EXPECT_TRUE(member(row({x_pow(-1)}), w));  // 1/z for alpha = 0
  EXPECT_TRUE(member(row({x_pow(3)}), w));
  EXPECT_FALSE(member(row({RF(P(q(1)), poly({-1, 1}))}), w));  // pole off the site
}

TEST(Baker, SinglePointExamples) {
  const auto w = beta(point1(q(0), q(1)));
  const auto id = GammaJet<Q>::identity({q(0)}, 1);
  const auto psi = baker(w, id);
  EXPECT_EQ(psi(0, 0), RF(q(1)) - x_pow(-1));
  EXPECT_TRUE(is_normalized(psi));
  try {
    baker(beta(point1(q(0), q(0))), id);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideBigCell);
  }
}

TEST(Baker, RowsLieInW) {
  Rng rng(1);
  int done = 0;
  for (int c = 0; c < 40 && done < 8; ++c) {
    const auto p = random_point<Q>(rng, static_cast<std::size_t>(rng.integer(1, 3)), static_cast<std::size_t>(rng.integer(1, 2)));
    const auto w = beta(p);
    const auto g = random_loop_at<Q>(rng, p.r, p.lambda, 2);
    const auto jet = jet_of_polymat(g, p.lambda);
    Matrix<RF> psi;
    try {
      psi = baker(w, jet);
    } catch (const Error& e) {
      ASSERT_EQ(e.kind(), ErrorKind::OutsideBigCell);
      continue;
    }
    ++done;
    EXPECT_TRUE(is_normalized(psi));
    EXPECT_TRUE(rows_satisfy_at_jet(w, psi, jet));
    const Matrix<RF> prod = psi * g.map([](const P& e) { return RF(e); });
    for (std::size_t i = 0; i < p.r; ++i) EXPECT_TRUE(member(matrix_row(prod, i), w));
  }
  EXPECT_GE(done, 4);
}

TEST(Baker, StationaryLimitAndDeterminant) {
  Rng rng(2);
  for (int c = 0; c < 6; ++c) {
    const auto p = random_point<Q>(rng, static_cast<std::size_t>(rng.integer(1, 3)), 1);
    const Q x = q(1000 + c);
    if (cmg::is_zero(big_cell_indicator(p, x))) continue;
    const auto psi = stationary_baker(p, x);
    EXPECT_TRUE(is_normalized(psi));
    EXPECT_EQ(psi2_det(p, x), psi(0, 0));
    // the correction is O(1/x) at a fixed z
    EXPECT_LT(std::abs(to_complex((psi(0, 0) - RF(q(1)))(q(1, 3)))), 1.0);
  }
}

TEST(Baker, DeterminantFormulaSinglePoint) {
  // 1 - 1/((z - lambda)(x + alpha))
  const auto f = psi2_det(point1(q(2), q(3)), q(1));
  EXPECT_EQ(f, RF(q(1)) - RF(P(q(1, 4)), poly({-2, 1})));
  Rng rng(3);
  try {
    psi2_det(from_cd_coords(random_point<Q>(rng, 1, 2)), q(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedRank);
  }
}

TEST(Cell, IdentityB) {
  const M a{{q(1), q(2)}, {q(0), q(3)}};
  const auto c = cell(a, identity<Q>(2));
  const auto quad = cell_to_point(c);
  EXPECT_EQ(quad.X, a);
  EXPECT_TRUE(quad.Y.is_zero());
  EXPECT_EQ(quad.v, identity<Q>(2));
  EXPECT_EQ(quad.w, -identity<Q>(2));
  EXPECT_EQ(cell_baker_stationary(c, q(5)), stationary_baker(quad, q(5)));
}

TEST(Cell, RankOne) {
  const M a{{q(1)}, {q(0)}}, b{{q(1), q(0)}};
  const auto c = cell(identity<Q>(2), a * b);
  const auto quad = cell_to_point(c);
  EXPECT_EQ(quad.X, (M{{q(1)}}));
  EXPECT_EQ(quad.w * quad.v, -(a * b));
  EXPECT_TRUE(moment_residual(quad).is_zero());
  for (long x : {2L, 5L}) EXPECT_EQ(cell_baker_stationary(c, q(x)), stationary_baker(quad, q(x)));
}

TEST(Cell, NotInBetaImage) {
  const M a{{q(1)}, {q(0)}}, b{{q(0), q(1)}};
  const auto c = cell(identity<Q>(2), a * b);
  try {
    cell_to_point(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInBetaImage);
  }
  EXPECT_TRUE(z_stable(cell_grpoint(c)));
  EXPECT_EQ(cell_baker_stationary(c, q(1)), cell_baker_stationary(c, q(4)));
}

TEST(ZStable, Examples) {
  EXPECT_TRUE(z_stable(GrPoint<Q>::base(2)));
  EXPECT_FALSE(z_stable(beta(point1(q(0), q(0)))));
}

TEST(Interleave, Examples) {
  EXPECT_EQ(interleave(row({RF(q(1)), RF()})), RF(q(1)));
  EXPECT_EQ(interleave(row({RF(), x_pow(-1)})), x_pow(-1));
  EXPECT_EQ(interleave(row({x_pow(1), RF()})), x_pow(2));
  for (int k = -3; k <= 3; ++k) EXPECT_EQ(interleave(deinterleave(x_pow(k))), x_pow(k));
}

TEST(Ansatz, EmptyConditionsGiveIdentity) {
  for (const auto& rep : stationary_ansatz_order2(GrPoint<Q>::base(2), {q(1), q(2)})) {
    EXPECT_EQ(rep.status, AnsatzStatus::Solvable);
    EXPECT_TRUE(rep.A.is_zero());
    EXPECT_TRUE(rep.B.is_zero());
  }
}

TEST(Tau, Values) {
  EXPECT_EQ(tau32(q(1), q(0), q(0), q(0)), q(1));
  EXPECT_EQ(tau32(q(1), q(0), q(1), q(0)), q(-11));
  for (long t2 = -3; t2 <= 3; ++t2) EXPECT_EQ(tau32(q(0), q(t2), q(0), q(0)), q(0));
}

TEST(Lattice, HnfMembership) {
  std::vector<std::vector<P>> rows{{poly({0, 1}), poly({1})}, {P(), poly({0, 1})}};
  const auto h = poly_hnf(rows, 2);
  EXPECT_TRUE(module_contains(h, {poly({0, 1}), poly({1})}));
  EXPECT_TRUE(module_contains(h, {P(), poly({0, 0, 1})}));
  EXPECT_FALSE(module_contains(h, {poly({1}), P()}));
}

TEST(Lattice, BasePointIsFree) {
  const auto lat = lattice_basis(GrPoint<Q>::base(1), 1, 1);
  EXPECT_TRUE(equals_lattice(GrPoint<Q>::base(1), lat, 2));
}
