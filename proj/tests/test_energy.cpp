#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "binverse/energy.hpp"
#include "binverse/posterior.hpp"

using namespace binverse;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

GridField stripe_field(int N) {
  GridField u = make_field(N, FieldKind::binary);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) u.values(i, j) = i < N / 2 ? 1.0 : -1.0;
  return u;
}

GridField mode_field(int N, int k, double m) {
  GridField u = make_field(N, FieldKind::continuous);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      u.values(i, j) = m * std::sqrt(2.0) * std::cos(kTwoPi * k * i / N);
  return u;
}

}  // namespace

TEST_CASE("double-well penalty closed forms") {
  PriorParams p;
  p.r = 2.0;
  p.eps = 0.5;
  p.b = 3.0;
  const double scale = p.r * std::pow(p.eps, -p.b);

  GridField u = make_field(16, FieldKind::continuous);
  u.values.setZero();
  CHECK(psi(u, p) == doctest::Approx(scale * 0.25).epsilon(1e-14));
  u.values.setConstant(1.0);
  CHECK(psi(u, p) == doctest::Approx(0.0).scale(scale));
  u.values.setConstant(-1.0);
  CHECK(psi(u, p) == doctest::Approx(0.0).scale(scale));
  u.values.setConstant(0.5);
  CHECK(psi(u, p) == doctest::Approx(scale * 9.0 / 64.0).epsilon(1e-14));
}

TEST_CASE("Onsager-Machlup objective composes its three parts") {
  PriorParams p = with_scalings(PriorParams{}, 1.5, 3.0);
  p.delta = 0.01;
  p.q = 0.1;
  p.eps = 0.04;
  p.r = 1.0;
  const GridField u = mode_field(64, 2, 0.3);
  const ObservationSet none = no_observations();
  const double want = 0.5 * cm_norm_sq(u, p) + psi(u, p);
  CHECK(onsager_machlup(u, none, p) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("i_eps closed form on a single mode") {
  PriorParams p;
  p.delta = 0.01;
  p.q = 0.1;
  p.tau = 2.0;
  p.r = 1.5;
  p.eps = 0.25;
  p.a1 = 0.5;  // a = 3 + 2(a1 - a3) = 5
  p.a3 = -0.5;
  const int k = 3;
  const double m = 0.4;
  const GridField u = mode_field(64, k, m);
  const ObservationSet none = no_observations();

  const double s2 = kTwoPi * kTwoPi * k * k;
  const double a = 3.0 + 2.0 * (p.a1 - p.a3);
  const double well = 1.0 - 2.0 * m * m + 1.5 * m * m * m * m;
  const double want = 0.5 * p.delta * std::pow(p.eps, 3.0) * s2 * s2 * m * m +
                      0.5 * p.q * p.delta * p.eps * s2 * m * m +
                      0.25 * p.r / p.eps * well +
                      0.5 * p.delta * p.tau * p.tau * std::pow(p.eps, a) * m * m;
  CHECK(i_eps(u, none, p) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("i_eps of the pure phases") {
  PriorParams p;
  p.delta = 2.0;
  p.tau = 3.0;
  p.eps = 0.5;
  GridField u = make_field(32, FieldKind::continuous);
  u.values.setConstant(1.0);
  const double want = 0.5 * p.delta * p.tau * p.tau * std::pow(p.eps, 3.0);
  CHECK(i_eps(u, no_observations(), p) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("i_eps requires a positive mass exponent") {
  PriorParams p;
  p.a1 = 0.0;
  p.a3 = 2.0;  // a = -1
  const GridField u = mode_field(32, 1, 0.1);
  CHECK_THROWS(i_eps(u, no_observations(), p));
}

TEST_CASE("rescaling identity under the resolved exponents") {
  PriorParams p = with_scalings(PriorParams{}, 1.5, 3.0);
  p.delta = 0.01;
  p.q = 0.1;
  p.eps = 0.04;
  p.r = 1.0;

  GridField u = make_field(64, FieldKind::continuous);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      u.values(i, j) = std::tanh(std::sin(kTwoPi * i / 64.0) +
                                 0.3 * std::cos(kTwoPi * 2 * j / 64.0));

  const GridField truth = make_truth(TruthKind::A, 128);
  const ObservationSet obs = synthesize_data(
      truth, uniform_grid_points(3), 64, Eigen::MatrixXd::Identity(9, 9),
      std::pow(p.eps, p.c), 3);

  const double lhs = onsager_machlup(u, obs, p);
  const double rhs = std::pow(p.eps, -2.0 * p.a1 - 3.0) * i_eps(u, obs, p);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("stripe perimeter is exact") {
  for (const int N : {64, 128, 256})
    CHECK(perimeter_estimate(stripe_field(N)) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("single-pixel perimeter") {
  const int N = 64;
  GridField u = make_field(N, FieldKind::binary);
  u.values.setConstant(-1.0);
  u.values(5, 5) = 1.0;
  CHECK(perimeter_estimate(u) == doctest::Approx(2.0 / N).epsilon(1e-14));
}

TEST_CASE("perimeter of the empty interface is zero") {
  GridField u = make_field(32, FieldKind::binary);
  u.values.setConstant(1.0);
  CHECK(perimeter_estimate(u) == 0.0);
}

TEST_CASE("perimeter requires a binary field") {
  GridField u = make_field(32, FieldKind::continuous);
  u.values.setConstant(0.5);
  CHECK_THROWS(perimeter_estimate(u));
}

TEST_CASE("scaling study is reproducible and nested in N") {
  PriorParams p;
  p.tau = 1500.0;
  const std::vector<double> alphas = {1.5, 3.0};
  const ScalingStudy small = interface_scaling_study(alphas, {32, 64}, 7, p);
  const ScalingStudy again = interface_scaling_study(alphas, {32, 64}, 7, p);
  const ScalingStudy wide = interface_scaling_study(alphas, {32, 64, 128}, 7, p);

  REQUIRE(small.ell.rows() == 2);
  REQUIRE(small.ell.cols() == 2);
  CHECK((small.ell - again.ell).cwiseAbs().maxCoeff() == 0.0);
  // Counter-based mode draws make the shared columns independent of the
  // ladder extent.
  CHECK((small.ell - wide.ell.leftCols(2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(small.ell.minCoeff() > 0.0);
}

TEST_CASE("recovery sequence shape") {
  PriorParams p;
  p.delta = 0.01;
  p.q = 0.1;
  p.r = 1.0;
  const PDeltaResult pd = p_delta(p, 10.0, 512);
  const int N = 256;
  CHECK_THROWS(recovery_sequence(DiscShape{}, 1.0 / N, pd.profile, N));

  const GridField u = recovery_sequence(DiscShape{}, 0.04, pd.profile, N);
  // The minimizing profile decays to +/-1 through damped oscillations
  // (the U'' term makes the far-field roots complex), so a mild overshoot
  // of the wells is genuine.
  CHECK(u.values.maxCoeff() <= 1.1);
  CHECK(u.values.minCoeff() >= -1.1);
  CHECK(u.values(N / 2, N / 2) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(u.values(0, 0) == doctest::Approx(-1.0).epsilon(1e-3));
  // Zero level set sits on the disc boundary.
  const int edge = int(std::lround((0.5 + 0.25) * N));
  CHECK(std::abs(u.values(edge, N / 2)) < 0.2);
}

TEST_CASE("gamma check gaps shrink along the ladder") {
  PriorParams p;
  p.delta = 0.01;
  p.q = 0.1;
  p.r = 1.0;
  const GammaCheckReport rep = gamma_check(p, {0.08, 0.04}, 256);
  REQUIRE(rep.gaps.size() == 2);
  CHECK(rep.target == doctest::Approx(rep.p_delta_value * kTwoPi * 0.25));
  CHECK(rep.gaps[1] < rep.gaps[0]);
  CHECK(rep.gaps[1] < 0.1);
  CHECK(rep.i_eps_values[0] > 0.0);
}
