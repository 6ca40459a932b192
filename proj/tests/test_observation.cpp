#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "binverse/observation.hpp"

using namespace binverse;

namespace {

GridField ramp_field(int N) {
  GridField u = make_field(N, FieldKind::continuous);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) u.values(i, j) = std::sin(1.0 + i) + 0.1 * j;
  return u;
}

// Piecewise-constant lookup of the cell containing x: cells are centered
// at the grid points i/N with width 1/N.
double cell_value(const GridField& u, double x, double y) {
  const int N = u.N;
  auto idx = [&](double t) {
    const int i = int(std::lround(t * N)) % N;
    return (i + N) % N;
  };
  return u.values(idx(x), idx(y));
}

// Midpoint rasterization of the window average; converges to the exact
// cell-overlap quadrature as the subdivision grows.
double window_average_brute(const GridField& u, double cx, double cy,
                            double w, int sub) {
  double acc = 0.0;
  for (int a = 0; a < sub; ++a)
    for (int b = 0; b < sub; ++b) {
      const double x = cx - w / 2 + (a + 0.5) * w / sub;
      const double y = cy - w / 2 + (b + 0.5) * w / sub;
      acc += cell_value(u, x - std::floor(x), y - std::floor(y));
    }
  return acc / (double(sub) * sub);
}

}  // namespace

TEST_CASE("uniform grid points are the window centers") {
  const Eigen::MatrixX2d pts = uniform_grid_points(3);
  REQUIRE(pts.rows() == 9);
  CHECK(pts(0, 0) == doctest::Approx(0.5 / 3.0));
  CHECK(pts(0, 1) == doctest::Approx(0.5 / 3.0));
  CHECK(pts(8, 0) == doctest::Approx(2.5 / 3.0));
  CHECK(pts(8, 1) == doctest::Approx(2.5 / 3.0));
}

TEST_CASE("random points are deterministic and inside the square") {
  const Eigen::MatrixX2d a = random_points(50, 4);
  const Eigen::MatrixX2d b = random_points(50, 4);
  const Eigen::MatrixX2d c = random_points(50, 5);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a - c).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.minCoeff() >= 0.0);
  CHECK(a.maxCoeff() < 1.0);
}

TEST_CASE("window weights sum to one") {
  for (const double w : {2.0 / 32, 0.1, 0.33})
    for (const double cx : {0.0, 0.27, 0.96}) {
      const Eigen::ArrayXXd wt = window_weights(32, w, cx, 0.61);
      CHECK(wt.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(wt.minCoeff() >= 0.0);
    }
}

TEST_CASE("cell averaging matches a brute-force rasterization") {
  const GridField u = ramp_field(8);
  Eigen::MatrixX2d pts(3, 2);
  pts << 0.13, 0.41,   // straddles cell boundaries
      0.5, 0.5,        // centered on a cell
      0.02, 0.97;      // wraps around the torus
  ObservationSet obs = make_observation_set(
      pts, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3), 1.0,
      0.3);
  const Eigen::VectorXd got = apply_K(u, obs);
  for (int j = 0; j < 3; ++j) {
    const double want =
        window_average_brute(u, pts(j, 0), pts(j, 1), 0.3, 3000);
    CHECK(got[j] == doctest::Approx(want).epsilon(2e-3));
  }
}

TEST_CASE("cell averaging is exact on constants and linear in the field") {
  GridField ones = make_field(16, FieldKind::continuous);
  ones.values.setConstant(2.25);
  ObservationSet obs = make_observation_set(
      random_points(7, 1), Eigen::VectorXd::Zero(7),
      Eigen::MatrixXd::Identity(7, 7), 1.0, 0.17);
  const Eigen::VectorXd y1 = apply_K(ones, obs);
  for (int j = 0; j < 7; ++j) CHECK(y1[j] == doctest::Approx(2.25).epsilon(1e-12));

  const GridField a = ramp_field(16);
  GridField b = make_field(16, FieldKind::continuous);
  b.values = a.values.sin();
  GridField combo = make_field(16, FieldKind::continuous);
  combo.values = 2.0 * a.values - 0.5 * b.values;
  const Eigen::VectorXd want =
      2.0 * apply_K(a, obs) - 0.5 * apply_K(b, obs);
  CHECK((apply_K(combo, obs) - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("window below one grid cell is rejected") {
  const GridField u = ramp_field(16);
  ObservationSet obs = make_observation_set(
      uniform_grid_points(2), Eigen::VectorXd::Zero(4),
      Eigen::MatrixXd::Identity(4, 4), 1.0, 0.5 / 16);
  CHECK_THROWS(apply_K(u, obs));
}

TEST_CASE("non-SPD covariance is rejected") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS(make_observation_set(uniform_grid_points(1).replicate(2, 1),
                                    Eigen::VectorXd::Zero(2), bad, 1.0, 0.1));
}

TEST_CASE("misfit against a dense-solve oracle") {
  Eigen::MatrixXd Sigma(3, 3);
  Sigma << 4.0, 1.0, 0.5,
           1.0, 3.0, 0.2,
           0.5, 0.2, 2.0;
  Eigen::MatrixX2d pts(3, 2);
  pts << 0.2, 0.2, 0.5, 0.6, 0.8, 0.3;
  const double noise_scale = 0.05;
  ObservationSet obs =
      make_observation_set(pts, Eigen::VectorXd::Zero(3), Sigma, noise_scale,
                           0.25);
  const GridField u = ramp_field(16);
  obs.y = apply_K(u, obs) + Eigen::Vector3d(0.3, -0.1, 0.2);

  const Eigen::VectorXd r = obs.y - apply_K(u, obs);
  const double want_unscaled = 0.5 * r.dot(Sigma.inverse() * r);
  CHECK(misfit_unscaled(u, obs) ==
        doctest::Approx(want_unscaled).epsilon(1e-12));
  CHECK(misfit(u, obs) ==
        doctest::Approx(want_unscaled / (noise_scale * noise_scale))
            .epsilon(1e-12));
}

TEST_CASE("empty observation set") {
  const ObservationSet none = no_observations();
  CHECK(none.size() == 0);
  CHECK(misfit(ramp_field(8), none) == 0.0);
}

TEST_CASE("truth A is a banded disc rasterization") {
  const int N = 256;
  const GridField t = make_truth(TruthKind::A, N);
  CHECK(t.kind == FieldKind::binary);
  CHECK(has_binary_values(t));
  CHECK(t.values(N / 2, N / 2) == 1.0);
  CHECK(t.values(0, 0) == -1.0);
  // Signed classification agrees with the analytic disc away from the band.
  const double band = 0.5 * std::sqrt(2.0) / N;
  int mism = 0, zeros = 0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double d =
          0.25 - std::hypot(i / double(N) - 0.5, j / double(N) - 0.5);
      const double v = t.values(i, j);
      if (v == 0.0) {
        ++zeros;
        CHECK(std::abs(d) <= band + 1e-12);
      } else if (std::abs(d) > band && v != (d > 0 ? 1.0 : -1.0)) {
        ++mism;
      }
    }
  CHECK(mism == 0);
  CHECK(zeros > 0);
  // Inside fraction approximates the disc area.
  const double inside = double((t.values == 1.0).count()) / (N * double(N));
  CHECK(inside == doctest::Approx(0.25 * 0.25 * M_PI).epsilon(0.02));
}

TEST_CASE("truth B has three disjoint inclusions") {
  const int N = 256;
  const GridField t = make_truth(TruthKind::B, N);
  CHECK(has_binary_values(t));
  CHECK(t.values(int(0.34 * N), int(0.60 * N)) == 1.0);  // ellipse center
  CHECK(t.values(int(0.74 * N), int(0.30 * N)) == 1.0);  // first disc
  CHECK(t.values(int(0.72 * N), int(0.76 * N)) == 1.0);  // second disc
  CHECK(t.values(0, 0) == -1.0);
  CHECK(t.values(int(0.95 * N), int(0.55 * N)) == -1.0);
}

TEST_CASE("truth C alternates on the checker tiles") {
  const int N = 320;
  const GridField t = make_truth(TruthKind::C, N);
  CHECK(has_binary_values(t));
  const int tile = N / 10;
  // Tile centers avoid the interface band.
  const double c00 = t.values(tile / 2, tile / 2);
  CHECK(std::abs(c00) == 1.0);
  CHECK(t.values(tile / 2 + tile, tile / 2) == -c00);
  CHECK(t.values(tile / 2, tile / 2 + tile) == -c00);
  CHECK(t.values(tile / 2 + tile, tile / 2 + tile) == c00);
}

TEST_CASE("data synthesis guards and reproducibility") {
  const GridField truth = make_truth(TruthKind::A, 64);
  const Eigen::MatrixX2d pts = uniform_grid_points(4);
  const Eigen::MatrixXd Sigma = Eigen::MatrixXd::Identity(16, 16);

  CHECK_THROWS(synthesize_data(truth, pts, 64, Sigma, 1.0, 1));
  CHECK_THROWS(synthesize_data(truth, pts, 128, Sigma, 1.0, 1));

  const ObservationSet a = synthesize_data(truth, pts, 32, Sigma, 0.1, 1);
  const ObservationSet b = synthesize_data(truth, pts, 32, Sigma, 0.1, 1);
  const ObservationSet c = synthesize_data(truth, pts, 32, Sigma, 0.1, 2);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - c.y).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.window == doctest::Approx(2.0 / 32));

  // Noise-free data are window averages of a +/-1 field.
  const ObservationSet clean = synthesize_data(truth, pts, 32, Sigma, 0.0, 1);
  CHECK(clean.y.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
  // The noisy vector deviates from the clean one at the noise scale.
  CHECK((a.y - clean.y).cwiseAbs().maxCoeff() > 0.0);
  CHECK((a.y - clean.y).cwiseAbs().maxCoeff() < 1.0);
}
