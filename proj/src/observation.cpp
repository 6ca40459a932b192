#include "binverse/observation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "binverse/rng.hpp"

namespace binverse {

namespace {

// Fixed sub-stream tags so independent draws never collide.
constexpr std::uint64_t kNoiseStream = 0xA11CE5EED0000001ULL;
constexpr std::uint64_t kLayoutStream = 0xA11CE5EED0000002ULL;

struct Overlap {
  int index;
  double length;
};

// Overlap lengths of the periodic interval [center - w/2, center + w/2]
// with the grid cells [m/N - 1/(2N), m/N + 1/(2N)).
std::vector<Overlap> axis_overlaps(int N, double w, double center) {
  const double lo = center - 0.5 * w;
  const double hi = center + 0.5 * w;
  const int m_lo = static_cast<int>(std::floor((lo + 0.5 / N) * N)) - 1;
  const int m_hi = static_cast<int>(std::ceil((hi + 0.5 / N) * N)) + 1;
  std::vector<Overlap> out;
  out.reserve(m_hi - m_lo + 1);
  for (int m = m_lo; m <= m_hi; ++m) {
    const double cell_lo = (m - 0.5) / N;
    const double cell_hi = (m + 0.5) / N;
    const double len = std::min(hi, cell_hi) - std::max(lo, cell_lo);
    if (len <= 0) continue;
    out.push_back({(m % N + N) % N, len});
  }
  return out;
}

void require_window(int N, double w) {
  if (w < 1.0 / N - 1e-12)
    throw std::invalid_argument(
        "observation window is smaller than one grid cell");
}

double average_over_window(const GridField& u, double w, double cx,
                           double cy) {
  const auto ox = axis_overlaps(u.N, w, cx);
  const auto oy = axis_overlaps(u.N, w, cy);
  double acc = 0.0;
  for (const Overlap& a : ox)
    for (const Overlap& b : oy)
      acc += a.length * b.length * u.values(a.index, b.index);
  return acc / (w * w);
}

}  // namespace

ObservationSet make_observation_set(Eigen::MatrixX2d points, Eigen::VectorXd y,
                                    Eigen::MatrixXd Sigma, double noise_scale,
                                    double window) {
  if (points.rows() != y.size() || Sigma.rows() != y.size() ||
      Sigma.cols() != y.size())
    throw std::invalid_argument("observation set dimensions disagree");
  ObservationSet obs;
  obs.points = std::move(points);
  obs.y = std::move(y);
  obs.Sigma = std::move(Sigma);
  obs.noise_scale = noise_scale;
  obs.window = window;
  if (obs.y.size() > 0) {
    obs.llt.compute(obs.Sigma);
    if (obs.llt.info() != Eigen::Success)
      throw std::invalid_argument("Sigma is not symmetric positive definite");
  }
  return obs;
}

ObservationSet no_observations() {
  return make_observation_set(Eigen::MatrixX2d(0, 2), Eigen::VectorXd(0),
                              Eigen::MatrixXd(0, 0), 1.0, 0.0);
}

Eigen::MatrixX2d uniform_grid_points(int n) {
  if (n <= 0) throw std::invalid_argument("layout size must be positive");
  Eigen::MatrixX2d pts(n * n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      pts(i * n + j, 0) = (i + 0.5) / n;
      pts(i * n + j, 1) = (j + 0.5) / n;
    }
  return pts;
}

Eigen::MatrixX2d random_points(int J, std::uint64_t seed) {
  if (J <= 0) throw std::invalid_argument("point count must be positive");
  Eigen::MatrixX2d pts(J, 2);
  for (int j = 0; j < J; ++j) {
    pts(j, 0) = rng::uniform(seed, kLayoutStream, j, 0);
    pts(j, 1) = rng::uniform(seed, kLayoutStream, j, 1);
  }
  return pts;
}

Eigen::VectorXd apply_K(const GridField& u, const ObservationSet& obs) {
  if (obs.size() == 0) return Eigen::VectorXd(0);
  require_window(u.N, obs.window);
  Eigen::VectorXd out(obs.size());
  for (Eigen::Index j = 0; j < obs.size(); ++j)
    out[j] =
        average_over_window(u, obs.window, obs.points(j, 0), obs.points(j, 1));
  return out;
}

Eigen::ArrayXXd window_weights(int N, double window, double cx, double cy) {
  require_window(N, window);
  Eigen::ArrayXXd w = Eigen::ArrayXXd::Zero(N, N);
  for (const Overlap& a : axis_overlaps(N, window, cx))
    for (const Overlap& b : axis_overlaps(N, window, cy))
      w(a.index, b.index) += a.length * b.length / (window * window);
  return w;
}

GridField make_truth(TruthKind kind, int N, const TruthShapes& shapes) {
  GridField u = make_field(N, FieldKind::binary);
  const double band = 0.5 * std::sqrt(2.0) / N;

  // Signed distance to the inclusion set, positive inside. The ellipse uses
  // the first-order implicit approximation g/|grad g|, exact enough within
  // the rasterization band.
  auto signed_dist = [&](double x, double y) -> double {
    switch (kind) {
      case TruthKind::A:
        return shapes.disc_r - std::hypot(x - shapes.disc_cx, y - shapes.disc_cy);
      case TruthKind::B: {
        const double dx = x - shapes.ell_cx, dy = y - shapes.ell_cy;
        const double g =
            1.0 - (dx * dx / (shapes.ell_sa * shapes.ell_sa) +
                   dy * dy / (shapes.ell_sb * shapes.ell_sb));
        const double gx = -2.0 * dx / (shapes.ell_sa * shapes.ell_sa);
        const double gy = -2.0 * dy / (shapes.ell_sb * shapes.ell_sb);
        const double grad = std::hypot(gx, gy);
        const double d_ell = grad > 1e-12
                                 ? g / grad
                                 : g * std::min(shapes.ell_sa, shapes.ell_sb);
        const double d1 = shapes.b1_r - std::hypot(x - shapes.b1_cx, y - shapes.b1_cy);
        const double d2 = shapes.b2_r - std::hypot(x - shapes.b2_cx, y - shapes.b2_cy);
        return std::max(d_ell, std::max(d1, d2));
      }
      case TruthKind::C: {
        const int cells = shapes.checker_cells;
        const double t1 = x * cells, t2 = y * cells;
        const double f1 = t1 - std::floor(t1), f2 = t2 - std::floor(t2);
        const double d = std::min(std::min(f1, 1.0 - f1), std::min(f2, 1.0 - f2)) / cells;
        const int parity =
            (static_cast<int>(std::floor(t1)) + static_cast<int>(std::floor(t2))) & 1;
        return parity == 0 ? d : -d;
      }
    }
    return 0.0;
  };

  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double d = signed_dist(double(i) / N, double(j) / N);
      u.values(i, j) = std::abs(d) < band ? 0.0 : (d > 0 ? 1.0 : -1.0);
    }
  return u;
}

ObservationSet synthesize_data(const GridField& truth,
                               const Eigen::MatrixX2d& points, int N_inversion,
                               Eigen::MatrixXd Sigma, double noise_scale,
                               std::uint64_t seed, double window) {
  if (truth.N <= N_inversion)
    throw std::invalid_argument(
        "inverse-crime guard: truth grid must be finer than the inversion grid");
  const double w = window > 0 ? window : 2.0 / N_inversion;
  const Eigen::Index J = points.rows();
  ObservationSet obs = make_observation_set(
      points, Eigen::VectorXd::Zero(J), std::move(Sigma), noise_scale, w);
  obs.y = apply_K(truth, obs);
  if (noise_scale != 0.0 && J > 0) {
    Eigen::VectorXd xi(J);
    for (Eigen::Index j = 0; j < J; ++j)
      xi[j] = rng::gaussian(seed, kNoiseStream, j, 0);
    const Eigen::VectorXd noise = obs.llt.matrixL() * xi;
    obs.y += noise_scale * noise;
  }
  return obs;
}

double misfit_unscaled(const GridField& u, const ObservationSet& obs) {
  if (obs.size() == 0) return 0.0;
  const Eigen::VectorXd residual = obs.y - apply_K(u, obs);
  const Eigen::VectorXd z = obs.llt.matrixL().solve(residual);
  return 0.5 * z.squaredNorm();
}

double misfit(const GridField& u, const ObservationSet& obs) {
  if (obs.size() == 0) return 0.0;
  return misfit_unscaled(u, obs) / (obs.noise_scale * obs.noise_scale);
}

}  // namespace binverse
