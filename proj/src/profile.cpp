#include "binverse/profile.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace binverse {

namespace {

// Trapezoid weight of node i on a grid of M intervals.
inline double tw(int i, int M) { return (i == 0 || i == M) ? 0.5 : 1.0; }

// Energy integrand pieces with constant continuation outside [-T, T]:
// ghost nodes hold -1 on the left and +1 on the right.
struct EnergyOps {
  const PriorParams& p;
  double h;
  int M;

  double ghost(const Eigen::VectorXd& V, int i) const {
    if (i < 0) return -1.0;
    if (i > M) return 1.0;
    return V[i];
  }
  double d1(const Eigen::VectorXd& V, int i) const {
    return (ghost(V, i + 1) - ghost(V, i - 1)) / (2.0 * h);
  }
  double d2(const Eigen::VectorXd& V, int i) const {
    return (ghost(V, i + 1) - 2.0 * V[i] + ghost(V, i - 1)) / (h * h);
  }

  double energy(const Eigen::VectorXd& V) const {
    double acc = 0.0;
    for (int i = 0; i <= M; ++i) {
      const double w = 1.0 - V[i] * V[i];
      acc += tw(i, M) * (0.5 * p.delta * d2(V, i) * d2(V, i) +
                         0.5 * p.q * p.delta * d1(V, i) * d1(V, i) +
                         0.25 * p.r * w * w);
    }
    return acc * h;
  }

  // dE/dV, assembled from the finite-difference stencils.
  Eigen::VectorXd gradient(const Eigen::VectorXd& V) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(M + 1);
    for (int i = 0; i <= M; ++i) {
      const double wi = tw(i, M);
      const double curv = p.delta * wi * d2(V, i);
      const double slope = p.q * p.delta * wi * d1(V, i);
      g[i] += -2.0 * curv / (h * h);
      if (i - 1 >= 0) {
        g[i - 1] += curv / (h * h);
        g[i - 1] += -slope / (2.0 * h);
      }
      if (i + 1 <= M) {
        g[i + 1] += curv / (h * h);
        g[i + 1] += slope / (2.0 * h);
      }
      g[i] += -p.r * wi * V[i] * (1.0 - V[i] * V[i]);
    }
    return g * h;
  }
};

constexpr double kBoundaryPenalty = 1e3;

}  // namespace

ProfileGrid tanh_profile(double T, int M, double width) {
  ProfileGrid U{T, M, Eigen::VectorXd(M + 1)};
  for (int i = 0; i <= M; ++i) U.U[i] = std::tanh(U.t(i) / width);
  return U;
}

ProfileGrid mirror_odd(double T, int M, const Eigen::VectorXd& right_half) {
  if (right_half.size() != M / 2)
    throw std::invalid_argument("half profile must hold M/2 nodes");
  ProfileGrid U{T, M, Eigen::VectorXd(M + 1)};
  U.U[M / 2] = 0.0;
  for (int k = 1; k <= M / 2; ++k) {
    U.U[M / 2 + k] = right_half[k - 1];
    U.U[M / 2 - k] = -right_half[k - 1];
  }
  return U;
}

double profile_energy(const ProfileGrid& U, const PriorParams& p) {
  if (U.M < 16) throw std::invalid_argument("profile grid too coarse (M < 16)");
  if (U.U.size() != U.M + 1)
    throw std::invalid_argument("profile grid holds M+1 nodal values");
  return EnergyOps{p, U.h(), U.M}.energy(U.U);
}

double p_delta_lower_bound(const PriorParams& p) {
  return (8.0 / 3.0) * std::sqrt(p.q * p.delta * p.r / 8.0);
}

double p_delta_tanh_upper_bound(const PriorParams& p, double T, int M) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.02, hi = 20.0;
  auto f = [&](double s) { return profile_energy(tanh_profile(T, M, s), p); };
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = f(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = f(x2);
    }
  }
  return std::min(f1, f2);
}

PDeltaResult p_delta(const PriorParams& p, double T, int M) {
  if (!(p.q > 0) || !(p.delta > 0) || !(p.r > 0))
    throw std::invalid_argument("p_delta requires q, delta, r > 0");
  if (M < 16 || M % 2 != 0)
    throw std::invalid_argument("profile grid needs an even M >= 16");

  const EnergyOps ops{p, 2.0 * T / M, M};
  const int H = M / 2;

  // Objective and gradient in the free (t > 0) parameterization.
  auto fold = [&](const Eigen::VectorXd& x) {
    return mirror_odd(T, M, x).U;
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd V = fold(x);
    const double pen = V[M] - 1.0;
    return ops.energy(V) + kBoundaryPenalty * pen * pen;
  };
  auto gradient = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd V = fold(x);
    const Eigen::VectorXd gV = ops.gradient(V);
    Eigen::VectorXd g(H);
    for (int k = 1; k <= H; ++k) g[k - 1] = gV[H + k] - gV[H - k];
    g[H - 1] += 2.0 * kBoundaryPenalty * (V[M] - 1.0);
    return g;
  };

  // Exact Hessian of the objective in the free parameterization: the
  // full-grid pentadiagonal Hessian folded through the odd mirror
  // x_k = V[H+k] = -V[H-k] (V[H] is pinned), plus the boundary penalty.
  const double h = ops.h;
  auto hessian = [&](const Eigen::VectorXd& x) {
    const Eigen::VectorXd V = fold(x);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(14) * std::size_t(M));
    auto add_full = [&](int j, int l, double v) {
      if (j == H || l == H) return;
      const int kj = std::abs(j - H), kl = std::abs(l - H);
      const double sgn = (j > H ? 1.0 : -1.0) * (l > H ? 1.0 : -1.0);
      trip.emplace_back(kj - 1, kl - 1, sgn * v);
    };
    for (int i = 0; i <= M; ++i) {
      const double wi = h * tw(i, M);
      const int idx2[3] = {i - 1, i, i + 1};
      const double cd2[3] = {1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h)};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          if (idx2[a] < 0 || idx2[a] > M || idx2[b] < 0 || idx2[b] > M)
            continue;
          add_full(idx2[a], idx2[b], wi * p.delta * cd2[a] * cd2[b]);
        }
      const int idx1[2] = {i - 1, i + 1};
      const double cd1[2] = {-0.5 / h, 0.5 / h};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (idx1[a] < 0 || idx1[a] > M || idx1[b] < 0 || idx1[b] > M)
            continue;
          add_full(idx1[a], idx1[b], wi * p.q * p.delta * cd1[a] * cd1[b]);
        }
      add_full(i, i, wi * p.r * (3.0 * V[i] * V[i] - 1.0));
    }
    trip.emplace_back(H - 1, H - 1, 2.0 * kBoundaryPenalty);
    Eigen::SparseMatrix<double> Hs(H, H);
    Hs.setFromTriplets(trip.begin(), trip.end());
    return Hs;
  };

  PDeltaResult best;
  best.value = std::numeric_limits<double>::infinity();

  for (const double width : {0.5, 1.0, 2.0}) {
    Eigen::VectorXd x(H);
    for (int k = 1; k <= H; ++k) x[k - 1] = std::tanh(k * h / width);

    // Levenberg-damped Newton with Armijo backtracking; the damping only
    // engages while the quartic well keeps the Hessian indefinite.
    double f = objective(x);
    Eigen::VectorXd g = gradient(x);
    double mu = 0.0;
    bool converged = false;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;

    for (int it = 0; it < 200; ++it) {
      if (g.lpNorm<Eigen::Infinity>() < 1e-10 * std::max(1.0, std::abs(f))) {
        converged = true;
        break;
      }
      const Eigen::SparseMatrix<double> Hs = hessian(x);
      bool moved = false;
      for (int attempt = 0; attempt < 60 && !moved; ++attempt) {
        Eigen::SparseMatrix<double> Hd = Hs;
        if (mu > 0.0)
          for (int k = 0; k < H; ++k) Hd.coeffRef(k, k) += mu;
        solver.compute(Hd);
        if (solver.info() == Eigen::Success) {
          const Eigen::VectorXd d = solver.solve(-g);
          const double slope = g.dot(d);
          if (solver.info() == Eigen::Success && slope < 0.0) {
            double step = 1.0;
            for (int ls = 0; ls < 50; ++ls, step *= 0.5) {
              const Eigen::VectorXd xn = x + step * d;
              const double fn = objective(xn);
              if (fn <= f + 1e-4 * step * slope) {
                x = xn;
                f = fn;
                g = gradient(x);
                if (step == 1.0) mu = mu < 1e-12 ? 0.0 : 0.25 * mu;
                moved = true;
                break;
              }
            }
          }
        }
        if (!moved) mu = std::max(10.0 * mu, 1e-8);
      }
      if (!moved) break;  // no acceptable step; keep the incumbent
    }

    const ProfileGrid prof = mirror_odd(T, M, x);
    const double e = ops.energy(prof.U);
    if (e < best.value) {
      best.value = e;
      best.profile = prof;
      best.converged = converged;
    }
  }
  return best;
}

ProfileSpline::ProfileSpline(const ProfileGrid& U)
    : T_(U.T), h_(U.h()), y_(U.U), y2_(U.U.size()) {
  const int n = static_cast<int>(y_.size());
  // Natural cubic spline second derivatives via the Thomas algorithm.
  Eigen::VectorXd c(n), d(n);
  y2_.setZero();
  c[0] = 0.0;
  d[0] = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    const double rhs = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (h_ * h_);
    const double m = 4.0 - c[i - 1];
    c[i] = 1.0 / m;
    d[i] = (rhs - d[i - 1]) / m;
  }
  y2_[n - 1] = 0.0;
  for (int i = n - 2; i >= 1; --i) y2_[i] = d[i] - c[i] * y2_[i + 1];
}

double ProfileSpline::operator()(double t) const {
  const double tc = std::clamp(t, -T_, T_);
  const int n = static_cast<int>(y_.size());
  int i = static_cast<int>(std::floor((tc + T_) / h_));
  i = std::clamp(i, 0, n - 2);
  const double a = ((-T_ + (i + 1) * h_) - tc) / h_;
  const double b = 1.0 - a;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * y2_[i] + (b * b * b - b) * y2_[i + 1]) *
             (h_ * h_) / 6.0;
}

}  // namespace binverse
