#include "binverse/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "binverse/fft2.hpp"
#include "binverse/posterior.hpp"

namespace binverse {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double quartic_well_mean(const GridField& u) {
  const Eigen::ArrayXXd w = 1.0 - u.values.square();
  return w.square().mean();
}

}  // namespace

double psi(const GridField& u, const PriorParams& p) {
  validate(p);
  return p.r * std::pow(p.eps, -p.b) * 0.25 * quartic_well_mean(u);
}

double onsager_machlup(const GridField& u, const ObservationSet& obs,
                       const PriorParams& p) {
  return 0.5 * cm_norm_sq(u, p) + psi(u, p) + misfit(u, obs);
}

double i_eps(const GridField& u, const ObservationSet& obs,
             const PriorParams& p) {
  validate(p);
  const double a = 3.0 + 2.0 * (p.a1 - p.a3);
  if (!(a > 0))
    throw std::invalid_argument("scaling violation: 3 + 2(a1 - a3) <= 0");
  const int N = u.N;
  const Eigen::MatrixXcd coeffs = analyze(u);
  double s4 = 0.0, s2 = 0.0;
  for (int b1 = 0; b1 < N; ++b1)
    for (int b2 = 0; b2 < N; ++b2) {
      const double k1 = signed_wavenumber(b1, N);
      const double k2 = signed_wavenumber(b2, N);
      const double sym = kTwoPi * kTwoPi * (k1 * k1 + k2 * k2);
      const double mag = std::norm(coeffs(b1, b2));
      s4 += mag * sym * sym;
      s2 += mag * sym;
    }
  const double eps = p.eps;
  return 0.5 * p.delta * eps * eps * eps * s4 +
         0.5 * p.q * p.delta * eps * s2 +
         p.r / (4.0 * eps) * quartic_well_mean(u) +
         0.5 * p.delta * p.tau * p.tau * std::pow(eps, a) *
             u.values.square().mean() +
         misfit_unscaled(u, obs);
}

double perimeter_estimate(const GridField& w) {
  require_binary(w);
  const int N = w.N;
  const auto& v = w.values;
  double acc = 0.0;
  for (int i = 0; i < N; ++i) {
    const int ip = (i + 1) % N, im = (i + N - 1) % N;
    for (int j = 0; j < N; ++j) {
      const int jp = (j + 1) % N, jm = (j + N - 1) % N;
      const double dx = (v(ip, j) - v(im, j)) * (N / 2.0);
      const double dy = (v(i, jp) - v(i, jm)) * (N / 2.0);
      acc += std::sqrt(dx * dx + dy * dy);
    }
  }
  return acc / (2.0 * double(N) * double(N));
}

ScalingStudy interface_scaling_study(const std::vector<double>& alphas,
                                     const std::vector<int>& Ns,
                                     std::uint64_t seed, PriorParams p) {
  ScalingStudy study;
  study.alphas = alphas;
  study.Ns = Ns;
  study.ell.resize(alphas.size(), Ns.size());
  for (std::size_t ia = 0; ia < alphas.size(); ++ia) {
    p.alpha = alphas[ia];
    for (std::size_t in = 0; in < Ns.size(); ++in) {
      const GridField v = sample_prior(p, Ns[in], seed);
      study.ell(ia, in) = perimeter_estimate(threshold(v));
    }
  }
  return study;
}

GridField recovery_sequence(const DiscShape& shape, double eps_len,
                            const ProfileGrid& U, int N) {
  if (eps_len < 2.0 / N)
    throw std::invalid_argument(
        "recovery sequence under-resolved: eps below two grid cells");
  const ProfileSpline spline(U);
  GridField u = make_field(N, FieldKind::continuous);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const double d =
          shape.R - std::hypot(double(i) / N - shape.cx, double(j) / N - shape.cy);
      u.values(i, j) = spline(d / eps_len);
    }
  return u;
}

GammaCheckReport gamma_check(const PriorParams& p,
                             const std::vector<double>& eps_list, int N,
                             const DiscShape& shape) {
  const PDeltaResult pd = p_delta(p);
  GammaCheckReport report;
  report.p_delta_value = pd.value;
  report.target = pd.value * kTwoPi * shape.R;
  report.eps_list = eps_list;
  const ObservationSet none = no_observations();
  PriorParams pe = p;
  for (const double eps : eps_list) {
    pe.eps = eps;
    const GridField u = recovery_sequence(shape, eps, pd.profile, N);
    const double value = i_eps(u, none, pe);
    report.i_eps_values.push_back(value);
    report.gaps.push_back(std::abs(value - report.target) / report.target);
  }
  const std::size_t n = report.i_eps_values.size();
  if (n >= 2) {
    const double e1 = eps_list[n - 2], e2 = eps_list[n - 1];
    report.limit_estimate =
        (e1 * report.i_eps_values[n - 1] - e2 * report.i_eps_values[n - 2]) /
        (e1 - e2);
  } else if (n == 1) {
    report.limit_estimate = report.i_eps_values[0];
  }
  return report;
}

}  // namespace binverse
