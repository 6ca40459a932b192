#include "binverse/prior.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "binverse/fft2.hpp"
#include "binverse/rng.hpp"

namespace binverse {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

void require_grid(int N) {
  if (N < 4 || (N & (N - 1)) != 0)
    throw std::invalid_argument("grid size must be a power of two >= 4");
}

std::uint64_t key_of(int k) { return static_cast<std::uint64_t>(std::int64_t{k}); }

}  // namespace

void validate(const PriorParams& p) {
  if (!(p.delta > 0)) throw std::invalid_argument("delta must be positive");
  if (!(p.q >= 0)) throw std::invalid_argument("q must be nonnegative");
  if (!(p.tau > 0)) throw std::invalid_argument("tau must be positive");
  if (!(p.eps > 0 && p.eps <= 1))
    throw std::invalid_argument("eps must lie in (0,1]");
  if (!(p.b > 0)) throw std::invalid_argument("b must be positive");
  if (!(p.r >= 0)) throw std::invalid_argument("r must be nonnegative");
  if (!(p.alpha > 1))
    throw std::invalid_argument("alpha must exceed 1 (d = 2)");
}

Scalings resolve_scalings(double c, double a) {
  if (!(a > 0)) throw std::invalid_argument("mass gap a must be positive");
  Scalings s;
  s.a1 = c - 1.5;
  s.a2 = s.a1 + 1.0;
  s.b = 2.0 * s.a1 + 4.0;
  s.a3 = s.a1 + (3.0 - a) / 2.0;
  return s;
}

PriorParams with_scalings(PriorParams p, double c, double a) {
  const Scalings s = resolve_scalings(c, a);
  p.c = c;
  p.a1 = s.a1;
  p.a2 = s.a2;
  p.a3 = s.a3;
  p.b = s.b;
  return p;
}

double eigenvalue(int k1, int k2, const PriorParams& p) {
  const double s2 = kTwoPi * kTwoPi * (double(k1) * k1 + double(k2) * k2);
  const double denom = p.delta * std::pow(p.eps, -2.0 * p.a1) * s2 * s2 +
                       p.q * p.delta * std::pow(p.eps, -2.0 * p.a2) * s2 +
                       p.tau * p.tau * p.delta * std::pow(p.eps, -2.0 * p.a3);
  return 1.0 / denom;
}

Eigen::MatrixXcd spectral_from_modes(const PriorParams& p, int N,
                                     const ModeSource& xi) {
  validate(p);
  require_grid(N);
  Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(N, N);
  const double quarter = p.alpha / 4.0;
  for (int k1 = -N / 2 + 1; k1 < N / 2; ++k1)
    for (int k2 = -N / 2 + 1; k2 < N / 2; ++k2) {
      const bool half_space = k1 > 0 || (k1 == 0 && k2 > 0);
      if (!half_space && !(k1 == 0 && k2 == 0)) continue;
      const std::complex<double> value =
          std::pow(eigenvalue(k1, k2, p), quarter) * xi(k1, k2);
      coeffs(fft_bin(k1, N), fft_bin(k2, N)) = value;
      if (half_space)
        coeffs(fft_bin(-k1, N), fft_bin(-k2, N)) = std::conj(value);
    }
  // k = 0 must carry a real coefficient for real synthesis.
  coeffs(0, 0) = coeffs(0, 0).real();
  return coeffs;
}

Eigen::MatrixXcd sample_spectral(const PriorParams& p, int N,
                                 std::uint64_t seed, std::uint64_t stream) {
  return spectral_from_modes(
      p, N, [seed, stream](int k1, int k2) -> std::complex<double> {
        const rng::GaussianPair g =
            rng::gaussian_pair(seed, stream, key_of(k1), key_of(k2));
        if (k1 == 0 && k2 == 0) return {g.z1, 0.0};
        return {g.z1 * kInvSqrt2, g.z2 * kInvSqrt2};
      });
}

GridField synthesize(const Eigen::MatrixXcd& coeffs) {
  const int N = static_cast<int>(coeffs.rows());
  if (coeffs.cols() != N) throw std::invalid_argument("square array required");
  Eigen::MatrixXcd work = coeffs;
  Fft2 fft;
  fft.inverse(work);
  work *= double(N) * double(N);
  const double mx = work.real().cwiseAbs().maxCoeff();
  const double imag = work.imag().cwiseAbs().maxCoeff();
  if (mx > 0 && imag > 1e-10 * mx)
    throw std::runtime_error("synthesis produced a non-real field");
  GridField u = make_field(N, FieldKind::continuous);
  u.values = work.real().array();
  return u;
}

Eigen::MatrixXcd analyze(const GridField& u) {
  const int N = u.N;
  Eigen::MatrixXcd work = u.values.matrix().cast<std::complex<double>>();
  Fft2 fft;
  fft.forward(work);
  work /= double(N) * double(N);
  return work;
}

GridField sample_prior(const PriorParams& p, int N, std::uint64_t seed,
                       std::uint64_t stream) {
  return synthesize(sample_spectral(p, N, seed, stream));
}

double cm_norm_sq(const GridField& u, const PriorParams& p) {
  validate(p);
  const int N = u.N;
  const Eigen::MatrixXcd coeffs = analyze(u);
  double total = 0.0;
  for (int b1 = 0; b1 < N; ++b1)
    for (int b2 = 0; b2 < N; ++b2) {
      const int k1 = signed_wavenumber(b1, N);
      const int k2 = signed_wavenumber(b2, N);
      total += std::norm(coeffs(b1, b2)) / eigenvalue(k1, k2, p);
    }
  return total;
}

double pointwise_prior_variance(const PriorParams& p, int N) {
  validate(p);
  require_grid(N);
  const double half = p.alpha / 2.0;
  double total = 0.0;
  for (int k1 = -N / 2 + 1; k1 < N / 2; ++k1)
    for (int k2 = -N / 2 + 1; k2 < N / 2; ++k2)
      total += std::pow(eigenvalue(k1, k2, p), half);
  return total;
}

}  // namespace binverse
