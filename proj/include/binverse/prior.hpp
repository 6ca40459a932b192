#ifndef BINVERSE_PRIOR_HPP
#define BINVERSE_PRIOR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "binverse/grid_field.hpp"

// Spectral Gaussian prior on the periodic unit square.
//
// The covariance C is defined through its inverse, an anisotropically
// scaled bilaplacian operator; on the Fourier mode e^{2*pi*i k.x} the
// eigenvalue of C is
//
//   lambda_k = 1 / ( delta*eps^{-2a1} (2*pi*|k|)^4
//                  + q*delta*eps^{-2a2} (2*pi*|k|)^2
//                  + tau^2*delta*eps^{-2a3} ).
//
// The prior N(0, C^{alpha/2}) is sampled by a truncated Karhunen-Loeve
// expansion over the symmetric wavevector band {-N/2+1, ..., N/2-1}^2
// (the Nyquist row and column are left empty so the band is conjugation
// symmetric and refinements nest).

namespace binverse {

struct PriorParams {
  double delta = 1.0;  // overall precision scale, > 0
  double q = 0.0;      // gradient-term weight, >= 0
  double tau = 1.0;    // mass-term weight, > 0
  double eps = 1.0;    // interface width parameter, in (0,1]
  double c = 0.0;      // noise exponent: observation noise scale is eps^c
  double a1 = 0.0;     // bilaplacian exponent
  double a2 = 0.0;     // laplacian exponent
  double a3 = 0.0;     // mass exponent
  double b = 1.0;      // double-well exponent, > 0
  double r = 0.0;      // double-well weight, >= 0
  double alpha = 2.0;  // covariance power, > 1 in d = 2
};

// Throws std::invalid_argument on parameter violations.
void validate(const PriorParams& p);

struct Scalings {
  double a1, a2, a3, b;
};

// Solves the phase-field scaling relations for given noise exponent c and
// mass gap a = 3 + 2(a1 - a3) > 0:
//   a2 - a1 = 1,  3 + 2a1 - b = -1,  3 + 2a1 - 2c = 0.
Scalings resolve_scalings(double c, double a);

// Copy of p with (a1, a2, a3, b, c) set from the resolver.
PriorParams with_scalings(PriorParams p, double c, double a);

double eigenvalue(int k1, int k2, const PriorParams& p);

// Complex KL coefficient supplier for a wavevector; used by the sampling
// test hooks. The returned value plays the role of xi_k.
using ModeSource = std::function<std::complex<double>(int k1, int k2)>;

// Hermitian spectral coefficient array (FFT bin layout) of one prior draw:
// coeff(k) = lambda_k^{alpha/4} xi_k with xi_k = (g1 + i g2)/sqrt(2) on the
// half space k1 > 0 or (k1 = 0, k2 > 0), mirrored by conjugation, and a
// real standard normal at k = 0.
Eigen::MatrixXcd sample_spectral(const PriorParams& p, int N,
                                 std::uint64_t seed, std::uint64_t stream = 0);

// Same layout with caller-supplied xi values on the half space plus k = 0
// (the conjugate mirror is applied here).
Eigen::MatrixXcd spectral_from_modes(const PriorParams& p, int N,
                                     const ModeSource& xi);

// Inverse transform of a Hermitian coefficient array to the grid; throws
// when the imaginary residue exceeds 1e-10 times the field max-norm.
GridField synthesize(const Eigen::MatrixXcd& coeffs);

// Forward transform to analysis coefficients (forward DFT / N^2).
Eigen::MatrixXcd analyze(const GridField& u);

GridField sample_prior(const PriorParams& p, int N, std::uint64_t seed,
                       std::uint64_t stream = 0);

// Cameron-Martin norm squared: sum over the FFT band of |u_hat_k|^2/lambda_k.
double cm_norm_sq(const GridField& u, const PriorParams& p);

// Pointwise prior variance sum_k lambda_k^{alpha/2} over the sampling band.
double pointwise_prior_variance(const PriorParams& p, int N);

}  // namespace binverse

#endif
