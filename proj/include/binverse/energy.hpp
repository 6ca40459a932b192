#ifndef BINVERSE_ENERGY_HPP
#define BINVERSE_ENERGY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "binverse/grid_field.hpp"
#include "binverse/observation.hpp"
#include "binverse/prior.hpp"
#include "binverse/profile.hpp"

// Variational functionals of the inversion model and their sharp-interface
// limits: the double-well penalty Psi, the Onsager-Machlup objective J_eps,
// its rescaling I_eps, the level-set length estimator ell(N), and the
// numerical Gamma-limit check I_eps(recovery) -> P_delta * perimeter.

namespace binverse {

// Psi(u) = r/eps^b * integral of (1 - u^2)^2 / 4.
double psi(const GridField& u, const PriorParams& p);

// J_eps(u) = 1/2 ||u||_E^2 + Psi(u) + misfit(u).
double onsager_machlup(const GridField& u, const ObservationSet& obs,
                       const PriorParams& p);

// I_eps(u) = integral( delta/2 eps^3 |Lap u|^2 + q delta/2 eps |grad u|^2
//          + r/(4 eps) (1-u^2)^2 + delta tau^2 eps^a u^2 / 2 )
//          + 1/2 |Sigma^{-1/2}(y - K u)|^2,   a = 3 + 2(a1 - a3).
// Derivative terms are evaluated spectrally. Under the resolved scalings
// J_eps(u) = eps^{-2 a1 - 3} I_eps(u) exactly. Throws when a <= 0.
double i_eps(const GridField& u, const ObservationSet& obs,
             const PriorParams& p);

// ell(N) = 1/(2 N^2) sum |D w| with central differences and periodic wrap;
// the input must be binary.
double perimeter_estimate(const GridField& w);

struct ScalingStudy {
  std::vector<double> alphas;
  std::vector<int> Ns;
  Eigen::MatrixXd ell;  // rows follow alphas, columns follow Ns
};

// ell(N) of thresholded prior draws over a grid ladder, one shared
// realization of the KL coefficients per alpha (nested truncation).
ScalingStudy interface_scaling_study(const std::vector<double>& alphas,
                                     const std::vector<int>& Ns,
                                     std::uint64_t seed, PriorParams p);

struct DiscShape {
  double cx = 0.5, cy = 0.5, R = 0.25;
};

// Recovery sequence u_eps(x) = U(d(x)/eps) with d the analytic signed
// distance to the disc boundary (positive inside) and U the (spline of
// the) minimizing profile. Throws when eps is below two grid cells.
GridField recovery_sequence(const DiscShape& shape, double eps_len,
                            const ProfileGrid& U, int N);

struct GammaCheckReport {
  std::vector<double> eps_list;
  std::vector<double> i_eps_values;
  std::vector<double> gaps;      // relative gaps to the target
  double limit_estimate = 0.0;   // Richardson extrapolation of the ladder
  double target = 0.0;           // P_delta * perimeter of the disc
  double p_delta_value = 0.0;
};

// I_eps of the recovery sequence along an eps ladder against the Gamma
// limit P_delta * (2 pi R), data term switched off.
GammaCheckReport gamma_check(const PriorParams& p,
                             const std::vector<double>& eps_list, int N,
                             const DiscShape& shape = {});

}  // namespace binverse

#endif
