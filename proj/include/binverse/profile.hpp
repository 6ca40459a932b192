#ifndef BINVERSE_PROFILE_HPP
#define BINVERSE_PROFILE_HPP

#include <Eigen/Dense>

#include "binverse/prior.hpp"

// One-dimensional transition profiles and the minimal interface energy
//
//   e_delta(U) = integral( delta/2 U''^2 + q delta/2 U'^2 + r/4 (1-U^2)^2 )
//   P_delta    = inf over odd U of e_delta(U),
//
// the per-unit-length cost of an interface in the sharp limit.

namespace binverse {

// Symmetric grid of M intervals over [-T, T] (M even, so t = 0 is a node);
// U holds the M+1 nodal values with odd symmetry U(-t) = -U(t).
struct ProfileGrid {
  double T = 10.0;
  int M = 2048;
  Eigen::VectorXd U;

  double h() const { return 2.0 * T / M; }
  double t(int i) const { return -T + i * h(); }
};

// tanh(t/s) sampled on the grid.
ProfileGrid tanh_profile(double T, int M, double width);

// Odd-mirrors the right half (nodes at t > 0) onto a full grid.
ProfileGrid mirror_odd(double T, int M, const Eigen::VectorXd& right_half);

// Trapezoid quadrature of the profile energy with second-order central
// differences; the field is continued by the constants -1 and +1 outside
// [-T, T]. Throws below M = 16 nodes.
double profile_energy(const ProfileGrid& U, const PriorParams& p);

struct PDeltaResult {
  double value = 0.0;
  ProfileGrid profile;
  bool converged = false;
};

// Minimizes the profile energy over odd profiles: the nodes at t > 0 are
// free, U(0) = 0 is pinned, and the boundary penalty 1e3 (U(T)-1)^2 keeps
// the far field attached to +1. Multi-start over tanh widths {0.5, 1, 2},
// Levenberg-damped Newton on the exact pentadiagonal Hessian.
PDeltaResult p_delta(const PriorParams& p, double T = 10.0, int M = 2048);

// Modica-Mortola lower bound (8/3) sqrt(q delta r / 8), obtained by
// dropping the U'' term.
double p_delta_lower_bound(const PriorParams& p);

// Energy of the best tanh profile (golden-section search on the width);
// an upper bound for P_delta.
double p_delta_tanh_upper_bound(const PriorParams& p, double T = 10.0,
                                int M = 2048);

// Natural cubic spline evaluation of the profile, held at its boundary
// values outside [-T, T]; used to build recovery sequences without
// interpolation kinks polluting spectral derivatives.
class ProfileSpline {
 public:
  explicit ProfileSpline(const ProfileGrid& U);
  double operator()(double t) const;

 private:
  double T_;
  double h_;
  Eigen::VectorXd y_;
  Eigen::VectorXd y2_;  // second derivatives at the nodes
};

}  // namespace binverse

#endif
