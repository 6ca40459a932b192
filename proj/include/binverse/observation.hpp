#ifndef BINVERSE_OBSERVATION_HPP
#define BINVERSE_OBSERVATION_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>

#include "binverse/grid_field.hpp"
#include "binverse/prior.hpp"

// Forward map and noise model: y = K u + eps^c eta, eta ~ N(0, Sigma).
// K is mollified point evaluation: component j averages the field over a
// periodic square window of side w centered at the j-th point, with the
// grid field read as piecewise constant on its cells.

namespace binverse {

struct ObservationSet {
  Eigen::MatrixX2d points;         // J window centers in the unit square
  Eigen::VectorXd y;               // data vector, length J
  Eigen::MatrixXd Sigma;           // J x J SPD noise covariance
  double noise_scale = 1.0;        // eps^c
  double window = 0.0;             // averaging window side w
  Eigen::LLT<Eigen::MatrixXd> llt; // cached Cholesky of Sigma

  Eigen::Index size() const { return y.size(); }
};

// Builds the set and factors Sigma (throws if the factorization fails).
ObservationSet make_observation_set(Eigen::MatrixX2d points, Eigen::VectorXd y,
                                    Eigen::MatrixXd Sigma, double noise_scale,
                                    double window);

// Empty set (J = 0): misfit vanishes identically.
ObservationSet no_observations();

// n x n uniform grid of window centers at ((i+1/2)/n, (j+1/2)/n).
Eigen::MatrixX2d uniform_grid_points(int n);

// J points drawn uniformly from the unit square (counter-based stream).
Eigen::MatrixX2d random_points(int J, std::uint64_t seed);

// Cell-average observations of u. Throws when the window is smaller than
// one grid cell of u.
Eigen::VectorXd apply_K(const GridField& u, const ObservationSet& obs);

// Weights of the j-th functional as a field: apply_K(u)[j] equals the grid
// inner product (1/N^2) sum_i u_i * (N^2 w_i); returns the plain overlap
// weights w_i (summing to 1).
Eigen::ArrayXXd window_weights(int N, double window, double cx, double cy);

enum class TruthKind { A, B, C };

// Configurable geometry of the synthetic truths. Defaults reproduce the
// three qualitative regimes: one smooth disc, three disjoint inclusions,
// and a pattern below observation resolution.
struct TruthShapes {
  // A: single disc.
  double disc_cx = 0.5, disc_cy = 0.5, disc_r = 0.25;
  // B: one large ellipse plus two small discs.
  double ell_cx = 0.34, ell_cy = 0.60, ell_sa = 0.21, ell_sb = 0.115;
  double b1_cx = 0.74, b1_cy = 0.30, b1_r = 0.08;
  double b2_cx = 0.72, b2_cy = 0.76, b2_r = 0.06;
  // C: checkerboard of cells x cells tiles.
  int checker_cells = 10;
};

// Rasterizes the truth on an N x N grid: +1 inside, -1 outside, 0 on cells
// whose center lies within half a cell diagonal of the interface.
GridField make_truth(TruthKind kind, int N, const TruthShapes& shapes = {});

// Synthetic data y = K(truth) + noise_scale * Sigma^{1/2} xi evaluated on
// the fine truth grid. Refuses truth grids at or below the inversion grid
// (inverse-crime guard). The window defaults to 2/N_inversion.
ObservationSet synthesize_data(const GridField& truth,
                               const Eigen::MatrixX2d& points, int N_inversion,
                               Eigen::MatrixXd Sigma, double noise_scale,
                               std::uint64_t seed, double window = 0.0);

// 1/2 eps^{-2c} | Sigma^{-1/2} (y - K u) |^2 via the cached factorization.
double misfit(const GridField& u, const ObservationSet& obs);

// The squared weighted residual without the noise scaling, i.e.
// 1/2 | Sigma^{-1/2} (y - K u) |^2.
double misfit_unscaled(const GridField& u, const ObservationSet& obs);

}  // namespace binverse

#endif
