#ifndef BINVERSE_GP_HPP
#define BINVERSE_GP_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "binverse/observation.hpp"
#include "binverse/prior.hpp"

// Closed-form Gaussian posterior for the linear model (r = 0, alpha = 2):
//   m_y = C K* (eps^{2c} Sigma + K C K*)^{-1} y
//   C_y = C - C K* (...)^{-1} K C.
// The J representer fields C K* e_j are built by applying C spectrally to
// the adjoint window indicators; everything else is J x J linear algebra.

namespace binverse {

class GPPosterior {
 public:
  GPPosterior(GridField mean, std::vector<GridField> representers,
              Eigen::MatrixXd gram, ObservationSet obs, PriorParams prior);

  const GridField& mean() const { return mean_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const ObservationSet& observations() const { return obs_; }
  const PriorParams& prior() const { return prior_; }

  // Posterior covariance applied to a field: C z - sum_j coef_j r_j with
  // coef = gram^{-1} K C z.
  GridField apply_covariance(const GridField& z) const;

  // Matheron draw: u = u_prior + C K* gram^{-1} (y - K u_prior - eps^c eta).
  GridField sample(std::uint64_t seed, std::uint64_t stream) const;

 private:
  GridField mean_;
  std::vector<GridField> representers_;  // C K* e_j
  Eigen::MatrixXd gram_;                 // eps^{2c} Sigma + K C K*
  Eigen::LLT<Eigen::MatrixXd> llt_;
  ObservationSet obs_;
  PriorParams prior_;
};

// Builds the posterior on an N x N grid. Requires alpha = 2; throws when
// the Gram matrix fails the Cholesky factorization.
GPPosterior gp_solve(const ObservationSet& obs, const PriorParams& p, int N);

std::vector<GridField> gp_sample(const GPPosterior& post, int n,
                                 std::uint64_t seed);

// Prior covariance C^{alpha/2} applied spectrally to a field.
GridField apply_prior_covariance(const GridField& z, const PriorParams& p);

}  // namespace binverse

#endif
