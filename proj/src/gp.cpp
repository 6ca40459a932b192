#include "binverse/gp.hpp"

#include <cmath>
#include <stdexcept>

#include "binverse/fft2.hpp"
#include "binverse/rng.hpp"

namespace binverse {

namespace {

constexpr std::uint64_t kMatheronStream = 0x6E0B5EED00000000ULL;

}  // namespace

GridField apply_prior_covariance(const GridField& z, const PriorParams& p) {
  const int N = z.N;
  Eigen::MatrixXcd coeffs = analyze(z);
  const double half = p.alpha / 2.0;
  for (int b1 = 0; b1 < N; ++b1)
    for (int b2 = 0; b2 < N; ++b2)
      coeffs(b1, b2) *= std::pow(
          eigenvalue(signed_wavenumber(b1, N), signed_wavenumber(b2, N), p),
          half);
  return synthesize(coeffs);
}

GPPosterior::GPPosterior(GridField mean, std::vector<GridField> representers,
                         Eigen::MatrixXd gram, ObservationSet obs,
                         PriorParams prior)
    : mean_(std::move(mean)),
      representers_(std::move(representers)),
      gram_(std::move(gram)),
      obs_(std::move(obs)),
      prior_(std::move(prior)) {
  llt_.compute(gram_);
  if (llt_.info() != Eigen::Success)
    throw std::runtime_error("GP Gram matrix is not positive definite");
}

GPPosterior gp_solve(const ObservationSet& obs, const PriorParams& p, int N) {
  validate(p);
  if (p.alpha != 2.0)
    throw std::invalid_argument("gp_solve requires the alpha = 2 prior");
  const Eigen::Index J = obs.size();

  std::vector<GridField> representers;
  representers.reserve(J);
  Eigen::MatrixXd kck(J, J);
  for (Eigen::Index j = 0; j < J; ++j) {
    GridField adj = make_field(N, FieldKind::continuous);
    adj.values = window_weights(N, obs.window, obs.points(j, 0),
                                obs.points(j, 1)) *
                 (double(N) * double(N));
    representers.push_back(apply_prior_covariance(adj, p));
    kck.col(j) = apply_K(representers.back(), obs);
  }
  const double s2 = obs.noise_scale * obs.noise_scale;
  Eigen::MatrixXd gram = s2 * obs.Sigma + 0.5 * (kck + kck.transpose());

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("GP Gram matrix is not positive definite");
  const Eigen::VectorXd coef = llt.solve(obs.y);

  GridField mean = make_field(N, FieldKind::continuous);
  for (Eigen::Index j = 0; j < J; ++j)
    mean.values += coef[j] * representers[j].values;

  return GPPosterior(std::move(mean), std::move(representers),
                     std::move(gram), obs, p);
}

GridField GPPosterior::apply_covariance(const GridField& z) const {
  GridField cz = apply_prior_covariance(z, prior_);
  const Eigen::VectorXd coef = llt_.solve(apply_K(cz, obs_));
  for (std::size_t j = 0; j < representers_.size(); ++j)
    cz.values -= coef[j] * representers_[j].values;
  return cz;
}

GridField GPPosterior::sample(std::uint64_t seed, std::uint64_t stream) const {
  const int N = mean_.N;
  const Eigen::Index J = obs_.size();
  GridField u = sample_prior(prior_, N, seed, kMatheronStream + 2 * stream);
  Eigen::VectorXd eta(J);
  for (Eigen::Index j = 0; j < J; ++j)
    eta[j] = rng::gaussian(seed, kMatheronStream + 2 * stream + 1, j, 0);
  const Eigen::VectorXd noise = obs_.llt.matrixL() * eta;
  const Eigen::VectorXd residual =
      obs_.y - apply_K(u, obs_) - obs_.noise_scale * noise;
  const Eigen::VectorXd coef = llt_.solve(residual);
  for (Eigen::Index j = 0; j < J; ++j)
    u.values += coef[j] * representers_[j].values;
  return u;
}

std::vector<GridField> gp_sample(const GPPosterior& post, int n,
                                 std::uint64_t seed) {
  std::vector<GridField> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(post.sample(seed, i));
  return out;
}

}  // namespace binverse
