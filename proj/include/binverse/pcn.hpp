#ifndef BINVERSE_PCN_HPP
#define BINVERSE_PCN_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "binverse/fft2.hpp"
#include "binverse/posterior.hpp"

// Preconditioned Crank-Nicolson sampling of dsigma/dsigma0 ~ exp(-A(u))
// with sigma0 = N(0, C^{alpha/2}). Proposals live in spectral space; one
// inverse transform per step feeds the A evaluation. All randomness is
// counter-based: step m consumes streams (2m+2, 2m+3) of the chain seed,
// so a checkpoint is just (step, coefficients).

namespace binverse {

struct ChainState {
  Eigen::MatrixXcd coeffs;       // current state, spectral
  GridField u;                   // current state, grid
  double A_current = 0.0;
  std::uint64_t step = 0;        // completed steps
  double beta = 0.1;
  std::uint64_t seed = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t accepted = 0;
  std::uint64_t window_accepts = 0;
  std::vector<double> window_rates;  // acceptance per 1000-step window
  Eigen::ArrayXXd running_sum;       // post-burn-in accumulator
  std::uint64_t n_accum = 0;
};

// Window width of the acceptance-rate diagnostics.
inline constexpr std::uint64_t kAcceptWindow = 1000;

// Fresh chain started from a prior draw (stream 1 of the chain seed). A
// cold zero start is not used: the zero field sits far below the prior's
// pointwise scale, and on binary targets every proposal from it flips
// signs across whole observation windows, freezing the chain at small N.
ChainState init_chain(const TargetSpec& t, int N, double beta,
                      std::uint64_t burn_in, std::uint64_t seed);

// One Metropolis step: u' = sqrt(1-beta^2) u + beta xi, accepted with
// probability min(1, exp(A(u) - A(u'))). A rejected step changes only the
// counters.
void pcn_step(ChainState& s, const TargetSpec& t, Fft2& fft);

struct DiagRow {
  std::uint64_t step;
  double accept_rate;  // rate over the trailing (partial) window
  double A;
  double perimeter;    // NaN when not collected
};

struct ChainDiagnostics {
  std::vector<DiagRow> rows;           // thinned trace
  std::vector<double> window_rates;    // completed 1000-step windows
};

struct Checkpoint {
  std::uint64_t step = 0;
  double A_current = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  Eigen::MatrixXcd coeffs;
};

struct ChainOptions {
  std::uint64_t thin = 100;             // trace and sample stride
  std::uint64_t checkpoint_every = 0;   // 0 = final checkpoint only
  bool collect_perimeter = false;       // ell(S(u)) along the trace
};

struct ChainResult {
  GridField mean;               // post-burn-in ergodic mean
  GridField thresholded_mean;   // S(mean)
  ChainDiagnostics diagnostics;
  std::vector<Checkpoint> checkpoints;
  std::vector<double> perimeter_samples;  // post-burn-in, thinned
  double acceptance_rate = 0.0;
  ChainState state;             // final state
};

ChainResult run_chain(const TargetSpec& t, int N, std::uint64_t M, double beta,
                      std::uint64_t burn_in, std::uint64_t seed,
                      const ChainOptions& opts = {});

// Rebuilds a chain state from a checkpoint; continuing with pcn_step
// reproduces the uninterrupted chain bitwise (accumulators restart).
ChainState resume_chain(const Checkpoint& cp, const TargetSpec& t,
                        std::uint64_t burn_in = 0);

// First window index from which `run` consecutive window-to-window relative
// changes stay below rel_tol; -1 when the sequence never stabilizes.
std::ptrdiff_t stabilization_window(const std::vector<double>& rates,
                                    double rel_tol = 0.1, int run = 50);

struct Histogram {
  Eigen::VectorXd edges;   // bins + 1 ascending edges
  Eigen::VectorXi counts;  // bins entries
  double mode() const;     // center of the fullest bin
};

Histogram make_histogram(const std::vector<double>& xs, int bins, double lo,
                         double hi);

struct PerimeterPosterior {
  std::vector<double> prior_ell;
  std::vector<double> posterior_ell;
  Histogram prior_hist;
  Histogram posterior_hist;
};

// Prior and posterior distributions of ell(N) over thresholded samples for
// a level-set target with alpha > 2 (throws otherwise). Level-set chain of
// M steps; n_prior independent prior draws; shared histogram edges.
PerimeterPosterior perimeter_posterior(const TargetSpec& t, int N,
                                       std::uint64_t M, double beta,
                                       std::uint64_t burn_in,
                                       std::uint64_t seed, int n_prior,
                                       const ChainOptions& opts = {},
                                       int bins = 30);

// Same histograms assembled from an already-run chain's perimeter samples.
PerimeterPosterior perimeter_posterior_from(const TargetSpec& t, int N,
                                            std::vector<double> chain_ell,
                                            std::uint64_t seed, int n_prior,
                                            int bins = 30);

}  // namespace binverse

#endif
