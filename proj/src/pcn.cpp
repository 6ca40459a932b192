#include "binverse/pcn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "binverse/energy.hpp"
#include "binverse/prior.hpp"
#include "binverse/rng.hpp"

namespace binverse {

namespace {

constexpr std::uint64_t kPriorHistStream = 0xA11CE5EED0000003ULL;

// Stream 1 seeds the initial state; proposal and acceptance streams of
// step m follow (stream 0 stays free for callers sampling with the same
// seed).
constexpr std::uint64_t kInitStream = 1;
inline std::uint64_t proposal_stream(std::uint64_t m) { return 2 * m + 2; }
inline std::uint64_t accept_stream(std::uint64_t m) { return 2 * m + 3; }

// Grid synthesis with a caller-owned workspace; proposals are Hermitian by
// construction, so the imaginary-residue audit of synthesize() is left to
// the prior tests.
void synthesize_fast(const Eigen::MatrixXcd& coeffs, Fft2& fft,
                     Eigen::MatrixXcd& work, GridField& u) {
  const int N = static_cast<int>(coeffs.rows());
  work = coeffs;
  fft.inverse(work);
  u.N = N;
  u.kind = FieldKind::continuous;
  u.values = work.real().array() * (double(N) * double(N));
}

}  // namespace

ChainState init_chain(const TargetSpec& t, int N, double beta,
                      std::uint64_t burn_in, std::uint64_t seed) {
  validate(t);
  if (!(beta > 0.0 && beta <= 1.0))
    throw std::invalid_argument("beta must lie in (0, 1]");
  ChainState s;
  s.coeffs = sample_spectral(t.prior, N, seed, kInitStream);
  s.u = synthesize(s.coeffs);
  s.A_current = neg_log_density(s.u, t);
  s.beta = beta;
  s.seed = seed;
  s.burn_in = burn_in;
  s.running_sum = Eigen::ArrayXXd::Zero(N, N);
  return s;
}

void pcn_step(ChainState& s, const TargetSpec& t, Fft2& fft) {
  const int N = static_cast<int>(s.coeffs.rows());
  const std::uint64_t m = s.step;

  const Eigen::MatrixXcd xi =
      sample_spectral(t.prior, N, s.seed, proposal_stream(m));
  const Eigen::MatrixXcd proposal =
      std::sqrt(1.0 - s.beta * s.beta) * s.coeffs + s.beta * xi;

  static thread_local Eigen::MatrixXcd work;
  GridField u_prop = make_field(N, FieldKind::continuous);
  synthesize_fast(proposal, fft, work, u_prop);
  const double A_prop = neg_log_density(u_prop, t);

  const double log_u =
      std::log(rng::uniform(s.seed, accept_stream(m), 0, 0) +
               std::numeric_limits<double>::min());
  const bool accept = log_u < s.A_current - A_prop;
  if (accept) {
    s.coeffs = proposal;
    s.u = std::move(u_prop);
    s.A_current = A_prop;
    ++s.accepted;
    ++s.window_accepts;
  }

  ++s.step;
  if (s.step % kAcceptWindow == 0) {
    s.window_rates.push_back(double(s.window_accepts) / double(kAcceptWindow));
    s.window_accepts = 0;
  }
  if (s.step > s.burn_in) {
    s.running_sum += s.u.values;
    ++s.n_accum;
  }
}

ChainResult run_chain(const TargetSpec& t, int N, std::uint64_t M, double beta,
                      std::uint64_t burn_in, std::uint64_t seed,
                      const ChainOptions& opts) {
  if (M <= burn_in) throw std::invalid_argument("need M > burn_in");
  ChainState s = init_chain(t, N, beta, burn_in, seed);
  Fft2 fft;
  ChainResult result;

  auto trailing_rate = [&]() {
    const std::uint64_t in_window = s.step % kAcceptWindow;
    if (in_window == 0)
      return s.window_rates.empty() ? 0.0 : s.window_rates.back();
    return double(s.window_accepts) / double(in_window);
  };

  for (std::uint64_t m = 0; m < M; ++m) {
    pcn_step(s, t, fft);
    if (opts.thin > 0 && s.step % opts.thin == 0) {
      DiagRow row{s.step, trailing_rate(), s.A_current,
                  std::numeric_limits<double>::quiet_NaN()};
      if (opts.collect_perimeter)
        row.perimeter = perimeter_estimate(threshold(s.u));
      result.diagnostics.rows.push_back(row);
      if (opts.collect_perimeter && s.step > burn_in)
        result.perimeter_samples.push_back(row.perimeter);
    }
    if (opts.checkpoint_every > 0 && s.step % opts.checkpoint_every == 0)
      result.checkpoints.push_back(
          {s.step, s.A_current, s.beta, s.seed, s.coeffs});
  }

  result.checkpoints.push_back({s.step, s.A_current, s.beta, s.seed, s.coeffs});
  result.diagnostics.window_rates = s.window_rates;
  result.acceptance_rate = double(s.accepted) / double(M);
  result.mean = make_field(N, FieldKind::continuous);
  if (s.n_accum > 0) result.mean.values = s.running_sum / double(s.n_accum);
  result.thresholded_mean = threshold(result.mean);
  result.state = std::move(s);
  return result;
}

ChainState resume_chain(const Checkpoint& cp, const TargetSpec& t,
                        std::uint64_t burn_in) {
  const int N = static_cast<int>(cp.coeffs.rows());
  ChainState s = init_chain(t, N, cp.beta, burn_in, cp.seed);
  s.coeffs = cp.coeffs;
  s.u = synthesize(cp.coeffs);
  s.A_current = cp.A_current;
  s.step = cp.step;
  return s;
}

std::ptrdiff_t stabilization_window(const std::vector<double>& rates,
                                    double rel_tol, int run) {
  if (rates.size() < static_cast<std::size_t>(run) + 1) return -1;
  const std::ptrdiff_t n_changes = static_cast<std::ptrdiff_t>(rates.size()) - 1;
  std::ptrdiff_t streak = 0;
  for (std::ptrdiff_t m = 0; m < n_changes; ++m) {
    const double denom = std::max({rates[m], rates[m + 1], 1e-12});
    const bool small = std::abs(rates[m + 1] - rates[m]) < rel_tol * denom;
    streak = small ? streak + 1 : 0;
    if (streak >= run) return m - run + 1;
  }
  return -1;
}

double Histogram::mode() const {
  Eigen::Index best = 0;
  counts.maxCoeff(&best);
  return 0.5 * (edges[best] + edges[best + 1]);
}

Histogram make_histogram(const std::vector<double>& xs, int bins, double lo,
                         double hi) {
  if (bins < 1 || !(hi > lo))
    throw std::invalid_argument("histogram needs bins >= 1 and hi > lo");
  Histogram h;
  h.edges = Eigen::VectorXd::LinSpaced(bins + 1, lo, hi);
  h.counts = Eigen::VectorXi::Zero(bins);
  for (const double x : xs) {
    int b = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[b];
  }
  return h;
}

PerimeterPosterior perimeter_posterior_from(const TargetSpec& t, int N,
                                            std::vector<double> chain_ell,
                                            std::uint64_t seed, int n_prior,
                                            int bins) {
  if (t.kind != PosteriorKind::level_set)
    throw std::invalid_argument("perimeter posterior requires the level set target");
  if (!(t.prior.alpha > 2.0))
    throw std::invalid_argument(
        "perimeter statistics need alpha > 2 (finite-perimeter regime)");
  if (chain_ell.empty())
    throw std::invalid_argument("no posterior perimeter samples");

  PerimeterPosterior out;
  out.posterior_ell = std::move(chain_ell);
  out.prior_ell.reserve(n_prior);
  for (int i = 0; i < n_prior; ++i) {
    const GridField v = sample_prior(t.prior, N, seed, kPriorHistStream + i);
    out.prior_ell.push_back(perimeter_estimate(threshold(v)));
  }

  auto minmax = [](const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return std::pair{*lo, *hi};
  };
  const auto [plo, phi] = minmax(out.prior_ell);
  const auto [qlo, qhi] = minmax(out.posterior_ell);
  double lo = std::min(plo, qlo), hi = std::max(phi, qhi);
  if (!(hi > lo)) hi = lo + 1.0;
  out.prior_hist = make_histogram(out.prior_ell, bins, lo, hi);
  out.posterior_hist = make_histogram(out.posterior_ell, bins, lo, hi);
  return out;
}

PerimeterPosterior perimeter_posterior(const TargetSpec& t, int N,
                                       std::uint64_t M, double beta,
                                       std::uint64_t burn_in,
                                       std::uint64_t seed, int n_prior,
                                       const ChainOptions& opts, int bins) {
  if (t.kind != PosteriorKind::level_set)
    throw std::invalid_argument("perimeter posterior requires the level set target");
  if (!(t.prior.alpha > 2.0))
    throw std::invalid_argument(
        "perimeter statistics need alpha > 2 (finite-perimeter regime)");

  ChainOptions run_opts = opts;
  run_opts.collect_perimeter = true;
  ChainResult chain = run_chain(t, N, M, beta, burn_in, seed, run_opts);
  return perimeter_posterior_from(t, N, std::move(chain.perimeter_samples),
                                  seed, n_prior, bins);
}

}  // namespace binverse
