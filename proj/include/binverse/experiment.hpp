#ifndef BINVERSE_EXPERIMENT_HPP
#define BINVERSE_EXPERIMENT_HPP

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "binverse/config.hpp"
#include "binverse/observation.hpp"
#include "binverse/pcn.hpp"

// End-to-end experiment runner: truth synthesis, data generation, one of
// the three inversion methods, artifacts and a replayable manifest.

namespace binverse {

enum class Method { phase_field, level_set, gp };
enum class NoiseRegime { small, order_one };

std::string to_string(Method m);
std::string to_string(NoiseRegime r);

struct ExperimentConfig {
  Method method = Method::level_set;
  NoiseRegime noise = NoiseRegime::small;
  TruthKind truth = TruthKind::A;
  std::string truth_file;  // when set, truth is read from this field CSV
  int N = 128;
  int N_truth = 256;
  PriorParams prior;       // fully resolved parameters
  double beta = 0.05;
  std::uint64_t M = 100000;
  std::uint64_t burn_in = 50000;
  std::uint64_t seed = 1;
  int obs_grid = 15;       // n of the n x n layout; 0 selects random points
  int obs_points = 50;     // J of the random layout
  double sigma_diag = 1.0; // Sigma = sigma_diag * identity
  double window = 0.0;     // 0 = default 2/N
  std::uint64_t thin = 100;
  std::uint64_t checkpoint_every = 0;
  int gp_samples = 4;
  int prior_hist_samples = 200;
  bool perimeter_hist = false;
  bool paper_scale = false;
  std::filesystem::path out_dir = "out";
  TruthShapes shapes;
  // Keys the user set explicitly (so gp can warn about ignored ones).
  std::set<std::string> explicit_keys;
};

// Documented configuration keys (unknown keys are reported collectively).
const std::set<std::string>& known_config_keys();

// The subset of keys that parameterize the prior; shared by the
// single-purpose subcommands.
const std::set<std::string>& prior_config_keys();

// Overrides fields of `base` with any prior keys present in the config;
// the key `a` re-resolves the exponents from (c, a).
PriorParams prior_from_config(const Config& cfg, PriorParams base);

// Builds a fully resolved configuration: method and noise-regime defaults
// first, explicit keys override. Throws with every unknown key listed.
ExperimentConfig experiment_from_config(const Config& cfg);

// Reads the "config" block of a manifest back into a configuration.
ExperimentConfig experiment_from_manifest(const std::filesystem::path& manifest);

struct ExperimentResult {
  std::filesystem::path dir;
  double score = 0.0;           // pixel agreement with the downsampled truth
  double acceptance_rate = 0.0; // MCMC methods
  std::vector<std::string> warnings;
};

// Writes truth, observations, mean, thresholded mean, diagnostics,
// perimeter histograms (when enabled) and manifest.json into a fresh
// directory under cfg.out_dir. Partial outputs are removed on failure.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Majority vote of the fine samples nearest each coarse cell center;
// requires truth.N >= N. Vote ties map to 0.
GridField majority_downsample(const GridField& truth, int N);

// Fraction of pixels where the two binary fields agree (no sign flip).
// A finer truth is majority-downsampled to the recon grid first.
double classification_score(const GridField& recon, const GridField& truth);

}  // namespace binverse

#endif
