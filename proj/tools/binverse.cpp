#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "binverse/experiment.hpp"
#include "binverse/io.hpp"

namespace fs = std::filesystem;
using namespace binverse;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
};

void attach_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config_path,
                  "flat `key = value` config file, or a manifest.json from "
                  "an earlier run")
      ->check(CLI::ExistingFile);
  cmd->add_option("-D,--set", c.sets,
                  "override one config key as key=value (repeatable)");
}

// Registers --flag VALUE as sugar for -D key=VALUE.
void alias_key(CLI::App* cmd, CommonOpts& c, const std::string& flag,
               const std::string& key, const std::string& desc) {
  cmd->add_option_function<std::string>(
      flag,
      [&c, key](const std::string& v) { c.sets.push_back(key + "=" + v); },
      desc);
}

void alias_flag(CLI::App* cmd, CommonOpts& c, const std::string& flag,
                const std::string& key, const std::string& desc) {
  cmd->add_flag_callback(
      flag, [&c, key] { c.sets.push_back(key + "=true"); }, desc);
}

Config resolve_config(const CommonOpts& c) {
  Config cfg =
      c.config_path.empty() ? Config() : Config::from_file(c.config_path);
  for (const std::string& kv : c.sets) {
    const auto pos = kv.find('=');
    if (pos == std::string::npos)
      throw std::runtime_error("expected key=value, got: " + kv);
    cfg.set(kv.substr(0, pos), kv.substr(pos + 1));
  }
  return cfg;
}

fs::path out_root(const Config& cfg) {
  if (const char* env = std::getenv("BINVERSE_OUT")) return fs::path(env);
  return fs::path(cfg.get_string("out", "out"));
}

void reject_unknown(const Config& cfg, const std::set<std::string>& known) {
  const std::vector<std::string> unknown = cfg.unknown_keys(known);
  if (unknown.empty()) return;
  std::string msg = "unknown config keys:";
  for (const std::string& k : unknown) msg += " " + k;
  throw std::runtime_error(msg);
}

std::set<std::string> with_prior_keys(std::initializer_list<const char*> extra) {
  std::set<std::string> keys = prior_config_keys();
  for (const char* k : extra) keys.insert(k);
  return keys;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw std::runtime_error("empty list: " + csv);
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  for (const double v : parse_doubles(csv)) out.push_back(int(v));
  return out;
}

// Least-squares slope of log2(ell) against log2(N).
double log_slope(const std::vector<int>& Ns, const Eigen::VectorXd& ell) {
  const Eigen::Index n = ell.size();
  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = std::log2(double(Ns[std::size_t(i)]));
    y[i] = std::log2(ell[i]);
  }
  const double xm = x.mean(), ym = y.mean();
  return (x.array() - xm).cwiseProduct(y.array() - ym).sum() /
         (x.array() - xm).square().sum();
}

void run_sample_prior(const Config& cfg) {
  reject_unknown(cfg, with_prior_keys({"n", "seed", "count", "out"}));
  const PriorParams p = prior_from_config(cfg, PriorParams{});
  validate(p);
  const int N = cfg.get_int("n", 256);
  const std::uint64_t seed = cfg.get_uint64("seed", 1);
  const int count = cfg.get_int("count", 1);
  const fs::path dir = out_root(cfg) / "prior";
  fs::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    const GridField u = sample_prior(p, N, seed, std::uint64_t(i));
    std::ostringstream name;
    name << "sample_" << i;
    write_field_csv(dir / (name.str() + ".csv"), u);
    write_field_pgm(dir / (name.str() + ".pgm"), u);
  }
  write_report_csv(dir / "report.csv",
                   {{"n", double(N)},
                    {"seed", double(seed)},
                    {"count", double(count)},
                    {"pointwise_variance", pointwise_prior_variance(p, N)}});
  std::cout << "wrote " << count << " draw(s) under " << dir.string() << '\n';
}

void run_perimeter_study(const Config& cfg) {
  reject_unknown(cfg, with_prior_keys({"alphas", "ns", "seed", "out"}));
  PriorParams base;
  base.tau = 1500.0;
  const PriorParams p = prior_from_config(cfg, base);
  validate(p);
  const std::vector<double> alphas =
      parse_doubles(cfg.get_string("alphas", "1.5,2,3"));
  const std::vector<int> Ns =
      parse_ints(cfg.get_string("ns", "64,128,256,512,1024"));
  const std::uint64_t seed = cfg.get_uint64("seed", 1);

  const ScalingStudy study = interface_scaling_study(alphas, Ns, seed, p);
  const fs::path dir = out_root(cfg) / "perimeter_study";
  fs::create_directories(dir);
  write_scaling_study_csv(dir / "scaling_study.csv", study);

  std::vector<std::pair<std::string, double>> report;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    std::ostringstream key;
    key << "slope_alpha_" << alphas[i];
    report.emplace_back(key.str(), log_slope(Ns, study.ell.row(Eigen::Index(i))));
  }
  write_report_csv(dir / "report.csv", report);

  for (std::size_t i = 0; i < alphas.size(); ++i) {
    std::cout << "alpha=" << alphas[i] << "  slope=" << report[i].second
              << "  ell:";
    for (Eigen::Index j = 0; j < study.ell.cols(); ++j)
      std::cout << ' ' << study.ell(Eigen::Index(i), j);
    std::cout << '\n';
  }
  std::cout << "wrote " << (dir / "scaling_study.csv").string() << '\n';
}

void run_experiment_cmd(Config cfg, bool force_gp) {
  if (force_gp) cfg.set("method", "gp");
  ExperimentConfig e = experiment_from_config(cfg);
  if (!force_gp && e.method == Method::gp)
    throw std::runtime_error("pcn-run drives the MCMC methods; use gp-run");
  if (const char* env = std::getenv("BINVERSE_OUT")) e.out_dir = env;
  const ExperimentResult res = run_experiment(e);
  std::cout << "artifacts: " << res.dir.string() << '\n'
            << "score: " << res.score << '\n';
  if (e.method != Method::gp)
    std::cout << "acceptance_rate: " << res.acceptance_rate << '\n';
}

void run_gamma_check(const Config& cfg) {
  reject_unknown(cfg, with_prior_keys({"eps_ladder", "n", "radius", "out"}));
  PriorParams base;
  base.delta = 0.01;
  base.q = 0.1;
  base.r = 1.0;
  const PriorParams p = prior_from_config(cfg, base);
  validate(p);
  const std::vector<double> ladder =
      parse_doubles(cfg.get_string("eps_ladder", "0.08,0.04,0.02"));
  const int N = cfg.get_int("n", 1024);
  DiscShape shape;
  shape.R = cfg.get_double("radius", 0.25);

  const GammaCheckReport report = gamma_check(p, ladder, N, shape);
  const fs::path dir = out_root(cfg) / "gamma_check";
  fs::create_directories(dir);
  write_gamma_summary_json(dir / "summary.json", report);

  std::cout << "p_delta: " << report.p_delta_value << '\n'
            << "target:  " << report.target << '\n';
  for (std::size_t i = 0; i < report.eps_list.size(); ++i)
    std::cout << "eps=" << report.eps_list[i]
              << "  i_eps=" << report.i_eps_values[i]
              << "  gap=" << report.gaps[i] << '\n';
  std::cout << "limit estimate: " << report.limit_estimate << '\n'
            << "wrote " << (dir / "summary.json").string() << '\n';
}

void run_p_delta(const Config& cfg) {
  reject_unknown(cfg, with_prior_keys({"t", "m", "out"}));
  PriorParams base;
  base.delta = 0.01;
  base.q = 0.1;
  base.r = 1.0;
  const PriorParams p = prior_from_config(cfg, base);
  validate(p);
  const double T = cfg.get_double("t", 10.0);
  const int M = cfg.get_int("m", 2048);

  const PDeltaResult res = p_delta(p, T, M);
  const double lower = p_delta_lower_bound(p);
  const double upper = p_delta_tanh_upper_bound(p, T, M);
  const fs::path dir = out_root(cfg) / "p_delta";
  fs::create_directories(dir);
  write_report_csv(dir / "report.csv", {{"p_delta", res.value},
                                        {"lower_bound", lower},
                                        {"tanh_upper_bound", upper},
                                        {"converged", res.converged ? 1 : 0},
                                        {"t", T},
                                        {"m", double(M)}});
  std::ofstream prof(dir / "profile.csv");
  prof << "t,U\n";
  for (int i = 0; i <= res.profile.M; ++i)
    prof << format_double(res.profile.t(i)) << ','
         << format_double(res.profile.U[i]) << '\n';

  std::cout << "lower_bound: " << lower << '\n'
            << "p_delta:     " << res.value << '\n'
            << "tanh_upper:  " << upper << '\n'
            << "wrote " << (dir / "report.csv").string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inversion of binary fields on the periodic unit square"};
  app.require_subcommand(1);

  CommonOpts c_prior, c_study, c_pcn, c_gp, c_gamma, c_pd;

  CLI::App* prior = app.add_subcommand("sample-prior", "draw prior samples");
  attach_common(prior, c_prior);
  alias_key(prior, c_prior, "--n", "n", "grid size");
  alias_key(prior, c_prior, "--seed", "seed", "RNG seed");
  alias_key(prior, c_prior, "--count", "count", "number of draws");
  alias_key(prior, c_prior, "--alpha", "alpha", "covariance power");
  alias_key(prior, c_prior, "--out", "out", "output root");
  prior->callback([&] { run_sample_prior(resolve_config(c_prior)); });

  CLI::App* study = app.add_subcommand(
      "perimeter-study", "interface length of thresholded prior draws");
  attach_common(study, c_study);
  alias_key(study, c_study, "--alphas", "alphas", "comma list of alpha");
  alias_key(study, c_study, "--ns", "ns", "comma list of grid sizes");
  alias_key(study, c_study, "--seed", "seed", "RNG seed");
  alias_key(study, c_study, "--tau", "tau", "mass-term weight");
  alias_key(study, c_study, "--out", "out", "output root");
  study->callback([&] { run_perimeter_study(resolve_config(c_study)); });

  CLI::App* pcn = app.add_subcommand(
      "pcn-run", "phase-field or level-set posterior sampling experiment");
  attach_common(pcn, c_pcn);
  alias_key(pcn, c_pcn, "--method", "method", "phase_field or level_set");
  alias_key(pcn, c_pcn, "--truth", "truth", "truth A, B or C");
  alias_key(pcn, c_pcn, "--noise", "noise", "small or order_one");
  alias_key(pcn, c_pcn, "--n", "n", "inversion grid size");
  alias_key(pcn, c_pcn, "--m", "m", "chain length");
  alias_key(pcn, c_pcn, "--burn-in", "burn_in", "discarded prefix");
  alias_key(pcn, c_pcn, "--beta", "beta", "pCN step size");
  alias_key(pcn, c_pcn, "--seed", "seed", "RNG seed");
  alias_key(pcn, c_pcn, "--alpha", "alpha", "covariance power");
  alias_flag(pcn, c_pcn, "--paper-scale", "paper_scale",
             "full-scale defaults (m = 10^6, finer truth grid)");
  alias_flag(pcn, c_pcn, "--perimeter-hist", "perimeter_hist",
             "emit prior/posterior perimeter histograms");
  alias_key(pcn, c_pcn, "--out", "out", "output root");
  pcn->callback([&] { run_experiment_cmd(resolve_config(c_pcn), false); });

  CLI::App* gp = app.add_subcommand(
      "gp-run", "closed-form Gaussian-process regression experiment");
  attach_common(gp, c_gp);
  alias_key(gp, c_gp, "--truth", "truth", "truth A, B or C");
  alias_key(gp, c_gp, "--noise", "noise", "small or order_one");
  alias_key(gp, c_gp, "--n", "n", "inversion grid size");
  alias_key(gp, c_gp, "--seed", "seed", "RNG seed");
  alias_key(gp, c_gp, "--obs-grid", "obs_grid", "observation grid side");
  alias_key(gp, c_gp, "--out", "out", "output root");
  gp->callback([&] { run_experiment_cmd(resolve_config(c_gp), true); });

  CLI::App* gamma = app.add_subcommand(
      "gamma-check", "recovery-sequence energies against the sharp limit");
  attach_common(gamma, c_gamma);
  alias_key(gamma, c_gamma, "--n", "n", "grid size");
  alias_key(gamma, c_gamma, "--eps-ladder", "eps_ladder",
            "comma list of interface widths");
  alias_key(gamma, c_gamma, "--delta", "delta", "precision scale");
  alias_key(gamma, c_gamma, "--q", "q", "gradient-term weight");
  alias_key(gamma, c_gamma, "--r", "r", "double-well weight");
  alias_key(gamma, c_gamma, "--out", "out", "output root");
  gamma->callback([&] { run_gamma_check(resolve_config(c_gamma)); });

  CLI::App* pd = app.add_subcommand(
      "p-delta", "minimal interface energy and its sandwich bounds");
  attach_common(pd, c_pd);
  alias_key(pd, c_pd, "--delta", "delta", "precision scale");
  alias_key(pd, c_pd, "--q", "q", "gradient-term weight");
  alias_key(pd, c_pd, "--r", "r", "double-well weight");
  alias_key(pd, c_pd, "--t", "t", "half-width of the profile domain");
  alias_key(pd, c_pd, "--m", "m", "profile grid intervals");
  alias_key(pd, c_pd, "--out", "out", "output root");
  pd->callback([&] { run_p_delta(resolve_config(c_pd)); });

  std::string recon_path, truth_path;
  CLI::App* score = app.add_subcommand(
      "score", "pixel agreement of a reconstruction with a truth field");
  score->add_option("--recon", recon_path, "binary field CSV")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--truth", truth_path, "truth field CSV (may be finer)")
      ->required()
      ->check(CLI::ExistingFile);
  score->callback([&] {
    const GridField recon = read_field_csv(recon_path);
    const GridField truth = read_field_csv(truth_path);
    std::cout << format_double(classification_score(recon, truth)) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
