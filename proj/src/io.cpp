#include "binverse/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace binverse {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return in;
}

std::vector<double> parse_csv_line(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const std::filesystem::path& path, const GridField& u) {
  std::ofstream out = open_out(path);
  out << "N,kind\n" << u.N << ',' << to_string(u.kind) << '\n';
  for (int i = 0; i < u.N; ++i) {
    for (int j = 0; j < u.N; ++j)
      out << (j ? "," : "") << format_double(u.values(i, j));
    out << '\n';
  }
}

GridField read_field_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "N,kind")
    throw std::runtime_error("bad field header in " + path.string());
  if (!std::getline(in, line))
    throw std::runtime_error("truncated field file " + path.string());
  const auto comma = line.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("bad field metadata in " + path.string());
  const int N = std::stoi(line.substr(0, comma));
  GridField u = make_field(N, field_kind_from_string(line.substr(comma + 1)));
  for (int i = 0; i < N; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("truncated field file " + path.string());
    const std::vector<double> row = parse_csv_line(line);
    if (static_cast<int>(row.size()) != N)
      throw std::runtime_error("bad row width in " + path.string());
    for (int j = 0; j < N; ++j) u.values(i, j) = row[j];
  }
  return u;
}

void write_field_pgm(const std::filesystem::path& path, const GridField& u) {
  const double lo = u.values.minCoeff();
  const double hi = u.values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  std::ofstream out = open_out(path);
  out << "P2\n" << u.N << ' ' << u.N << "\n255\n";
  for (int i = 0; i < u.N; ++i) {
    for (int j = 0; j < u.N; ++j) {
      const int g = static_cast<int>(std::lround((u.values(i, j) - lo) / span * 255.0));
      out << (j ? " " : "") << g;
    }
    out << '\n';
  }
  nlohmann::json side;
  side["N"] = u.N;
  side["kind"] = to_string(u.kind);
  side["lo"] = lo;
  side["hi"] = hi;
  side["map"] = "gray = round((value - lo) / (hi - lo) * 255), rows follow the x index";
  std::ofstream sidecar = open_out(path.string() + ".json");
  sidecar << side.dump(2) << '\n';
}

void write_observations_csv(const std::filesystem::path& path,
                            const ObservationSet& obs) {
  std::ofstream out = open_out(path);
  out << "x,y,value\n";
  for (Eigen::Index j = 0; j < obs.size(); ++j)
    out << format_double(obs.points(j, 0)) << ','
        << format_double(obs.points(j, 1)) << ',' << format_double(obs.y[j])
        << '\n';
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m) {
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << (j ? "," : "") << format_double(m(i, j));
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_line(line));
    if (rows.back().size() != rows.front().size())
      throw std::runtime_error("ragged matrix in " + path.string());
  }
  Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const ChainDiagnostics& diag) {
  std::ofstream out = open_out(path);
  out << "step,acceptance_rate,A,perimeter\n";
  for (const DiagRow& row : diag.rows)
    out << row.step << ',' << format_double(row.accept_rate) << ','
        << format_double(row.A) << ',' << format_double(row.perimeter) << '\n';
}

void write_scaling_study_csv(const std::filesystem::path& path,
                             const ScalingStudy& study) {
  std::ofstream out = open_out(path);
  out << "alpha,N,ell\n";
  for (std::size_t ia = 0; ia < study.alphas.size(); ++ia)
    for (std::size_t in = 0; in < study.Ns.size(); ++in)
      out << format_double(study.alphas[ia]) << ',' << study.Ns[in] << ','
          << format_double(study.ell(ia, in)) << '\n';
}

void write_report_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, double>>& rows) {
  std::ofstream out = open_out(path);
  out << "parameter,value\n";
  for (const auto& [name, value] : rows)
    out << name << ',' << format_double(value) << '\n';
}

void write_gamma_summary_json(const std::filesystem::path& path,
                              const GammaCheckReport& report) {
  nlohmann::json j;
  j["target"] = report.target;
  j["estimates"] = report.i_eps_values;
  j["gaps"] = report.gaps;
  j["eps"] = report.eps_list;
  j["limit_estimate"] = report.limit_estimate;
  j["p_delta"] = report.p_delta_value;
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
}

void write_histogram_csv(const std::filesystem::path& path,
                         const Histogram& hist) {
  std::ofstream out = open_out(path);
  out << "bin_lo,bin_hi,count\n";
  for (Eigen::Index b = 0; b < hist.counts.size(); ++b)
    out << format_double(hist.edges[b]) << ',' << format_double(hist.edges[b + 1])
        << ',' << hist.counts[b] << '\n';
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  std::ofstream out = open_out(path);
  const int N = static_cast<int>(cp.coeffs.rows());
  out << "binverse-checkpoint,1\n";
  out << "step," << cp.step << '\n';
  out << "A_current," << format_double(cp.A_current) << '\n';
  out << "beta," << format_double(cp.beta) << '\n';
  out << "seed," << cp.seed << '\n';
  out << "N," << N << '\n';
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j)
      out << (j ? "," : "") << format_double(cp.coeffs(i, j).real()) << ','
          << format_double(cp.coeffs(i, j).imag());
    out << '\n';
  }
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  auto expect_scalar = [&](const std::string& key) -> std::string {
    if (!std::getline(in, line) || line.rfind(key + ",", 0) != 0)
      throw std::runtime_error("bad checkpoint field '" + key + "' in " +
                               path.string());
    return line.substr(key.size() + 1);
  };
  if (!std::getline(in, line) || line != "binverse-checkpoint,1")
    throw std::runtime_error("unknown checkpoint version in " + path.string());
  Checkpoint cp;
  cp.step = std::stoull(expect_scalar("step"));
  cp.A_current = std::stod(expect_scalar("A_current"));
  cp.beta = std::stod(expect_scalar("beta"));
  cp.seed = std::stoull(expect_scalar("seed"));
  const int N = std::stoi(expect_scalar("N"));
  cp.coeffs.resize(N, N);
  for (int i = 0; i < N; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("truncated checkpoint " + path.string());
    const std::vector<double> row = parse_csv_line(line);
    if (static_cast<int>(row.size()) != 2 * N)
      throw std::runtime_error("bad checkpoint row in " + path.string());
    for (int j = 0; j < N; ++j)
      cp.coeffs(i, j) = {row[2 * j], row[2 * j + 1]};
  }
  return cp;
}

}  // namespace binverse
