#ifndef BINVERSE_IO_HPP
#define BINVERSE_IO_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "binverse/energy.hpp"
#include "binverse/grid_field.hpp"
#include "binverse/observation.hpp"
#include "binverse/pcn.hpp"

// Artifact serialization. All text formats round-trip doubles through 17
// significant digits; the graymap is a lossy visualization whose affine
// value map is recorded in a JSON sidecar.

namespace binverse {

std::string format_double(double v);  // %.17g

// CSV: header line "N,kind", one line "<N>,<kind>", then N rows of N values.
void write_field_csv(const std::filesystem::path& path, const GridField& u);
GridField read_field_csv(const std::filesystem::path& path);

// 8-bit ASCII graymap (P2) plus "<path>.json" sidecar holding the affine
// map {lo, hi} -> [0, 255] and the grid metadata.
void write_field_pgm(const std::filesystem::path& path, const GridField& u);

// CSV with header "x,y,value": window centers and data values.
void write_observations_csv(const std::filesystem::path& path,
                            const ObservationSet& obs);

// Dense numeric CSV, no header.
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

// CSV with header "step,acceptance_rate,A,perimeter".
void write_diagnostics_csv(const std::filesystem::path& path,
                           const ChainDiagnostics& diag);

// CSV with header "alpha,N,ell", one row per study cell.
void write_scaling_study_csv(const std::filesystem::path& path,
                             const ScalingStudy& study);

// Report CSV with header "parameter,value".
void write_report_csv(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, double>>& rows);

// JSON summary {target, estimates[], gaps[]} of a Gamma-limit check.
void write_gamma_summary_json(const std::filesystem::path& path,
                              const GammaCheckReport& report);

// CSV with header "bin_lo,bin_hi,count".
void write_histogram_csv(const std::filesystem::path& path,
                         const Histogram& hist);

// Versioned text container: header, scalars, then N rows of interleaved
// re,im coefficient pairs. Bitwise round trip.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace binverse

#endif
