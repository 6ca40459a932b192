#ifndef BINVERSE_POSTERIOR_HPP
#define BINVERSE_POSTERIOR_HPP

#include "binverse/grid_field.hpp"
#include "binverse/observation.hpp"
#include "binverse/prior.hpp"

// The two posterior formulations as pCN targets. Both are densities with
// respect to the Gaussian reference N(0, C^{alpha/2}); neg_log_density
// returns only the non-Gaussian part A(u) (the reference is preserved by
// the pCN proposal).

namespace binverse {

enum class PosteriorKind { phase_field, level_set };

struct TargetSpec {
  PosteriorKind kind = PosteriorKind::level_set;
  PriorParams prior;
  ObservationSet obs;
};

// Enforces the kind-specific alpha constraints (phase field: alpha = 2;
// level set: alpha > 1).
void validate(const TargetSpec& t);

// Pointwise signum with S(0) = 0; result is binary kind.
GridField threshold(const GridField& v);

// phase_field: Psi(u) + misfit(u); level_set: misfit(S(v)).
double neg_log_density(const GridField& u_or_v, const TargetSpec& t);

}  // namespace binverse

#endif
