#include "binverse/posterior.hpp"

#include <stdexcept>

#include "binverse/energy.hpp"

namespace binverse {

void validate(const TargetSpec& t) {
  validate(t.prior);
  if (t.kind == PosteriorKind::phase_field && t.prior.alpha != 2.0)
    throw std::invalid_argument("phase-field target requires alpha = 2");
}

GridField threshold(const GridField& v) {
  GridField w = make_field(v.N, FieldKind::binary);
  w.values = (v.values > 0.0).cast<double>() - (v.values < 0.0).cast<double>();
  return w;
}

double neg_log_density(const GridField& u_or_v, const TargetSpec& t) {
  if (t.kind == PosteriorKind::phase_field)
    return psi(u_or_v, t.prior) + misfit(u_or_v, t.obs);
  return misfit(threshold(u_or_v), t.obs);
}

}  // namespace binverse
