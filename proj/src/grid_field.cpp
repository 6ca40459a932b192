#include "binverse/grid_field.hpp"

#include <stdexcept>

namespace binverse {

std::string to_string(FieldKind kind) {
  return kind == FieldKind::continuous ? "continuous" : "binary";
}

FieldKind field_kind_from_string(const std::string& s) {
  if (s == "continuous") return FieldKind::continuous;
  if (s == "binary") return FieldKind::binary;
  throw std::invalid_argument("unknown field kind: " + s);
}

GridField make_field(int N, FieldKind kind) {
  if (N <= 0) throw std::invalid_argument("grid size must be positive");
  GridField u;
  u.N = N;
  u.kind = kind;
  u.values = Eigen::ArrayXXd::Zero(N, N);
  return u;
}

bool has_binary_values(const GridField& u) {
  for (Eigen::Index j = 0; j < u.values.cols(); ++j)
    for (Eigen::Index i = 0; i < u.values.rows(); ++i) {
      const double v = u.values(i, j);
      if (v != -1.0 && v != 0.0 && v != 1.0) return false;
    }
  return true;
}

void require_binary(const GridField& u) {
  if (u.kind != FieldKind::binary)
    throw std::invalid_argument("binary field required");
  if (u.values.rows() != u.N || u.values.cols() != u.N)
    throw std::invalid_argument("field storage does not match N");
  if (!has_binary_values(u))
    throw std::invalid_argument("binary field holds values outside {-1,0,+1}");
}

}  // namespace binverse
