#ifndef BINVERSE_GRID_FIELD_HPP
#define BINVERSE_GRID_FIELD_HPP

#include <Eigen/Dense>
#include <string>

namespace binverse {

enum class FieldKind { continuous, binary };

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& s);

// Real field on the uniform periodic grid of the unit square.
// values(i, j) holds the sample at x = (i/N, j/N). Binary kind restricts
// values to {-1, 0, +1}; 0 marks an undecided pixel (e.g. a rasterized
// interface cell or the zero level set).
struct GridField {
  int N = 0;
  FieldKind kind = FieldKind::continuous;
  Eigen::ArrayXXd values;
};

GridField make_field(int N, FieldKind kind = FieldKind::continuous);

// True when every entry is exactly -1, 0 or +1.
bool has_binary_values(const GridField& u);

// Throws std::invalid_argument unless u is a consistent binary field.
void require_binary(const GridField& u);

}  // namespace binverse

#endif
