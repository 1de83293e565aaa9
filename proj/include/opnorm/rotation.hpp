#pragma once

// Image rotation on an n x n pixel grid, restricted to the inscribed disk.
//
// Pixel (row r, col c) sits at x = c - (n-1)/2, y = r - (n-1)/2. The output
// pixel at p reads the input at R p with R = [[cos a, sin a], [-sin a, cos a]].
// Input samples outside the grid or outside the disk of radius (n-1)/2 read
// as zero, and output pixels outside that disk are zero.

#include <cstddef>
#include <string_view>
#include <vector>

#include "opnorm/linop.hpp"

namespace opnorm {

enum class Interpolation { Nearest, Bilinear, Bicubic };

/// "nearest" | "bilinear" | "bicubic". Throws InvalidInput otherwise.
Interpolation parse_interpolation(std::string_view name);
std::string_view interpolation_name(Interpolation interp) noexcept;

/// Grid: operator acts on all n*n pixels (entries outside the disk are
/// ignored). Disk: operator acts on the coordinates of the in-disk pixels
/// only, so A*A = I exactly when the rotation permutes the disk.
enum class RotationDomain { Grid, Disk };

struct RotationOperatorSpec {
  std::size_t n = 25;
  double angle_deg = 0.0;
  Interpolation interp = Interpolation::Nearest;
  RotationDomain domain = RotationDomain::Grid;
};

/// 1 for pixels inside the inscribed disk, 0 outside; row-major n*n.
std::vector<unsigned char> disk_mask(std::size_t n);

/// Requires n >= 3.
OperatorPtr make_rotation(const RotationOperatorSpec& spec);

/// Forward rotation by alpha, backward rotation by -alpha. This is the
/// "inverse as adjoint" pair an imaging library would offer; it is flagged
/// as mismatched since interpolation breaks adjointness in general.
AdjointPair make_rotation_pair(const RotationOperatorSpec& spec);

/// Forward rotation paired with its exact transpose (the true adjoint of
/// the discretised map). Used for ground truth at sizes where a dense
/// eigensolver is too slow.
AdjointPair make_rotation_exact_pair(const RotationOperatorSpec& spec);

/// Cubic convolution weight (Keys, a = -0.5).
double cubic_convolution_weight(double t) noexcept;

}  // namespace opnorm
