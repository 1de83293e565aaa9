#pragma once

// Minimal parallel-beam forward projector.
//
// Image: n x n pixels, pixel (r, c) at x = c - (n-1)/2, y = r - (n-1)/2.
// Detector: n bins with spacing equal to the pixel spacing, bin s at offset
// t = s - (n-1)/2. For angle theta the ray of bin s is
//     t * (cos theta, sin theta) + u * (-sin theta, cos theta)
// sampled at unit steps of u, with bilinear interpolation of the image and
// zero outside the grid. At theta = 0 the samples sit exactly on pixel
// centres, so each bin sums one image column. Sinogram layout is
// out[angle * n + bin]; angles are equispaced in [0, 180) degrees.

#include <cstddef>

#include "opnorm/linop.hpp"

namespace opnorm {

struct ProjectorSpec {
  std::size_t n_pixels = 16;
  std::size_t n_angles = 24;
};

/// Requires n_pixels >= 4 and n_angles >= 1.
OperatorPtr make_projector(const ProjectorSpec& spec);

/// Forward projector paired with its exact transpose.
AdjointPair make_projector_exact_pair(const ProjectorSpec& spec);

/// Forward projector paired with a pixel-driven, disk-masked backprojector
/// scaled by pi / (2 n_angles), as unfiltered filtered-backprojection codes
/// do. Deliberately not the adjoint.
AdjointPair make_projector_mismatched_pair(const ProjectorSpec& spec);

}  // namespace opnorm
