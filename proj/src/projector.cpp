#include "opnorm/projector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "opnorm/errors.hpp"
#include "opnorm/rotation.hpp"
#include "sparse_rows.hpp"

namespace opnorm {
namespace {

void validate(const ProjectorSpec& spec) {
  if (spec.n_pixels < 4) throw InvalidInput("projector needs n_pixels >= 4");
  if (spec.n_angles < 1) throw InvalidInput("projector needs n_angles >= 1");
}

double angle_rad(const ProjectorSpec& spec, std::size_t j) {
  return std::numbers::pi * static_cast<double>(j) / static_cast<double>(spec.n_angles);
}

// Ray samples: K points at unit spacing, K with the parity of n so that the
// theta = 0 samples land on pixel centres.
std::size_t samples_per_ray(std::size_t n) {
  auto k = static_cast<std::size_t>(std::ceil(std::numbers::sqrt2 * static_cast<double>(n))) + 2;
  if ((k % 2) != (n % 2)) ++k;
  return k;
}

detail::SparseRows projector_rows(const ProjectorSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n_pixels;
  const double center = (static_cast<double>(n) - 1.0) / 2.0;
  const std::size_t k = samples_per_ray(n);
  const double u_center = (static_cast<double>(k) - 1.0) / 2.0;
  const long nn = static_cast<long>(n);

  detail::SparseRows rows;
  rows.cols = n * n;
  std::vector<double> acc(n * n, 0.0);
  std::vector<std::size_t> touched;
  for (std::size_t j = 0; j < spec.n_angles; ++j) {
    const double th = angle_rad(spec, j);
    // exact axes at 0 and 90 degrees keep the samples on pixel centres
    const double cs = (2 * j == spec.n_angles) ? 0.0 : std::cos(th);
    const double sn = j == 0 ? 0.0 : std::sin(th);
    for (std::size_t s = 0; s < n; ++s) {
      const double t = static_cast<double>(s) - center;
      for (std::size_t q = 0; q < k; ++q) {
        const double u = static_cast<double>(q) - u_center;
        const double x = t * cs - u * sn + center;
        const double y = t * sn + u * cs + center;
        const double fx = std::floor(x);
        const double fy = std::floor(y);
        const double tx = x - fx;
        const double ty = y - fy;
        const long c0 = static_cast<long>(fx);
        const long r0 = static_cast<long>(fy);
        const double wx[2] = {1.0 - tx, tx};
        const double wy[2] = {1.0 - ty, ty};
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            const long r = r0 + a;
            const long c = c0 + b;
            const double w = wy[a] * wx[b];
            if (r < 0 || c < 0 || r >= nn || c >= nn || w == 0.0) continue;
            const auto p = static_cast<std::size_t>(r * nn + c);
            if (acc[p] == 0.0) touched.push_back(p);
            acc[p] += w;
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      for (std::size_t p : touched) {
        rows.add(p, acc[p]);
        acc[p] = 0.0;
      }
      touched.clear();
      rows.end_row();
    }
  }
  return rows;
}

// Pixel-driven backprojection: each pixel reads the sinogram at its own
// detector coordinate (linear interpolation), summed over angles.
class PixelDrivenBackprojector final : public LinearOperator {
 public:
  explicit PixelDrivenBackprojector(const ProjectorSpec& spec)
      : LinearOperator(spec.n_pixels * spec.n_angles, spec.n_pixels * spec.n_pixels, "pixel-backprojector"),
        spec_(spec),
        mask_(disk_mask(spec.n_pixels)) {}

 protected:
  void apply_unchecked(std::span<const double> w, std::span<double> out) const override {
    const std::size_t n = spec_.n_pixels;
    const double center = (static_cast<double>(n) - 1.0) / 2.0;
    const double weight = std::numbers::pi / (2.0 * static_cast<double>(spec_.n_angles));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        double s = 0.0;
        if (mask_[r * n + c]) {
          const double x = static_cast<double>(c) - center;
          const double y = static_cast<double>(r) - center;
          for (std::size_t j = 0; j < spec_.n_angles; ++j) {
            const double th = angle_rad(spec_, j);
            const double pos = x * std::cos(th) + y * std::sin(th) + center;
            const double f = std::floor(pos);
            const double t = pos - f;
            const long b0 = static_cast<long>(f);
            const double* row = w.data() + j * n;
            if (b0 >= 0 && b0 < static_cast<long>(n)) s += (1.0 - t) * row[b0];
            if (b0 + 1 >= 0 && b0 + 1 < static_cast<long>(n)) s += t * row[b0 + 1];
          }
        }
        out[r * n + c] = s * weight;
      }
    }
  }

 private:
  ProjectorSpec spec_;
  std::vector<unsigned char> mask_;
};

std::string projector_name(const ProjectorSpec& spec) {
  return "projector(n=" + std::to_string(spec.n_pixels) + ",angles=" + std::to_string(spec.n_angles) + ")";
}

}  // namespace

OperatorPtr make_projector(const ProjectorSpec& spec) {
  return std::make_shared<detail::SparseRowsOperator>(projector_rows(spec), projector_name(spec));
}

AdjointPair make_projector_exact_pair(const ProjectorSpec& spec) {
  auto rows = projector_rows(spec);
  auto forward = std::make_shared<detail::SparseRowsOperator>(rows, projector_name(spec));
  auto backward = std::make_shared<detail::SparseRowsTransposeOperator>(std::move(rows), "projector-transpose");
  return make_pair(std::move(forward), std::move(backward), Exactness::ClaimedExact);
}

AdjointPair make_projector_mismatched_pair(const ProjectorSpec& spec) {
  validate(spec);
  return make_pair(make_projector(spec), std::make_shared<PixelDrivenBackprojector>(spec), Exactness::Mismatched);
}

}  // namespace opnorm
