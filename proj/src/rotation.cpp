#include "opnorm/rotation.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "opnorm/errors.hpp"
#include "sparse_rows.hpp"

namespace opnorm {
namespace {

// cos/sin of an angle in degrees, exact at multiples of 90.
std::pair<double, double> cos_sin_deg(double deg) {
  const double q = deg / 90.0;
  if (q == std::round(q)) {
    switch (((static_cast<long long>(std::round(q)) % 4) + 4) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double rad = deg * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

struct Grid {
  std::size_t n;
  double center;
  std::vector<unsigned char> mask;
  std::vector<long> column_of;  // pixel -> operator column, -1 if not an input coordinate

  // Column for pixel (r, c), or -1 if it reads as zero.
  long column(long r, long c) const noexcept {
    const long nn = static_cast<long>(n);
    if (r < 0 || c < 0 || r >= nn || c >= nn) return -1;
    return column_of[static_cast<std::size_t>(r * nn + c)];
  }
};

Grid make_grid(std::size_t n, RotationDomain domain) {
  Grid g{n, (static_cast<double>(n) - 1.0) / 2.0, disk_mask(n), std::vector<long>(n * n, -1)};
  long next = 0;
  for (std::size_t p = 0; p < n * n; ++p) {
    if (!g.mask[p]) continue;
    g.column_of[p] = domain == RotationDomain::Grid ? static_cast<long>(p) : next++;
  }
  return g;
}

void add_sample(const Grid& g, double x, double y, Interpolation interp, detail::SparseRows& rows) {
  const double u = x + g.center;  // column coordinate
  const double w = y + g.center;  // row coordinate
  switch (interp) {
    case Interpolation::Nearest: {
      const long c = static_cast<long>(std::floor(u + 0.5));
      const long r = static_cast<long>(std::floor(w + 0.5));
      if (const long col = g.column(r, c); col >= 0) rows.add(static_cast<std::size_t>(col), 1.0);
      return;
    }
    case Interpolation::Bilinear: {
      const double fc = std::floor(u);
      const double fr = std::floor(w);
      const double tc = u - fc;
      const double tr = w - fr;
      const long c0 = static_cast<long>(fc);
      const long r0 = static_cast<long>(fr);
      const std::array<double, 2> wc{1.0 - tc, tc};
      const std::array<double, 2> wr{1.0 - tr, tr};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (const long col = g.column(r0 + i, c0 + j); col >= 0)
            rows.add(static_cast<std::size_t>(col), wr[i] * wc[j]);
      return;
    }
    case Interpolation::Bicubic: {
      const double fc = std::floor(u);
      const double fr = std::floor(w);
      const long c0 = static_cast<long>(fc);
      const long r0 = static_cast<long>(fr);
      std::array<double, 4> wc{};
      std::array<double, 4> wr{};
      for (int k = 0; k < 4; ++k) {
        wc[k] = cubic_convolution_weight(u - (fc + k - 1));
        wr[k] = cubic_convolution_weight(w - (fr + k - 1));
      }
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (const long col = g.column(r0 + i - 1, c0 + j - 1); col >= 0)
            rows.add(static_cast<std::size_t>(col), wr[i] * wc[j]);
      return;
    }
  }
}

detail::SparseRows rotation_rows(const RotationOperatorSpec& spec, double angle_deg) {
  if (spec.n < 3) throw InvalidInput("rotation grid needs n >= 3");
  if (!std::isfinite(angle_deg)) throw InvalidInput("rotation angle must be finite");
  const Grid g = make_grid(spec.n, spec.domain);
  const auto [cs, sn] = cos_sin_deg(angle_deg);
  detail::SparseRows rows;
  rows.cols = 0;
  for (long col : g.column_of) rows.cols += col >= 0 ? 1 : 0;
  if (spec.domain == RotationDomain::Grid) rows.cols = spec.n * spec.n;
  for (std::size_t r = 0; r < spec.n; ++r) {
    for (std::size_t c = 0; c < spec.n; ++c) {
      if (g.mask[r * spec.n + c]) {
        const double x = static_cast<double>(c) - g.center;
        const double y = static_cast<double>(r) - g.center;
        add_sample(g, cs * x + sn * y, -sn * x + cs * y, spec.interp, rows);
      }
      rows.end_row();
    }
  }
  return rows;
}

std::string rotation_name(const RotationOperatorSpec& spec, double angle) {
  return "rotation(n=" + std::to_string(spec.n) + ",angle=" + std::to_string(angle) + "," +
         std::string(interpolation_name(spec.interp)) + ")";
}

}  // namespace

Interpolation parse_interpolation(std::string_view name) {
  if (name == "nearest") return Interpolation::Nearest;
  if (name == "bilinear") return Interpolation::Bilinear;
  if (name == "bicubic") return Interpolation::Bicubic;
  throw InvalidInput("unknown interpolation '" + std::string(name) + "' (expected nearest, bilinear or bicubic)");
}

std::string_view interpolation_name(Interpolation interp) noexcept {
  switch (interp) {
    case Interpolation::Nearest: return "nearest";
    case Interpolation::Bilinear: return "bilinear";
    case Interpolation::Bicubic: return "bicubic";
  }
  return "unknown";
}

std::vector<unsigned char> disk_mask(std::size_t n) {
  const double center = (static_cast<double>(n) - 1.0) / 2.0;
  const double r2 = center * center * (1.0 + 1e-12);
  std::vector<unsigned char> mask(n * n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double x = static_cast<double>(c) - center;
      const double y = static_cast<double>(r) - center;
      mask[r * n + c] = x * x + y * y <= r2 ? 1 : 0;
    }
  }
  return mask;
}

double cubic_convolution_weight(double t) noexcept {
  constexpr double a = -0.5;
  const double x = std::abs(t);
  if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
  if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
  return 0.0;
}

OperatorPtr make_rotation(const RotationOperatorSpec& spec) {
  return std::make_shared<detail::SparseRowsOperator>(rotation_rows(spec, spec.angle_deg),
                                                      rotation_name(spec, spec.angle_deg));
}

AdjointPair make_rotation_pair(const RotationOperatorSpec& spec) {
  if (spec.domain != RotationDomain::Grid) throw InvalidInput("rotation pairs are defined on the full grid");
  RotationOperatorSpec back = spec;
  back.angle_deg = -spec.angle_deg;
  return make_pair(make_rotation(spec), make_rotation(back), Exactness::Mismatched);
}

AdjointPair make_rotation_exact_pair(const RotationOperatorSpec& spec) {
  auto rows = rotation_rows(spec, spec.angle_deg);
  auto forward = std::make_shared<detail::SparseRowsOperator>(rows, rotation_name(spec, spec.angle_deg));
  auto backward = std::make_shared<detail::SparseRowsTransposeOperator>(std::move(rows), "rotation-transpose");
  return make_pair(std::move(forward), std::move(backward), Exactness::ClaimedExact);
}

}  // namespace opnorm
