#pragma once

#include <c3d/kernels.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace c3d {

/// Flat-array inputs for one loss evaluation. All arrays are float64 and
/// row-major with the listed shapes:
///   depth      H x W        (entries <= 0 or non-finite are invalid pixels)
///   hsv        H x W x 3
///   lidar      m x 6        (x, y, z, h, s, v in the camera frame)
///   intrinsics 6            (fx, fy, cx, cy, width, height)
/// Shapes are passed alongside the data so mismatches can be reported.
struct ArrayBundle {
  std::span<const double> depth;
  std::array<std::size_t, 2> depth_shape{};
  std::span<const double> hsv;
  std::array<std::size_t, 3> hsv_shape{};
  std::span<const double> lidar;
  std::array<std::size_t, 2> lidar_shape{};
  std::span<const double> intrinsics;
  KernelConfig kernel;
  std::uint64_t seed = 0;
};

struct LossAndGrad {
  double loss = 0;                 // log form
  std::vector<double> grad_depth;  // H x W row-major
  double s0 = 0;
  std::size_t pair_count = 0;
};

/// Throws std::invalid_argument naming expected and actual dimensions when
/// the bundle is inconsistent. Called by eval_loss_and_grad before any work.
void validate_bundle(const ArrayBundle& bundle);

/// Log loss and its depth gradient, identical to the core evaluation of the
/// same inputs (s0 drawn from `seed` unless the law is fixed).
LossAndGrad eval_loss_and_grad(const ArrayBundle& bundle);

std::string_view version();

}  // namespace c3d
