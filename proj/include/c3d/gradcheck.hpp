#pragma once

#include <c3d/geometry.hpp>
#include <c3d/kernels.hpp>

#include <cstdint>

namespace c3d {

/// Small random scene: a tilted, gently curved surface with noisy depth and
/// colors, and LIDAR samples of the same surface carrying PCA normals.
struct GradCheckScene {
  CameraIntrinsics K;
  DepthMap depth;
  HsvImage hsv;
  PointCloud lidar;
};

GradCheckScene random_grad_scene(std::uint64_t seed, int rows, int cols, const KernelConfig& config);

struct GradCheckOptions {
  int rows = 8;
  int cols = 8;
  KernelConfig kernel;  // normal_grad_mode selects what is differentiated
  double step = 1e-5;   // central-difference step in meters
};

struct GradCheckResult {
  double max_rel_error_sum = 0;
  double max_rel_error_log = 0;
  double s0 = 0;
  std::size_t pair_count = 0;

  double max_rel_error() const { return std::max(max_rel_error_sum, max_rel_error_log); }
};

/// |a - f| / max(|a|, |f|, 1e-3 * max|f|), maximized over pixels, for the
/// analytic grad_depth a against central differences f of both loss forms.
/// Pair scales, residuals and (in detached mode) normals are held at their
/// unperturbed values, matching what the analytic gradient differentiates.
GradCheckResult grad_check(std::uint64_t seed, const GradCheckOptions& options);

inline double grad_check_tolerance(NormalGradMode mode) { return mode == NormalGradMode::full ? 1e-4 : 1e-5; }

}  // namespace c3d
