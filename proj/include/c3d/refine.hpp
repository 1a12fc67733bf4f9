#pragma once

#include <c3d/geometry.hpp>
#include <c3d/kernels.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace c3d {

struct RefineConfig {
  int iterations = 150;
  double step_size = 0.5;      // largest per-pixel depth change of a trial step (m)
  double backtracking = 0.5;   // step shrink factor on a rejected trial
  int max_backtracks = 12;
  KernelConfig kernel = default_kernel();
  double anchor_weight = 0.1;  // weight of the mean Huber penalty to the initial depth
  double anchor_delta = 1.0;   // Huber transition (m)
  std::uint64_t seed = 0;

  void validate() const;

  /// Kernel defaults for refinement: s0 held at 0.03 so the recorded
  /// objective is comparable across iterations, and normals differentiated
  /// so the search direction descends the objective that is evaluated.
  static KernelConfig default_kernel() {
    KernelConfig k;
    k.s0_law = S0Law::fixed(0.03);
    k.normal_grad_mode = NormalGradMode::full;
    return k;
  }
};

struct RefineResult {
  DepthMap depth;
  std::vector<double> history;  // objective at the initial and every accepted iterate
  int accepted_steps = 0;
};

/// Steepest descent with backtracking on the log loss plus the Huber anchor,
/// projecting depths into (kMinDepth, kMaxDepth] after every step. `lidar`
/// must already carry the features `config.kernel` needs (see prepare_lidar).
RefineResult refine_depth(const DepthMap& initial, const HsvImage* hsv, const PointCloud& lidar,
                          const CameraIntrinsics& K, const RefineConfig& config);

struct MetricsReport {
  double abs_rel = 0, sq_rel = 0, rmse = 0, rmse_log = 0;
  double delta1 = 0, delta2 = 0, delta3 = 0;
  std::size_t count = 0;
};

MetricsReport eval_metrics(const DepthMap& pred, const DepthMap& gt, double cap = kMaxDepth);

/// RMSE over the pixels selected by `mask` that are valid in both maps.
double masked_rmse(const DepthMap& pred, const DepthMap& gt, const Grid<bool>& mask);

/// Pixels whose cell receives at least one projected LIDAR point.
Grid<bool> lidar_coverage(const PointCloud& lidar, const CameraIntrinsics& K);

struct AblationRun {
  bool normal_kernel = false;
  MetricsReport before, after;
  std::vector<double> history;
};

/// Runs the same refinement without (color-only) and with the normal kernel.
std::vector<AblationRun> run_ablation(const DepthMap& initial, const HsvImage& hsv, const PointCloud& lidar,
                                      const CameraIntrinsics& K, const DepthMap& gt, const RefineConfig& config);

}  // namespace c3d
