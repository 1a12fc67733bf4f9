#pragma once

#include <c3d/geometry.hpp>
#include <c3d/kernels.hpp>

#include <vector>

namespace c3d {

struct Pair {
  Eigen::Index pred = 0;
  Eigen::Index lidar = 0;
  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

/// Pairs that survive image-space pruning, sorted by (pred, lidar).
struct PairSet {
  std::vector<Pair> pairs;
  int prune_radius = 0;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

enum class LossForm {
  sum,  // -<f,g>
  log,  // -log(<f,g> + delta)
};

inline constexpr double kLogDelta = 1e-12;

struct EvalOptions {
  LossForm form = LossForm::sum;
  bool gradients = false;
  /// Contiguous chunks of the pair list evaluated in parallel and reduced in
  /// chunk order; the result depends on the worker count but not on timing.
  int workers = 1;
  /// Per-pair kernel scales that replace the configured scale law.
  const Eigen::VectorXd* pair_scales = nullptr;
};

struct LossReport {
  double loss = 0;
  double inner_product = 0;
  LossForm form = LossForm::sum;
  Points grad_points;      // d loss / d predicted point, empty unless requested
  Grid<double> grad_depth; // d loss / d depth per pixel, filled by grad_depth paths
  std::size_t pair_count = 0;
  double s0_used = 0;
};

PairSet all_pairs(Eigen::Index n_pred, Eigen::Index n_lidar);

/// Keeps (i,j) when the Chebyshev distance between pred i's pixel and the
/// cell lidar j projects into is <= radius. Lidar points outside the image
/// never pair.
PairSet prune_pairs(const PointCloud& pred, const PointCloud& lidar, const CameraIntrinsics& K, int radius);

/// Kernel scale of every pair under the configured law, for callers that
/// want to hold the scale fixed across evaluations.
Eigen::VectorXd pair_scales(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                            const KernelConfig& config, double s0);

/// Single entry point behind every loss and gradient routine below.
LossReport evaluate(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                    const KernelConfig& config, double s0, const EvalOptions& options = {});

double inner_product(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                     const KernelConfig& config, double s0);

LossReport c3d_loss(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                    const KernelConfig& config, double s0);

LossReport c3d_log_loss(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                        const KernelConfig& config, double s0);

Points grad_points(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                   const KernelConfig& config, double s0, LossForm form = LossForm::sum);

/// Chain rule onto the depth of each predicted pixel through x = d * ray.
/// Pixels without a predicted point, or without pairs, get 0.
Grid<double> depth_gradient_from_points(const PointCloud& pred, const Points& grad, const CameraIntrinsics& K);

Grid<double> grad_depth(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                        const KernelConfig& config, double s0, const CameraIntrinsics& K,
                        LossForm form = LossForm::sum);

/// Log loss of frame-i predictions against frame-j LIDAR moved by T (j -> i).
/// Pairs are re-pruned after the transform.
LossReport cross_frame_loss(const PointCloud& pred_i, const PointCloud& lidar_j, const Pose& T,
                            const CameraIntrinsics& K, const KernelConfig& config, double s0,
                            bool gradients = false);

/// Unpruned double sum written independently of `evaluate`, for checking it.
double brute_force(const PointCloud& pred, const PointCloud& lidar, const KernelConfig& config, double s0);

inline constexpr std::size_t kBruteForceMaxPairs = 1'000'000;

}  // namespace c3d
