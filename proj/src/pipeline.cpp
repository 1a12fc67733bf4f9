#include <c3d/features.hpp>
#include <c3d/pipeline.hpp>

#include <random>
#include <string>

namespace c3d {

PointCloud make_prediction_cloud(const DepthMap& depth, const CameraIntrinsics& K, const HsvImage* hsv,
                                 const KernelConfig& config) {
  if (config.use_hsv_kernel && !hsv) throw ConfigurationError("hsv kernel enabled but no image was supplied");
  PointCloud cloud = backproject_depth(depth, K, hsv);
  if (config.use_normal_kernel) {
    auto normals = estimate_normals_grid(cloud, config.normal_window_radius);
    orient_toward_viewpoint(normals, cloud.points, Vec3::Zero());
    attach_normals(cloud, normals);
  }
  return cloud;
}

PointCloud prepare_lidar(const PointCloud& lidar, const CameraIntrinsics& K, const HsvImage* hsv,
                         const KernelConfig& config, double max_depth) {
  PointCloud cloud = crop_frustum(lidar, K, max_depth);
  if (config.use_hsv_kernel && !cloud.hsv) {
    if (!hsv) throw ConfigurationError("LIDAR cloud has no colors and no image was supplied to sample them");
    colorize_from_image(cloud, K, *hsv);
  }
  if (config.use_normal_kernel && !(cloud.normals && cloud.residuals)) {
    auto normals = estimate_normals_knn(cloud, config.lidar_normal_k);
    orient_toward_viewpoint(normals, cloud.points, Vec3::Zero());
    attach_normals(cloud, normals);
  }
  return cloud;
}

double draw_s0(std::uint64_t seed, const S0Law& law) {
  std::mt19937_64 rng(seed);
  return sample_s0(rng, law);
}

LossReport evaluate_depth(const DepthMap& depth, const HsvImage* hsv, const PointCloud& lidar,
                          const CameraIntrinsics& K, const KernelConfig& config, double s0, LossForm form,
                          bool gradients, double max_depth) {
  config.validate();
  K.validate();
  if (depth.rows() != K.height || depth.cols() != K.width)
    throw ConfigurationError("depth map is " + std::to_string(depth.rows()) + "x" + std::to_string(depth.cols()) +
                             " but the calibration is " + std::to_string(K.height) + "x" + std::to_string(K.width));
  if (hsv && (hsv->rows != K.height || hsv->cols != K.width))
    throw ConfigurationError("image size does not match the calibration");
  const PointCloud pred = make_prediction_cloud(depth, K, hsv, config);
  const PointCloud target = lidar.empty() ? lidar : prepare_lidar(lidar, K, hsv, config, max_depth);
  const PairSet pairs = target.empty() ? PairSet{{}, config.prune_radius}
                                       : prune_pairs(pred, target, K, config.prune_radius);
  if (pairs.empty()) throw DegenerateSceneError("no predicted/LIDAR pairs survive pruning", 0);
  LossReport report = evaluate(pred, target, pairs, config, s0, {.form = form, .gradients = gradients});
  if (gradients) report.grad_depth = depth_gradient_from_points(pred, report.grad_points, K);
  return report;
}

}  // namespace c3d
