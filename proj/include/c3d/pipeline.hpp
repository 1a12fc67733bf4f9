#pragma once

#include <c3d/geometry.hpp>
#include <c3d/kernels.hpp>
#include <c3d/loss.hpp>

#include <cstdint>

namespace c3d {

/// Back-projects a depth map and attaches what `config` needs: colors from
/// the image and camera-facing grid normals with planarity residuals.
PointCloud make_prediction_cloud(const DepthMap& depth, const CameraIntrinsics& K, const HsvImage* hsv,
                                 const KernelConfig& config);

/// Crops a LIDAR cloud to the camera frustum and fills in missing features:
/// colors sampled from `hsv` when the cloud has none, PCA normals oriented
/// toward the camera origin when the cloud has none.
PointCloud prepare_lidar(const PointCloud& lidar, const CameraIntrinsics& K, const HsvImage* hsv,
                         const KernelConfig& config, double max_depth = kMaxDepth);

/// s0 for a single evaluation: the law's value when fixed, otherwise the
/// first draw of a generator seeded with `seed`.
double draw_s0(std::uint64_t seed, const S0Law& law);

/// Loss of a predicted depth map against a raw LIDAR cloud: prepares both
/// clouds, prunes pairs and evaluates. With `gradients` the report carries
/// grad_points and grad_depth.
LossReport evaluate_depth(const DepthMap& depth, const HsvImage* hsv, const PointCloud& lidar,
                          const CameraIntrinsics& K, const KernelConfig& config, double s0, LossForm form,
                          bool gradients = false, double max_depth = kMaxDepth);

}  // namespace c3d
