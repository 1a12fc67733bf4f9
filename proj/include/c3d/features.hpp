#pragma once

#include <c3d/geometry.hpp>

#include <vector>

namespace c3d {

struct NormalEstimate {
  Vec3 normal = Vec3::Zero();
  double residual = 0.0;
  bool valid = false;
};

/// RGB in [0,1]^3 to HSV with hue scaled to [0,1).
Vec3 rgb_to_hsv(const Vec3& rgb);

/// Mean |cos| between the displacements x' - x and the normal n, over the
/// neighbors. Neighbors coincident with x are skipped.
double normal_residual(const Vec3& x, const Vec3& n, const Points& neighbors);

/// Normals from a pixel-grid cloud: cross product of the mean vertical and
/// mean horizontal displacements inside a (2r+1)^2 window. Not oriented.
std::vector<NormalEstimate> estimate_normals_grid(const PointCloud& cloud, int window_radius = 2);

/// PCA normals over each point and its k nearest neighbors. Not oriented.
std::vector<NormalEstimate> estimate_normals_knn(const PointCloud& cloud, int k = 8);

/// Flips every normal n with (viewpoint - p).n < 0.
void orient_toward_viewpoint(std::vector<NormalEstimate>& estimates, const Points& points, const Vec3& viewpoint);

/// Stores estimates on the cloud; invalid estimates become zero normals with
/// zero residual.
void attach_normals(PointCloud& cloud, const std::vector<NormalEstimate>& estimates);

/// Chain rule through estimate_normals_grid followed by orientation toward
/// `viewpoint`: maps d(loss)/d(normal_i) to d(loss)/d(point_j). Residuals are
/// held constant. Points with invalid estimates pass no gradient.
Points grid_normals_backprop(const PointCloud& cloud, const Points& grad_normals, int window_radius,
                             const Vec3& viewpoint = Vec3::Zero());

}  // namespace c3d
