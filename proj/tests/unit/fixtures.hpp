#pragma once

#include <c3d/datagen.hpp>
#include <c3d/geometry.hpp>
#include <c3d/kernels.hpp>

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace c3d::testing {

inline CameraIntrinsics vga() { return {500.0, 500.0, 320.0, 240.0, 640, 480}; }

inline DepthMap constant_depth(int rows, int cols, double d) {
  DepthMap m(rows, cols);
  m.depths.setConstant(d);
  m.valid.setConstant(true);
  return m;
}

inline HsvImage constant_hsv(int rows, int cols, const Vec3& c) {
  HsvImage img(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int k = 0; k < cols; ++k) img.set(r, k, c);
  return img;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Vec3 v(N(rng), N(rng), N(rng));
  return v.normalized();
}

inline Vec3 random_hsv(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  return {U(rng), U(rng), U(rng)};
}

/// Cloud with every attribute filled at random; points in front of the camera.
inline PointCloud random_cloud(std::mt19937_64& rng, Eigen::Index n, bool with_normals = true) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  PointCloud c;
  c.points.resize(3, n);
  Points hsv(3, n), normals(3, n);
  Eigen::VectorXd res(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c.points.col(i) = Vec3(2.0 * U(rng), 1.0 * U(rng), 6.0 + U(rng));
    hsv.col(i) = random_hsv(rng);
    normals.col(i) = random_unit(rng);
    res(i) = 0.5 * (U(rng) + 1.0);
  }
  c.hsv = hsv;
  if (with_normals) {
    c.normals = normals;
    c.residuals = res;
  }
  return c;
}

inline Pose random_pose(std::mt19937_64& rng, double max_translation = 2.0) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  return Pose::from_axis_angle(random_unit(rng) * 3.0 * U(rng),
                               Vec3(U(rng), U(rng), U(rng)) * max_translation);
}

/// Rendered ground truth, simulated LIDAR and corrupted initial depth of a
/// synthetic case, drawn in the same order as the synth command.
struct CaseData {
  SyntheticCase spec;
  DepthMap gt;
  HsvImage hsv;
  PointCloud lidar;
  DepthMap initial;
};

inline CaseData make_case(const SyntheticCase& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Rendering rendering = render_depth(spec.scene, spec.K);
  CaseData d{spec, rendering.depth, rendering.hsv, {}, {}};
  d.lidar = simulate_lidar(spec.scene, spec.lidar, Pose::identity(), rng);
  d.initial = corrupt_depth(rendering.depth, spec.corruption, rng);
  return d;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("c3d_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace c3d::testing
