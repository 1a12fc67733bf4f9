#pragma once

#include <c3d/types.hpp>

#include <Eigen/Geometry>

#include <optional>
#include <vector>

namespace c3d {

/// Pinhole intrinsics. Camera frame is +x right, +y down, +z forward and a
/// pixel's integer (col,row) is its center.
struct CameraIntrinsics {
  double fx = 0, fy = 0;
  double cx = 0, cy = 0;
  int width = 0, height = 0;

  void validate() const;

  /// Ray through pixel coordinates (u,v) with unit z component.
  Vec3 ray(double u, double v) const { return {(u - cx) / fx, (v - cy) / fy, 1.0}; }
};

/// Rigid transform x -> R x + t.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }
  static Pose from_axis_angle(const Vec3& axis_angle, const Vec3& translation);

  void validate() const;
  Pose inverse() const { return {rotation.transpose(), -(rotation.transpose() * translation)}; }
  Pose operator*(const Pose& rhs) const {
    return {rotation * rhs.rotation, rotation * rhs.translation + translation};
  }
  Vec3 apply(const Vec3& x) const { return rotation * x + translation; }
};

struct DepthMap {
  Grid<double> depths;
  Grid<bool> valid;

  DepthMap() = default;
  DepthMap(int rows, int cols);
  /// Entries that are finite and > 0 become valid.
  static DepthMap from_depths(const Grid<double>& depths);

  int rows() const { return static_cast<int>(depths.rows()); }
  int cols() const { return static_cast<int>(depths.cols()); }
  Eigen::Index valid_count() const { return valid.count(); }
  void validate() const;
};

/// Per-pixel HSV colors in row-major pixel order (row*cols + col).
struct HsvImage {
  int rows = 0, cols = 0;
  Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor> data;

  HsvImage() = default;
  HsvImage(int r, int c) : rows(r), cols(c), data(Eigen::Index(r) * c, 3) { data.setZero(); }

  Vec3 at(int row, int col) const { return data.row(Eigen::Index(row) * cols + col).transpose(); }
  void set(int row, int col, const Vec3& hsv) { data.row(Eigen::Index(row) * cols + col) = hsv.transpose(); }
};

struct Pixel {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Structure-of-arrays point cloud. Optional attributes, when present, have
/// one entry per point. A zero normal marks a point whose normal could not
/// be estimated; it contributes nothing through the normal kernel.
struct PointCloud {
  Points points;
  std::optional<Points> hsv;
  std::optional<Points> normals;
  std::optional<Eigen::VectorXd> residuals;
  std::optional<std::vector<Pixel>> pixels;

  Eigen::Index size() const { return points.cols(); }
  bool empty() const { return points.cols() == 0; }
  void validate() const;

  /// Keeps the listed indices (in order) across every attribute.
  PointCloud subset(const std::vector<Eigen::Index>& indices) const;
};

struct Projection {
  double row = 0;  // v
  double col = 0;  // u
  double depth = 0;
  bool in_image = false;
};

PointCloud backproject_depth(const DepthMap& depth, const CameraIntrinsics& K,
                             const HsvImage* hsv_image = nullptr);

Projection project_point(const Vec3& x, const CameraIntrinsics& K);
std::vector<Projection> project_points(const PointCloud& cloud, const CameraIntrinsics& K);

PointCloud transform_cloud(const PointCloud& cloud, const Pose& T);

PointCloud crop_frustum(const PointCloud& cloud, const CameraIntrinsics& K,
                        double max_depth = kMaxDepth);

/// Colors every point from the pixel it projects into; points outside the
/// image get (0,0,0).
void colorize_from_image(PointCloud& cloud, const CameraIntrinsics& K, const HsvImage& image);

}  // namespace c3d
