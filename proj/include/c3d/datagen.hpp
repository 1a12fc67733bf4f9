#pragma once

#include <c3d/geometry.hpp>

#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace c3d {

/// Disk of radius `extent` around `point` in the plane with unit `normal`.
struct Plane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double extent = 1.0;
};

struct Sphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
};

/// Oriented box; `orientation` maps box axes into the camera frame.
struct Box {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();
  Mat3 orientation = Mat3::Identity();
};

struct ScenePrimitive {
  std::variant<Plane, Sphere, Box> shape;
  Vec3 hsv = Vec3::Zero();
  bool reflective = false;

  void validate() const;
};

using Scene = std::vector<ScenePrimitive>;

struct RayHit {
  double t = 0;  // ray parameter; hit = origin + t * direction
  std::size_t primitive = 0;
};

/// Nearest intersection with t > 0.
std::optional<RayHit> cast_ray(const Scene& scene, const Vec3& origin, const Vec3& direction);

struct Rendering {
  DepthMap depth;
  HsvImage hsv;
  Grid<int> primitive;  // -1 where the ray misses
};

Rendering render_depth(const Scene& scene, const CameraIntrinsics& K);

/// Depth seen along the ray through continuous pixel coordinates (u,v).
std::optional<double> render_depth_at(const Scene& scene, const CameraIntrinsics& K, double u, double v);

struct LidarSpec {
  std::vector<double> elevations;  // radians, positive up
  double azimuth_step = 0.2 * 3.14159265358979323846 / 180.0;
  double azimuth_min = -0.5;  // radians, positive right
  double azimuth_max = 0.5;
  double range_noise_std = 0.0;
  double reflective_dropout = 1.0;
  double max_range = 120.0;

  void validate() const;

  /// 16 beams over [-15, +5] degrees, 0.2 degree azimuth step spanning the
  /// camera's horizontal field of view.
  static LidarSpec kitti_like(const CameraIntrinsics& K);
};

/// One ray per (elevation, azimuth) cell from the sensor at `sensor_pose`
/// (sensor frame to camera frame). Returns camera-frame points colored by
/// the primitive they hit.
PointCloud simulate_lidar(const Scene& scene, const LidarSpec& spec, const Pose& sensor_pose, std::mt19937_64& rng);

struct HoleRect {
  enum class Mode { invalidate, offset };
  int row = 0, col = 0, rows = 0, cols = 0;
  Mode mode = Mode::offset;
  double offset = 0.0;  // meters, Mode::offset only
};

struct Corruption {
  double noise_std = 0.0;
  double bias = 0.0;
  std::vector<HoleRect> holes;
};

/// Adds bias and Gaussian noise to every valid depth, applies the hole
/// rectangles, then clamps into (kMinDepth, kMaxDepth].
DepthMap corrupt_depth(const DepthMap& depth, const Corruption& corruption, std::mt19937_64& rng);

double clamp_depth(double d);

/// A complete synthetic test case.
struct SyntheticCase {
  std::string name;
  Scene scene;
  CameraIntrinsics K;
  LidarSpec lidar;
  Corruption corruption;
};

/// Camera used by the built-in suite: 128x32 pixels, f = 200 px. Seven of
/// the sixteen default beams cross its vertical field of view.
CameraIntrinsics suite_camera();

/// Back wall plus randomly placed boxes (and a sphere), noise 0.5 m.
SyntheticCase plane_and_boxes_case(std::uint64_t seed);

/// Opaque box with a reflective window in front; LIDAR drops every return on
/// the window and the initial depth has a hole offset there.
SyntheticCase reflective_hole_case(std::uint64_t seed);

}  // namespace c3d
