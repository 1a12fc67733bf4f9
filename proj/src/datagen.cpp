#include <c3d/datagen.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace c3d {

namespace {

constexpr double kRayEps = 1e-9;

std::optional<double> intersect(const Plane& p, const Vec3& o, const Vec3& d) {
  const double denom = d.dot(p.normal);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = (p.point - o).dot(p.normal) / denom;
  if (t <= kRayEps) return std::nullopt;
  if ((o + t * d - p.point).norm() > p.extent) return std::nullopt;
  return t;
}

std::optional<double> intersect(const Sphere& s, const Vec3& o, const Vec3& d) {
  const Vec3 oc = o - s.center;
  const double a = d.squaredNorm();
  const double b = oc.dot(d);
  const double c = oc.squaredNorm() - s.radius * s.radius;
  const double disc = b * b - a * c;
  if (disc < 0) return std::nullopt;
  const double root = std::sqrt(disc);
  for (double t : {(-b - root) / a, (-b + root) / a})
    if (t > kRayEps) return t;
  return std::nullopt;
}

std::optional<double> intersect(const Box& b, const Vec3& o, const Vec3& d) {
  // slab test in box coordinates
  const Vec3 lo = b.orientation.transpose() * (o - b.center);
  const Vec3 ld = b.orientation.transpose() * d;
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    if (std::abs(ld(a)) < 1e-15) {
      if (std::abs(lo(a)) > b.half_extents(a)) return std::nullopt;
      continue;
    }
    double ta = (-b.half_extents(a) - lo(a)) / ld(a);
    double tb = (b.half_extents(a) - lo(a)) / ld(a);
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  if (t0 > kRayEps) return t0;
  if (t1 > kRayEps) return t1;
  return std::nullopt;
}

}  // namespace

void ScenePrimitive::validate() const {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Plane>) {
          if (!(s.extent > 0)) throw InputError("plane extent must be positive");
          if (std::abs(s.normal.norm() - 1.0) > 1e-9) throw InputError("plane normal must be unit length");
        } else if constexpr (std::is_same_v<T, Sphere>) {
          if (!(s.radius > 0)) throw InputError("sphere radius must be positive");
        } else {
          if (!(s.half_extents.minCoeff() > 0)) throw InputError("box half extents must be positive");
          Pose{s.orientation, Vec3::Zero()}.validate();
        }
      },
      shape);
  if (hsv.minCoeff() < 0 || hsv.maxCoeff() > 1 || hsv(0) >= 1) throw InputError("primitive hsv out of range");
}

std::optional<RayHit> cast_ray(const Scene& scene, const Vec3& origin, const Vec3& direction) {
  std::optional<RayHit> best;
  for (std::size_t k = 0; k < scene.size(); ++k) {
    const auto t = std::visit([&](const auto& s) { return intersect(s, origin, direction); }, scene[k].shape);
    if (t && (!best || *t < best->t)) best = RayHit{*t, k};
  }
  return best;
}

Rendering render_depth(const Scene& scene, const CameraIntrinsics& K) {
  K.validate();
  Rendering out;
  out.depth = DepthMap(K.height, K.width);
  out.hsv = HsvImage(K.height, K.width);
  out.primitive = Grid<int>::Constant(K.height, K.width, -1);
  for (int v = 0; v < K.height; ++v) {
    for (int u = 0; u < K.width; ++u) {
      const auto hit = cast_ray(scene, Vec3::Zero(), K.ray(u, v));
      if (!hit) continue;
      out.depth.depths(v, u) = hit->t;  // ray has unit z, so t is depth
      out.depth.valid(v, u) = true;
      out.hsv.set(v, u, scene[hit->primitive].hsv);
      out.primitive(v, u) = static_cast<int>(hit->primitive);
    }
  }
  return out;
}

std::optional<double> render_depth_at(const Scene& scene, const CameraIntrinsics& K, double u, double v) {
  const auto hit = cast_ray(scene, Vec3::Zero(), K.ray(u, v));
  if (!hit) return std::nullopt;
  return hit->t;
}

void LidarSpec::validate() const {
  if (elevations.empty()) throw InputError("lidar needs at least one beam elevation");
  if (!(azimuth_step > 0)) throw InputError("lidar azimuth step must be positive");
  if (!(azimuth_max >= azimuth_min)) throw InputError("lidar azimuth range is empty");
  if (!(range_noise_std >= 0)) throw InputError("lidar range noise std must be >= 0");
  if (!(reflective_dropout >= 0 && reflective_dropout <= 1)) throw InputError("reflective dropout must lie in [0,1]");
  if (!(max_range > 0)) throw InputError("lidar max range must be positive");
}

LidarSpec LidarSpec::kitti_like(const CameraIntrinsics& K) {
  constexpr double deg = std::numbers::pi / 180.0;
  LidarSpec spec;
  for (int b = 0; b < 16; ++b) spec.elevations.push_back((-15.0 + b * (20.0 / 15.0)) * deg);
  spec.azimuth_step = 0.2 * deg;
  spec.azimuth_min = std::atan2(-K.cx - 0.5, K.fx);
  spec.azimuth_max = std::atan2(K.width - 0.5 - K.cx, K.fx);
  return spec;
}

PointCloud simulate_lidar(const Scene& scene, const LidarSpec& spec, const Pose& sensor_pose, std::mt19937_64& rng) {
  spec.validate();
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto n_az = static_cast<int>(std::floor((spec.azimuth_max - spec.azimuth_min) / spec.azimuth_step + 1e-9)) + 1;

  std::vector<Vec3> pts, cols;
  for (double elevation : spec.elevations) {
    for (int a = 0; a < n_az; ++a) {
      const double azimuth = spec.azimuth_min + a * spec.azimuth_step;
      const Vec3 local(std::cos(elevation) * std::sin(azimuth), -std::sin(elevation),
                       std::cos(elevation) * std::cos(azimuth));
      const Vec3 dir = sensor_pose.rotation * local;
      const auto hit = cast_ray(scene, sensor_pose.translation, dir);
      if (!hit || hit->t > spec.max_range) continue;
      const auto& prim = scene[hit->primitive];
      if (prim.reflective && spec.reflective_dropout > 0 && uniform(rng) < spec.reflective_dropout) continue;
      double range = hit->t;
      if (spec.range_noise_std > 0) range += spec.range_noise_std * noise(rng);
      pts.push_back(sensor_pose.translation + range * dir);
      cols.push_back(prim.hsv);
    }
  }
  PointCloud cloud;
  cloud.points.resize(3, static_cast<Eigen::Index>(pts.size()));
  Points hsv(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    cloud.points.col(static_cast<Eigen::Index>(k)) = pts[k];
    hsv.col(static_cast<Eigen::Index>(k)) = cols[k];
  }
  cloud.hsv = std::move(hsv);
  return cloud;
}

double clamp_depth(double d) {
  static const double lo = std::nextafter(kMinDepth, kMaxDepth);
  return std::clamp(d, lo, kMaxDepth);
}

DepthMap corrupt_depth(const DepthMap& depth, const Corruption& corruption, std::mt19937_64& rng) {
  if (!(corruption.noise_std >= 0)) throw InputError("noise std must be >= 0");
  std::normal_distribution<double> noise(0.0, 1.0);
  DepthMap out = depth;
  for (int r = 0; r < out.rows(); ++r) {
    for (int c = 0; c < out.cols(); ++c) {
      if (!out.valid(r, c)) continue;
      double d = out.depths(r, c) + corruption.bias;
      if (corruption.noise_std > 0) d += corruption.noise_std * noise(rng);
      out.depths(r, c) = d;
    }
  }
  for (const auto& h : corruption.holes) {
    for (int r = std::max(0, h.row); r < std::min(out.rows(), h.row + h.rows); ++r) {
      for (int c = std::max(0, h.col); c < std::min(out.cols(), h.col + h.cols); ++c) {
        if (!out.valid(r, c)) continue;
        if (h.mode == HoleRect::Mode::invalidate) {
          out.valid(r, c) = false;
          out.depths(r, c) = 0.0;
        } else {
          out.depths(r, c) += h.offset;
        }
      }
    }
  }
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c)
      if (out.valid(r, c)) out.depths(r, c) = clamp_depth(out.depths(r, c));
  return out;
}

CameraIntrinsics suite_camera() { return {200.0, 200.0, 63.5, 15.5, 128, 32}; }

SyntheticCase plane_and_boxes_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SyntheticCase out;
  out.name = "plane_and_boxes_" + std::to_string(seed);
  out.K = suite_camera();
  out.lidar = LidarSpec::kitti_like(out.K);
  out.lidar.range_noise_std = 0.0;

  ScenePrimitive wall;
  const Vec3 wall_normal = Vec3(0.15 * (U(rng) - 0.5), 0.0, -1.0).normalized();
  wall.shape = Plane{Vec3(0, 0, 18.0 + 4.0 * U(rng)), wall_normal, 40.0};
  wall.hsv = Vec3(0.55 + 0.1 * U(rng), 0.3, 0.6);
  out.scene.push_back(wall);

  const int n_boxes = 2 + static_cast<int>(U(rng) * 2.0);
  for (int b = 0; b < n_boxes; ++b) {
    ScenePrimitive box;
    const double z = 7.0 + 7.0 * U(rng);
    const double x = (U(rng) - 0.5) * 0.5 * z;
    Box shape;
    shape.center = Vec3(x, 0.2 * (U(rng) - 0.5), z);
    shape.half_extents = Vec3(0.6 + 0.8 * U(rng), 0.5 + 0.5 * U(rng), 0.4 + 0.6 * U(rng));
    shape.orientation = Pose::from_axis_angle(Vec3(0, 0.6 * (U(rng) - 0.5), 0), Vec3::Zero()).rotation;
    box.shape = shape;
    box.hsv = Vec3(std::fmod(0.1 + 0.3 * b + 0.05 * U(rng), 1.0), 0.7, 0.4 + 0.4 * U(rng));
    out.scene.push_back(box);
  }
  ScenePrimitive ball;
  ball.shape = Sphere{Vec3((U(rng) - 0.5) * 6.0, 0.0, 12.0 + 3.0 * U(rng)), 0.8 + 0.4 * U(rng)};
  ball.hsv = Vec3(0.9, 0.8, 0.7);
  out.scene.push_back(ball);

  out.corruption.noise_std = 0.5;
  return out;
}

SyntheticCase reflective_hole_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  SyntheticCase out;
  out.name = "reflective_hole_" + std::to_string(seed);
  out.K = suite_camera();
  out.lidar = LidarSpec::kitti_like(out.K);
  out.lidar.reflective_dropout = 1.0;

  const double z = 9.0 + 2.0 * U(rng);
  const double x = (U(rng) - 0.5) * 2.0;

  ScenePrimitive wall;
  wall.shape = Plane{Vec3(0, 0, 25.0), Vec3(0, 0, -1), 60.0};
  wall.hsv = Vec3(0.6, 0.2, 0.5);
  out.scene.push_back(wall);

  ScenePrimitive body;
  body.shape = Box{Vec3(x, 0.0, z + 0.5), Vec3(2.0, 1.0, 0.5), Mat3::Identity()};
  body.hsv = Vec3(0.02, 0.8, 0.6);
  out.scene.push_back(body);

  // the window sits a few millimeters proud of the body's front face
  ScenePrimitive window;
  const Vec3 half(0.4, 0.15, 0.01);
  window.shape = Box{Vec3(x, 0.0, z - 0.005), half, Mat3::Identity()};
  window.hsv = Vec3(0.58, 0.5, 0.25);
  window.reflective = true;
  out.scene.push_back(window);

  // hole rectangle: pixels whose centers see the window's front face
  const double zf = z - 0.015;
  const CameraIntrinsics& K = out.K;
  const int c0 = static_cast<int>(std::ceil(K.fx * (x - half.x()) / zf + K.cx));
  const int c1 = static_cast<int>(std::floor(K.fx * (x + half.x()) / zf + K.cx));
  const int r0 = static_cast<int>(std::ceil(K.fy * (-half.y()) / zf + K.cy));
  const int r1 = static_cast<int>(std::floor(K.fy * half.y() / zf + K.cy));
  out.corruption.noise_std = 0.1;
  out.corruption.holes.push_back({r0, c0, r1 - r0 + 1, c1 - c0 + 1, HoleRect::Mode::offset, 2.5});
  return out;
}

}  // namespace c3d
