#include <c3d/datagen.hpp>
#include <c3d/refine.hpp>

#include <doctest.h>

#include "fixtures.hpp"

#include <cmath>

using namespace c3d;

namespace {

ScenePrimitive wall(double z, const Vec3& hsv = Vec3(0.1, 0.5, 0.5), bool reflective = false) {
  return {Plane{Vec3(0, 0, z), Vec3(0, 0, -1), 1000.0}, hsv, reflective};
}

CameraIntrinsics small_camera() { return {100, 100, 10, 10, 21, 21}; }
CameraIntrinsics wide_camera() { return {20, 20, 10, 10, 21, 21}; }

// Dense beam pattern over +-0.4 rad in both directions.
LidarSpec dense_spec() {
  LidarSpec spec;
  spec.elevations.clear();
  for (int b = 0; b < 100; ++b) spec.elevations.push_back(-0.4 + 0.8 * b / 99.0);
  spec.azimuth_min = -0.4;
  spec.azimuth_max = 0.4;
  spec.azimuth_step = 0.008;
  return spec;
}

}  // namespace

TEST_CASE("render_depth of a fronto-parallel plane") {
  const auto K = small_camera();
  const auto out = render_depth({wall(5)}, K);
  CHECK(out.depth.valid.all());
  CHECK((out.depth.depths - 5.0).abs().maxCoeff() < 1e-12);
  CHECK((out.primitive == 0).all());
  CHECK(out.hsv.at(3, 4).isApprox(Vec3(0.1, 0.5, 0.5)));
}

TEST_CASE("render_depth of a sphere") {
  const auto K = wide_camera();
  Scene scene{{Sphere{Vec3(0, 0, 10), 2.0}, Vec3(0.5, 0.5, 0.5), false}};
  const auto out = render_depth(scene, K);
  CHECK(out.depth.depths(10, 10) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK_FALSE(out.depth.valid(0, 0));
  CHECK(out.primitive(0, 0) == -1);
  const auto at = render_depth_at(scene, K, 10.0, 10.0);
  REQUIRE(at.has_value());
  CHECK(*at == doctest::Approx(8.0).epsilon(1e-12));
  CHECK_FALSE(render_depth_at(scene, K, 0.0, 0.0).has_value());
}

TEST_CASE("nearest primitive wins and empty scenes render nothing") {
  const auto K = wide_camera();
  Scene scene{wall(9), {Box{Vec3(0, 0, 4), Vec3(0.5, 0.5, 0.5), Mat3::Identity()}, Vec3(0.7, 0.2, 0.9), false}};
  const auto out = render_depth(scene, K);
  CHECK(out.depth.depths(10, 10) == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(out.primitive(10, 10) == 1);
  CHECK(out.depth.depths(0, 0) == doctest::Approx(9.0).epsilon(1e-12));

  const auto none = render_depth({}, K);
  CHECK_FALSE(none.depth.valid.any());
}

TEST_CASE("cast_ray ignores hits behind the origin") {
  Scene scene{wall(-3)};
  CHECK_FALSE(cast_ray(scene, Vec3::Zero(), Vec3::UnitZ()).has_value());
  const auto hit = cast_ray(scene, Vec3::Zero(), -Vec3::UnitZ());
  REQUIRE(hit.has_value());
  CHECK(hit->t == doctest::Approx(3.0));
}

TEST_CASE("primitive validation") {
  CHECK_THROWS_AS((ScenePrimitive{Sphere{Vec3::Zero(), -1.0}, Vec3::Zero(), false}.validate()), InputError);
  CHECK_THROWS_AS((ScenePrimitive{Plane{Vec3::Zero(), Vec3::Zero(), 1.0}, Vec3::Zero(), false}.validate()), InputError);
  CHECK_THROWS_AS((ScenePrimitive{Box{Vec3::Zero(), Vec3(1, -1, 1), Mat3::Identity()}, Vec3::Zero(), false}.validate()),
                  InputError);
}

TEST_CASE("simulate_lidar") {
  const auto spec = dense_spec();
  std::mt19937_64 rng(3);

  SUBCASE("noise-free returns lie on the plane") {
    const auto cloud = simulate_lidar({wall(5)}, spec, Pose::identity(), rng);
    CHECK(cloud.size() > 10000);
    CHECK((cloud.points.row(2).array() - 5.0).abs().maxCoeff() < 1e-9);
    CHECK(cloud.hsv->col(0).isApprox(Vec3(0.1, 0.5, 0.5)));
  }
  SUBCASE("reflective surfaces drop every return at dropout 1") {
    const auto cloud = simulate_lidar({wall(5, Vec3::Zero(), true)}, spec, Pose::identity(), rng);
    CHECK(cloud.empty());
  }
  SUBCASE("range noise has the configured spread") {
    LidarSpec noisy = spec;
    noisy.range_noise_std = 0.05;
    const auto cloud = simulate_lidar({wall(5)}, noisy, Pose::identity(), rng);
    REQUIRE(cloud.size() >= 10000);
    double sum = 0, sq = 0;
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
      const Vec3 p = cloud.points.col(i);
      const double e = p.norm() - 5.0 * p.norm() / p.z();
      sum += e;
      sq += e * e;
    }
    const double n = static_cast<double>(cloud.size());
    const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
    CHECK(std::abs(sd - 0.05) < 0.005);
    CHECK(std::abs(sum / n) < 0.005);
  }
  SUBCASE("max range") {
    LidarSpec near = spec;
    near.max_range = 4.0;
    CHECK(simulate_lidar({wall(5)}, near, Pose::identity(), rng).empty());
  }
  SUBCASE("sensor pose maps returns into the camera frame") {
    const Pose T = Pose::from_axis_angle(Vec3(0, 0, 0), Vec3(0, -1, 0));
    const auto cloud = simulate_lidar({wall(5)}, spec, T, rng);
    CHECK((cloud.points.row(2).array() - 5.0).abs().maxCoeff() < 1e-9);
  }
  SUBCASE("invalid specs") {
    LidarSpec bad = spec;
    bad.range_noise_std = -1;
    CHECK_THROWS_AS(simulate_lidar({wall(5)}, bad, Pose::identity(), rng), InputError);
    bad = spec;
    bad.reflective_dropout = 1.5;
    CHECK_THROWS_AS(simulate_lidar({wall(5)}, bad, Pose::identity(), rng), InputError);
  }
}

TEST_CASE("noise-free LIDAR agrees with the rendered depth") {
  const auto K = small_camera();
  Scene scene{wall(12), {Sphere{Vec3(0.3, 0.2, 6), 1.5}, Vec3(0.4, 0.4, 0.4), false}};
  std::mt19937_64 rng(8);
  const auto cloud = simulate_lidar(scene, dense_spec(), Pose::identity(), rng);
  int checked = 0;
  for (const auto& p : project_points(cloud, K)) {
    if (!p.in_image) continue;
    const auto d = render_depth_at(scene, K, p.col, p.row);
    REQUIRE(d.has_value());
    CHECK(std::abs(*d - p.depth) < 1e-6);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("corrupt_depth") {
  const auto clean = c3d::testing::constant_depth(60, 60, 10.0);
  std::mt19937_64 rng(5);

  SUBCASE("no corruption is the identity") {
    const auto out = corrupt_depth(clean, {}, rng);
    CHECK((out.depths == clean.depths).all());
    CHECK((out.valid == clean.valid).all());
  }
  SUBCASE("bias and noise") {
    const auto out = corrupt_depth(clean, {0.5, 0.25, {}}, rng);
    const double mean = out.depths.mean();
    const double sd = std::sqrt((out.depths - mean).square().mean());
    CHECK(std::abs(mean - 10.25) < 0.05);
    CHECK(std::abs(sd - 0.5) < 0.05);
  }
  SUBCASE("holes") {
    Corruption c;
    c.holes.push_back({2, 3, 4, 5, HoleRect::Mode::offset, 2.5});
    c.holes.push_back({50, 50, 20, 20, HoleRect::Mode::invalidate, 0.0});
    const auto out = corrupt_depth(clean, c, rng);
    CHECK(out.depths(2, 3) == 12.5);
    CHECK(out.depths(5, 7) == 12.5);
    CHECK(out.depths(6, 7) == 10.0);
    CHECK(out.depths(5, 8) == 10.0);
    CHECK_FALSE(out.valid(59, 59));
    CHECK(out.valid(49, 59));
    CHECK(out.valid_count() == 3600 - 100);
  }
  SUBCASE("results are clamped into the depth range") {
    const auto out = corrupt_depth(clean, {0.0, -20.0, {}}, rng);
    CHECK(out.depths.minCoeff() > kMinDepth);
    const auto far = corrupt_depth(clean, {0.0, 200.0, {}}, rng);
    CHECK(far.depths.maxCoeff() == kMaxDepth);
  }
  SUBCASE("negative noise is rejected") {
    CHECK_THROWS_AS(corrupt_depth(clean, {-1.0, 0.0, {}}, rng), InputError);
  }
}

TEST_CASE("clamp_depth") {
  CHECK(clamp_depth(5.0) == 5.0);
  CHECK(clamp_depth(0.0) > kMinDepth);
  CHECK(clamp_depth(1e9) == kMaxDepth);
}

TEST_CASE("suite cases") {
  const auto K = suite_camera();
  CHECK(K.width == 128);
  CHECK(K.height == 32);

  for (std::uint64_t seed : {1, 2}) {
    const auto a = plane_and_boxes_case(seed), b = plane_and_boxes_case(seed);
    REQUIRE(a.scene.size() == b.scene.size());
    CHECK(a.corruption.noise_std == 0.5);
    const auto ra = render_depth(a.scene, a.K), rb = render_depth(b.scene, b.K);
    CHECK((ra.depth.depths == rb.depth.depths).all());
    CHECK(ra.depth.valid.all());

    std::mt19937_64 rng(seed);
    const auto lidar = simulate_lidar(a.scene, a.lidar, Pose::identity(), rng);
    const auto covered = lidar_coverage(lidar, a.K);
    int rows = 0;
    for (int r = 0; r < a.K.height; ++r) rows += covered.row(r).any();
    CHECK(rows >= 7);
    CHECK(rows < a.K.height);
  }
  CHECK_FALSE((render_depth(plane_and_boxes_case(1).scene, K).depth.depths ==
               render_depth(plane_and_boxes_case(2).scene, K).depth.depths).all());

  const auto hole = reflective_hole_case(1);
  REQUIRE(hole.corruption.holes.size() == 1);
  const auto& h = hole.corruption.holes[0];
  const auto rendered = render_depth(hole.scene, hole.K);
  std::mt19937_64 rng(1);
  const auto lidar = simulate_lidar(hole.scene, hole.lidar, Pose::identity(), rng);
  int window_pixels = 0;
  for (int r = h.row; r < h.row + h.rows; ++r)
    for (int c = h.col; c < h.col + h.cols; ++c) {
      CHECK(hole.scene[rendered.primitive(r, c)].reflective);
      ++window_pixels;
    }
  CHECK(window_pixels > 0);
  CHECK(lidar.size() > 0);
  for (Eigen::Index j = 0; j < lidar.size(); ++j) CHECK_FALSE(lidar.hsv->col(j) == hole.scene[2].hsv);
}

TEST_CASE("generation is deterministic in the seed") {
  const auto c = plane_and_boxes_case(4);
  const auto run = [&] {
    std::mt19937_64 rng(77);
    const auto lidar = simulate_lidar(c.scene, c.lidar, Pose::identity(), rng);
    const auto depth = corrupt_depth(render_depth(c.scene, c.K).depth, c.corruption, rng);
    return std::make_pair(lidar.points, depth.depths);
  };
  const auto a = run(), b = run();
  CHECK(a.first == b.first);
  CHECK((a.second == b.second).all());
}
