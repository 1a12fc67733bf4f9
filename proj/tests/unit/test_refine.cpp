#include <c3d/datagen.hpp>
#include <c3d/pipeline.hpp>
#include <c3d/refine.hpp>

#include <doctest.h>

#include "fixtures.hpp"

#include <cmath>

using namespace c3d;
using c3d::testing::make_case;

namespace {

RefineResult refine_case(const c3d::testing::CaseData& d, const DepthMap& initial, const RefineConfig& config = {}) {
  const PointCloud lidar = prepare_lidar(d.lidar, d.spec.K, &d.hsv, config.kernel);
  return refine_depth(initial, &d.hsv, lidar, d.spec.K, config);
}

Grid<bool> hole_mask(const SyntheticCase& c) {
  Grid<bool> m = Grid<bool>::Constant(c.K.height, c.K.width, false);
  for (const auto& h : c.corruption.holes) m.block(h.row, h.col, h.rows, h.cols).setConstant(true);
  return m;
}

}  // namespace

TEST_CASE("refinement of a noisy plane-and-boxes initialization") {
  const auto d = make_case(plane_and_boxes_case(1), 1);
  const auto result = refine_case(d, d.initial);

  REQUIRE(result.history.size() >= 2);
  CHECK(result.history.size() == static_cast<std::size_t>(result.accepted_steps) + 1);
  for (std::size_t k = 1; k < result.history.size(); ++k) CHECK(result.history[k] < result.history[k - 1]);

  CHECK((result.depth.valid == d.initial.valid).all());
  for (int r = 0; r < result.depth.rows(); ++r)
    for (int c = 0; c < result.depth.cols(); ++c) {
      CHECK(result.depth.depths(r, c) > kMinDepth);
      CHECK(result.depth.depths(r, c) <= kMaxDepth);
    }

  const double before = eval_metrics(d.initial, d.gt).rmse, after = eval_metrics(result.depth, d.gt).rmse;
  CHECK(after <= 0.7 * before);
}

TEST_CASE("refinement started at the ground truth stays there") {
  const auto d = make_case(plane_and_boxes_case(2), 2);
  RefineConfig config;
  config.iterations = 40;
  const auto result = refine_case(d, d.gt, config);
  const double mean_gt = d.gt.depths.mean();
  CHECK(eval_metrics(result.depth, d.gt).rmse <= 0.01 * mean_gt);
}

TEST_CASE("refinement lowers the error away from LIDAR returns") {
  const auto d = make_case(reflective_hole_case(1), 1);
  const auto result = refine_case(d, d.initial);
  const auto covered = lidar_coverage(d.lidar, d.spec.K);
  const Grid<bool> uncovered = !covered;
  CHECK(masked_rmse(result.depth, d.gt, uncovered) < masked_rmse(d.initial, d.gt, uncovered));
  const auto hole = hole_mask(d.spec);
  CHECK(masked_rmse(result.depth, d.gt, hole) < masked_rmse(d.initial, d.gt, hole));
}

TEST_CASE("refinement is deterministic") {
  const auto d = make_case(reflective_hole_case(2), 2);
  RefineConfig config;
  config.iterations = 10;
  config.kernel.s0_law = S0Law::sampled();
  config.seed = 9;
  const auto a = refine_case(d, d.initial, config), b = refine_case(d, d.initial, config);
  CHECK(a.history == b.history);
  CHECK((a.depth.depths == b.depth.depths).all());
}

TEST_CASE("refinement input errors") {
  const auto d = make_case(plane_and_boxes_case(3), 3);
  RefineConfig config;
  config.iterations = 2;

  SUBCASE("no LIDAR point in view") {
    PointCloud behind;
    behind.points = Points(3, 1);
    behind.points.col(0) = Vec3(0, 0, -5);
    behind.hsv = Points::Zero(3, 1);
    behind.normals = Points::Zero(3, 1);
    behind.residuals = Eigen::VectorXd::Zero(1);
    CHECK_THROWS_AS(refine_depth(d.initial, &d.hsv, behind, d.spec.K, config), DegenerateSceneError);
  }
  SUBCASE("no valid depth") {
    DepthMap empty(d.spec.K.height, d.spec.K.width);
    CHECK_THROWS_AS(refine_case(d, empty, config), InputError);
  }
  SUBCASE("bad configuration") {
    RefineConfig bad = config;
    bad.step_size = 0;
    CHECK_THROWS_AS(refine_case(d, d.initial, bad), ConfigurationError);
    bad = config;
    bad.backtracking = 1.0;
    CHECK_THROWS_AS(refine_case(d, d.initial, bad), ConfigurationError);
    bad = config;
    bad.iterations = 0;
    CHECK_THROWS_AS(refine_case(d, d.initial, bad), ConfigurationError);
    bad = config;
    bad.anchor_delta = -1;
    CHECK_THROWS_AS(refine_case(d, d.initial, bad), ConfigurationError);
  }
}

TEST_CASE("eval_metrics") {
  const auto gt = c3d::testing::constant_depth(4, 5, 10.0);

  SUBCASE("perfect prediction") {
    const auto m = eval_metrics(gt, gt);
    CHECK(m.abs_rel == 0);
    CHECK(m.sq_rel == 0);
    CHECK(m.rmse == 0);
    CHECK(m.rmse_log == 0);
    CHECK(m.delta1 == 1);
    CHECK(m.delta2 == 1);
    CHECK(m.delta3 == 1);
    CHECK(m.count == 20);
  }
  SUBCASE("uniform 1.25x overestimate") {
    const auto m = eval_metrics(c3d::testing::constant_depth(4, 5, 12.5), gt);
    CHECK(m.abs_rel == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.sq_rel == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(m.rmse == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(m.rmse_log == doctest::Approx(0.22314355131420976).epsilon(1e-14));
    CHECK(m.delta1 == 0);
    CHECK(m.delta2 == 1);
    CHECK(m.delta3 == 1);
  }
  SUBCASE("ground truth beyond the cap is excluded") {
    auto far = gt;
    far.depths(0, 0) = 85.0;
    auto pred = gt;
    pred.depths(0, 0) = 1.0;
    const auto m = eval_metrics(pred, far);
    CHECK(m.count == 19);
    CHECK(m.rmse == 0);
  }
  SUBCASE("predictions are capped") {
    auto pred = gt;
    pred.depths(1, 1) = 1000.0;
    auto g = gt;
    g.depths(1, 1) = 80.0;
    CHECK(eval_metrics(pred, g).rmse == 0);
  }
  SUBCASE("invalid pixels are skipped") {
    auto pred = gt;
    pred.valid(2, 2) = false;
    pred.depths(2, 2) = 0;
    CHECK(eval_metrics(pred, gt).count == 19);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(eval_metrics(DepthMap(4, 5), gt), InputError);
    CHECK_THROWS_AS(eval_metrics(c3d::testing::constant_depth(3, 5, 1.0), gt), InputError);
  }
}

TEST_CASE("masked_rmse and lidar_coverage") {
  const auto gt = c3d::testing::constant_depth(3, 3, 5.0);
  auto pred = gt;
  pred.depths(0, 0) = 8.0;
  Grid<bool> mask = Grid<bool>::Constant(3, 3, false);
  mask(0, 0) = true;
  mask(1, 1) = true;
  CHECK(masked_rmse(pred, gt, mask) == doctest::Approx(std::sqrt(4.5)));
  CHECK_THROWS_AS(masked_rmse(pred, gt, Grid<bool>::Constant(3, 3, false)), InputError);

  const CameraIntrinsics K{10, 10, 1, 1, 3, 3};
  PointCloud cloud;
  cloud.points = Points(3, 2);
  cloud.points.col(0) = Vec3(0, 0, 5);
  cloud.points.col(1) = Vec3(0.09, 0.0, 1);
  const auto covered = lidar_coverage(cloud, K);
  CHECK(covered(1, 1));
  CHECK(covered.count() == 1);
}

TEST_CASE("ablation reports both configurations on the same inputs") {
  const auto d = make_case(plane_and_boxes_case(1), 1);
  RefineConfig config;
  config.iterations = 20;
  const auto runs = run_ablation(d.initial, d.hsv, d.lidar, d.spec.K, d.gt, config);
  REQUIRE(runs.size() == 2);
  CHECK_FALSE(runs[0].normal_kernel);
  CHECK(runs[1].normal_kernel);
  CHECK(runs[0].before.rmse == runs[1].before.rmse);
  CHECK(runs[0].before.count == runs[1].before.count);
  for (const auto& run : runs) {
    CHECK(run.after.rmse < run.before.rmse);
    CHECK(run.history.size() >= 2);
  }
}
