#include <c3d/features.hpp>
#include <c3d/gradcheck.hpp>
#include <c3d/loss.hpp>
#include <c3d/pipeline.hpp>

#include <cmath>
#include <random>

namespace c3d {

GradCheckScene random_grad_scene(std::uint64_t seed, int rows, int cols, const KernelConfig& config) {
  if (rows < 3 || cols < 3) throw InputError("gradient check scenes need at least 3x3 pixels");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::normal_distribution<double> N(0.0, 1.0);

  GradCheckScene scene;
  const double f = 1.2 * std::max(rows, cols);
  scene.K = {f, f, (cols - 1) / 2.0, (rows - 1) / 2.0, cols, rows};

  const double d0 = 3.0 + 3.0 * U(rng);
  const double a = 2.0 * U(rng) - 1.0, b = 2.0 * U(rng) - 1.0;
  const double bump = 0.3 * U(rng), phase = 6.28 * U(rng);
  auto surface = [&](double u, double v) {
    return d0 + a * (u - scene.K.cx) / cols + b * (v - scene.K.cy) / rows + bump * std::sin(0.8 * u + 0.5 * v + phase);
  };
  const double h0 = U(rng);

  scene.depth = DepthMap(rows, cols);
  scene.hsv = HsvImage(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      scene.depth.depths(r, c) = surface(c, r) + 0.03 * N(rng);
      scene.depth.valid(r, c) = true;
      const double h = std::fmod(h0 + 0.05 * c / cols + 0.02 * std::abs(N(rng)), 1.0);
      scene.hsv.set(r, c, Vec3(h, 0.3 + 0.5 * U(rng), 0.3 + 0.5 * U(rng)));
    }
  }

  const int m = 3 * std::max(rows, cols) + 6;
  Points pts(3, m), colors(3, m);
  for (int j = 0; j < m; ++j) {
    const double u = (cols - 1) * U(rng), v = (rows - 1) * U(rng);
    pts.col(j) = (surface(u, v) + 0.05 * N(rng)) * scene.K.ray(u, v);
    Vec3 c = scene.hsv.at(static_cast<int>(std::lround(v)), static_cast<int>(std::lround(u)));
    c(0) = std::fmod(c(0) + 0.03 * std::abs(N(rng)), 1.0);
    c(1) = std::clamp(c(1) + 0.03 * N(rng), 0.0, 1.0);
    c(2) = std::clamp(c(2) + 0.03 * N(rng), 0.0, 1.0);
    colors.col(j) = c;
  }
  PointCloud raw;
  raw.points = pts;
  raw.hsv = colors;
  scene.lidar = prepare_lidar(raw, scene.K, &scene.hsv, config);
  return scene;
}

namespace {

struct Probe {
  const GradCheckScene& scene;
  const KernelConfig& config;
  const PointCloud& base;
  const PairSet& pairs;
  const Eigen::VectorXd& scales;
  double s0;

  PointCloud perturbed(const DepthMap& depth) const {
    PointCloud cloud = backproject_depth(depth, scene.K, &scene.hsv);
    if (config.use_normal_kernel) {
      if (config.normal_grad_mode == NormalGradMode::full) {
        auto normals = estimate_normals_grid(cloud, config.normal_window_radius);
        orient_toward_viewpoint(normals, cloud.points, Vec3::Zero());
        attach_normals(cloud, normals);
      } else {
        cloud.normals = base.normals;
      }
      cloud.residuals = base.residuals;
    }
    return cloud;
  }

  double loss(const DepthMap& depth, LossForm form) const {
    return evaluate(perturbed(depth), scene.lidar, pairs, config, s0, {.form = form, .pair_scales = &scales}).loss;
  }
};

}  // namespace

GradCheckResult grad_check(std::uint64_t seed, const GradCheckOptions& options) {
  const KernelConfig& config = options.kernel;
  config.validate();
  const GradCheckScene scene = random_grad_scene(seed, options.rows, options.cols, config);

  GradCheckResult result;
  result.s0 = draw_s0(seed, config.s0_law);
  const PointCloud pred = make_prediction_cloud(scene.depth, scene.K, &scene.hsv, config);
  const PairSet pairs = prune_pairs(pred, scene.lidar, scene.K, config.prune_radius);
  if (pairs.empty()) throw DegenerateSceneError("gradient check scene has no pairs", 0);
  result.pair_count = pairs.size();
  const Eigen::VectorXd scales = pair_scales(pred, scene.lidar, pairs, config, result.s0);
  const Probe probe{scene, config, pred, pairs, scales, result.s0};

  for (LossForm form : {LossForm::sum, LossForm::log}) {
    const auto report =
        evaluate(pred, scene.lidar, pairs, config, result.s0, {.form = form, .gradients = true, .pair_scales = &scales});
    const Grid<double> analytic = depth_gradient_from_points(pred, report.grad_points, scene.K);
    Grid<double> numeric = Grid<double>::Zero(options.rows, options.cols);
    for (int r = 0; r < options.rows; ++r) {
      for (int c = 0; c < options.cols; ++c) {
        DepthMap plus = scene.depth, minus = scene.depth;
        plus.depths(r, c) += options.step;
        minus.depths(r, c) -= options.step;
        numeric(r, c) = (probe.loss(plus, form) - probe.loss(minus, form)) / (2.0 * options.step);
      }
    }
    const double floor = 1e-3 * numeric.abs().maxCoeff();
    double worst = 0;
    for (int r = 0; r < options.rows; ++r) {
      for (int c = 0; c < options.cols; ++c) {
        const double a = analytic(r, c), f = numeric(r, c);
        const double denom = std::max({std::abs(a), std::abs(f), floor});
        if (denom > 0) worst = std::max(worst, std::abs(a - f) / denom);
      }
    }
    (form == LossForm::sum ? result.max_rel_error_sum : result.max_rel_error_log) = worst;
  }
  return result;
}

}  // namespace c3d
