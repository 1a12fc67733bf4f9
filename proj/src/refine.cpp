#include <c3d/datagen.hpp>
#include <c3d/loss.hpp>
#include <c3d/pipeline.hpp>
#include <c3d/refine.hpp>

#include <cmath>
#include <random>

namespace c3d {

void RefineConfig::validate() const {
  if (iterations < 1) throw ConfigurationError("refinement needs at least one iteration");
  if (!(step_size > 0)) throw ConfigurationError("step size must be positive");
  if (!(backtracking > 0 && backtracking < 1)) throw ConfigurationError("backtracking factor must lie in (0,1)");
  if (max_backtracks < 0) throw ConfigurationError("max_backtracks must be >= 0");
  if (!(anchor_weight >= 0)) throw ConfigurationError("anchor weight must be >= 0");
  if (!(anchor_delta > 0)) throw ConfigurationError("anchor delta must be positive");
  kernel.validate();
}

namespace {

struct Objective {
  const DepthMap& anchor;
  const HsvImage* hsv;
  const PointCloud& lidar;
  const CameraIntrinsics& K;
  const RefineConfig& config;
  const PairSet& pairs;
  double n_valid;

  double huber(double r) const {
    const double a = std::abs(r), d = config.anchor_delta;
    return a <= d ? 0.5 * r * r : d * (a - 0.5 * d);
  }
  double huber_grad(double r) const {
    const double d = config.anchor_delta;
    return std::abs(r) <= d ? r : (r > 0 ? d : -d);
  }

  double value(const DepthMap& depth, double s0) const {
    const PointCloud pred = make_prediction_cloud(depth, K, hsv, config.kernel);
    double f = c3d_log_loss(pred, lidar, pairs, config.kernel, s0).loss;
    return f + config.anchor_weight * anchor_value(depth);
  }

  double anchor_value(const DepthMap& depth) const {
    double sum = 0;
    for (int r = 0; r < depth.rows(); ++r)
      for (int c = 0; c < depth.cols(); ++c)
        if (depth.valid(r, c)) sum += huber(depth.depths(r, c) - anchor.depths(r, c));
    return sum / n_valid;
  }

  Grid<double> gradient(const DepthMap& depth, double s0) const {
    const PointCloud pred = make_prediction_cloud(depth, K, hsv, config.kernel);
    const auto report = evaluate(pred, lidar, pairs, config.kernel, s0, {.form = LossForm::log, .gradients = true});
    Grid<double> g = depth_gradient_from_points(pred, report.grad_points, K);
    for (int r = 0; r < depth.rows(); ++r)
      for (int c = 0; c < depth.cols(); ++c)
        if (depth.valid(r, c))
          g(r, c) += config.anchor_weight * huber_grad(depth.depths(r, c) - anchor.depths(r, c)) / n_valid;
    return g;
  }
};

}  // namespace

RefineResult refine_depth(const DepthMap& initial, const HsvImage* hsv, const PointCloud& lidar,
                          const CameraIntrinsics& K, const RefineConfig& config) {
  config.validate();
  initial.validate();
  if (initial.valid_count() == 0) throw InputError("initial depth map has no valid pixel");

  RefineResult result;
  result.depth = initial;
  for (int r = 0; r < initial.rows(); ++r)
    for (int c = 0; c < initial.cols(); ++c)
      if (initial.valid(r, c)) result.depth.depths(r, c) = clamp_depth(initial.depths(r, c));

  // the valid mask never changes, so neither do the pairs
  const PairSet pairs =
      prune_pairs(backproject_depth(initial, K, nullptr), lidar, K, config.kernel.prune_radius);
  if (pairs.empty()) throw DegenerateSceneError("no predicted/LIDAR pairs survive pruning", 0);

  const Objective objective{initial, hsv, lidar, K, config, pairs, static_cast<double>(initial.valid_count())};
  std::mt19937_64 rng(config.seed);

  double alpha = config.step_size;
  double current = 0;
  for (int it = 0; it < config.iterations; ++it) {
    const double s0 = sample_s0(rng, config.kernel.s0_law);
    // under a fixed law the last accepted value is the current objective
    if (it == 0 || config.kernel.s0_law.kind != S0Law::Kind::fixed) current = objective.value(result.depth, s0);
    if (it == 0) result.history.push_back(current);

    const Grid<double> g = objective.gradient(result.depth, s0);
    double gmax = 0;
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.cols(); ++c)
        if (result.depth.valid(r, c)) gmax = std::max(gmax, std::abs(g(r, c)));
    if (!(gmax > 0)) break;

    bool accepted = false;
    for (int b = 0; b <= config.max_backtracks; ++b) {
      DepthMap trial = result.depth;
      for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c)
          if (trial.valid(r, c)) trial.depths(r, c) = clamp_depth(trial.depths(r, c) - alpha * g(r, c) / gmax);
      const double f = objective.value(trial, s0);
      if (f < current) {
        result.depth = std::move(trial);
        result.history.push_back(f);
        current = f;
        ++result.accepted_steps;
        accepted = true;
        alpha = std::min(config.step_size, alpha / config.backtracking);
        break;
      }
      alpha *= config.backtracking;
    }
    if (!accepted) break;
  }
  return result;
}

MetricsReport eval_metrics(const DepthMap& pred, const DepthMap& gt, double cap) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols()) throw InputError("prediction and ground truth differ in size");
  MetricsReport m;
  double abs_rel = 0, sq_rel = 0, sq = 0, sq_log = 0;
  std::size_t d1 = 0, d2 = 0, d3 = 0;
  for (int r = 0; r < gt.rows(); ++r) {
    for (int c = 0; c < gt.cols(); ++c) {
      if (!pred.valid(r, c) || !gt.valid(r, c)) continue;
      const double g = gt.depths(r, c);
      if (!(g > 0) || g > cap) continue;
      const double p = std::min(pred.depths(r, c), cap);
      const double diff = p - g;
      abs_rel += std::abs(diff) / g;
      sq_rel += diff * diff / g;
      sq += diff * diff;
      const double ld = std::log(p) - std::log(g);
      sq_log += ld * ld;
      const double ratio = std::max(p / g, g / p);
      d1 += ratio < 1.25;
      d2 += ratio < 1.25 * 1.25;
      d3 += ratio < 1.25 * 1.25 * 1.25;
      ++m.count;
    }
  }
  if (m.count == 0) throw InputError("no pixel is valid in both maps within the depth cap");
  const double n = static_cast<double>(m.count);
  m.abs_rel = abs_rel / n;
  m.sq_rel = sq_rel / n;
  m.rmse = std::sqrt(sq / n);
  m.rmse_log = std::sqrt(sq_log / n);
  m.delta1 = d1 / n;
  m.delta2 = d2 / n;
  m.delta3 = d3 / n;
  return m;
}

double masked_rmse(const DepthMap& pred, const DepthMap& gt, const Grid<bool>& mask) {
  double sq = 0;
  std::size_t n = 0;
  for (int r = 0; r < gt.rows(); ++r) {
    for (int c = 0; c < gt.cols(); ++c) {
      if (!mask(r, c) || !pred.valid(r, c) || !gt.valid(r, c)) continue;
      const double d = pred.depths(r, c) - gt.depths(r, c);
      sq += d * d;
      ++n;
    }
  }
  if (n == 0) throw InputError("mask selects no jointly valid pixel");
  return std::sqrt(sq / static_cast<double>(n));
}

Grid<bool> lidar_coverage(const PointCloud& lidar, const CameraIntrinsics& K) {
  Grid<bool> covered = Grid<bool>::Constant(K.height, K.width, false);
  for (const auto& p : project_points(lidar, K))
    if (p.in_image) covered(static_cast<int>(p.row), static_cast<int>(p.col)) = true;
  return covered;
}

std::vector<AblationRun> run_ablation(const DepthMap& initial, const HsvImage& hsv, const PointCloud& lidar,
                                      const CameraIntrinsics& K, const DepthMap& gt, const RefineConfig& config) {
  std::vector<AblationRun> runs;
  for (bool with_normals : {false, true}) {
    RefineConfig cfg = config;
    cfg.kernel.use_normal_kernel = with_normals;
    const PointCloud prepared = prepare_lidar(lidar, K, &hsv, cfg.kernel);
    const auto result = refine_depth(initial, &hsv, prepared, K, cfg);
    runs.push_back({with_normals, eval_metrics(initial, gt), eval_metrics(result.depth, gt), result.history});
  }
  return runs;
}

}  // namespace c3d
