#include <c3d/features.hpp>
#include <c3d/loss.hpp>

#include <algorithm>
#include <cmath>
#include <thread>

namespace c3d {

PairSet all_pairs(Eigen::Index n_pred, Eigen::Index n_lidar) {
  PairSet set;
  set.prune_radius = -1;
  set.pairs.reserve(static_cast<std::size_t>(n_pred * n_lidar));
  for (Eigen::Index i = 0; i < n_pred; ++i)
    for (Eigen::Index j = 0; j < n_lidar; ++j) set.pairs.push_back({i, j});
  return set;
}

PairSet prune_pairs(const PointCloud& pred, const PointCloud& lidar, const CameraIntrinsics& K, int radius) {
  if (!pred.pixels) throw ConfigurationError("pair pruning needs pixel provenance on the predicted cloud");
  if (radius < 0) throw InputError("prune radius must be >= 0");
  K.validate();

  // bucket lidar points by the cell they project into (CSR layout)
  const std::size_t cells = std::size_t(K.width) * K.height;
  std::vector<std::size_t> start(cells + 1, 0);
  std::vector<std::ptrdiff_t> cell_of(lidar.size(), -1);
  for (Eigen::Index j = 0; j < lidar.size(); ++j) {
    const auto p = project_point(lidar.points.col(j), K);
    if (!p.in_image) continue;
    const auto cell = std::size_t(std::floor(p.row)) * K.width + std::size_t(std::floor(p.col));
    cell_of[j] = static_cast<std::ptrdiff_t>(cell);
    ++start[cell + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) start[c + 1] += start[c];
  std::vector<Eigen::Index> members(start.back());
  {
    auto fill = start;
    for (Eigen::Index j = 0; j < lidar.size(); ++j)
      if (cell_of[j] >= 0) members[fill[cell_of[j]]++] = j;
  }

  PairSet set;
  set.prune_radius = radius;
  std::vector<Eigen::Index> row_pairs;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const Pixel px = (*pred.pixels)[i];
    row_pairs.clear();
    const int r0 = std::max(0, px.row - radius), r1 = std::min(K.height - 1, px.row + radius);
    const int c0 = std::max(0, px.col - radius), c1 = std::min(K.width - 1, px.col + radius);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const auto cell = std::size_t(r) * K.width + c;
        row_pairs.insert(row_pairs.end(), members.begin() + start[cell], members.begin() + start[cell + 1]);
      }
    }
    std::sort(row_pairs.begin(), row_pairs.end());
    for (auto j : row_pairs) set.pairs.push_back({i, j});
  }
  return set;
}

Eigen::VectorXd pair_scales(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                            const KernelConfig& config, double s0) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs.pairs[p];
    out(static_cast<Eigen::Index>(p)) = kernel_scale(pred.points.col(i), lidar.points.col(j), config, s0);
  }
  return out;
}

namespace {

void check_inputs(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs, const KernelConfig& config,
                  const EvalOptions& options) {
  config.validate();
  if (config.use_hsv_kernel && (!pred.hsv || !lidar.hsv))
    throw ConfigurationError("hsv kernel enabled but a cloud carries no hsv colors");
  if (config.use_normal_kernel && (!pred.normals || !pred.residuals || !lidar.normals || !lidar.residuals))
    throw ConfigurationError("normal kernel enabled but a cloud carries no normals/residuals");
  if (options.gradients && config.use_normal_kernel && config.normal_grad_mode == NormalGradMode::full &&
      !pred.pixels)
    throw ConfigurationError("full normal gradients need pixel provenance on the predicted cloud");
  if (options.pair_scales && options.pair_scales->size() != static_cast<Eigen::Index>(pairs.size()))
    throw InputError("pair scale override does not match the pair count");
  for (const auto& [i, j] : pairs.pairs)
    if (i < 0 || i >= pred.size() || j < 0 || j >= lidar.size()) throw InputError("pair index out of range");
}

struct Partial {
  double inner = 0;
  Points grad_x;  // d inner / d x_i
  Points grad_n;  // d inner / d n_i
};

void accumulate(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs, const KernelConfig& config,
                double s0, const EvalOptions& options, std::size_t begin, std::size_t end, Partial& out) {
  const bool want_normal_grad = options.gradients && config.use_normal_kernel &&
                                config.normal_grad_mode == NormalGradMode::full;
  Vec3 ci, cj, ni, nj;
  for (std::size_t p = begin; p < end; ++p) {
    const auto [i, j] = pairs.pairs[p];
    const Vec3 x = pred.points.col(i);
    const Vec3 z = lidar.points.col(j);
    PointFeatures fx, fz;
    if (config.use_hsv_kernel) {
      ci = pred.hsv->col(i);
      cj = lidar.hsv->col(j);
      fx.hsv = &ci;
      fz.hsv = &cj;
    }
    if (config.use_normal_kernel) {
      ni = pred.normals->col(i);
      nj = lidar.normals->col(j);
      fx.normal = &ni;
      fz.normal = &nj;
      fx.residual = (*pred.residuals)(i);
      fz.residual = (*lidar.residuals)(j);
    }
    PairTerms t;
    if (options.pair_scales) {
      // same factors as pair_terms, with the scale supplied
      KernelConfig fixed = config;
      fixed.scale_mode = ScaleMode::constant;
      t = pair_terms(x, z, fx, fz, fixed, (*options.pair_scales)(static_cast<Eigen::Index>(p)));
    } else {
      t = pair_terms(x, z, fx, fz, config, s0);
    }
    out.inner += t.weight();
    if (!options.gradients) continue;
    const double c = t.cv * t.cn;
    if (c != 0.0) out.grad_x.col(i) += c * exp_kernel_grad(x, z, config.sigma_g, t.scale);
    if (want_normal_grad) out.grad_n.col(i) += (t.cv * t.k) * normal_affinity_grad(ni, fx.residual, nj, fz.residual, config.epsilon);
  }
}

}  // namespace

LossReport evaluate(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs, const KernelConfig& config,
                    double s0, const EvalOptions& options) {
  check_inputs(pred, lidar, pairs, config, options);
  const int workers = std::max(1, options.workers);
  const std::size_t n_pairs = pairs.size();

  std::vector<Partial> partials(static_cast<std::size_t>(workers));
  for (auto& part : partials) {
    if (options.gradients) {
      part.grad_x = Points::Zero(3, pred.size());
      part.grad_n = Points::Zero(3, pred.size());
    }
  }
  auto bounds = [&](int w) { return std::pair{n_pairs * w / workers, n_pairs * (w + 1) / workers}; };
  if (workers == 1) {
    accumulate(pred, lidar, pairs, config, s0, options, 0, n_pairs, partials[0]);
  } else {
    std::vector<std::jthread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        const auto [b, e] = bounds(w);
        accumulate(pred, lidar, pairs, config, s0, options, b, e, partials[w]);
      });
    }
  }

  LossReport report;
  report.form = options.form;
  report.pair_count = n_pairs;
  report.s0_used = s0;
  Partial total = std::move(partials[0]);
  for (std::size_t w = 1; w < partials.size(); ++w) {
    total.inner += partials[w].inner;
    if (options.gradients) {
      total.grad_x += partials[w].grad_x;
      total.grad_n += partials[w].grad_n;
    }
  }

  double inner = total.inner;
  double norm = 1.0;
  if (config.mean_reduction && n_pairs > 0) {
    norm = 1.0 / static_cast<double>(n_pairs);
    inner *= norm;
  }
  report.inner_product = inner;

  // d loss / d inner
  double outer = -norm;
  if (options.form == LossForm::log) {
    if (n_pairs == 0) throw DegenerateSceneError("log loss over an empty pair set", n_pairs);
    if (!(inner > 0)) throw DegenerateSceneError("log loss needs a positive inner product", n_pairs);
    report.loss = -std::log(inner + kLogDelta);
    outer = -norm / (inner + kLogDelta);
  } else {
    report.loss = -inner;
  }

  if (options.gradients) {
    report.grad_points = outer * total.grad_x;
    if (config.use_normal_kernel && config.normal_grad_mode == NormalGradMode::full) {
      const Points gn = outer * total.grad_n;
      report.grad_points += grid_normals_backprop(pred, gn, config.normal_window_radius);
    }
  }
  return report;
}

double inner_product(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                     const KernelConfig& config, double s0) {
  return evaluate(pred, lidar, pairs, config, s0).inner_product;
}

LossReport c3d_loss(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                    const KernelConfig& config, double s0) {
  return evaluate(pred, lidar, pairs, config, s0, {.form = LossForm::sum});
}

LossReport c3d_log_loss(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                        const KernelConfig& config, double s0) {
  return evaluate(pred, lidar, pairs, config, s0, {.form = LossForm::log});
}

Points grad_points(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                   const KernelConfig& config, double s0, LossForm form) {
  return evaluate(pred, lidar, pairs, config, s0, {.form = form, .gradients = true}).grad_points;
}

Grid<double> depth_gradient_from_points(const PointCloud& pred, const Points& grad, const CameraIntrinsics& K) {
  if (!pred.pixels) throw ConfigurationError("depth gradients need pixel provenance on the predicted cloud");
  Grid<double> out = Grid<double>::Zero(K.height, K.width);
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    const Pixel px = (*pred.pixels)[i];
    if (px.row < 0 || px.row >= K.height || px.col < 0 || px.col >= K.width)
      throw ConfigurationError("predicted pixel outside the calibrated image");
    out(px.row, px.col) = grad.col(i).dot(K.ray(px.col, px.row));
  }
  return out;
}

Grid<double> grad_depth(const PointCloud& pred, const PointCloud& lidar, const PairSet& pairs,
                        const KernelConfig& config, double s0, const CameraIntrinsics& K, LossForm form) {
  if (!pred.pixels) throw ConfigurationError("depth gradients need pixel provenance on the predicted cloud");
  return depth_gradient_from_points(pred, grad_points(pred, lidar, pairs, config, s0, form), K);
}

LossReport cross_frame_loss(const PointCloud& pred_i, const PointCloud& lidar_j, const Pose& T,
                            const CameraIntrinsics& K, const KernelConfig& config, double s0, bool gradients) {
  const PointCloud moved = transform_cloud(lidar_j, T);
  const PairSet pairs = prune_pairs(pred_i, moved, K, config.prune_radius);
  auto report = evaluate(pred_i, moved, pairs, config, s0, {.form = LossForm::log, .gradients = gradients});
  if (gradients) report.grad_depth = depth_gradient_from_points(pred_i, report.grad_points, K);
  return report;
}

}  // namespace c3d
