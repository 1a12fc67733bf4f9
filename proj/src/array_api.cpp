#include <c3d/array_api.hpp>
#include <c3d/pipeline.hpp>

#include <cmath>
#include <sstream>

namespace c3d {

namespace {

template <std::size_t N>
std::string shape_text(const std::array<std::size_t, N>& s) {
  std::ostringstream out;
  out << "(";
  for (std::size_t k = 0; k < N; ++k) out << (k ? ", " : "") << s[k];
  out << ")";
  return out.str();
}

template <std::size_t N>
void expect_shape(const char* name, const std::array<std::size_t, N>& expected, const std::array<std::size_t, N>& actual) {
  if (expected != actual)
    throw InputError(std::string(name) + " has shape " + shape_text(actual) + ", expected " + shape_text(expected));
}

template <std::size_t N>
void expect_size(const char* name, std::size_t data_size, const std::array<std::size_t, N>& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  if (data_size != n)
    throw InputError(std::string(name) + " holds " + std::to_string(data_size) + " values but its shape " +
                     shape_text(shape) + " needs " + std::to_string(n));
}

}  // namespace

void validate_bundle(const ArrayBundle& b) {
  if (b.intrinsics.size() != 6)
    throw InputError("intrinsics has " + std::to_string(b.intrinsics.size()) + " values, expected 6");
  const double w = b.intrinsics[4], h = b.intrinsics[5];
  if (!(w >= 1 && h >= 1) || w != std::floor(w) || h != std::floor(h))
    throw InputError("intrinsics width/height must be positive integers");
  const auto H = static_cast<std::size_t>(h), W = static_cast<std::size_t>(w);
  expect_shape("depth", {H, W}, b.depth_shape);
  expect_size("depth", b.depth.size(), b.depth_shape);
  expect_shape("hsv", {H, W, 3}, b.hsv_shape);
  expect_size("hsv", b.hsv.size(), b.hsv_shape);
  if (b.lidar_shape[1] != 6) expect_shape("lidar", {b.lidar_shape[0], 6}, b.lidar_shape);
  expect_size("lidar", b.lidar.size(), b.lidar_shape);
}

LossAndGrad eval_loss_and_grad(const ArrayBundle& b) {
  validate_bundle(b);
  CameraIntrinsics K{b.intrinsics[0], b.intrinsics[1], b.intrinsics[2], b.intrinsics[3],
                     static_cast<int>(b.intrinsics[4]), static_cast<int>(b.intrinsics[5])};
  K.validate();

  Grid<double> depths(K.height, K.width);
  for (int r = 0; r < K.height; ++r)
    for (int c = 0; c < K.width; ++c) depths(r, c) = b.depth[std::size_t(r) * K.width + c];
  const DepthMap depth = DepthMap::from_depths(depths);

  HsvImage hsv(K.height, K.width);
  for (Eigen::Index k = 0; k < hsv.data.rows(); ++k)
    for (int ch = 0; ch < 3; ++ch) hsv.data(k, ch) = b.hsv[std::size_t(k) * 3 + ch];

  const auto m = static_cast<Eigen::Index>(b.lidar_shape[0]);
  PointCloud lidar;
  lidar.points.resize(3, m);
  Points colors(3, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (int a = 0; a < 3; ++a) {
      lidar.points(a, j) = b.lidar[std::size_t(j) * 6 + a];
      colors(a, j) = b.lidar[std::size_t(j) * 6 + 3 + a];
    }
  }
  lidar.hsv = std::move(colors);

  LossAndGrad out;
  out.s0 = draw_s0(b.seed, b.kernel.s0_law);
  const auto report = evaluate_depth(depth, &hsv, lidar, K, b.kernel, out.s0, LossForm::log, true);
  out.loss = report.loss;
  out.pair_count = report.pair_count;
  out.grad_depth.assign(report.grad_depth.data(), report.grad_depth.data() + report.grad_depth.size());
  return out;
}

std::string_view version() { return "0.1.0"; }

}  // namespace c3d
