// Naive all-pairs evaluation of the inner product, written without evaluate() or pair_terms().

#include <c3d/loss.hpp>

#include <algorithm>
#include <cmath>

namespace c3d {

double brute_force(const PointCloud& pred, const PointCloud& lidar, const KernelConfig& config, double s0) {
  const auto n = static_cast<std::size_t>(pred.size());
  const auto m = static_cast<std::size_t>(lidar.size());
  if (m != 0 && n > kBruteForceMaxPairs / m)
    throw InputError("brute_force refuses " + std::to_string(n) + "x" + std::to_string(m) + " pairs");
  if (config.use_hsv_kernel && (!pred.hsv || !lidar.hsv))
    throw ConfigurationError("hsv kernel enabled but a cloud carries no hsv colors");
  if (config.use_normal_kernel && (!pred.normals || !pred.residuals || !lidar.normals || !lidar.residuals))
    throw ConfigurationError("normal kernel enabled but a cloud carries no normals/residuals");

  double total = 0.0;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    for (Eigen::Index j = 0; j < lidar.size(); ++j) {
      const double dx = pred.points(0, i) - lidar.points(0, j);
      const double dy = pred.points(1, i) - lidar.points(1, j);
      const double dz = pred.points(2, i) - lidar.points(2, j);
      const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);

      double s = s0;
      if (config.scale_mode == ScaleMode::depth_proportional) {
        const double zi = pred.points(2, i), zj = lidar.points(2, j);
        if (!(zi > 0) || !(zj > 0)) throw InputError("brute_force: point behind the camera");
        s = s0 * (zi > zj ? zi : zj);
      }
      const double k = config.sigma_g * std::exp(-dist / s);

      double cv = 1.0;
      if (config.use_hsv_kernel) {
        double dh = std::abs((*pred.hsv)(0, i) - (*lidar.hsv)(0, j));
        if (1.0 - dh < dh) dh = 1.0 - dh;
        const double ds = (*pred.hsv)(1, i) - (*lidar.hsv)(1, j);
        const double dv = (*pred.hsv)(2, i) - (*lidar.hsv)(2, j);
        cv = config.sigma_v * std::exp(-std::sqrt(dh * dh + ds * ds + dv * dv) / config.s_v);
      }

      double cn = 1.0;
      if (config.use_normal_kernel) {
        double dot = 0.0;
        for (int a = 0; a < 3; ++a) dot += (*pred.normals)(a, i) * (*lidar.normals)(a, j);
        if (dot < 0.0) dot = 0.0;
        cn = dot / ((*pred.residuals)(i) + (*lidar.residuals)(j) + config.epsilon);
      }
      total += cv * cn * k;
    }
  }
  if (config.mean_reduction && n * m > 0) total /= static_cast<double>(n * m);
  return total;
}

}  // namespace c3d
