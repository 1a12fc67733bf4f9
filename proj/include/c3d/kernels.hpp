#pragma once

#include <c3d/types.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace c3d {

enum class NormalGradMode { detached, full };

/// How the geometric kernel length scale is chosen for a pair.
enum class ScaleMode {
  depth_proportional,  // s = s0 * max(x.z, z.z)
  constant,            // s = s0
};

/// Law for the base scale s0: a constant, or 0.01 + 0.02|a| with a ~ N(0,1).
struct S0Law {
  enum class Kind { fixed, sampled };
  Kind kind = Kind::sampled;
  double value = 0.02;  // fixed law only
  double offset = 0.01;
  double spread = 0.02;

  static S0Law fixed(double v) { return {Kind::fixed, v}; }
  static S0Law sampled() { return {}; }
};

struct KernelConfig {
  double sigma_g = 1.0;
  S0Law s0_law = S0Law::sampled();
  ScaleMode scale_mode = ScaleMode::depth_proportional;
  double sigma_v = 1.0;
  double s_v = 0.2;
  double epsilon = 0.05;
  bool use_hsv_kernel = true;
  bool use_normal_kernel = true;
  int prune_radius = 4;  // Chebyshev distance in pixel cells
  NormalGradMode normal_grad_mode = NormalGradMode::detached;
  int normal_window_radius = 2;  // grid normals on the predicted cloud
  int lidar_normal_k = 8;        // PCA normals on the LIDAR cloud
  bool mean_reduction = false;   // divide the double sum by the pair count

  void validate() const;
};

// ---------------------------------------------------------------------------
// Scalar kernels. All are templated on the Eigen expression so they accept
// fixed-size vectors, column blocks and maps of any scalar type.

template <typename DerivedX, typename DerivedZ>
typename DerivedX::Scalar exp_kernel(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedZ>& z,
                                     typename DerivedX::Scalar sigma, typename DerivedX::Scalar s) {
  using std::exp;
  return sigma * exp(-(x - z).norm() / s);
}

/// d k(x,z) / dx = k (z - x) / (s |x - z|), taken as zero at coincident points.
template <typename DerivedX, typename DerivedZ>
Eigen::Matrix<typename DerivedX::Scalar, 3, 1> exp_kernel_grad(const Eigen::MatrixBase<DerivedX>& x,
                                                               const Eigen::MatrixBase<DerivedZ>& z,
                                                               typename DerivedX::Scalar sigma,
                                                               typename DerivedX::Scalar s) {
  using Scalar = typename DerivedX::Scalar;
  using std::exp;
  const Eigen::Matrix<Scalar, 3, 1> d = z - x;
  const Scalar dist = d.norm();
  if (dist < Scalar(1e-12)) return Eigen::Matrix<Scalar, 3, 1>::Zero();
  const Scalar k = sigma * exp(-dist / s);
  return (k / (s * dist)) * d;
}

template <typename DerivedX, typename DerivedZ>
typename DerivedX::Scalar geometric_scale(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedZ>& z,
                                          typename DerivedX::Scalar s0) {
  if (!(x(2) > 0) || !(z(2) > 0)) throw InputError("geometric_scale needs points in front of the camera");
  return s0 * std::max(x(2), z(2));
}

/// Circular distance between two hues in [0,1).
template <typename Scalar>
Scalar hue_distance(Scalar a, Scalar b) {
  using std::abs;
  const Scalar d = abs(a - b);
  return std::min(d, Scalar(1) - d);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar hsv_affinity(const Eigen::MatrixBase<DerivedA>& ci, const Eigen::MatrixBase<DerivedB>& cj,
                                       typename DerivedA::Scalar sigma_v, typename DerivedA::Scalar s_v) {
  using Scalar = typename DerivedA::Scalar;
  using std::exp;
  const Eigen::Matrix<Scalar, 3, 1> d(hue_distance(ci(0), cj(0)), ci(1) - cj(1), ci(2) - cj(2));
  return sigma_v * exp(-d.norm() / s_v);
}

/// max(ni.nj, 0) / (ri + rj + eps)
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar normal_affinity(const Eigen::MatrixBase<DerivedA>& ni, typename DerivedA::Scalar ri,
                                          const Eigen::MatrixBase<DerivedB>& nj, typename DerivedA::Scalar rj,
                                          typename DerivedA::Scalar epsilon) {
  using Scalar = typename DerivedA::Scalar;
  return std::max(ni.dot(nj), Scalar(0)) / (ri + rj + epsilon);
}

/// d normal_affinity / d ni; zero inside the clamped region.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, 3, 1> normal_affinity_grad(const Eigen::MatrixBase<DerivedA>& ni,
                                                                    typename DerivedA::Scalar ri,
                                                                    const Eigen::MatrixBase<DerivedB>& nj,
                                                                    typename DerivedA::Scalar rj,
                                                                    typename DerivedA::Scalar epsilon) {
  using Scalar = typename DerivedA::Scalar;
  if (!(ni.dot(nj) > Scalar(0))) return Eigen::Matrix<Scalar, 3, 1>::Zero();
  return nj / (ri + rj + epsilon);
}

// ---------------------------------------------------------------------------

/// Features carried by one point of a pair. Absent attributes are null.
struct PointFeatures {
  const Vec3* hsv = nullptr;
  const Vec3* normal = nullptr;
  double residual = 0.0;
};

/// Factors of one summand of the inner product.
struct PairTerms {
  double scale = 0;  // geometric length scale s
  double k = 0;      // geometric kernel
  double cv = 1;     // color affinity
  double cn = 1;     // normal affinity
  double weight() const { return cv * cn * k; }
};

double kernel_scale(const Vec3& x, const Vec3& z, const KernelConfig& config, double s0);

PairTerms pair_terms(const Vec3& x, const Vec3& z, const PointFeatures& fx, const PointFeatures& fz,
                     const KernelConfig& config, double s0);

/// c_ij * k(x_i, z_j) with c_ij the product of the enabled feature affinities.
inline double pair_weight(const Vec3& x, const Vec3& z, const PointFeatures& fx, const PointFeatures& fz,
                          const KernelConfig& config, double s0) {
  return pair_terms(x, z, fx, fz, config, s0).weight();
}

double sample_s0(std::mt19937_64& rng, const S0Law& law);

}  // namespace c3d
