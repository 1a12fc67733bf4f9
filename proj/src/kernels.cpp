#include <c3d/kernels.hpp>

#include <sstream>

namespace c3d {

void KernelConfig::validate() const {
  std::ostringstream err;
  if (!(sigma_g > 0)) err << "sigma_g must be > 0; ";
  if (!(sigma_v > 0)) err << "sigma_v must be > 0; ";
  if (!(s_v > 0)) err << "s_v must be > 0; ";
  if (!(epsilon > 0)) err << "epsilon must be > 0; ";
  if (prune_radius < 0) err << "prune_radius must be >= 0; ";
  if (normal_window_radius < 1) err << "normal_window_radius must be >= 1; ";
  if (lidar_normal_k < 3) err << "lidar_normal_k must be >= 3; ";
  if (s0_law.kind == S0Law::Kind::fixed && !(s0_law.value > 0)) err << "fixed s0 must be > 0; ";
  if (s0_law.kind == S0Law::Kind::sampled && (!(s0_law.offset > 0) || s0_law.spread < 0))
    err << "sampled s0 law needs offset > 0 and spread >= 0; ";
  if (!err.str().empty()) throw ConfigurationError("invalid kernel config: " + err.str());
}

double kernel_scale(const Vec3& x, const Vec3& z, const KernelConfig& config, double s0) {
  return config.scale_mode == ScaleMode::constant ? s0 : geometric_scale(x, z, s0);
}

PairTerms pair_terms(const Vec3& x, const Vec3& z, const PointFeatures& fx, const PointFeatures& fz,
                     const KernelConfig& config, double s0) {
  PairTerms t;
  t.scale = kernel_scale(x, z, config, s0);
  t.k = exp_kernel(x, z, config.sigma_g, t.scale);
  if (config.use_hsv_kernel) {
    if (!fx.hsv || !fz.hsv) throw ConfigurationError("hsv kernel enabled but a point has no color");
    t.cv = hsv_affinity(*fx.hsv, *fz.hsv, config.sigma_v, config.s_v);
  }
  if (config.use_normal_kernel) {
    if (!fx.normal || !fz.normal) throw ConfigurationError("normal kernel enabled but a point has no normal");
    t.cn = normal_affinity(*fx.normal, fx.residual, *fz.normal, fz.residual, config.epsilon);
  }
  return t;
}

double sample_s0(std::mt19937_64& rng, const S0Law& law) {
  if (law.kind == S0Law::Kind::fixed) return law.value;
  std::normal_distribution<double> normal(0.0, 1.0);
  return law.offset + law.spread * std::abs(normal(rng));
}

}  // namespace c3d
