#include <c3d/features.hpp>
#include <c3d/knn.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace c3d {

Vec3 rgb_to_hsv(const Vec3& rgb) {
  if (!rgb.allFinite() || rgb.minCoeff() < 0.0 || rgb.maxCoeff() > 1.0)
    throw InputError("rgb components must lie in [0,1]");
  const double r = rgb.x(), g = rgb.y(), b = rgb.z();
  const double hi = rgb.maxCoeff();
  const double lo = rgb.minCoeff();
  const double chroma = hi - lo;
  double h = 0.0;
  if (chroma > 0) {
    if (hi == r)
      h = std::fmod((g - b) / chroma, 6.0);
    else if (hi == g)
      h = (b - r) / chroma + 2.0;
    else
      h = (r - g) / chroma + 4.0;
    h /= 6.0;
    if (h < 0) h += 1.0;
    if (h >= 1.0) h -= 1.0;
  }
  const double s = hi > 0 ? chroma / hi : 0.0;
  return {h, s, hi};
}

double normal_residual(const Vec3& x, const Vec3& n, const Points& neighbors) {
  if (neighbors.cols() == 0) throw InputError("normal_residual needs a non-empty neighborhood");
  double sum = 0.0;
  int count = 0;
  for (Eigen::Index q = 0; q < neighbors.cols(); ++q) {
    const Vec3 d = neighbors.col(q) - x;
    const double len = d.norm();
    if (len == 0.0) continue;
    sum += std::min(std::abs(d.dot(n)) / len, 1.0);
    ++count;
  }
  if (count == 0) throw InputError("normal_residual: every neighbor coincides with the point");
  return sum / count;
}

namespace {

class IndexImage {
 public:
  explicit IndexImage(const std::vector<Pixel>& pixels) {
    for (const auto& p : pixels) {
      if (p.row < 0 || p.col < 0) throw ConfigurationError("negative pixel provenance");
      rows_ = std::max(rows_, p.row + 1);
      cols_ = std::max(cols_, p.col + 1);
    }
    idx_.assign(std::size_t(rows_) * cols_, -1);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      auto& slot = idx_[std::size_t(pixels[i].row) * cols_ + pixels[i].col];
      if (slot >= 0) throw ConfigurationError("two points share a pixel; grid normals need a single image grid");
      slot = static_cast<Eigen::Index>(i);
    }
  }
  Eigen::Index at(int r, int c) const {
    if (r < 0 || c < 0 || r >= rows_ || c >= cols_) return -1;
    return idx_[std::size_t(r) * cols_ + c];
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Eigen::Index> idx_;
};

// h = sum_q a_q (x_q - x_p), v = sum_q b_q (x_q - x_p); the normal direction is v x h.
struct WindowTerms {
  std::vector<Eigen::Index> neighbors;
  std::vector<double> a, b;
  Vec3 h = Vec3::Zero(), v = Vec3::Zero();
  bool valid = false;
};

WindowTerms window_terms(const PointCloud& cloud, const IndexImage& grid, Eigen::Index i, int radius) {
  WindowTerms t;
  const Pixel p = (*cloud.pixels)[i];
  std::vector<int> dr, dc;
  int nh = 0, nv = 0;
  for (int r = -radius; r <= radius; ++r) {
    for (int c = -radius; c <= radius; ++c) {
      if (r == 0 && c == 0) continue;
      const auto q = grid.at(p.row + r, p.col + c);
      if (q < 0) continue;
      t.neighbors.push_back(q);
      dr.push_back(r);
      dc.push_back(c);
      nh += c != 0;
      nv += r != 0;
    }
  }
  if (t.neighbors.size() < 3 || nh == 0 || nv == 0) return t;
  const Vec3 xp = cloud.points.col(i);
  for (std::size_t k = 0; k < t.neighbors.size(); ++k) {
    const double a = dc[k] == 0 ? 0.0 : (dc[k] > 0 ? 1.0 : -1.0) / nh;
    const double b = dr[k] == 0 ? 0.0 : (dr[k] > 0 ? 1.0 : -1.0) / nv;
    const Vec3 d = cloud.points.col(t.neighbors[k]) - xp;
    t.h += a * d;
    t.v += b * d;
    t.a.push_back(a);
    t.b.push_back(b);
  }
  const Vec3 w = t.v.cross(t.h);
  t.valid = w.norm() > 1e-12 * t.v.norm() * t.h.norm() && w.norm() > 0;
  return t;
}

Points gather(const Points& points, const std::vector<Eigen::Index>& idx) {
  Points out(3, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = points.col(idx[k]);
  return out;
}

}  // namespace

std::vector<NormalEstimate> estimate_normals_grid(const PointCloud& cloud, int window_radius) {
  if (!cloud.pixels) throw ConfigurationError("grid normals need pixel provenance");
  if (window_radius < 1) throw InputError("window_radius must be >= 1");
  const IndexImage grid(*cloud.pixels);
  std::vector<NormalEstimate> out(cloud.size());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const auto t = window_terms(cloud, grid, i, window_radius);
    if (!t.valid) continue;
    auto& e = out[i];
    e.normal = t.v.cross(t.h).normalized();
    e.residual = normal_residual(cloud.points.col(i), e.normal, gather(cloud.points, t.neighbors));
    e.valid = true;
  }
  return out;
}

std::vector<NormalEstimate> estimate_normals_knn(const PointCloud& cloud, int k) {
  if (k < 3) throw InputError("knn normals need k >= 3");
  if (cloud.size() < k + 1)
    throw InputError("knn normals need at least k+1=" + std::to_string(k + 1) + " points, cloud has " +
                     std::to_string(cloud.size()));
  const KdTree tree(cloud.points);
  std::vector<NormalEstimate> out(cloud.size());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const Vec3 x = cloud.points.col(i);
    const auto nn = tree.nearest(x, k, i);
    Points local = gather(cloud.points, nn);
    const Vec3 mean = (local.rowwise().sum() + x) / double(nn.size() + 1);
    Mat3 cov = (x - mean) * (x - mean).transpose();
    for (Eigen::Index q = 0; q < local.cols(); ++q) cov += (local.col(q) - mean) * (local.col(q) - mean).transpose();
    const Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
    const Vec3 lambda = es.eigenvalues();  // ascending
    if (!(lambda(2) > 0) || lambda(1) <= 1e-12 * lambda(2)) continue;
    auto& e = out[i];
    e.normal = es.eigenvectors().col(0).normalized();
    try {
      e.residual = normal_residual(x, e.normal, local);
    } catch (const InputError&) {
      continue;
    }
    e.valid = true;
  }
  return out;
}

void orient_toward_viewpoint(std::vector<NormalEstimate>& estimates, const Points& points, const Vec3& viewpoint) {
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    auto& e = estimates[i];
    if ((viewpoint - points.col(static_cast<Eigen::Index>(i))).dot(e.normal) < 0) e.normal = -e.normal;
  }
}

void attach_normals(PointCloud& cloud, const std::vector<NormalEstimate>& estimates) {
  if (static_cast<Eigen::Index>(estimates.size()) != cloud.size())
    throw InputError("normal estimates do not match the cloud size");
  Points normals = Points::Zero(3, cloud.size());
  Eigen::VectorXd residuals = Eigen::VectorXd::Zero(cloud.size());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    if (!estimates[i].valid) continue;
    normals.col(i) = estimates[i].normal;
    residuals(i) = estimates[i].residual;
  }
  cloud.normals = std::move(normals);
  cloud.residuals = std::move(residuals);
}

Points grid_normals_backprop(const PointCloud& cloud, const Points& grad_normals, int window_radius,
                             const Vec3& viewpoint) {
  if (!cloud.pixels) throw ConfigurationError("full normal gradients need pixel provenance");
  if (grad_normals.cols() != cloud.size()) throw InputError("normal gradient does not match the cloud size");
  const IndexImage grid(*cloud.pixels);
  Points grad = Points::Zero(3, cloud.size());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const Vec3 gn = grad_normals.col(i);
    if (gn.isZero(0.0)) continue;
    const auto t = window_terms(cloud, grid, i, window_radius);
    if (!t.valid) continue;
    const Vec3 w = t.v.cross(t.h);
    const double len = w.norm();
    const Vec3 unit = w / len;
    const double sign = (viewpoint - cloud.points.col(i)).dot(unit) < 0 ? -1.0 : 1.0;
    // n = sign * w/|w|  =>  dn/dw = sign (I - u u^T) / |w|
    const Vec3 gw = sign * (gn - unit * unit.dot(gn)) / len;
    const Vec3 gv = t.h.cross(gw);
    const Vec3 gh = gw.cross(t.v);
    for (std::size_t k = 0; k < t.neighbors.size(); ++k) {
      const Vec3 g = t.a[k] * gh + t.b[k] * gv;
      grad.col(t.neighbors[k]) += g;
      grad.col(i) -= g;
    }
  }
  return grad;
}

}  // namespace c3d
