#include <c3d/geometry.hpp>

#include <cmath>
#include <sstream>

namespace c3d {

void CameraIntrinsics::validate() const {
  std::ostringstream err;
  if (!(fx > 0) || !(fy > 0)) err << "focal lengths must be positive (fx=" << fx << ", fy=" << fy << "); ";
  if (width <= 0 || height <= 0) err << "image size must be positive (" << width << "x" << height << "); ";
  if (!(cx > 0 && cx < width)) err << "cx=" << cx << " outside (0, width=" << width << "); ";
  if (!(cy > 0 && cy < height)) err << "cy=" << cy << " outside (0, height=" << height << "); ";
  if (!err.str().empty()) throw ConfigurationError("invalid camera intrinsics: " + err.str());
}

Pose Pose::from_axis_angle(const Vec3& axis_angle, const Vec3& translation) {
  Pose T;
  const double angle = axis_angle.norm();
  if (angle > 0) T.rotation = Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
  T.translation = translation;
  return T;
}

void Pose::validate() const {
  if ((rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
      std::abs(rotation.determinant() - 1.0) > 1e-9)
    throw InputError("pose rotation is not a proper rotation matrix");
  if (!translation.allFinite()) throw InputError("pose translation is not finite");
}

DepthMap::DepthMap(int rows, int cols) : depths(Grid<double>::Zero(rows, cols)), valid(Grid<bool>::Constant(rows, cols, false)) {}

DepthMap DepthMap::from_depths(const Grid<double>& d) {
  DepthMap out;
  out.depths = d;
  out.valid = d.unaryExpr([](double v) { return std::isfinite(v) && v > 0; });
  return out;
}

void DepthMap::validate() const {
  if (valid.rows() != depths.rows() || valid.cols() != depths.cols())
    throw InputError("depth map mask and depths differ in size");
  for (Eigen::Index r = 0; r < depths.rows(); ++r)
    for (Eigen::Index c = 0; c < depths.cols(); ++c)
      if (valid(r, c) && !(std::isfinite(depths(r, c)) && depths(r, c) > 0))
        throw InputError("valid depth at (" + std::to_string(r) + "," + std::to_string(c) + ") is not finite and positive");
}

void PointCloud::validate() const {
  const auto n = size();
  if (hsv && hsv->cols() != n) throw InputError("hsv attribute length differs from point count");
  if (normals && normals->cols() != n) throw InputError("normal attribute length differs from point count");
  if (residuals && residuals->size() != n) throw InputError("residual attribute length differs from point count");
  if (pixels && static_cast<Eigen::Index>(pixels->size()) != n) throw InputError("pixel attribute length differs from point count");
  if (normals) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double len = normals->col(i).norm();
      if (len != 0.0 && std::abs(len - 1.0) > 1e-6) throw InputError("normal " + std::to_string(i) + " is not unit length");
    }
  }
  if (residuals && (residuals->minCoeff() < 0.0 || residuals->maxCoeff() > 1.0) && n > 0)
    throw InputError("residuals must lie in [0,1]");
}

PointCloud PointCloud::subset(const std::vector<Eigen::Index>& idx) const {
  const auto m = static_cast<Eigen::Index>(idx.size());
  PointCloud out;
  out.points.resize(3, m);
  for (Eigen::Index k = 0; k < m; ++k) out.points.col(k) = points.col(idx[k]);
  auto take = [&](const Points& src) {
    Points dst(3, m);
    for (Eigen::Index k = 0; k < m; ++k) dst.col(k) = src.col(idx[k]);
    return dst;
  };
  if (hsv) out.hsv = take(*hsv);
  if (normals) out.normals = take(*normals);
  if (residuals) {
    Eigen::VectorXd r(m);
    for (Eigen::Index k = 0; k < m; ++k) r(k) = (*residuals)(idx[k]);
    out.residuals = std::move(r);
  }
  if (pixels) {
    std::vector<Pixel> p;
    p.reserve(idx.size());
    for (auto i : idx) p.push_back((*pixels)[i]);
    out.pixels = std::move(p);
  }
  return out;
}

PointCloud backproject_depth(const DepthMap& depth, const CameraIntrinsics& K, const HsvImage* hsv_image) {
  K.validate();
  if (depth.rows() != K.height || depth.cols() != K.width)
    throw ConfigurationError("depth map is " + std::to_string(depth.cols()) + "x" + std::to_string(depth.rows()) +
                             " but calibration expects " + std::to_string(K.width) + "x" + std::to_string(K.height));
  if (hsv_image && (hsv_image->rows != K.height || hsv_image->cols != K.width))
    throw ConfigurationError("hsv image size does not match the depth map");

  const auto n = depth.valid_count();
  PointCloud cloud;
  cloud.points.resize(3, n);
  std::vector<Pixel> pixels;
  pixels.reserve(n);
  Points hsv;
  if (hsv_image) hsv.resize(3, n);

  Eigen::Index k = 0;
  for (int v = 0; v < depth.rows(); ++v) {
    for (int u = 0; u < depth.cols(); ++u) {
      if (!depth.valid(v, u)) continue;
      cloud.points.col(k) = depth.depths(v, u) * K.ray(u, v);
      if (hsv_image) hsv.col(k) = hsv_image->at(v, u);
      pixels.push_back({v, u});
      ++k;
    }
  }
  cloud.pixels = std::move(pixels);
  if (hsv_image) cloud.hsv = std::move(hsv);
  return cloud;
}

Projection project_point(const Vec3& x, const CameraIntrinsics& K) {
  Projection p;
  p.depth = x.z();
  if (!(x.z() > 0)) return p;
  p.col = K.fx * x.x() / x.z() + K.cx;
  p.row = K.fy * x.y() / x.z() + K.cy;
  p.in_image = p.col >= 0 && p.col < K.width && p.row >= 0 && p.row < K.height;
  return p;
}

std::vector<Projection> project_points(const PointCloud& cloud, const CameraIntrinsics& K) {
  std::vector<Projection> out;
  out.reserve(cloud.size());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) out.push_back(project_point(cloud.points.col(i), K));
  return out;
}

PointCloud transform_cloud(const PointCloud& cloud, const Pose& T) {
  PointCloud out = cloud;
  out.points = (T.rotation * cloud.points).colwise() + T.translation;
  if (cloud.normals) out.normals = T.rotation * (*cloud.normals);
  return out;
}

PointCloud crop_frustum(const PointCloud& cloud, const CameraIntrinsics& K, double max_depth) {
  if (!(max_depth > 0)) throw InputError("max_depth must be positive");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const auto p = project_point(cloud.points.col(i), K);
    if (p.in_image && p.depth <= max_depth) keep.push_back(i);
  }
  return cloud.subset(keep);
}

void colorize_from_image(PointCloud& cloud, const CameraIntrinsics& K, const HsvImage& image) {
  Points hsv = Points::Zero(3, cloud.size());
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const auto p = project_point(cloud.points.col(i), K);
    if (p.in_image) hsv.col(i) = image.at(static_cast<int>(p.row), static_cast<int>(p.col));
  }
  cloud.hsv = std::move(hsv);
}

}  // namespace c3d
