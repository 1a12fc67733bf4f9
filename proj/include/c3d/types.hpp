#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace c3d {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Points = Eigen::Matrix3Xd;  // one point per column

/// Row-major dense grid, the layout every image-like buffer in the library uses.
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Depths are kept inside (kMinDepth, kMaxDepth] wherever the library clamps.
inline constexpr double kMaxDepth = 80.0;
inline constexpr double kMinDepth = 0.1;

/// Inputs that are individually well formed but inconsistent with each other
/// or with the requested configuration.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value outside the domain an operation accepts.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The loss has nothing to work with (no surviving pairs, zero inner product).
class DegenerateSceneError : public std::runtime_error {
 public:
  DegenerateSceneError(const std::string& what, std::size_t pair_count)
      : std::runtime_error(what + " (pair_count=" + std::to_string(pair_count) + ")"),
        pair_count_(pair_count) {}
  std::size_t pair_count() const noexcept { return pair_count_; }

 private:
  std::size_t pair_count_;
};

/// Malformed file contents; the message carries file, line and field context.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace c3d
