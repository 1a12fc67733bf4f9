#pragma once

#include <c3d/types.hpp>

#include <vector>

namespace c3d {

/// Static 3-d tree over a point set. Built once, then queried concurrently.
class KdTree {
 public:
  explicit KdTree(Points points);

  /// Indices of the k points nearest to `query`, closest first. `exclude`
  /// (if >= 0) is skipped, which is how a point asks for its neighbors.
  std::vector<Eigen::Index> nearest(const Vec3& query, int k, Eigen::Index exclude = -1) const;

  Eigen::Index size() const { return points_.cols(); }
  const Points& points() const { return points_; }

 private:
  struct Node {
    Eigen::Index point = -1;
    int axis = 0;
    int left = -1, right = -1;
  };
  int build(std::vector<Eigen::Index>& idx, std::size_t lo, std::size_t hi, int depth);

  Points points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace c3d
