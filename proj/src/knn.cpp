#include <c3d/knn.hpp>

#include <algorithm>
#include <numeric>
#include <queue>

namespace c3d {

KdTree::KdTree(Points points) : points_(std::move(points)) {
  std::vector<Eigen::Index> idx(points_.cols());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  nodes_.reserve(idx.size());
  root_ = build(idx, 0, idx.size(), 0);
}

int KdTree::build(std::vector<Eigen::Index>& idx, std::size_t lo, std::size_t hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 3;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + lo, idx.begin() + mid, idx.begin() + hi, [&](Eigen::Index a, Eigen::Index b) {
    return points_(axis, a) < points_(axis, b) || (points_(axis, a) == points_(axis, b) && a < b);
  });
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], axis, -1, -1});
  const int left = build(idx, lo, mid, depth + 1);
  const int right = build(idx, mid + 1, hi, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<Eigen::Index> KdTree::nearest(const Vec3& query, int k, Eigen::Index exclude) const {
  // max-heap on (distance², index) keeps the k best; ties broken by index
  using Entry = std::pair<double, Eigen::Index>;
  std::priority_queue<Entry> best;
  if (k <= 0) return {};

  auto visit = [&](auto&& self, int node) -> void {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const double diff = query(n.axis) - points_(n.axis, n.point);
    if (n.point != exclude) {
      const double d2 = (points_.col(n.point) - query).squaredNorm();
      if (static_cast<int>(best.size()) < k) {
        best.emplace(d2, n.point);
      } else if (Entry(d2, n.point) < best.top()) {
        best.pop();
        best.emplace(d2, n.point);
      }
    }
    const int near = diff < 0 ? n.left : n.right;
    const int far = diff < 0 ? n.right : n.left;
    self(self, near);
    if (static_cast<int>(best.size()) < k || diff * diff <= best.top().first) self(self, far);
  };
  visit(visit, root_);

  std::vector<Eigen::Index> out(best.size());
  for (auto i = out.size(); i-- > 0;) {
    out[i] = best.top().second;
    best.pop();
  }
  return out;
}

}  // namespace c3d
