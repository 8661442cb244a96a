#include "lpf/spatial_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace lpf {

namespace {
constexpr int kLeafSize = 16;

// kNN ordering: nearer first, exact distance ties to the lower index.
struct HeapEntry {
  double d2;
  int idx;
};
// max-heap on "worse": larger distance first, ties to the larger index.
inline bool heap_less(const HeapEntry& a, const HeapEntry& b) {
  return a.d2 < b.d2 || (a.d2 == b.d2 && a.idx < b.idx);
}
} // namespace

SpatialIndex::SpatialIndex(const PointCloud& cloud) {
  if (cloud.empty()) throw std::invalid_argument("SpatialIndex: empty cloud");
  pts_.assign(cloud.points().begin(), cloud.points().end());
  order_.resize(pts_.size());
  for (std::size_t i = 0; i < pts_.size(); ++i) order_[i] = static_cast<int>(i);
  nodes_.reserve(2 * pts_.size() / kLeafSize + 16);
  root_ = build(0, static_cast<int>(pts_.size()));
}

int SpatialIndex::build(int begin, int end) {
  Node node;
  node.bb_min = node.bb_max = pts_[static_cast<std::size_t>(order_[static_cast<std::size_t>(begin)])];
  for (int i = begin + 1; i < end; ++i) {
    const Vec3& p = pts_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])];
    node.bb_min = node.bb_min.cwiseMin(p);
    node.bb_max = node.bb_max.cwiseMax(p);
  }
  node.begin = begin;
  node.end = end;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  Vec3 extent = node.bb_max - node.bb_min;
  int axis = 0;
  if (extent.y() > extent.x()) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;
  if (extent[axis] <= 0.0) return id; // all points coincide: keep as leaf

  int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     double pa = pts_[static_cast<std::size_t>(a)][axis];
                     double pb = pts_[static_cast<std::size_t>(b)][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  int left = build(begin, mid);
  int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double SpatialIndex::min_dist2(const Node& n, const Vec3& q) const {
  Vec3 d = (n.bb_min - q).cwiseMax(Vec3::Zero()).cwiseMax(q - n.bb_max);
  return d.squaredNorm();
}

double SpatialIndex::max_dist2(const Node& n, const Vec3& q) const {
  Vec3 d = (q - n.bb_min).cwiseAbs().cwiseMax((q - n.bb_max).cwiseAbs());
  return d.squaredNorm();
}

std::vector<int> SpatialIndex::radius_indices(const Vec3& query, double radius) const {
  if (radius < 0.0) throw std::invalid_argument("radius must be non-negative");
  std::vector<int> result;
  double r2 = radius * radius;
  std::vector<int> stack = {root_};
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (min_dist2(node, query) > r2) continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        int idx = order_[static_cast<std::size_t>(i)];
        if ((pts_[static_cast<std::size_t>(idx)] - query).squaredNorm() <= r2)
          result.push_back(idx);
      }
    } else {
      if (max_dist2(node, query) <= r2) {
        for (int i = node.begin; i < node.end; ++i)
          result.push_back(order_[static_cast<std::size_t>(i)]);
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<int> SpatialIndex::knn(const Vec3& query, int k) const {
  if (k <= 0) return {};
  k = std::min<int>(k, static_cast<int>(pts_.size()));
  std::vector<HeapEntry> heap; // max-heap, worst on top
  heap.reserve(static_cast<std::size_t>(k) + 1);
  auto cmp = [](const HeapEntry& a, const HeapEntry& b) { return heap_less(a, b); };

  std::vector<int> stack = {root_};
  while (!stack.empty()) {
    const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    if (static_cast<int>(heap.size()) == k && min_dist2(node, query) > heap.front().d2)
      continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        int idx = order_[static_cast<std::size_t>(i)];
        HeapEntry e{(pts_[static_cast<std::size_t>(idx)] - query).squaredNorm(), idx};
        if (static_cast<int>(heap.size()) < k) {
          heap.push_back(e);
          std::push_heap(heap.begin(), heap.end(), cmp);
        } else if (heap_less(e, heap.front())) {
          std::pop_heap(heap.begin(), heap.end(), cmp);
          heap.back() = e;
          std::push_heap(heap.begin(), heap.end(), cmp);
        }
      }
    } else {
      // visit the nearer child first so the heap tightens early
      double dl = min_dist2(nodes_[static_cast<std::size_t>(node.left)], query);
      double dr = min_dist2(nodes_[static_cast<std::size_t>(node.right)], query);
      if (dl <= dr) {
        stack.push_back(node.right);
        stack.push_back(node.left);
      } else {
        stack.push_back(node.left);
        stack.push_back(node.right);
      }
    }
  }
  std::sort(heap.begin(), heap.end(), heap_less);
  std::vector<int> result(heap.size());
  for (std::size_t i = 0; i < heap.size(); ++i) result[i] = heap[i].idx;
  return result;
}

int SpatialIndex::nearest(const Vec3& query, int exclude) const {
  auto two = knn(query, exclude < 0 ? 1 : 2);
  for (int idx : two)
    if (idx != exclude) return idx;
  return -1;
}

} // namespace lpf
