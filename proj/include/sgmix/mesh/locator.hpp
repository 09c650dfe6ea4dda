#pragma once

#include "sgmix/mesh/triangulation.hpp"

#include <vector>

namespace sgmix {

/// Bucket grid for locating the triangle containing a point.
class PointLocator {
 public:
  explicit PointLocator(const Triangulation& mesh, int buckets_per_side = 0);
  /// Triangle containing x (with tolerance), or -1.
  int locate(const Vec2& x) const;

 private:
  const Triangulation* mesh_;
  Vec2 lo_, hi_;
  int nb_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace sgmix
