#include "sgmix/mesh/locator.hpp"

#include <algorithm>
#include <cmath>

namespace sgmix {

PointLocator::PointLocator(const Triangulation& mesh, int buckets_per_side) : mesh_(&mesh) {
  lo_ = hi_ = mesh.vertex(0);
  for (const auto& p : mesh.vertices()) {
    lo_ = lo_.cwiseMin(p);
    hi_ = hi_.cwiseMax(p);
  }
  nb_ = buckets_per_side > 0 ? buckets_per_side
                             : std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_triangles()))));
  buckets_.assign(nb_ * nb_, {});
  const Vec2 span = (hi_ - lo_).cwiseMax(1e-300);
  auto cell = [&](double v, double lo, double s) {
    return std::clamp(static_cast<int>((v - lo) / s * nb_), 0, nb_ - 1);
  };
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    Vec2 a = mesh.vertex(tri[0]), b = a;
    for (int i = 1; i < 3; ++i) {
      a = a.cwiseMin(mesh.vertex(tri[i]));
      b = b.cwiseMax(mesh.vertex(tri[i]));
    }
    for (int j = cell(a.y(), lo_.y(), span.y()); j <= cell(b.y(), lo_.y(), span.y()); ++j)
      for (int i = cell(a.x(), lo_.x(), span.x()); i <= cell(b.x(), lo_.x(), span.x()); ++i)
        buckets_[j * nb_ + i].push_back(t);
  }
}

int PointLocator::locate(const Vec2& x) const {
  const Vec2 span = (hi_ - lo_).cwiseMax(1e-300);
  const int i = std::clamp(static_cast<int>((x.x() - lo_.x()) / span.x() * nb_), 0, nb_ - 1);
  const int j = std::clamp(static_cast<int>((x.y() - lo_.y()) / span.y() * nb_), 0, nb_ - 1);
  int best = -1;
  double best_min = -1e300;
  for (int t : buckets_[j * nb_ + i]) {
    const auto& tri = mesh_->triangle(t);
    const double area = mesh_->area(t);
    double mn = 1e300;
    for (int k = 0; k < 3; ++k) {
      const double l = signed_area(x, mesh_->vertex(tri[(k + 1) % 3]), mesh_->vertex(tri[(k + 2) % 3])) / area;
      mn = std::min(mn, l);
    }
    if (mn > best_min) {
      best_min = mn;
      best = t;
    }
  }
  return best_min >= -1e-10 ? best : -1;
}

}  // namespace sgmix
