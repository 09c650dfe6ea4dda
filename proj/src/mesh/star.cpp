#include "sgmix/mesh/star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sgmix {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_of(const Vec2& d) {
  double a = std::atan2(d.y(), d.x());
  if (a < 0) a += kTwoPi;
  return a;
}

Vec2 rotate_cw(const Vec2& t) { return Vec2(t.y(), -t.x()); }

// Other two vertices of triangle t seen from v, counterclockwise.
std::pair<int, int> opposite_pair(const Triangulation& mesh, int t, int v) {
  const auto& tri = mesh.triangle(t);
  for (int i = 0; i < 3; ++i)
    if (tri[i] == v) return {tri[(i + 1) % 3], tri[(i + 2) % 3]};
  throw PreconditionError("vertex not in triangle");
}

}  // namespace

VertexStar build_star(const Triangulation& mesh, int v) {
  require(v >= 0 && v < mesh.num_vertices(), "vertex index out of range");
  const auto& tris = mesh.vertex_triangles(v);
  VertexStar s;
  s.vertex = v;
  s.z = mesh.vertex(v);
  s.interior = !mesh.is_boundary_vertex(v);
  const int m = static_cast<int>(tris.size());

  // Map: first (minus) ray vertex -> triangle.
  std::vector<std::pair<int, int>> pairs(m);
  for (int i = 0; i < m; ++i) pairs[i] = opposite_pair(mesh, tris[i], v);
  auto element_starting_at = [&](int p) {
    for (int i = 0; i < m; ++i)
      if (pairs[i].first == p) return i;
    return -1;
  };

  int start = -1;
  if (s.interior) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double a = angle_of(mesh.vertex(pairs[i].first) - s.z);
      if (a < best - 1e-14) {
        best = a;
        start = i;
      }
    }
  } else {
    // The element whose minus ray is not the plus ray of another element.
    for (int i = 0; i < m && start < 0; ++i) {
      bool preceded = false;
      for (int j = 0; j < m; ++j) preceded = preceded || pairs[j].second == pairs[i].first;
      if (!preceded) start = i;
    }
  }
  require(start >= 0, "could not order the star of vertex " + std::to_string(v));

  int cur = start;
  s.ray_vertex.push_back(pairs[cur].first);
  for (int k = 0; k < m; ++k) {
    require(cur >= 0, "star of vertex " + std::to_string(v) + " is not a single fan");
    s.elements.push_back(tris[cur]);
    const int next_ray = pairs[cur].second;
    if (k + 1 < m || !s.interior) s.ray_vertex.push_back(next_ray);
    if (k + 1 < m) cur = element_starting_at(next_ray);
  }
  if (s.interior) {
    require(pairs[cur].second == s.ray_vertex.front(), "star of vertex " + std::to_string(v) + " does not close");
  }

  for (int rv : s.ray_vertex) {
    const Vec2 t = (mesh.vertex(rv) - s.z).normalized();
    s.t.push_back(t);
    s.n.push_back(rotate_cw(t));
  }
  for (int e = 0; e < m; ++e) {
    const Vec2& a = s.t[s.ray_minus(e)];
    const Vec2& b = s.t[s.ray_plus(e)];
    const double th = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    s.theta.push_back(th);
    const double lm = (mesh.vertex(s.ray_vertex[s.ray_minus(e)]) - s.z).norm();
    const double lp = (mesh.vertex(s.ray_vertex[s.ray_plus(e)]) - s.z).norm();
    s.h_minus.push_back(lm * std::sin(th));
    s.h_plus.push_back(lp * std::sin(th));
  }
  return s;
}

ThetaMetrics theta_metrics(const VertexStar& star) {
  require(star.interior, "theta metrics are defined for interior vertices only");
  const int m = star.m();
  const auto& th = star.theta;
  ThetaMetrics r;
  for (int i = 0; i < m; ++i) {
    const double a = th[i], b = th[(i + 1) % m], c = th[(i + 2) % m];
    r.theta_I = std::max(r.theta_I, std::abs(std::sin(a + b)));
    const double w = std::min({std::abs(std::sin(a + b + c)), std::abs(std::sin(a + b)), std::abs(std::sin(b + c))});
    r.theta_II = std::max(r.theta_II, w);
  }
  return r;
}

std::string to_string(VertexKind k) {
  switch (k) {
    case VertexKind::Boundary: return "Boundary";
    case VertexKind::Regular: return "Regular";
    case VertexKind::TypeI: return "TypeI";
    case VertexKind::TypeII_Nondegenerate: return "TypeII-nondegenerate";
    case VertexKind::TypeII_1: return "TypeII-1";
    case VertexKind::TypeII_2: return "TypeII-2";
    case VertexKind::TypeII_3: return "TypeII-3";
  }
  return "";
}

bool is_type_two(VertexKind k) {
  return k == VertexKind::TypeII_Nondegenerate || k == VertexKind::TypeII_1 || k == VertexKind::TypeII_2 ||
         k == VertexKind::TypeII_3;
}

std::vector<VertexClass> classify_vertices(const Triangulation& mesh, double eps_sing) {
  require(eps_sing > 0.0, "eps_sing must be positive");
  std::vector<VertexClass> out;
  out.reserve(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    VertexClass c;
    c.vertex = v;
    c.m = static_cast<int>(mesh.vertex_triangles(v).size());
    if (mesh.is_boundary_vertex(v)) {
      c.kind = VertexKind::Boundary;
      c.theta_I = c.theta_II = std::numeric_limits<double>::quiet_NaN();
    } else {
      const ThetaMetrics tm = theta_metrics(build_star(mesh, v));
      c.theta_I = tm.theta_I;
      c.theta_II = tm.theta_II;
      if (tm.theta_I <= eps_sing) {
        c.kind = VertexKind::TypeI;
      } else if (tm.theta_II <= eps_sing) {
        switch (c.m) {
          case 6: c.kind = VertexKind::TypeII_Nondegenerate; break;
          case 5: c.kind = VertexKind::TypeII_1; break;
          case 4: c.kind = VertexKind::TypeII_2; break;
          case 3: c.kind = VertexKind::TypeII_3; break;
          default: throw InconclusiveError("vertex " + std::to_string(v) + " has theta_II <= eps with m = " +
                                           std::to_string(c.m));
        }
      } else {
        c.kind = VertexKind::Regular;
      }
    }
    out.push_back(c);
  }
  return out;
}

ImagingStar imaging_star(const VertexStar& star, double tol) {
  require(star.interior, "imaging star needs an interior vertex");
  // Distinct lines through z.
  std::vector<Vec2> lines;
  for (const Vec2& t : star.t) {
    bool found = false;
    for (const Vec2& l : lines) found = found || std::abs(l.x() * t.y() - l.y() * t.x()) < tol;
    if (!found) lines.push_back(t);
  }
  if (lines.size() != 3) throw InconclusiveError("imaging star: edges do not lie on exactly three lines");

  const double a0 = angle_of(star.t[0]);
  std::vector<std::pair<double, Vec2>> rays;
  for (const Vec2& l : lines) {
    for (const Vec2& d : {Vec2(l), Vec2(-l)}) {
      double a = angle_of(d) - a0;
      if (a < -1e-12) a += kTwoPi;
      if (a < 0) a = 0;
      rays.emplace_back(a, d);
    }
  }
  std::sort(rays.begin(), rays.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

  // Element angular intervals relative to ray 0.
  std::vector<double> start(star.m());
  double acc = 0.0;
  for (int e = 0; e < star.m(); ++e) {
    start[e] = acc;
    acc += star.theta[e];
  }

  ImagingStar im;
  for (int i = 0; i < 6; ++i) {
    const Vec2 t = rays[i].second;
    im.t.push_back(t);
    im.n.push_back(rotate_cw(t));
    const double lo = rays[i].first;
    const double hi = i + 1 < 6 ? rays[i + 1].first : kTwoPi;
    im.theta.push_back(hi - lo);
    const double mid = 0.5 * (lo + hi);
    int owner = star.m() - 1;
    for (int e = 0; e < star.m(); ++e) {
      if (mid >= start[e] && mid < start[e] + star.theta[e]) {
        owner = e;
        break;
      }
    }
    im.sector_element.push_back(owner);
  }
  return im;
}

}  // namespace sgmix
