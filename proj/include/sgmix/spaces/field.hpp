#pragma once

#include "sgmix/spaces/fe_space.hpp"

#include <functional>

namespace sgmix {

/// Member of an FESpace given by reduced coordinates.
class DiscreteField {
 public:
  DiscreteField(const FESpace& space, Vector reduced);

  const FESpace& space() const { return *space_; }
  const Vector& reduced() const { return reduced_; }
  const Vector& base() const { return base_; }

  /// Rows: derivatives up to `order` (deriv_index), columns: components.
  Matrix eval(int t, const Vec2& x, int order = 0) const;
  /// Component values at a point of triangle t.
  Vector value(int t, const Vec2& x) const { return eval(t, x, 0).row(0).transpose(); }

 private:
  const FESpace* space_;
  Vector reduced_;
  Vector base_;
};

/// f(x) returns one value per component.
using VectorFunction = std::function<Vector(const Vec2&)>;

/// Per-component L2 load vector in base coordinates, integrated with a rule of the given degree.
Vector base_load(const FESpace& space, const VectorFunction& f, int quad_degree);

/// Scalar base mass matrix (scalar_dim x scalar_dim).
SpMat scalar_mass(const FESpace& space);

/// Global L2 projection onto the constrained space.
DiscreteField project(const FESpace& space, const VectorFunction& f, int quad_degree = -1);

/// Stress fields as Voigt (11, 12, 22) component vectors.
Vector stress_components(const Mat2& s);
Mat2 stress_from_components(const Vector& v);

}  // namespace sgmix
