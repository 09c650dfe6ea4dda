#pragma once

#include "sgmix/elements/tensor.hpp"

#include <array>
#include <string>

namespace sgmix {

enum class CaseKind { InteriorSmooth, BoundaryFlux };

CaseKind parse_case_kind(const std::string& s);
std::string to_string(CaseKind k);

/// Second term of interior_smooth: grad(b) / lambda, or b (1, 1) / lambda.
enum class BubbleTerm { Gradient, Diagonal };

/// Closed-form data on the unit square with u0 = 0 on the boundary,
/// sigma0 = C eps(u0) and f = div sigma0. Gradients use (grad v)_ij = d_i v_j.
///
/// interior_smooth: u0 = curl psi + grad(b) / lambda with
///   psi = sin^3(pi x) sin^3(pi y), b = x^3 (1-x)^3 y^3 (1-y)^3.
/// boundary_flux: u0 = (sin x sin y (sin x - sin 1)(sin y - sin 1),
///                      sin x sin y (e^x - e)(e^y - e)).
class ManufacturedCase {
 public:
  ManufacturedCase(CaseKind kind, const Material& mat, BubbleTerm bubble = BubbleTerm::Gradient);

  CaseKind kind() const { return kind_; }
  const Material& material() const { return mat_; }

  Vec2 u(const Vec2& x) const;
  Mat2 grad_u(const Vec2& x) const;
  Mat2 sigma(const Vec2& x) const;
  /// {d_x sigma, d_y sigma}
  std::array<Mat2, 2> grad_sigma(const Vec2& x) const;
  /// {d_xx sigma, d_xy sigma, d_yy sigma}
  std::array<Mat2, 3> hess_sigma(const Vec2& x) const;
  Vec2 f(const Vec2& x) const;

 private:
  CaseKind kind_;
  Material mat_;
  BubbleTerm bubble_;
};

}  // namespace sgmix
