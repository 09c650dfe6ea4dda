#include "sgmix/elements/manufactured.hpp"

#include "sgmix/elements/taylor.hpp"

#include <numbers>

namespace sgmix {

namespace {

constexpr int kOrder = 4;  // u to fourth order gives sigma up to its Hessian
using T = Taylor2<kOrder>;
using T5 = Taylor2<kOrder + 1>;

std::array<T, 2> displacement_series(CaseKind kind, BubbleTerm bubble, const Material& mat, const Vec2& p) {
  if (kind == CaseKind::InteriorSmooth) {
    const double pi = std::numbers::pi;
    const T5 x = T5::x(p.x()), y = T5::y(p.y());
    const T5 psi = pow(sin(pi * x), 3) * pow(sin(pi * y), 3);
    const T5 b = pow(x, 3) * pow(1.0 - x, 3) * pow(y, 3) * pow(1.0 - y, 3);
    const double il = 1.0 / mat.lambda;
    if (bubble == BubbleTerm::Diagonal) return {psi.dy() + il * b.template truncate<kOrder>(), -psi.dx() + il * b.template truncate<kOrder>()};
    return {psi.dy() + il * b.dx(), -psi.dx() + il * b.dy()};
  }
  const T x = T::x(p.x()), y = T::y(p.y());
  const double s1 = std::sin(1.0), e = std::exp(1.0);
  const T sx = sin(x), sy = sin(y);
  return {sx * sy * (sx - s1) * (sy - s1), sx * sy * (exp(x) - e) * (exp(y) - e)};
}

// Stress series of order kOrder - 1.
std::array<Taylor2<kOrder - 1>, 3> stress_series(CaseKind kind, BubbleTerm bubble, const Material& mat,
                                                 const Vec2& p) {
  const auto u = displacement_series(kind, bubble, mat, p);
  const auto e11 = u[0].dx();
  const auto e22 = u[1].dy();
  const auto e12 = 0.5 * (u[0].dy() + u[1].dx());
  const auto tr = e11 + e22;
  return {2.0 * mat.mu * e11 + mat.lambda * tr, 2.0 * mat.mu * e12, 2.0 * mat.mu * e22 + mat.lambda * tr};
}

Mat2 stress_deriv(const std::array<Taylor2<kOrder - 1>, 3>& s, int a, int b) {
  return from_voigt(Vec3(s[0].deriv(a, b), s[1].deriv(a, b), s[2].deriv(a, b)));
}

}  // namespace

CaseKind parse_case_kind(const std::string& s) {
  if (s == "interior_smooth") return CaseKind::InteriorSmooth;
  if (s == "boundary_flux") return CaseKind::BoundaryFlux;
  throw PreconditionError("unknown case '" + s + "'");
}

std::string to_string(CaseKind k) { return k == CaseKind::InteriorSmooth ? "interior_smooth" : "boundary_flux"; }

ManufacturedCase::ManufacturedCase(CaseKind kind, const Material& mat, BubbleTerm bubble)
    : kind_(kind), mat_(mat), bubble_(bubble) {
  mat_.validate();
  if (kind == CaseKind::InteriorSmooth) require(mat.lambda > 0.0, "interior_smooth needs lambda > 0");
}

Vec2 ManufacturedCase::u(const Vec2& x) const {
  const auto s = displacement_series(kind_, bubble_, mat_, x);
  return Vec2(s[0].value(), s[1].value());
}

Mat2 ManufacturedCase::grad_u(const Vec2& x) const {
  const auto s = displacement_series(kind_, bubble_, mat_, x);
  Mat2 g;
  g << s[0].deriv(1, 0), s[1].deriv(1, 0), s[0].deriv(0, 1), s[1].deriv(0, 1);
  return g;
}

Mat2 ManufacturedCase::sigma(const Vec2& x) const { return stress_deriv(stress_series(kind_, bubble_, mat_, x), 0, 0); }

std::array<Mat2, 2> ManufacturedCase::grad_sigma(const Vec2& x) const {
  const auto s = stress_series(kind_, bubble_, mat_, x);
  return {stress_deriv(s, 1, 0), stress_deriv(s, 0, 1)};
}

std::array<Mat2, 3> ManufacturedCase::hess_sigma(const Vec2& x) const {
  const auto s = stress_series(kind_, bubble_, mat_, x);
  return {stress_deriv(s, 2, 0), stress_deriv(s, 1, 1), stress_deriv(s, 0, 2)};
}

Vec2 ManufacturedCase::f(const Vec2& x) const {
  const auto g = grad_sigma(x);
  return Vec2(g[0](0, 0) + g[1](0, 1), g[0](1, 0) + g[1](1, 1));
}

}  // namespace sgmix
