#include "sgmix/elements/tensor.hpp"

#include <cmath>

namespace sgmix {

void Material::validate() const {
  require(std::isfinite(mu) && mu > 0.0, "mu must be positive");
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda must be non-negative");
}

std::string check_iota(double iota) {
  require(std::isfinite(iota) && iota >= 0.0, "iota must be non-negative");
  if (iota > 1.0) return "iota = " + std::to_string(iota) + " exceeds 1";
  return {};
}

Vec3 to_voigt(const Mat2& s) { return Vec3(s(0, 0), s(0, 1), s(1, 1)); }

Mat2 from_voigt(const Vec3& v) {
  Mat2 s;
  s << v(0), v(1), v(1), v(2);
  return s;
}

// Deviatoric and trace parts are scaled separately; the textbook form
// cancels badly for lambda >> mu.
Mat2 compliance(const Mat2& s, const Material& mat) {
  return deviator(s) / (2.0 * mat.mu) + s.trace() / (4.0 * (mat.lambda + mat.mu)) * Mat2::Identity();
}

Mat2 stiffness(const Mat2& e, const Material& mat) {
  return 2.0 * mat.mu * deviator(e) + (mat.lambda + mat.mu) * e.trace() * Mat2::Identity();
}

Eigen::Matrix3d compliance_voigt(const Material& mat) {
  const double kappa = mat.lambda / (4.0 * mat.mu * (mat.mu + mat.lambda));
  const double d = 1.0 / (4.0 * mat.mu) + 1.0 / (4.0 * (mat.lambda + mat.mu));
  Eigen::Matrix3d K;
  K << d, 0.0, -kappa, 0.0, 1.0 / mat.mu, 0.0, -kappa, 0.0, d;
  return K;
}

Mat2 airy(const Mat2& hessian) {
  Mat2 s;
  s << hessian(1, 1), -hessian(0, 1), -hessian(0, 1), hessian(0, 0);
  return s;
}

double gradient_inequality_ratio(const std::array<Mat2, 2>& grad) {
  const Vec2 div(grad[0](0, 0) + grad[1](1, 0), grad[0](0, 1) + grad[1](1, 1));
  double dev = 0.0, full = 0.0;
  for (const Mat2& g : grad) {
    const Mat2 d = deviator(g);
    dev += ddot(d, d);
    full += ddot(g, g);
  }
  require(full > 0.0, "zero gradient");
  return (dev + div.squaredNorm()) / full;
}

}  // namespace sgmix
