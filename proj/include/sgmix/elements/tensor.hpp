#pragma once

#include "sgmix/common.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>

namespace sgmix {

/// Lame parameters; mu > 0 and lambda >= 0.
struct Material {
  double lambda = 1e5;
  double mu = 0.3;
  void validate() const;
};

/// Throws for iota < 0; returns a warning message when iota > 1, else empty.
std::string check_iota(double iota);

/// Stress components are stored in the order (11, 12, 22).
constexpr int kStressComponents = 3;
constexpr int kDisplacementComponents = 2;

Vec3 to_voigt(const Mat2& s);
Mat2 from_voigt(const Vec3& v);

/// Frobenius product s : t.
inline double ddot(const Mat2& s, const Mat2& t) { return (s.array() * t.array()).sum(); }

/// Compliance A s = s^D / (2 mu) + tr(s) I / (4 (lambda + mu)).
Mat2 compliance(const Mat2& s, const Material& mat);
/// Stiffness C e = 2 mu e + lambda tr(e) I, the inverse of A.
Mat2 stiffness(const Mat2& e, const Material& mat);

/// K with (A s) : t = v(s)^T K v(t) for Voigt vectors in (11, 12, 22) order.
Eigen::Matrix3d compliance_voigt(const Material& mat);

/// curl curl^T u given the Hessian of u.
Mat2 airy(const Mat2& hessian);

/// Deviatoric part.
inline Mat2 deviator(const Mat2& s) { return s - 0.5 * s.trace() * Mat2::Identity(); }

/// For tau with constant gradient {d_x tau, d_y tau}:
/// (grad tau^D : grad tau^D + div tau . div tau) / (grad tau : grad tau).
double gradient_inequality_ratio(const std::array<Mat2, 2>& grad);

}  // namespace sgmix
