#pragma once

#include <array>
#include <cmath>

namespace sgmix {

/// Truncated bivariate Taylor series sum c(a, b) dx^a dy^b with a + b <= N,
/// used to evaluate closed-form fields together with their derivatives.
template <int N>
class Taylor2 {
 public:
  static constexpr int kSize = (N + 1) * (N + 2) / 2;
  static constexpr int index(int a, int b) { return (a + b) * (a + b + 1) / 2 + b; }

  Taylor2() { c_.fill(0.0); }
  explicit Taylor2(double v) {
    c_.fill(0.0);
    c_[0] = v;
  }
  static Taylor2 x(double x0) {
    Taylor2 t(x0);
    if constexpr (N >= 1) t.c_[index(1, 0)] = 1.0;
    return t;
  }
  static Taylor2 y(double y0) {
    Taylor2 t(y0);
    if constexpr (N >= 1) t.c_[index(0, 1)] = 1.0;
    return t;
  }

  double coeff(int a, int b) const { return c_[index(a, b)]; }
  double& coeff(int a, int b) { return c_[index(a, b)]; }
  double value() const { return c_[0]; }

  /// d^(a+b) / dx^a dy^b at the expansion point.
  double deriv(int a, int b) const { return factorial(a) * factorial(b) * coeff(a, b); }

  template <int M>
  Taylor2<M> truncate() const {
    static_assert(M <= N);
    Taylor2<M> r;
    for (int n = 0; n <= M; ++n)
      for (int b = 0; b <= n; ++b) r.coeff(n - b, b) = coeff(n - b, b);
    return r;
  }

  Taylor2<N - 1> dx() const {
    Taylor2<N - 1> r;
    for (int n = 0; n < N; ++n)
      for (int b = 0; b <= n; ++b) r.coeff(n - b, b) = (n - b + 1) * coeff(n - b + 1, b);
    return r;
  }
  Taylor2<N - 1> dy() const {
    Taylor2<N - 1> r;
    for (int n = 0; n < N; ++n)
      for (int b = 0; b <= n; ++b) r.coeff(n - b, b) = (b + 1) * coeff(n - b, b + 1);
    return r;
  }

  Taylor2& operator+=(const Taylor2& o) {
    for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Taylor2& operator-=(const Taylor2& o) {
    for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Taylor2& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  friend Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
  friend Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
  friend Taylor2 operator-(Taylor2 a) { return a *= -1.0; }
  friend Taylor2 operator*(Taylor2 a, double s) { return a *= s; }
  friend Taylor2 operator*(double s, Taylor2 a) { return a *= s; }
  friend Taylor2 operator+(Taylor2 a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Taylor2 operator-(Taylor2 a, double s) {
    a.c_[0] -= s;
    return a;
  }
  friend Taylor2 operator-(double s, Taylor2 a) { return -a + s; }
  friend Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    for (int n1 = 0; n1 <= N; ++n1)
      for (int b1 = 0; b1 <= n1; ++b1) {
        const double x = a.coeff(n1 - b1, b1);
        if (x == 0.0) continue;
        for (int n2 = 0; n1 + n2 <= N; ++n2)
          for (int b2 = 0; b2 <= n2; ++b2) r.coeff(n1 - b1 + n2 - b2, b1 + b2) += x * b.coeff(n2 - b2, b2);
      }
    return r;
  }

  /// f(c0 + h) = sum_n f^(n)(c0) / n! h^n given derivs[n] = f^(n)(c0).
  template <class Derivs>
  Taylor2 compose(const Derivs& derivs) const {
    Taylor2 h = *this;
    h.c_[0] = 0.0;
    Taylor2 r(derivs[0]);
    Taylor2 p(1.0);
    double fact = 1.0;
    for (int n = 1; n <= N; ++n) {
      p = p * h;
      fact *= n;
      r += p * (derivs[n] / fact);
    }
    return r;
  }

 private:
  static double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  }
  std::array<double, kSize> c_;
};

template <int N>
Taylor2<N> sin(const Taylor2<N>& t) {
  std::array<double, N + 1> d;
  const double s = std::sin(t.value()), c = std::cos(t.value());
  for (int n = 0; n <= N; ++n) d[n] = (n % 4 == 0) ? s : (n % 4 == 1) ? c : (n % 4 == 2) ? -s : -c;
  return t.compose(d);
}

template <int N>
Taylor2<N> cos(const Taylor2<N>& t) {
  std::array<double, N + 1> d;
  const double s = std::sin(t.value()), c = std::cos(t.value());
  for (int n = 0; n <= N; ++n) d[n] = (n % 4 == 0) ? c : (n % 4 == 1) ? -s : (n % 4 == 2) ? -c : s;
  return t.compose(d);
}

template <int N>
Taylor2<N> exp(const Taylor2<N>& t) {
  std::array<double, N + 1> d;
  d.fill(std::exp(t.value()));
  return t.compose(d);
}

template <int N>
Taylor2<N> pow(const Taylor2<N>& t, int e) {
  Taylor2<N> r(1.0);
  for (int i = 0; i < e; ++i) r = r * t;
  return r;
}

}  // namespace sgmix
