#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "plateau/norm.hpp"

namespace plateau {

using Complex = std::complex<double>;

// Plane deformation that is an affine map M on the closed ball B(z0, r) and
// the conformal Joukowski-type map c w + d / w (in rotated coordinates)
// outside, glued continuously along the ball boundary. Requires det M > 0.
class LocalDeformation {
  public:
    LocalDeformation(const Vec2& z0, double r, const Mat2& inside);

    Vec2 apply(const Vec2& z) const;
    Vec2 inverse(const Vec2& y) const;
    Mat2 jacobian(const Vec2& z) const;          // discontinuous across the circle
    Mat2 inverse_jacobian(const Vec2& y) const;  // jacobian of the inverse at y

    double c() const { return c_; }
    double d() const { return d_; }
    const Vec2& center() const { return z0_; }
    double radius() const { return r_; }

  private:
    Vec2 z0_;
    double r_;
    Mat2 inside_;
    double alpha_ = 0, beta_ = 0;  // M = R_alpha diag(s1, s2) R_beta
    double s1_ = 1, s2_ = 1;
    double c_ = 1, d_ = 0;

    Complex hat(const Complex& w) const;
    Complex hat_inverse(const Complex& v) const;
};

// Conformal map f from the unit disc onto a star-shaped analytic Jordan
// domain, f(0) = star center, computed by the boundary-correspondence
// iteration with trigonometric interpolation of the radius profile.
class DiscConformalMap {
  public:
    // `boundary` parametrizes the target boundary over [0, 2pi); it need not
    // be the polar-angle parametrization.
    DiscConformalMap(std::function<Vec2(double)> boundary, const Vec2& center, int samples = 2048);

    Vec2 apply(const Vec2& z) const;
    Mat2 jacobian(const Vec2& z) const;  // conformal 2x2 matrix
    double conformality_residual() const { return residual_; }

  private:
    Vec2 center_;
    std::vector<Complex> coeffs_;  // taylor coefficients of log((f - c)/z)
    double residual_ = 0.0;

    Complex series(const Complex& z, Complex* derivative) const;
};

void fft_radix2(std::vector<Complex>& a, bool inverse);

}  // namespace plateau
