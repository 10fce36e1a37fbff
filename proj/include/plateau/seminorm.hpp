#pragma once

#include "plateau/norm.hpp"

namespace plateau {

// A seminorm on R^2: s(v) = base(A v). A may be singular, in which case s
// vanishes on ker A.
struct Seminorm2 {
    Mat2 A = Mat2::Identity();
    NormDescriptor base;

    Seminorm2() = default;
    Seminorm2(const Mat2& A_, NormDescriptor base_) : A(A_), base(std::move(base_)) {}

    double operator()(const Vec2& v) const { return base(A * v); }
    bool degenerate() const;
};

double eval(const Seminorm2& s, const Vec2& v);

// max_{|v|=1} s(v)^p
double i_plus(const Seminorm2& s, double p = 2.0);

// min_{|v|=1} s(v)^p
double i_min(const Seminorm2& s, double p = 2.0);

// pi^{-1} * integral over the unit circle of s(v)^p
double i_avg(const Seminorm2& s, double p = 2.0);

// max s / min s over the unit circle; 1 for the zero seminorm, +infinity for
// a degenerate seminorm that is not identically zero.
double q_factor(const Seminorm2& s);

// sup-distance of s and s' sampled on a shared uniform direction grid
double seminorm_distance(const Seminorm2& s, const Seminorm2& t, int grid = 256);

// v -> s(Tv)
Seminorm2 compose(const Seminorm2& s, const Mat2& T);

// Grid fallbacks with documented O(K^-2) error for Lipschitz integrands;
// exact closed forms / split quadrature are used by the functions above
// whenever the base admits them.
double i_plus_grid(const Seminorm2& s, double p, int grid);
double i_min_grid(const Seminorm2& s, double p, int grid);
double i_avg_grid(const Seminorm2& s, double p, int grid);

inline constexpr int kOracleGrid = 1 << 16;

}  // namespace plateau
