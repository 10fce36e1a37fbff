#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace plateau {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// A planar norm described by its unit ball.
//
// PolygonBall vertices must be counterclockwise, centrally symmetric, in
// strictly convex position, with the origin strictly inside. EllipseBall is
// {v : v'Gv <= 1} with G symmetric positive definite.
struct EuclideanNorm {};

struct PNorm {
    double p = 2.0;
};

struct PolygonBall {
    std::vector<Vec2> vertices;
};

struct EllipseBall {
    Mat2 G = Mat2::Identity();
};

class NormDescriptor {
  public:
    using Variant = std::variant<EuclideanNorm, PNorm, PolygonBall, EllipseBall>;

    NormDescriptor() : v_(EuclideanNorm{}) {}
    NormDescriptor(Variant v);  // validates, throws ConfigError on bad input

    static NormDescriptor euclidean() { return NormDescriptor(EuclideanNorm{}); }
    static NormDescriptor p_norm(double p) { return NormDescriptor(PNorm{p}); }
    static NormDescriptor polygon(std::vector<Vec2> verts) { return NormDescriptor(PolygonBall{std::move(verts)}); }
    static NormDescriptor ellipse(const Mat2& G) { return NormDescriptor(EllipseBall{G}); }

    // sup-norm unit ball, the square with corners (+-1, +-1)
    static NormDescriptor linf();
    // l1 unit ball, the diamond with corners (+-1, 0), (0, +-1)
    static NormDescriptor l1();

    double operator()(const Vec2& w) const { return evaluate(w); }
    double evaluate(const Vec2& w) const;

    // A subgradient of the norm at w (any supporting functional; deterministic
    // tie-breaking). Zero vector at w = 0.
    Vec2 subgradient(const Vec2& w) const;

    bool is_euclidean() const { return std::holds_alternative<EuclideanNorm>(v_); }
    bool is_inner_product() const;  // Euclidean or EllipseBall
    const Variant& variant() const { return v_; }

    // For inner-product norms: the Gram matrix G with n(w) = sqrt(w'Gw).
    Mat2 gram() const;

    // For PolygonBall: the vertices of the polar ball, i.e. the functionals
    // eta_e with <eta_e, x> <= 1 describing the ball; n(w) = max_e <w, eta_e>.
    const std::vector<Vec2>& polar_vertices() const { return polar_vertices_; }
    const std::vector<Vec2>& polygon_vertices() const { return std::get<PolygonBall>(v_).vertices; }

    // Breakpoint angles in [0, 2pi) where theta -> n(A u(theta)) can lose
    // smoothness; used for exact quadrature splitting.
    std::vector<double> kink_angles(const Mat2& A) const;

    std::string describe() const;
    std::uint64_t cache_key() const;

  private:
    Variant v_;
    std::vector<Vec2> polar_vertices_;  // PolygonBall only
};

}  // namespace plateau
