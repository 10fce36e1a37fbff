#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "plateau/seminorm.hpp"

namespace plateau {

// Point in a target space, held as chart coordinates. `chart` is only
// meaningful for the glued bi-disc target (1 or 2).
struct TargetPoint {
    std::vector<double> x;
    int chart = 1;

    TargetPoint() = default;
    TargetPoint(std::initializer_list<double> coords, int chart_ = 1) : x(coords), chart(chart_) {}
    explicit TargetPoint(std::vector<double> coords, int chart_ = 1) : x(std::move(coords)), chart(chart_) {}
    double operator[](std::size_t i) const { return x[i]; }
};

struct NormedPlaneTarget {
    NormDescriptor norm;
};

struct EuclideanTarget {
    int dim = 2;
};

// Cone over a circle of radius r inside the unit sphere, intrinsic metric.
// Point API uses (t, phi) with t >= 0 and phi in [0, 2*pi*r). Piecewise-
// linear maps use the developed chart p = t*r*exp(i*phi/r), on which the
// cone is the graph (p, k*|p|) in R^3 with k = sqrt(1-r^2)/r.
struct ConeTarget {
    double r = 1.0;
};

// Two closed unit discs glued along their boundary circles; chart 1 carries
// the given norm, chart 2 carries lambda times the Euclidean metric.
struct BiDiscTarget {
    NormDescriptor norm;
    double lambda = 1.0;
};

class TargetSpace {
  public:
    using Variant = std::variant<NormedPlaneTarget, EuclideanTarget, ConeTarget, BiDiscTarget>;

    TargetSpace() : v_(EuclideanTarget{2}) {}
    TargetSpace(Variant v);

    static TargetSpace normed_plane(NormDescriptor n) { return TargetSpace(NormedPlaneTarget{std::move(n)}); }
    static TargetSpace euclidean(int dim) { return TargetSpace(EuclideanTarget{dim}); }
    static TargetSpace cone(double r) { return TargetSpace(ConeTarget{r}); }
    static TargetSpace bi_disc(NormDescriptor n, double lambda) {
        return TargetSpace(BiDiscTarget{std::move(n), lambda});
    }

    const Variant& variant() const { return v_; }
    bool is_cone() const { return std::holds_alternative<ConeTarget>(v_); }
    bool is_bi_disc() const { return std::holds_alternative<BiDiscTarget>(v_); }

    // dimension of the chart coordinates carried by map images
    int chart_dim() const;
    std::string describe() const;

    double distance(const TargetPoint& a, const TargetPoint& b) const;

    // Derivative seminorm of the affine map sending the domain triangle onto
    // the three image points. Cone images use (t, phi) here.
    Seminorm2 triangle_seminorm(const std::array<Vec2, 3>& domain,
                                const std::array<TargetPoint, 3>& images) const;

    // Same operations on raw map-chart coordinates (cone maps store the
    // developed chart p rather than (t, phi)).
    Seminorm2 seminorm_from_chart(const std::array<Vec2, 3>& domain, const double* q0,
                                  const double* q1, const double* q2, int chart) const;
    double chart_distance(const double* a, const double* b, int chart_a, int chart_b) const;

    // cone helpers: (t, phi) <-> developed chart point p
    Vec2 cone_to_chart(double t, double phi) const;
    std::array<double, 2> cone_from_chart(const Vec2& p) const;

  private:
    Variant v_;
};

// Closed polyline in one chart of a target space, reparametrized by constant
// speed. Parameters live in [0, 2pi); the point at parameter t sits at
// arclength t * length / (2pi) along the curve.
class JordanBoundary {
  public:
    JordanBoundary(TargetSpace target, std::vector<TargetPoint> polyline);

    const TargetSpace& target() const { return target_; }
    double length() const { return length_; }
    int chart() const { return chart_; }

    TargetPoint point_at(double t) const;
    // one-sided (right) derivative of t -> chart coordinates
    std::vector<double> tangent_at(double t) const;

    const std::vector<TargetPoint>& polyline() const { return points_; }
    bool injective_polyline() const;  // segment-crossing check in chart coords

  private:
    TargetSpace target_;
    std::vector<TargetPoint> points_;
    std::vector<double> cumulative_;  // target-metric arclength per vertex
    double length_ = 0.0;
    int chart_ = 1;

    std::pair<int, double> segment_at(double t) const;
};

}  // namespace plateau
