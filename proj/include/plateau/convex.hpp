#pragma once

#include <vector>

#include "plateau/norm.hpp"

namespace plateau {

// Centrally symmetric convex polygon, ccw, origin strictly inside.
struct ConvexBody2 {
    std::vector<Vec2> vertices;

    explicit ConvexBody2(std::vector<Vec2> verts);
    double area() const;
    std::size_t size() const { return vertices.size(); }
};

struct Ellipse2 {
    Mat2 G = Mat2::Identity();  // {v : v'Gv <= 1}
    double area() const;
};

struct Parallelogram2 {
    double area = 0.0;
    std::array<Vec2, 4> corners{};  // ccw
    Vec2 a = Vec2::Zero(), b = Vec2::Zero();  // defining functionals |<a,x>|<=1, |<b,x>|<=1
};

// Symmetric polygon inscribed in {s = 1}; n_verts must be even.
// Throws DegenerateSeminorm when s is degenerate.
struct Seminorm2;
ConvexBody2 unit_ball(const Seminorm2& s, int n_verts);

// Polygonal polar body {w : <w,v> <= 1 for all v in K}.
ConvexBody2 polar_body(const ConvexBody2& K);

// Minimal-area origin-symmetric circumscribed parallelogram. Exact for
// polygons: the optimal functional pair sits on vertices of the polar body.
Parallelogram2 min_circumscribed_parallelogram(const ConvexBody2& K);

// Maximal-area centered inscribed ellipse (unique by symmetry), via a damped
// Newton barrier method on the log-det objective. Throws NonConvergence.
Ellipse2 max_inscribed_ellipse(const ConvexBody2& K, int max_iters = 2000);

}  // namespace plateau
