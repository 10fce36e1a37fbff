#pragma once

// Test-only reference computations, kept independent of the library paths
// they check: direction grids, halfplane clipping, and parameter searches.

#include <algorithm>
#include <cmath>
#include <vector>

#include "plateau/convex.hpp"
#include "plateau/seminorm.hpp"

namespace oracle {

using plateau::Mat2;
using plateau::Vec2;

inline double shoelace(const std::vector<Vec2>& poly) {
    double acc = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        acc += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * acc;
}

inline double circle_max(const plateau::Seminorm2& s, double p, int grid = plateau::kOracleGrid) {
    double best = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double t = 2.0 * M_PI * k / grid;
        best = std::max(best, s(Vec2(std::cos(t), std::sin(t))));
    }
    return std::pow(best, p);
}

inline double circle_min(const plateau::Seminorm2& s, double p, int grid = plateau::kOracleGrid) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid; ++k) {
        const double t = 2.0 * M_PI * k / grid;
        best = std::min(best, s(Vec2(std::cos(t), std::sin(t))));
    }
    return std::pow(best, p);
}

inline double circle_avg(const plateau::Seminorm2& s, double p, int grid = plateau::kOracleGrid) {
    double acc = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double t = 2.0 * M_PI * (k + 0.5) / grid;
        acc += std::pow(s(Vec2(std::cos(t), std::sin(t))), p);
    }
    return acc * 2.0 / grid;
}

// polar body by clipping a large box with the halfplanes <w, v> <= 1
inline std::vector<Vec2> halfplane_polar(const std::vector<Vec2>& verts) {
    std::vector<Vec2> poly = {Vec2(-50, -50), Vec2(50, -50), Vec2(50, 50), Vec2(-50, 50)};
    for (const auto& v : verts) {
        std::vector<Vec2> next;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2& a = poly[i];
            const Vec2& b = poly[(i + 1) % n];
            const double da = a.dot(v) - 1.0, db = b.dot(v) - 1.0;
            if (da <= 0) next.push_back(a);
            if ((da < 0 && db > 0) || (da > 0 && db < 0)) next.push_back(a + (b - a) * (da / (da - db)));
        }
        poly = std::move(next);
    }
    return poly;
}

// minimal symmetric circumscribed parallelogram by functional-direction grid
inline double parallelogram_grid(const plateau::ConvexBody2& K, int grid = 1440) {
    auto support = [&](const Vec2& u) {
        double h = -1e18;
        for (const auto& v : K.vertices) h = std::max(h, u.dot(v));
        return h;
    };
    double best = 0.0;
    std::vector<Vec2> funcs(grid);
    for (int i = 0; i < grid; ++i) {
        const double t = M_PI * i / grid;  // symmetric: half-turn suffices
        const Vec2 u(std::cos(t), std::sin(t));
        funcs[i] = u / support(u);
    }
    for (int i = 0; i < grid; ++i)
        for (int j = i + 1; j < grid; ++j) {
            const double d = std::abs(funcs[i].x() * funcs[j].y() - funcs[i].y() * funcs[j].x());
            best = std::max(best, d);
        }
    return 4.0 / best;
}

// maximal inscribed centered ellipse by global grid plus local refinement
// over (semi-axis a, semi-axis b, tilt)
inline double ellipse_grid_area(const plateau::ConvexBody2& K) {
    const plateau::ConvexBody2 polar = plateau::polar_body(K);
    auto feasible = [&](double a, double b, double phi) {
        // support of the ellipse at every edge functional must stay below 1
        const double c = std::cos(phi), s = std::sin(phi);
        for (const auto& e : polar.vertices) {
            const double ex = c * e.x() + s * e.y();
            const double ey = -s * e.x() + c * e.y();
            if (a * a * ex * ex + b * b * ey * ey > 1.0) return false;
        }
        return true;
    };
    double hi = 0.0;
    for (const auto& v : K.vertices) hi = std::max(hi, v.norm());
    double best = 0.0, ca = 0.4 * hi, cb = 0.4 * hi, cphi = M_PI / 2;
    for (int ia = 1; ia <= 40; ++ia)
        for (int ib = 1; ib <= 40; ++ib)
            for (int ip = 0; ip < 40; ++ip) {
                const double a = hi * ia / 40.0, b = hi * ib / 40.0, phi = M_PI * ip / 40.0;
                if (a * b > best && feasible(a, b, phi)) {
                    best = a * b;
                    ca = a;
                    cb = b;
                    cphi = phi;
                }
            }
    double span_ab = hi / 40.0, span_phi = M_PI / 40.0;
    for (int round = 0; round < 22; ++round) {
        for (int ia = -6; ia <= 6; ++ia)
            for (int ib = -6; ib <= 6; ++ib)
                for (int ip = -6; ip <= 6; ++ip) {
                    const double a = ca + span_ab * ia / 6.0;
                    const double b = cb + span_ab * ib / 6.0;
                    const double phi = cphi + span_phi * ip / 6.0;
                    if (a > 0 && b > 0 && a * b > best && feasible(a, b, phi)) {
                        best = a * b;
                        ca = a;
                        cb = b;
                        cphi = phi;
                    }
                }
        span_ab *= 0.55;
        span_phi *= 0.55;
    }
    return M_PI * best;
}

}  // namespace oracle
