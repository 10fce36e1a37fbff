#include "plateau/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace plateau {

namespace {

inline Vec2 dir(double theta) { return Vec2(std::cos(theta), std::sin(theta)); }

// eigenvalues of a symmetric psd 2x2 matrix
inline void sym_eigs(const Mat2& G, double& lo, double& hi) {
    const double tr = G(0, 0) + G(1, 1);
    const double d = std::hypot(G(0, 0) - G(1, 1), 2.0 * G(0, 1));
    lo = std::max(0.0, 0.5 * (tr - d));
    hi = std::max(0.0, 0.5 * (tr + d));
}

struct GaussRule {
    std::vector<double> nodes, weights;  // on [-1, 1]
};

// Golub-free Newton iteration on Legendre roots; cached per order.
const GaussRule& gauss_rule(int n) {
    static GaussRule rule;
    if (static_cast<int>(rule.nodes.size()) == n) return rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                rule.nodes[i] = x;
                rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
                break;
            }
        }
    }
    return rule;
}

// integral over [0, 2pi) of f, split at the given breakpoints
template <class F>
double split_circle_integral(F&& f, std::vector<double> breaks) {
    for (double& b : breaks) {
        b = std::fmod(b, 2.0 * M_PI);
        if (b < 0) b += 2.0 * M_PI;
    }
    breaks.push_back(0.0);
    breaks.push_back(2.0 * M_PI);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                 breaks.end());
    const GaussRule& g = gauss_rule(24);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i], b = breaks[i + 1];
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        if (half <= 0) continue;
        double acc = 0.0;
        for (std::size_t k = 0; k < g.nodes.size(); ++k) acc += g.weights[k] * f(mid + half * g.nodes[k]);
        total += acc * half;
    }
    return total;
}

// refine a grid maximum of a 2pi-periodic function by golden-section search
template <class F>
double refine_extremum(F&& f, double theta0, double h, bool maximize) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = theta0 - h, b = theta0 + h;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 90; ++it) {
        const bool move_left = maximize ? (f1 > f2) : (f1 < f2);
        if (move_left) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
        if (b - a < 1e-14) break;
    }
    return maximize ? std::max(f1, f2) : std::min(f1, f2);
}

template <class F>
double grid_extremum(F&& f, int grid, bool maximize, bool refine) {
    double best = maximize ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
    double best_theta = 0.0;
    for (int k = 0; k < grid; ++k) {
        const double theta = 2.0 * M_PI * k / grid;
        const double v = f(theta);
        if (maximize ? (v > best) : (v < best)) {
            best = v;
            best_theta = theta;
        }
    }
    if (!refine) return best;
    const double refined = refine_extremum(f, best_theta, 2.0 * M_PI / grid, maximize);
    return maximize ? std::max(best, refined) : std::min(best, refined);
}

}  // namespace

bool Seminorm2::degenerate() const {
    const double scale = A.norm();
    if (scale == 0.0) return true;
    return std::abs(A.determinant()) <= 1e-12 * scale * scale;
}

double eval(const Seminorm2& s, const Vec2& v) { return s(v); }

double i_plus(const Seminorm2& s, double p) {
    if (s.base.is_inner_product()) {
        double lo, hi;
        sym_eigs(s.A.transpose() * s.base.gram() * s.A, lo, hi);
        return std::pow(hi, 0.5 * p);
    }
    if (std::holds_alternative<PolygonBall>(s.base.variant())) {
        double best = 0.0;
        for (const auto& eta : s.base.polar_vertices())
            best = std::max(best, (s.A.transpose() * eta).norm());
        return std::pow(best, p);
    }
    auto f = [&](double t) { return s(dir(t)); };
    return std::pow(grid_extremum(f, 2048, true, true), p);
}

double i_min(const Seminorm2& s, double p) {
    if (s.base.is_inner_product()) {
        double lo, hi;
        sym_eigs(s.A.transpose() * s.base.gram() * s.A, lo, hi);
        return std::pow(lo, 0.5 * p);
    }
    if (s.degenerate()) return 0.0;
    if (std::holds_alternative<PolygonBall>(s.base.variant())) {
        // min over directions of the support function of {A' eta_j}: attained
        // at an edge normal of that (convex, centrally symmetric) polygon.
        const auto& etas = s.base.polar_vertices();
        const std::size_t m = etas.size();
        std::vector<Vec2> w(m);
        for (std::size_t j = 0; j < m; ++j) w[j] = s.A.transpose() * etas[j];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            const Vec2 e = w[(j + 1) % m] - w[j];
            const double len = e.norm();
            if (len == 0.0) continue;
            Vec2 n(e.y() / len, -e.x() / len);
            double h = n.dot(w[j]);
            if (h < 0) h = -h;  // outward side
            best = std::min(best, h);
        }
        return std::pow(best, p);
    }
    auto f = [&](double t) { return s(dir(t)); };
    return std::pow(grid_extremum(f, 2048, false, true), p);
}

double i_avg(const Seminorm2& s, double p) {
    if (p == 2.0 && s.base.is_inner_product())
        return (s.A.transpose() * s.base.gram() * s.A).trace();
    auto f = [&](double t) { return std::pow(s(dir(t)), p); };
    return split_circle_integral(f, s.base.kink_angles(s.A)) / M_PI;
}

double q_factor(const Seminorm2& s) {
    const double top = i_plus(s, 1.0);
    if (top <= 0.0) return 1.0;  // zero seminorm counts as conformal
    if (s.degenerate()) return std::numeric_limits<double>::infinity();
    const double bot = i_min(s, 1.0);
    if (bot <= 0.0) return std::numeric_limits<double>::infinity();
    return top / bot;
}

double seminorm_distance(const Seminorm2& s, const Seminorm2& t, int grid) {
    double best = 0.0;
    for (int k = 0; k < grid; ++k) {
        const Vec2 v = dir(2.0 * M_PI * k / grid);
        best = std::max(best, std::abs(s(v) - t(v)));
    }
    return best;
}

Seminorm2 compose(const Seminorm2& s, const Mat2& T) { return Seminorm2(s.A * T, s.base); }

double i_plus_grid(const Seminorm2& s, double p, int grid) {
    auto f = [&](double t) { return std::pow(s(dir(t)), p); };
    return grid_extremum(f, grid, true, false);
}

double i_min_grid(const Seminorm2& s, double p, int grid) {
    auto f = [&](double t) { return std::pow(s(dir(t)), p); };
    return grid_extremum(f, grid, false, false);
}

double i_avg_grid(const Seminorm2& s, double p, int grid) {
    double acc = 0.0;
    for (int k = 0; k < grid; ++k) acc += std::pow(s(dir(2.0 * M_PI * (k + 0.5) / grid)), p);
    return acc * 2.0 / grid;
}

}  // namespace plateau
