#include "plateau/convex.hpp"

#include <cmath>
#include <limits>

#include "plateau/error.hpp"
#include "plateau/seminorm.hpp"

namespace plateau {

namespace {
double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
}

ConvexBody2::ConvexBody2(std::vector<Vec2> verts) : vertices(std::move(verts)) {
    const std::size_t m = vertices.size();
    if (m < 4 || m % 2 != 0) throw ConfigError("convex body needs an even vertex count >= 4");
    double scale = 0.0;
    for (const auto& p : vertices) scale = std::max(scale, p.norm());
    for (std::size_t i = 0; i < m; ++i) {
        if (cross2(vertices[i], vertices[(i + 1) % m]) <= 0.0)
            throw ConfigError("convex body vertices must be ccw around the interior origin");
        if ((vertices[(i + m / 2) % m] + vertices[i]).norm() > 1e-9 * scale)
            throw ConfigError("convex body must be centrally symmetric");
    }
}

double ConvexBody2::area() const {
    double acc = 0.0;
    const std::size_t m = vertices.size();
    for (std::size_t i = 0; i < m; ++i) acc += cross2(vertices[i], vertices[(i + 1) % m]);
    return 0.5 * acc;
}

double Ellipse2::area() const { return M_PI / std::sqrt(G.determinant()); }

ConvexBody2 unit_ball(const Seminorm2& s, int n_verts) {
    if (n_verts < 4 || n_verts % 2 != 0) throw ConfigError("unit ball resolution must be even and >= 4");
    if (s.degenerate()) throw DegenerateSeminorm();
    std::vector<Vec2> verts(n_verts);
    const int half = n_verts / 2;
    for (int k = 0; k < half; ++k) {
        const double t = 2.0 * M_PI * k / n_verts;
        const Vec2 u(std::cos(t), std::sin(t));
        const double r = s(u);
        if (!(r > 0.0)) throw DegenerateSeminorm();
        verts[k] = u / r;
        verts[k + half] = -verts[k];  // exact central symmetry
    }
    return ConvexBody2(std::move(verts));
}

ConvexBody2 polar_body(const ConvexBody2& K) {
    const std::size_t m = K.size();
    std::vector<Vec2> raw(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = K.vertices[i];
        const Vec2& b = K.vertices[(i + 1) % m];
        const double d = cross2(a, b);
        raw[i] = Vec2(b.y() - a.y(), a.x() - b.x()) / d;
        scale = std::max(scale, raw[i].norm());
    }
    // collapse the duplicate functionals produced by collinear source edges;
    // duplicates appear in exactly mirrored runs, so symmetry survives
    std::vector<Vec2> out;
    for (const auto& v : raw)
        if (out.empty() || (v - out.back()).norm() > 1e-10 * scale) out.push_back(v);
    while (out.size() > 4 && (out.back() - out.front()).norm() <= 1e-10 * scale) out.pop_back();
    return ConvexBody2(std::move(out));
}

Parallelogram2 min_circumscribed_parallelogram(const ConvexBody2& K) {
    // K inside {|<a,x>|<=1, |<b,x>|<=1} iff a and b lie in the polar body;
    // the area 4/|det(a,b)| is minimized at a polar vertex pair.
    const ConvexBody2 P = polar_body(K);
    const std::size_t m = P.size();
    double best = 0.0;
    Vec2 ba = Vec2::Zero(), bb = Vec2::Zero();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double d = std::abs(cross2(P.vertices[i], P.vertices[j]));
            if (d > best) {
                best = d;
                ba = P.vertices[i];
                bb = P.vertices[j];
            }
        }
    }
    if (!(best > 0.0)) throw ConfigError("flat body has no circumscribed parallelogram");
    Parallelogram2 out;
    out.a = ba;
    out.b = bb;
    out.area = 4.0 / best;
    Mat2 M;
    M.row(0) = ba.transpose();
    M.row(1) = bb.transpose();
    const Mat2 Minv = M.inverse();
    out.corners[0] = Minv * Vec2(1, 1);
    out.corners[1] = Minv * Vec2(-1, 1);
    out.corners[2] = Minv * Vec2(-1, -1);
    out.corners[3] = Minv * Vec2(1, -1);
    if (cross2(out.corners[1] - out.corners[0], out.corners[2] - out.corners[0]) < 0)
        std::swap(out.corners[1], out.corners[3]);
    return out;
}

Ellipse2 max_inscribed_ellipse(const ConvexBody2& K, int max_iters) {
    // maximize log det H subject to eta' H eta <= 1 for every edge functional
    // eta of K; the ellipse is {x : x' H^{-1} x <= 1}. Barrier Newton in the
    // three free entries of H.
    const ConvexBody2 polar = polar_body(K);
    const auto& etas = polar.vertices;

    double r_in = std::numeric_limits<double>::infinity();
    for (const auto& e : etas) r_in = std::min(r_in, 1.0 / e.norm());

    Eigen::Vector3d h(0.81 * r_in * r_in, 0.0, 0.81 * r_in * r_in);
    auto as_mat = [](const Eigen::Vector3d& v) {
        Mat2 H;
        H << v[0], v[1], v[1], v[2];
        return H;
    };
    const Mat2 E[3] = {(Mat2() << 1, 0, 0, 0).finished(), (Mat2() << 0, 1, 1, 0).finished(),
                       (Mat2() << 0, 0, 0, 1).finished()};
    auto feasible = [&](const Eigen::Vector3d& v) {
        const Mat2 H = as_mat(v);
        if (!(H(0, 0) > 0.0 && H.determinant() > 0.0)) return false;
        for (const auto& e : etas)
            if (e.dot(H * e) >= 1.0) return false;
        return true;
    };
    if (!feasible(h)) throw NonConvergence("inscribed ellipse: infeasible start");

    auto objective = [&](const Eigen::Vector3d& v, double mu) {
        const Mat2 H = as_mat(v);
        double f = -std::log(H.determinant());
        for (const auto& e : etas) f -= mu * std::log(1.0 - e.dot(H * e));
        return f;
    };

    int iters = 0;
    for (double mu = 1.0; mu > 1e-12; mu *= 0.2) {
        for (int step = 0; step < 60; ++step) {
            if (++iters > max_iters) throw NonConvergence("inscribed ellipse: iteration budget exceeded");
            const Mat2 H = as_mat(h);
            const Mat2 Hinv = H.inverse();
            Eigen::Vector3d g(-Hinv(0, 0), -2.0 * Hinv(0, 1), -Hinv(1, 1));
            Eigen::Matrix3d Hess;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) Hess(a, b) = (Hinv * E[a] * Hinv * E[b]).trace();
            for (const auto& e : etas) {
                const Eigen::Vector3d q(e.x() * e.x(), 2.0 * e.x() * e.y(), e.y() * e.y());
                const double slack = 1.0 - e.dot(H * e);
                g += (mu / slack) * q;
                Hess += (mu / (slack * slack)) * q * q.transpose();
            }
            const Eigen::Vector3d dh = Hess.ldlt().solve(-g);
            if (!dh.allFinite()) throw NonConvergence("inscribed ellipse: singular newton system");
            double t = 1.0;
            const double f0 = objective(h, mu);
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                const Eigen::Vector3d cand = h + t * dh;
                if (feasible(cand) && objective(cand, mu) < f0) {
                    h = cand;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved || dh.norm() < 1e-14 * (1.0 + h.norm())) break;
        }
    }

    const Mat2 H = as_mat(h);
    Ellipse2 out;
    out.G = H.inverse();
    out.G = 0.5 * (out.G + out.G.transpose()).eval();
    return out;
}

}  // namespace plateau
