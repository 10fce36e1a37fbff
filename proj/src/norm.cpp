#include "plateau/norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "plateau/error.hpp"

namespace plateau {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

void validate_polygon(const PolygonBall& pb) {
    const auto& v = pb.vertices;
    const std::size_t m = v.size();
    if (m < 4 || m % 2 != 0) throw ConfigError("polygon ball needs an even vertex count >= 4");
    double scale = 0.0;
    for (const auto& p : v) scale = std::max(scale, p.norm());
    if (scale <= 0.0) throw ConfigError("polygon ball vertices are all zero");
    for (std::size_t i = 0; i < m; ++i) {
        // origin strictly inside and vertices in strictly convex ccw position
        if (cross2(v[i], v[(i + 1) % m]) <= 1e-14 * scale * scale)
            throw ConfigError("polygon ball vertices must be ccw with the origin strictly inside");
        const Vec2 e0 = v[(i + 1) % m] - v[i];
        const Vec2 e1 = v[(i + 2) % m] - v[(i + 1) % m];
        if (cross2(e0, e1) <= 1e-14 * scale * scale)
            throw ConfigError("polygon ball vertices must be in strictly convex position");
        if ((v[(i + m / 2) % m] + v[i]).norm() > 1e-9 * scale)
            throw ConfigError("polygon ball must be centrally symmetric");
    }
}

std::vector<Vec2> compute_polar_vertices(const std::vector<Vec2>& v) {
    // For edge (v_i, v_{i+1}) the functional eta with <eta, v_i> = <eta, v_{i+1}> = 1.
    const std::size_t m = v.size();
    std::vector<Vec2> eta(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = v[i];
        const Vec2& b = v[(i + 1) % m];
        const double d = cross2(a, b);
        eta[i] = Vec2(b.y() - a.y(), a.x() - b.x()) / d;
    }
    return eta;
}

}  // namespace

NormDescriptor::NormDescriptor(Variant v) : v_(std::move(v)) {
    if (const auto* pn = std::get_if<PNorm>(&v_)) {
        if (!(pn->p >= 1.0)) throw ConfigError("p-norm requires p >= 1");
    } else if (const auto* pb = std::get_if<PolygonBall>(&v_)) {
        validate_polygon(*pb);
        polar_vertices_ = compute_polar_vertices(pb->vertices);
    } else if (auto* eb = std::get_if<EllipseBall>(&v_)) {
        eb->G = 0.5 * (eb->G + eb->G.transpose()).eval();
        if (!(eb->G(0, 0) > 0.0 && eb->G.determinant() > 0.0))
            throw ConfigError("ellipse ball matrix must be positive definite");
    }
}

NormDescriptor NormDescriptor::linf() {
    return polygon({Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1), Vec2(-1, -1)});
}

NormDescriptor NormDescriptor::l1() {
    return polygon({Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)});
}

double NormDescriptor::evaluate(const Vec2& w) const {
    if (std::holds_alternative<EuclideanNorm>(v_)) return w.norm();
    if (const auto* pn = std::get_if<PNorm>(&v_)) {
        const double ax = std::abs(w.x()), ay = std::abs(w.y());
        if (pn->p == 1.0) return ax + ay;
        if (pn->p == 2.0) return w.norm();
        const double m = std::max(ax, ay);
        if (m == 0.0) return 0.0;
        return m * std::pow(std::pow(ax / m, pn->p) + std::pow(ay / m, pn->p), 1.0 / pn->p);
    }
    if (std::holds_alternative<PolygonBall>(v_)) {
        double best = 0.0;
        for (const auto& eta : polar_vertices_) best = std::max(best, w.dot(eta));
        return best;
    }
    const auto& G = std::get<EllipseBall>(v_).G;
    return std::sqrt(std::max(0.0, w.dot(G * w)));
}

Vec2 NormDescriptor::subgradient(const Vec2& w) const {
    const double n = evaluate(w);
    if (n <= 0.0) return Vec2::Zero();
    if (std::holds_alternative<EuclideanNorm>(v_)) return w / n;
    if (const auto* pn = std::get_if<PNorm>(&v_)) {
        const double p = pn->p;
        auto comp = [&](double x) {
            if (x == 0.0) return 0.0;
            return (x > 0 ? 1.0 : -1.0) * std::pow(std::abs(x) / n, p - 1.0);
        };
        return Vec2(comp(w.x()), comp(w.y()));
    }
    if (std::holds_alternative<PolygonBall>(v_)) {
        std::size_t best = 0;
        double bv = -1.0;
        for (std::size_t j = 0; j < polar_vertices_.size(); ++j) {
            const double d = w.dot(polar_vertices_[j]);
            if (d > bv) {
                bv = d;
                best = j;
            }
        }
        return polar_vertices_[best];
    }
    const auto& G = std::get<EllipseBall>(v_).G;
    return (G * w) / n;
}

bool NormDescriptor::is_inner_product() const {
    return std::holds_alternative<EuclideanNorm>(v_) || std::holds_alternative<EllipseBall>(v_) ||
           (std::holds_alternative<PNorm>(v_) && std::get<PNorm>(v_).p == 2.0);
}

Mat2 NormDescriptor::gram() const {
    if (const auto* eb = std::get_if<EllipseBall>(&v_)) return eb->G;
    if (is_inner_product()) return Mat2::Identity();
    throw ConfigError("gram() requires an inner-product norm");
}

std::vector<double> NormDescriptor::kink_angles(const Mat2& A) const {
    std::vector<double> out;
    auto push_pair = [&out](double c, double s) {
        // directions (c, s) and its opposite
        double t = std::atan2(s, c);
        out.push_back(t);
        out.push_back(t > 0 ? t - M_PI : t + M_PI);
    };
    if (std::holds_alternative<PNorm>(v_)) {
        // component zeros of A u(theta)
        for (int r = 0; r < 2; ++r) {
            const double a = A(r, 0), b = A(r, 1);
            if (a == 0.0 && b == 0.0) continue;
            push_pair(b, -a);
        }
    } else if (std::holds_alternative<PolygonBall>(v_)) {
        // switch angles of the active functional: edge normals of {A' eta_j}
        const std::size_t m = polar_vertices_.size();
        std::vector<Vec2> w(m);
        for (std::size_t j = 0; j < m; ++j) w[j] = A.transpose() * polar_vertices_[j];
        const double det = A.determinant();
        const double scale = A.norm();
        if (std::abs(det) <= 1e-14 * scale * scale) {
            // collinear functionals: kinks where the dominant one changes sign
            Vec2 far = Vec2::Zero();
            for (const auto& x : w)
                if (x.norm() > far.norm()) far = x;
            if (far.norm() > 0) push_pair(-far.y(), far.x());
        } else {
            for (std::size_t j = 0; j < m; ++j) {
                const Vec2 e = w[(j + 1) % m] - w[j];
                if (e.norm() == 0.0) continue;
                push_pair(e.y(), -e.x());
            }
        }
    } else {
        // inner-product norms: smooth except across ker A
        const double det = A.determinant();
        const double scale = A.norm();
        if (scale > 0 && std::abs(det) <= 1e-14 * scale * scale) {
            Eigen::JacobiSVD<Mat2> svd(A, Eigen::ComputeFullV);
            const Vec2 n = svd.matrixV().col(1);
            push_pair(n.x(), n.y());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string NormDescriptor::describe() const {
    if (std::holds_alternative<EuclideanNorm>(v_)) return "euclidean";
    if (const auto* pn = std::get_if<PNorm>(&v_)) return "pnorm(" + std::to_string(pn->p) + ")";
    if (const auto* pb = std::get_if<PolygonBall>(&v_))
        return "polygon(" + std::to_string(pb->vertices.size()) + ")";
    return "ellipse";
}

std::uint64_t NormDescriptor::cache_key() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
    };
    const std::uint64_t tag = v_.index();
    mix(&tag, sizeof(tag));
    if (const auto* pn = std::get_if<PNorm>(&v_)) {
        mix(&pn->p, sizeof(double));
    } else if (const auto* pb = std::get_if<PolygonBall>(&v_)) {
        for (const auto& p : pb->vertices) {
            const double xy[2] = {p.x(), p.y()};
            mix(xy, sizeof(xy));
        }
    } else if (const auto* eb = std::get_if<EllipseBall>(&v_)) {
        const double g[3] = {eb->G(0, 0), eb->G(0, 1), eb->G(1, 1)};
        mix(g, sizeof(g));
    }
    return h;
}

}  // namespace plateau
