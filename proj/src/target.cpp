#include "plateau/target.hpp"

#include <cmath>

#include "plateau/error.hpp"

namespace plateau {

namespace {

Mat2 psd_sqrt(const Mat2& G) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(G);
    Vec2 lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Vec2 as_vec2(const TargetPoint& p) { return Vec2(p.x[0], p.x[1]); }

}  // namespace

TargetSpace::TargetSpace(Variant v) : v_(std::move(v)) {
    if (const auto* e = std::get_if<EuclideanTarget>(&v_)) {
        if (e->dim < 2) throw ConfigError("euclidean target needs dim >= 2");
    } else if (const auto* c = std::get_if<ConeTarget>(&v_)) {
        if (!(c->r > 0.0 && c->r <= 1.0)) throw ConfigError("cone parameter must lie in (0, 1]");
    } else if (const auto* b = std::get_if<BiDiscTarget>(&v_)) {
        if (!(b->lambda > 0.0)) throw ConfigError("bi-disc scale must be positive");
    }
}

int TargetSpace::chart_dim() const {
    if (const auto* e = std::get_if<EuclideanTarget>(&v_)) return e->dim;
    return 2;
}

std::string TargetSpace::describe() const {
    if (const auto* n = std::get_if<NormedPlaneTarget>(&v_)) return "normed-plane(" + n->norm.describe() + ")";
    if (const auto* e = std::get_if<EuclideanTarget>(&v_)) return "euclidean(" + std::to_string(e->dim) + ")";
    if (const auto* c = std::get_if<ConeTarget>(&v_)) return "cone(r=" + std::to_string(c->r) + ")";
    const auto* b = std::get_if<BiDiscTarget>(&v_);
    return "bi-disc(" + b->norm.describe() + ", lambda=" + std::to_string(b->lambda) + ")";
}

Vec2 TargetSpace::cone_to_chart(double t, double phi) const {
    const double r = std::get<ConeTarget>(v_).r;
    return t * r * Vec2(std::cos(phi / r), std::sin(phi / r));
}

std::array<double, 2> TargetSpace::cone_from_chart(const Vec2& p) const {
    const double r = std::get<ConeTarget>(v_).r;
    const double t = p.norm() / r;
    double phi = (t > 0.0) ? r * std::atan2(p.y(), p.x()) : 0.0;
    if (phi < 0) phi += 2.0 * M_PI * r;
    return {t, phi};
}

namespace {

double cone_distance(double r, double t1, double phi1, double t2, double phi2) {
    double dphi = std::abs(phi1 - phi2);
    const double total = 2.0 * M_PI * r;
    dphi = std::min(dphi, total - dphi);
    if (dphi <= M_PI)
        return std::sqrt(std::max(0.0, t1 * t1 + t2 * t2 - 2.0 * t1 * t2 * std::cos(dphi)));
    return t1 + t2;
}

}  // namespace

double TargetSpace::distance(const TargetPoint& a, const TargetPoint& b) const {
    if (const auto* n = std::get_if<NormedPlaneTarget>(&v_)) return n->norm(as_vec2(a) - as_vec2(b));
    if (const auto* e = std::get_if<EuclideanTarget>(&v_)) {
        if (static_cast<int>(a.x.size()) != e->dim || static_cast<int>(b.x.size()) != e->dim)
            throw DomainError("point dimension mismatch");
        double acc = 0.0;
        for (int i = 0; i < e->dim; ++i) acc += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
        return std::sqrt(acc);
    }
    if (const auto* c = std::get_if<ConeTarget>(&v_)) {
        const double total = 2.0 * M_PI * c->r;
        if (a.x[0] < 0 || b.x[0] < 0 || a.x[1] < 0 || a.x[1] >= total || b.x[1] < 0 || b.x[1] >= total)
            throw DomainError("cone point outside (t >= 0, phi in [0, 2*pi*r))");
        return cone_distance(c->r, a.x[0], a.x[1], b.x[0], b.x[1]);
    }

    const auto& bd = std::get<BiDiscTarget>(v_);
    auto chart_metric = [&](int chart, const Vec2& u, const Vec2& v) {
        return chart == 1 ? bd.norm(u - v) : bd.lambda * (u - v).norm();
    };
    const Vec2 pa = as_vec2(a), pb = as_vec2(b);
    if (pa.norm() > 1.0 + 1e-12 || pb.norm() > 1.0 + 1e-12)
        throw DomainError("bi-disc chart point outside the closed disc");

    // diagnostic-grade quotient estimate: direct within a chart, plus
    // relaxations through sampled gluing points
    constexpr int kGlue = 256;
    std::vector<Vec2> glue(kGlue);
    for (int k = 0; k < kGlue; ++k) {
        const double t = 2.0 * M_PI * k / kGlue;
        glue[k] = Vec2(std::cos(t), std::sin(t));
    }
    double best = std::numeric_limits<double>::infinity();
    if (a.chart == b.chart) best = chart_metric(a.chart, pa, pb);
    const int other_a = (a.chart == 1) ? 2 : 1;
    // one crossing
    if (a.chart != b.chart) {
        for (const auto& g : glue)
            best = std::min(best, chart_metric(a.chart, pa, g) + chart_metric(b.chart, g, pb));
    } else {
        // two crossings: excursion through the other chart
        for (int i = 0; i < kGlue; ++i)
            for (int j = 0; j < kGlue; ++j)
                best = std::min(best, chart_metric(a.chart, pa, glue[i]) +
                                          chart_metric(other_a, glue[i], glue[j]) +
                                          chart_metric(a.chart, glue[j], pb));
    }
    return best;
}

Seminorm2 TargetSpace::seminorm_from_chart(const std::array<Vec2, 3>& domain, const double* q0,
                                           const double* q1, const double* q2, int chart) const {
    Mat2 Z;
    Z.col(0) = domain[1] - domain[0];
    Z.col(1) = domain[2] - domain[0];
    const double dz = Z.determinant();
    if (std::abs(dz) < 1e-15) throw ConfigError("degenerate domain triangle");
    const Mat2 z_inv = Z.inverse();

    if (const auto* n = std::get_if<NormedPlaneTarget>(&v_)) {
        Mat2 X;
        X.col(0) = Vec2(q1[0] - q0[0], q1[1] - q0[1]);
        X.col(1) = Vec2(q2[0] - q0[0], q2[1] - q0[1]);
        return Seminorm2(X * z_inv, n->norm);
    }
    if (const auto* e = std::get_if<EuclideanTarget>(&v_)) {
        Eigen::MatrixXd Q(e->dim, 2);
        for (int i = 0; i < e->dim; ++i) {
            Q(i, 0) = q1[i] - q0[i];
            Q(i, 1) = q2[i] - q0[i];
        }
        const Eigen::MatrixXd L = Q * z_inv;
        return Seminorm2(psd_sqrt(L.transpose() * L), NormDescriptor::euclidean());
    }
    if (const auto* c = std::get_if<ConeTarget>(&v_)) {
        // secant map of the graph embedding p -> (p, k|p|)
        const double k = std::sqrt(1.0 - c->r * c->r) / c->r;
        Eigen::Matrix<double, 3, 3> emb;
        const double* qs[3] = {q0, q1, q2};
        for (int i = 0; i < 3; ++i) {
            const Vec2 p(qs[i][0], qs[i][1]);
            emb.col(i) = Eigen::Vector3d(p.x(), p.y(), k * p.norm());
        }
        Eigen::Matrix<double, 3, 2> Q;
        Q.col(0) = emb.col(1) - emb.col(0);
        Q.col(1) = emb.col(2) - emb.col(0);
        const Eigen::Matrix<double, 3, 2> L = Q * z_inv;
        return Seminorm2(psd_sqrt(L.transpose() * L), NormDescriptor::euclidean());
    }

    const auto& bd = std::get<BiDiscTarget>(v_);
    Mat2 X;
    X.col(0) = Vec2(q1[0] - q0[0], q1[1] - q0[1]);
    X.col(1) = Vec2(q2[0] - q0[0], q2[1] - q0[1]);
    if (chart == 1) return Seminorm2(X * z_inv, bd.norm);
    return Seminorm2(bd.lambda * X * z_inv, NormDescriptor::euclidean());
}

double TargetSpace::chart_distance(const double* a, const double* b, int chart_a,
                                   int chart_b) const {
    if (const auto* c = std::get_if<ConeTarget>(&v_)) {
        const auto ta = cone_from_chart(Vec2(a[0], a[1]));
        const auto tb = cone_from_chart(Vec2(b[0], b[1]));
        return cone_distance(c->r, ta[0], ta[1], tb[0], tb[1]);
    }
    const int dim = chart_dim();
    TargetPoint pa, pb;
    pa.x.assign(a, a + dim);
    pb.x.assign(b, b + dim);
    pa.chart = chart_a;
    pb.chart = chart_b;
    return distance(pa, pb);
}

Seminorm2 TargetSpace::triangle_seminorm(const std::array<Vec2, 3>& domain,
                                         const std::array<TargetPoint, 3>& images) const {
    if (images[0].chart != images[1].chart || images[0].chart != images[2].chart)
        throw ChartStraddle();
    if (is_cone()) {
        std::array<Vec2, 3> p;
        for (int i = 0; i < 3; ++i) p[i] = cone_to_chart(images[i].x[0], images[i].x[1]);
        return seminorm_from_chart(domain, p[0].data(), p[1].data(), p[2].data(), 1);
    }
    return seminorm_from_chart(domain, images[0].x.data(), images[1].x.data(),
                               images[2].x.data(), images[0].chart);
}

JordanBoundary::JordanBoundary(TargetSpace target, std::vector<TargetPoint> polyline)
    : target_(std::move(target)), points_(std::move(polyline)) {
    if (points_.size() < 3) throw InfeasibleBoundary("boundary polyline needs >= 3 points");
    chart_ = points_.front().chart;
    for (const auto& p : points_)
        if (p.chart != chart_) throw InfeasibleBoundary("boundary polyline must stay in one chart");

    // constant-speed parametrization by target arclength (chart distances,
    // so cone polylines live in the developed chart)
    cumulative_.resize(points_.size() + 1);
    cumulative_[0] = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& a = points_[i];
        const auto& b = points_[(i + 1) % points_.size()];
        cumulative_[i + 1] =
            cumulative_[i] + target_.chart_distance(a.x.data(), b.x.data(), a.chart, b.chart);
    }
    length_ = cumulative_.back();
    if (!(length_ > 0.0)) throw ZeroLength();
}

std::pair<int, double> JordanBoundary::segment_at(double t) const {
    double s = std::fmod(t, 2.0 * M_PI);
    if (s < 0) s += 2.0 * M_PI;
    const double arc = s * length_ / (2.0 * M_PI);
    int lo = 0, hi = static_cast<int>(points_.size());
    while (lo + 1 < hi) {
        const int mid = (lo + hi) / 2;
        if (cumulative_[mid] <= arc)
            lo = mid;
        else
            hi = mid;
    }
    const double seg_len = cumulative_[lo + 1] - cumulative_[lo];
    const double frac = seg_len > 0 ? (arc - cumulative_[lo]) / seg_len : 0.0;
    return {lo, frac};
}

TargetPoint JordanBoundary::point_at(double t) const {
    const auto [seg, frac] = segment_at(t);
    const auto& a = points_[seg];
    const auto& b = points_[(seg + 1) % points_.size()];
    TargetPoint out;
    out.chart = chart_;
    out.x.resize(a.x.size());
    for (std::size_t i = 0; i < a.x.size(); ++i) out.x[i] = a.x[i] + frac * (b.x[i] - a.x[i]);
    return out;
}

std::vector<double> JordanBoundary::tangent_at(double t) const {
    auto [seg, frac] = segment_at(t);
    if (frac >= 1.0 - 1e-15) {
        seg = (seg + 1) % static_cast<int>(points_.size());
        frac = 0.0;
    }
    const auto& a = points_[seg];
    const auto& b = points_[(seg + 1) % points_.size()];
    const double seg_len = cumulative_[seg + 1] - cumulative_[seg];
    std::vector<double> d(a.x.size(), 0.0);
    if (seg_len <= 0.0) return d;
    // chain rule through arclength: dx/dt = (dx/ds) * (L / 2pi)
    const double rate = length_ / (2.0 * M_PI) / seg_len;
    for (std::size_t i = 0; i < a.x.size(); ++i) d[i] = (b.x[i] - a.x[i]) * rate;
    return d;
}

bool JordanBoundary::injective_polyline() const {
    if (points_.front().x.size() != 2) return true;  // only checked for planar charts
    const auto seg = [&](std::size_t i) {
        return std::pair<Vec2, Vec2>(as_vec2(points_[i]), as_vec2(points_[(i + 1) % points_.size()]));
    };
    auto crosses = [](const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
        auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
            const double v = (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
            return (v > 1e-14) ? 1 : (v < -1e-14 ? -1 : 0);
        };
        const int o1 = orient(a, b, c), o2 = orient(a, b, d);
        const int o3 = orient(c, d, a), o4 = orient(c, d, b);
        return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
    };
    const std::size_t n = points_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent around the seam
            const auto [a, b] = seg(i);
            const auto [c, d] = seg(j);
            if (crosses(a, b, c, d)) return false;
        }
    return true;
}

}  // namespace plateau
