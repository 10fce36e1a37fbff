#include "plateau/plmap.hpp"

#include <algorithm>
#include <cmath>

#include "plateau/error.hpp"
#include "plateau/rng.hpp"

namespace plateau {

PLMap::PLMap(std::shared_ptr<const DiscMesh> mesh, TargetSpace target, std::vector<double> images,
             std::vector<int> charts)
    : mesh_(std::move(mesh)), target_(std::move(target)), dim_(target_.chart_dim()),
      images_(std::move(images)), charts_(std::move(charts)) {
    if (static_cast<int>(images_.size()) != mesh_->num_vertices() * dim_)
        throw ConfigError("image array size does not match mesh and target dimension");
    if (!charts_.empty() && static_cast<int>(charts_.size()) != mesh_->num_vertices())
        throw ConfigError("chart array size does not match mesh");
    seminorms_.resize(mesh_->num_triangles());
    seminorm_ready_.assign(mesh_->num_triangles(), false);
}

TargetPoint PLMap::vertex_point(int i) const {
    TargetPoint p;
    p.x.assign(images_.begin() + static_cast<std::ptrdiff_t>(i) * dim_,
               images_.begin() + static_cast<std::ptrdiff_t>(i + 1) * dim_);
    p.chart = charts_.empty() ? 1 : charts_[i];
    return p;
}

int PLMap::locate_triangle(const Vec2& z) const { return locator().locate(z).triangle; }

const PointLocator& PLMap::locator() const {
    if (!locator_) locator_ = std::make_unique<PointLocator>(*mesh_);
    return *locator_;
}

TargetPoint PLMap::evaluate(const Vec2& z) const {
    const auto hit = locator().locate(z);
    const auto& tri = mesh_->triangles[hit.triangle];
    TargetPoint p;
    p.chart = charts_.empty() ? 1 : charts_[tri[0]];
    p.x.assign(dim_, 0.0);
    std::array<double, 3> bary = hit.bary;
    // clamp slightly-outside queries onto the triangle
    for (double& b : bary) b = std::max(b, 0.0);
    const double sum = bary[0] + bary[1] + bary[2];
    for (double& b : bary) b /= sum;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < dim_; ++i) p.x[i] += bary[k] * images_[tri[k] * dim_ + i];
    return p;
}

const Seminorm2& PLMap::triangle_seminorm(int t) const {
    if (!seminorm_ready_[t]) {
        const auto& tri = mesh_->triangles[t];
        if (!charts_.empty() &&
            (charts_[tri[0]] != charts_[tri[1]] || charts_[tri[0]] != charts_[tri[2]]))
            throw ChartStraddle();
        std::array<Vec2, 3> dom;
        for (int k = 0; k < 3; ++k) dom[k] = mesh_->vertices[tri[k]];
        const int chart = charts_.empty() ? 1 : charts_[tri[0]];
        seminorms_[t] = target_.seminorm_from_chart(
            dom, &images_[tri[0] * dim_], &images_[tri[1] * dim_], &images_[tri[2] * dim_], chart);
        seminorm_ready_[t] = true;
    }
    return seminorms_[t];
}

double PLMap::energy_plus() const {
    double acc = 0.0;
    for (int t = 0; t < mesh_->num_triangles(); ++t)
        acc += mesh_->triangle_area(t) * i_plus(triangle_seminorm(t), 2.0);
    return acc;
}

double PLMap::energy_ks() const {
    double acc = 0.0;
    for (int t = 0; t < mesh_->num_triangles(); ++t)
        acc += mesh_->triangle_area(t) * i_avg(triangle_seminorm(t), 2.0);
    return acc;
}

double PLMap::area_mu(VolumeDefinition mu) const {
    double acc = 0.0;
    for (int t = 0; t < mesh_->num_triangles(); ++t)
        acc += mesh_->triangle_area(t) * mu_jacobian(mu, triangle_seminorm(t));
    return acc;
}

QcReport PLMap::qc_report() const {
    QcReport report;
    const int nt = mesh_->num_triangles();
    report.per_triangle.resize(nt);
    std::vector<std::pair<double, double>> weighted;  // (q, area)
    double total_area = 0.0, degenerate_area = 0.0;
    for (int t = 0; t < nt; ++t) {
        const double q = q_factor(triangle_seminorm(t));
        report.per_triangle[t] = q;
        const double w = mesh_->triangle_area(t);
        total_area += w;
        if (std::isinf(q)) {
            ++report.degenerate_count;
            degenerate_area += w;
            continue;
        }
        report.max_q = std::max(report.max_q, q);
        weighted.emplace_back(q, w);
    }
    report.degenerate_area_fraction = total_area > 0 ? degenerate_area / total_area : 0.0;
    std::sort(weighted.begin(), weighted.end());
    double covered = 0.0, live_area = total_area - degenerate_area;
    auto quantile = [&](double p) {
        double target_mass = p * live_area, acc = 0.0;
        for (const auto& [q, w] : weighted) {
            acc += w;
            if (acc >= target_mass) return q;
        }
        return weighted.empty() ? 1.0 : weighted.back().first;
    };
    (void)covered;
    if (!weighted.empty()) {
        report.q25 = quantile(0.25);
        report.median = quantile(0.5);
        report.q75 = quantile(0.75);
        report.q90 = quantile(0.9);
    }
    return report;
}

CourantLebesgueResult PLMap::courant_lebesgue(const Vec2& z0, double delta) const {
    if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
    CourantLebesgueResult out;
    out.bound = M_PI * std::sqrt(2.0 * energy_ks() / std::abs(std::log(delta)));

    std::vector<double> radii;
    const double lo = delta, hi = std::sqrt(delta);
    if (z0.norm() < 1e-12 && !mesh_->ring_radii.empty())
        for (double r : mesh_->ring_radii)
            if (r > lo && r < hi) radii.push_back(r);
    for (int k = 1; k <= 64; ++k) radii.push_back(lo + (hi - lo) * k / 65.0);

    out.arc_length = std::numeric_limits<double>::infinity();
    constexpr int kSamples = 720;
    for (double r : radii) {
        double len = 0.0;
        std::optional<TargetPoint> prev;
        bool prev_valid = false;
        for (int k = 0; k <= kSamples; ++k) {
            const double t = 2.0 * M_PI * k / kSamples;
            const Vec2 z = z0 + r * Vec2(std::cos(t), std::sin(t));
            if (z.norm() > 1.0) {  // circle leaves the disc: break the chord chain
                prev_valid = false;
                continue;
            }
            TargetPoint p = evaluate(z);
            if (prev_valid) len += target_.chart_distance(prev->x.data(), p.x.data(), prev->chart, p.chart);
            prev = std::move(p);
            prev_valid = true;
        }
        if (len < out.arc_length) {
            out.arc_length = len;
            out.r_star = r;
        }
    }
    out.pass = out.arc_length <= out.bound;
    return out;
}

HolderFitResult PLMap::holder_fit(const Vec2& center, double radius, std::uint64_t seed, int bins,
                                  int samples_per_bin) const {
    if (center.norm() + radius > 1.0 + 1e-9) throw ConfigError("fit region must lie inside the disc");
    Rng rng(seed);
    HolderFitResult out;
    std::vector<double> log_h, log_env;
    // separations stop at the resolved scale of the mesh
    std::vector<double> edges;
    for (const auto& tri : mesh_->triangles) {
        double e = 0.0;
        for (int k = 0; k < 3; ++k)
            e = std::max(e, (mesh_->vertices[tri[k]] - mesh_->vertices[tri[(k + 1) % 3]]).norm());
        edges.push_back(e);
    }
    std::nth_element(edges.begin(), edges.begin() + edges.size() / 2, edges.end());
    const double h_resolved = 1.2 * edges[edges.size() / 2];
    std::vector<double> seps;
    for (double h = 0.5 * radius; h >= h_resolved && static_cast<int>(seps.size()) < bins; h *= 0.65)
        seps.push_back(h);
    if (seps.size() < 3) throw InsufficientSamples("region too small for the mesh resolution");
    for (double h : seps) {
        std::vector<double> dists;
        for (int s = 0; s < samples_per_bin; ++s) {
            Vec2 z1, z2;
            bool ok = false;
            for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
                // log-uniform radius: keeps the envelope sensitive to the
                // behaviour at the region center, not just in the bulk
                const double lo = 1e-3 * radius;
                const double rho = lo * std::pow(radius / lo, rng.uniform());
                const double a = 2.0 * M_PI * rng.uniform();
                z1 = center + rho * Vec2(std::cos(a), std::sin(a));
                const double b2 = 2.0 * M_PI * rng.uniform();
                z2 = z1 + h * Vec2(std::cos(b2), std::sin(b2));
                ok = (z2 - center).norm() <= radius && z2.norm() <= 1.0 && z1.norm() <= 1.0;
            }
            if (!ok) continue;
            const TargetPoint p1 = evaluate(z1), p2 = evaluate(z2);
            dists.push_back(target_.chart_distance(p1.x.data(), p2.x.data(), p1.chart, p2.chart));
        }
        if (static_cast<int>(dists.size()) < 20) throw InsufficientSamples();
        std::sort(dists.begin(), dists.end());
        const double env = dists[static_cast<std::size_t>(0.95 * (dists.size() - 1))];
        out.separations.push_back(h);
        out.envelopes.push_back(env);
        if (env > 0) {
            log_h.push_back(std::log(h));
            log_env.push_back(std::log(env));
        }
    }
    if (log_h.size() < 3) throw InsufficientSamples("degenerate envelope");
    const double n = static_cast<double>(log_h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        sx += log_h[i];
        sy += log_env[i];
        sxx += log_h[i] * log_h[i];
        sxy += log_h[i] * log_env[i];
    }
    const double alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - alpha * sx) / n;
    out.alpha_hat = alpha;
    out.constant_hat = std::exp(intercept);
    double ss = 0.0;
    for (std::size_t i = 0; i < log_h.size(); ++i) {
        const double r = log_env[i] - (intercept + alpha * log_h[i]);
        ss += r * r;
    }
    out.rmse = std::sqrt(ss / n);
    return out;
}

PLMap PLMap::refine() const {
    std::vector<std::pair<int, int>> parents;
    auto fine = std::make_shared<DiscMesh>(refine_mesh(*mesh_, &parents));
    std::vector<double> images(static_cast<std::size_t>(fine->num_vertices()) * dim_);
    std::vector<int> charts;
    if (!charts_.empty()) charts.resize(fine->num_vertices());
    for (int i = 0; i < fine->num_vertices(); ++i) {
        const auto [a, b] = parents[i];
        for (int k = 0; k < dim_; ++k)
            images[i * dim_ + k] = 0.5 * (images_[a * dim_ + k] + images_[b * dim_ + k]);
        if (!charts_.empty()) charts[i] = charts_[a];
    }
    return PLMap(std::move(fine), target_, std::move(images), std::move(charts));
}

TraceCurve PLMap::trace_curve() const {
    TraceCurve out;
    for (int i : mesh_->boundary_cycle) out.points.push_back(vertex_point(i));
    const std::size_t n = out.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = out.points[i];
        const auto& b = out.points[(i + 1) % n];
        out.length += target_.chart_distance(a.x.data(), b.x.data(), a.chart, b.chart);
    }
    return out;
}

}  // namespace plateau
