#include "plateau/volume.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

#include "plateau/error.hpp"
#include "plateau/mesh.hpp"
#include "plateau/rng.hpp"

namespace plateau {

std::string volume_name(VolumeDefinition mu) {
    switch (mu) {
        case VolumeDefinition::Busemann: return "busemann";
        case VolumeDefinition::HolmesThompson: return "holmes-thompson";
        case VolumeDefinition::MassStar: return "mass-star";
        case VolumeDefinition::InscribedEllipse: return "inscribed-ellipse";
    }
    return "?";
}

VolumeDefinition volume_from_name(const std::string& name) {
    for (VolumeDefinition mu : kAllVolumes)
        if (volume_name(mu) == name) return mu;
    throw ConfigError("unknown volume definition: " + name);
}

double mu_jacobian_polygonal(VolumeDefinition mu, const Seminorm2& s, int ball_verts) {
    const ConvexBody2 ball = unit_ball(s, ball_verts);
    switch (mu) {
        case VolumeDefinition::Busemann:
            return M_PI / ball.area();
        case VolumeDefinition::HolmesThompson:
            return polar_body(ball).area() / M_PI;
        case VolumeDefinition::MassStar:
            return 4.0 / min_circumscribed_parallelogram(ball).area;
        case VolumeDefinition::InscribedEllipse:
            return M_PI / max_inscribed_ellipse(ball).area();
    }
    return 0.0;
}

double norm_constant(VolumeDefinition mu, const NormDescriptor& n, int ball_verts) {
    if (n.is_inner_product() && n.is_euclidean()) return 1.0;
    if (n.is_inner_product()) return std::sqrt(n.gram().determinant());

    struct Key {
        std::uint64_t norm_key;
        int mu;
        int verts;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return k.norm_key ^ (static_cast<std::size_t>(k.mu) << 1) ^
                   (static_cast<std::size_t>(k.verts) << 8);
        }
    };
    static std::mutex mutex;
    static std::unordered_map<Key, double, KeyHash> cache;

    const Key key{n.cache_key(), static_cast<int>(mu), ball_verts};
    {
        std::lock_guard<std::mutex> lock(mutex);
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    // polygon balls are exact polygonal bodies; no resampling needed
    double value;
    if (std::holds_alternative<PolygonBall>(n.variant())) {
        const ConvexBody2 ball(n.polygon_vertices());
        switch (mu) {
            case VolumeDefinition::Busemann: value = M_PI / ball.area(); break;
            case VolumeDefinition::HolmesThompson: value = polar_body(ball).area() / M_PI; break;
            case VolumeDefinition::MassStar: value = 4.0 / min_circumscribed_parallelogram(ball).area; break;
            default: value = M_PI / max_inscribed_ellipse(ball).area(); break;
        }
    } else {
        value = mu_jacobian_polygonal(mu, Seminorm2(Mat2::Identity(), n), ball_verts);
    }
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, value);
    return value;
}

double mu_jacobian(VolumeDefinition mu, const Seminorm2& s) {
    if (s.degenerate()) return 0.0;
    return std::abs(s.A.determinant()) * norm_constant(mu, s.base);
}

QuasiConvexityReport quasi_convexity_test(VolumeDefinition mu, const Mat2& L,
                                          const NormDescriptor& norm, int trials, int mesh_level,
                                          std::uint64_t seed) {
    if (std::abs(L.determinant()) <= 0.0) throw ConfigError("quasi-convexity test needs injective L");
    const DiscMesh mesh = make_disc_mesh(mesh_level);
    const auto boundary = mesh.boundary_mask();

    std::vector<Mat2> z_inv(mesh.num_triangles());
    std::vector<double> tri_area(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        Mat2 Z;
        Z.col(0) = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
        Z.col(1) = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
        z_inv[t] = Z.inverse();
        tri_area[t] = mesh.triangle_area(t);
    }
    const double c_mu = norm_constant(mu, norm);
    auto volume_of = [&](const std::vector<Vec2>& images) {
        double acc = 0.0;
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const auto& tri = mesh.triangles[t];
            Mat2 X;
            X.col(0) = images[tri[1]] - images[tri[0]];
            X.col(1) = images[tri[2]] - images[tri[0]];
            acc += tri_area[t] * std::abs((X * z_inv[t]).determinant()) * c_mu;
        }
        return acc;
    };

    std::vector<Vec2> base_images(mesh.num_vertices());
    for (int i = 0; i < mesh.num_vertices(); ++i) base_images[i] = L * mesh.vertices[i];
    QuasiConvexityReport report;
    report.trials = trials;
    report.base_volume = volume_of(base_images);
    report.tolerance = 1e-3 * report.base_volume;
    report.min_margin = std::numeric_limits<double>::infinity();

    Rng rng(seed);
    const double h = 1.0 / (1 << mesh_level);
    std::vector<Vec2> images(mesh.num_vertices());
    for (int trial = 0; trial < trials; ++trial) {
        const double amplitude = h * (0.05 + 0.9 * rng.uniform());
        for (int i = 0; i < mesh.num_vertices(); ++i) {
            images[i] = base_images[i];
            if (!boundary[i]) images[i] += amplitude * Vec2(rng.normal(), rng.normal());
        }
        const double margin = volume_of(images) - report.base_volume;
        report.min_margin = std::min(report.min_margin, margin);
        if (margin < -report.tolerance) ++report.violations;
    }
    if (trials == 0) report.min_margin = 0.0;
    return report;
}

}  // namespace plateau
