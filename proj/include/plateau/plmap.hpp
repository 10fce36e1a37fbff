#pragma once

#include <memory>
#include <optional>

#include "plateau/mesh.hpp"
#include "plateau/target.hpp"
#include "plateau/volume.hpp"

namespace plateau {

struct QcReport {
    std::vector<double> per_triangle;  // +inf entries mark degenerate-anisotropic triangles
    double max_q = 1.0;                // over non-degenerate triangles
    double q25 = 1.0, median = 1.0, q75 = 1.0, q90 = 1.0;  // area-weighted
    double degenerate_area_fraction = 0.0;
    int degenerate_count = 0;
};

struct CourantLebesgueResult {
    double r_star = 0.0;
    double arc_length = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct HolderFitResult {
    double alpha_hat = 0.0;
    double constant_hat = 0.0;  // envelope constant L in d <= L * h^alpha
    double rmse = 0.0;
    std::vector<double> separations;
    std::vector<double> envelopes;
};

struct TraceCurve {
    std::vector<TargetPoint> points;
    double length = 0.0;
};

// Piecewise-linear map from a triangulated disc into a target space. Images
// are chart coordinates, `charts` is used by the bi-disc target only.
class PLMap {
  public:
    PLMap(std::shared_ptr<const DiscMesh> mesh, TargetSpace target, std::vector<double> images,
          std::vector<int> charts = {});

    const DiscMesh& mesh() const { return *mesh_; }
    std::shared_ptr<const DiscMesh> mesh_ptr() const { return mesh_; }
    const TargetSpace& target() const { return target_; }
    int image_dim() const { return dim_; }
    const std::vector<double>& images() const { return images_; }
    const std::vector<int>& charts() const { return charts_; }

    TargetPoint vertex_point(int i) const;
    TargetPoint evaluate(const Vec2& z) const;
    int locate_triangle(const Vec2& z) const;

    const Seminorm2& triangle_seminorm(int t) const;

    double energy_plus() const;
    double energy_ks() const;
    double area_mu(VolumeDefinition mu) const;

    QcReport qc_report() const;
    CourantLebesgueResult courant_lebesgue(const Vec2& z0, double delta) const;
    HolderFitResult holder_fit(const Vec2& center, double radius, std::uint64_t seed = 7,
                               int bins = 6, int samples_per_bin = 600) const;
    PLMap refine() const;
    TraceCurve trace_curve() const;

  private:
    std::shared_ptr<const DiscMesh> mesh_;
    TargetSpace target_;
    int dim_;
    std::vector<double> images_;  // num_vertices * dim
    std::vector<int> charts_;

    mutable std::vector<Seminorm2> seminorms_;
    mutable std::vector<bool> seminorm_ready_;
    mutable std::unique_ptr<PointLocator> locator_;
    const PointLocator& locator() const;
};

std::string map_to_json(const PLMap& map);
PLMap map_from_json(const std::string& text);

}  // namespace plateau
