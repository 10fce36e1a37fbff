#pragma once

#include <array>
#include <string>
#include <vector>

#include "plateau/norm.hpp"

namespace plateau {

// Triangulated closed unit disc. Structured meshes are concentric: ring j of
// m carries 8j vertices at radius j/m, so boundary circles are exact mesh
// circles and rotation by pi/4 is a mesh automorphism.
struct DiscMesh {
    std::vector<Vec2> vertices;
    std::vector<std::array<int, 3>> triangles;  // ccw
    std::vector<int> boundary_cycle;            // ordered, on the unit circle
    int level = 0;
    std::vector<double> ring_radii;  // structured meshes only

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    double triangle_area(int t) const;
    double total_area() const;
    std::vector<bool> boundary_mask() const;

    // throws ConfigError when an invariant fails
    void validate() const;
};

// Structured concentric mesh with 2^level rings; boundary count 8 * 2^level.
DiscMesh make_disc_mesh(int level);

// Generic 1 -> 4 subdivision; new boundary vertices are projected to the
// circle. Returns the refined mesh and, when `parent_of` is non-null, fills
// for every new vertex the pair of parent vertices it interpolates.
DiscMesh refine_mesh(const DiscMesh& mesh,
                     std::vector<std::pair<int, int>>* parent_of = nullptr);

std::string write_off(const DiscMesh& mesh);
DiscMesh read_off(const std::string& text);

// Uniform-grid point location over the mesh; query returns the containing
// triangle (or the closest one by barycentric violation) plus coordinates.
class PointLocator {
  public:
    explicit PointLocator(const DiscMesh& mesh);

    struct Hit {
        int triangle = -1;
        std::array<double, 3> bary{};
        bool inside = false;
    };
    Hit locate(const Vec2& z) const;

  private:
    const DiscMesh& mesh_;
    int cells_;
    double cell_size_;
    std::vector<std::vector<int>> bins_;
    int cell_of(double x) const;
};

}  // namespace plateau
