#include "plateau/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "plateau/error.hpp"

namespace plateau {

namespace {
double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
}

double DiscMesh::triangle_area(int t) const {
    const auto& tri = triangles[t];
    return 0.5 * cross2(vertices[tri[1]] - vertices[tri[0]], vertices[tri[2]] - vertices[tri[0]]);
}

double DiscMesh::total_area() const {
    double acc = 0.0;
    for (int t = 0; t < num_triangles(); ++t) acc += triangle_area(t);
    return acc;
}

std::vector<bool> DiscMesh::boundary_mask() const {
    std::vector<bool> mask(vertices.size(), false);
    for (int i : boundary_cycle) mask[i] = true;
    return mask;
}

void DiscMesh::validate() const {
    for (int i : boundary_cycle)
        if (std::abs(vertices[i].norm() - 1.0) > 1e-12)
            throw ConfigError("boundary vertex off the unit circle");
    for (int t = 0; t < num_triangles(); ++t)
        if (triangle_area(t) < 1e-12) throw ConfigError("degenerate or flipped triangle");

    // boundary edges (used by exactly one triangle) must form the stored cycle
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tri : triangles)
        for (int e = 0; e < 3; ++e) {
            int a = tri[e], b = tri[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_count[{a, b}]++;
        }
    std::set<std::pair<int, int>> boundary_edges;
    for (const auto& [edge, count] : edge_count) {
        if (count == 1) boundary_edges.insert(edge);
        if (count > 2) throw ConfigError("non-manifold edge");
    }
    if (boundary_edges.size() != boundary_cycle.size())
        throw ConfigError("boundary cycle does not match boundary edges");
    const int nb = static_cast<int>(boundary_cycle.size());
    for (int i = 0; i < nb; ++i) {
        int a = boundary_cycle[i], b = boundary_cycle[(i + 1) % nb];
        if (a > b) std::swap(a, b);
        if (!boundary_edges.count({a, b})) throw ConfigError("boundary cycle edge missing in mesh");
    }
}

DiscMesh make_disc_mesh(int level) {
    if (level < 0) throw ConfigError("mesh level must be >= 0");
    const int m = 1 << level;
    DiscMesh mesh;
    mesh.level = level;
    mesh.vertices.emplace_back(0.0, 0.0);
    std::vector<int> ring_start(m + 1, 0);
    for (int j = 1; j <= m; ++j) {
        ring_start[j] = mesh.num_vertices();
        const int n = 8 * j;
        const double r = static_cast<double>(j) / m;
        mesh.ring_radii.push_back(r);
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * M_PI * i / n;
            mesh.vertices.emplace_back(r * std::cos(t), r * std::sin(t));
        }
    }
    // central fan
    for (int i = 0; i < 8; ++i)
        mesh.triangles.push_back({0, ring_start[1] + i, ring_start[1] + (i + 1) % 8});
    // annuli: advance whichever ring has the smaller next angle (exact
    // integer comparison keeps the pattern rotation-equivariant)
    for (int j = 2; j <= m; ++j) {
        const int n_in = 8 * (j - 1), n_out = 8 * j;
        const int in0 = ring_start[j - 1], out0 = ring_start[j];
        int i = 0, k = 0;
        while (i < n_in || k < n_out) {
            const bool advance_out =
                k < n_out &&
                (i == n_in || static_cast<long>(k + 1) * n_in <= static_cast<long>(i + 1) * n_out);
            if (advance_out) {
                mesh.triangles.push_back({in0 + i % n_in, out0 + k % n_out, out0 + (k + 1) % n_out});
                ++k;
            } else {
                mesh.triangles.push_back({in0 + i % n_in, out0 + k % n_out, in0 + (i + 1) % n_in});
                ++i;
            }
        }
    }
    const int nb = 8 * m;
    mesh.boundary_cycle.resize(nb);
    for (int i = 0; i < nb; ++i) mesh.boundary_cycle[i] = ring_start[m] + i;
    return mesh;
}

DiscMesh refine_mesh(const DiscMesh& mesh, std::vector<std::pair<int, int>>* parent_of) {
    DiscMesh out;
    out.level = mesh.level + 1;
    out.vertices = mesh.vertices;
    if (parent_of) {
        parent_of->clear();
        for (int i = 0; i < mesh.num_vertices(); ++i) parent_of->push_back({i, i});
    }

    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = tri[e], b = tri[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_count[{a, b}]++;
        }

    std::map<std::pair<int, int>, int> midpoint;
    auto mid_of = [&](int a, int b) {
        int lo = std::min(a, b), hi = std::max(a, b);
        auto it = midpoint.find({lo, hi});
        if (it != midpoint.end()) return it->second;
        Vec2 p = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
        if (edge_count[{lo, hi}] == 1) p.normalize();  // boundary midpoints go to the circle
        const int idx = out.num_vertices();
        out.vertices.push_back(p);
        if (parent_of) parent_of->push_back({lo, hi});
        midpoint[{lo, hi}] = idx;
        return idx;
    };

    for (const auto& tri : mesh.triangles) {
        const int m01 = mid_of(tri[0], tri[1]);
        const int m12 = mid_of(tri[1], tri[2]);
        const int m20 = mid_of(tri[2], tri[0]);
        out.triangles.push_back({tri[0], m01, m20});
        out.triangles.push_back({tri[1], m12, m01});
        out.triangles.push_back({tri[2], m20, m12});
        out.triangles.push_back({m01, m12, m20});
    }

    const int nb = static_cast<int>(mesh.boundary_cycle.size());
    out.boundary_cycle.reserve(2 * nb);
    for (int i = 0; i < nb; ++i) {
        const int a = mesh.boundary_cycle[i], b = mesh.boundary_cycle[(i + 1) % nb];
        out.boundary_cycle.push_back(a);
        out.boundary_cycle.push_back(mid_of(a, b));
    }
    return out;
}

std::string write_off(const DiscMesh& mesh) {
    std::ostringstream os;
    os.precision(17);
    os << "OFF\n# level " << mesh.level << "\n";
    os << mesh.num_vertices() << " " << mesh.num_triangles() << " 0\n";
    for (const auto& v : mesh.vertices) os << v.x() << " " << v.y() << " 0\n";
    for (const auto& t : mesh.triangles) os << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    return os.str();
}

DiscMesh read_off(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    auto next_line = [&](bool required) {
        while (std::getline(is, line)) {
            const auto pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (line[pos] == '#') continue;
            return true;
        }
        if (required) throw ConfigError("truncated OFF data");
        return false;
    };

    int level = -1;
    {
        // peek comments for the level tag without consuming data lines
        std::istringstream scan(text);
        std::string l;
        while (std::getline(scan, l)) {
            const auto pos = l.find("# level ");
            if (pos != std::string::npos) level = std::stoi(l.substr(pos + 8));
        }
    }

    next_line(true);
    if (line.find("OFF") == std::string::npos) throw ConfigError("missing OFF header");
    next_line(true);
    std::istringstream counts(line);
    int nv = 0, nf = 0, ne = 0;
    counts >> nv >> nf >> ne;
    if (nv <= 0 || nf <= 0) throw ConfigError("bad OFF counts");

    DiscMesh mesh;
    mesh.level = level;
    mesh.vertices.reserve(nv);
    for (int i = 0; i < nv; ++i) {
        next_line(true);
        std::istringstream vs(line);
        double x, y, z;
        vs >> x >> y >> z;
        mesh.vertices.emplace_back(x, y);
    }
    for (int i = 0; i < nf; ++i) {
        next_line(true);
        std::istringstream fs(line);
        int k, a, b, c;
        fs >> k >> a >> b >> c;
        if (k != 3) throw ConfigError("OFF faces must be triangles");
        mesh.triangles.push_back({a, b, c});
    }

    // rebuild the boundary cycle from edges used once
    std::map<std::pair<int, int>, int> edge_count;
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            int a = tri[e], b = tri[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_count[{a, b}]++;
        }
    std::map<int, std::vector<int>> adjacency;
    for (const auto& [edge, count] : edge_count)
        if (count == 1) {
            adjacency[edge.first].push_back(edge.second);
            adjacency[edge.second].push_back(edge.first);
        }
    if (adjacency.empty()) throw ConfigError("mesh has no boundary");
    const int start = adjacency.begin()->first;
    int prev = -1, cur = start;
    do {
        mesh.boundary_cycle.push_back(cur);
        const auto& nb = adjacency[cur];
        if (nb.size() != 2) throw ConfigError("boundary is not a single cycle");
        const int nxt = (nb[0] == prev) ? nb[1] : nb[0];
        prev = cur;
        cur = nxt;
    } while (cur != start);

    // keep ccw orientation of the cycle
    double winding = 0.0;
    const int nb = static_cast<int>(mesh.boundary_cycle.size());
    for (int i = 0; i < nb; ++i)
        winding += cross2(mesh.vertices[mesh.boundary_cycle[i]],
                          mesh.vertices[mesh.boundary_cycle[(i + 1) % nb]]);
    if (winding < 0) std::reverse(mesh.boundary_cycle.begin(), mesh.boundary_cycle.end());
    return mesh;
}

PointLocator::PointLocator(const DiscMesh& mesh) : mesh_(mesh) {
    cells_ = std::max(8, static_cast<int>(std::sqrt(static_cast<double>(mesh.num_triangles()))));
    cell_size_ = 2.2 / cells_;
    bins_.assign(static_cast<std::size_t>(cells_) * cells_, {});
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
        for (int k = 0; k < 3; ++k) {
            const Vec2& p = mesh.vertices[tri[k]];
            xmin = std::min(xmin, p.x());
            xmax = std::max(xmax, p.x());
            ymin = std::min(ymin, p.y());
            ymax = std::max(ymax, p.y());
        }
        for (int cx = cell_of(xmin); cx <= cell_of(xmax); ++cx)
            for (int cy = cell_of(ymin); cy <= cell_of(ymax); ++cy)
                bins_[static_cast<std::size_t>(cx) * cells_ + cy].push_back(t);
    }
}

int PointLocator::cell_of(double x) const {
    int c = static_cast<int>((x + 1.1) / cell_size_);
    return std::clamp(c, 0, cells_ - 1);
}

PointLocator::Hit PointLocator::locate(const Vec2& z) const {
    auto bary_of = [&](int t, std::array<double, 3>& bary) {
        const auto& tri = mesh_.triangles[t];
        const Vec2& a = mesh_.vertices[tri[0]];
        const Vec2& b = mesh_.vertices[tri[1]];
        const Vec2& c = mesh_.vertices[tri[2]];
        const double det = cross2(b - a, c - a);
        bary[1] = cross2(z - a, c - a) / det;
        bary[2] = cross2(b - a, z - a) / det;
        bary[0] = 1.0 - bary[1] - bary[2];
        return std::min({bary[0], bary[1], bary[2]});
    };

    Hit hit;
    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](int t) {
        std::array<double, 3> bary;
        const double v = bary_of(t, bary);
        if (v > best) {
            best = v;
            hit.triangle = t;
            hit.bary = bary;
        }
        return v >= -1e-12;
    };

    const auto& bin = bins_[static_cast<std::size_t>(cell_of(z.x())) * cells_ + cell_of(z.y())];
    for (int t : bin)
        if (consider(t)) {
            hit.inside = true;
            return hit;
        }
    for (int t = 0; t < mesh_.num_triangles(); ++t)
        if (consider(t)) {
            hit.inside = true;
            return hit;
        }
    hit.inside = false;  // outside the mesh polygon; closest triangle reported
    return hit;
}

}  // namespace plateau
