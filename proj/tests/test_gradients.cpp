#include <doctest.h>

#include <cmath>

#include "../src/solver_internal.hpp"
#include "plateau/rng.hpp"

using namespace plateau;
using namespace plateau::detail;

namespace {

std::vector<TargetPoint> circle_polyline(int segments, double radius = 1.0) {
    std::vector<TargetPoint> pts;
    for (int k = 0; k < segments; ++k) {
        const double t = 2.0 * M_PI * k / segments;
        pts.push_back(TargetPoint{radius * std::cos(t), radius * std::sin(t)});
    }
    return pts;
}

void fd_check(const TargetSpace& target, double w_plus, double w_ks, double w_area,
              std::uint64_t seed) {
    const double R = target.is_cone() ? 0.4 : 1.0;
    PlateauProblem problem{target, JordanBoundary(target, circle_polyline(48, R)), 2,
                           FunctionalKind::EnergyPlus};
    SolverConfig cfg;
    auto mesh = std::make_shared<DiscMesh>(make_disc_mesh(2));

    SolverState st;
    st.mesh = mesh;
    st.problem = &problem;
    st.dim = target.chart_dim();
    st.dofs = make_boundary_dofs(*mesh, problem);
    st.boundary_slot.assign(mesh->num_vertices(), -1);
    for (std::size_t p = 0; p < st.dofs.cycle.size(); ++p)
        st.boundary_slot[st.dofs.cycle[p]] = static_cast<int>(p);
    for (int v = 0; v < mesh->num_vertices(); ++v)
        if (st.boundary_slot[v] < 0) st.interior.push_back(v);
    st.images.assign(static_cast<std::size_t>(mesh->num_vertices()) * st.dim, 0.0);
    st.kernel.w_plus = w_plus;
    st.kernel.w_ks = w_ks;
    st.kernel.w_area = w_area;
    st.kernel.build(*mesh, target, VolumeDefinition::Busemann, cfg.grid_k, cfg.beta);
    st.sync_boundary_images();
    tutte_fill(st);
    st.kernel.freeze_scales(st.images);

    Rng rng(seed);
    std::vector<double> x;
    st.pack(x);
    // random interior perturbation keeps the configuration generic
    for (int i = 0; i < static_cast<int>(st.interior.size()) * st.dim; ++i)
        x[i] += 0.05 * rng.normal();
    // nudge free boundary params while keeping strict monotonicity
    for (std::size_t p = 0; p < st.dofs.cycle.size(); ++p) {
        const int at = static_cast<int>(st.interior.size()) * st.dim + static_cast<int>(p);
        x[at] += 0.001 * rng.uniform();
    }

    std::vector<double> g;
    st.unpack(x);
    st.pack(x);  // projected point: finite differences stay interiorly valid
    const double f0 = st.objective(x, &g);
    CHECK(std::isfinite(f0));

    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const int i = rng.uniform_int(0, static_cast<int>(x.size()) - 1);
        const bool is_boundary = i >= static_cast<int>(st.interior.size()) * st.dim;
        if (is_boundary) {
            const int pos = i - static_cast<int>(st.interior.size()) * st.dim;
            if (pos == st.dofs.pin_pos[0] || pos == st.dofs.pin_pos[1] || pos == st.dofs.pin_pos[2])
                continue;  // pinned: projected away, gradient is zeroed
        }
        const double h = 1e-6;
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        // bypass the projection: evaluate the raw objective at shifted points
        st.unpack(xp);
        std::vector<double> xp_proj;
        st.pack(xp_proj);
        if (std::abs(xp_proj[i] - xp[i]) > 1e-12) continue;  // projection active; skip
        const double fp = st.objective(xp, nullptr);
        st.unpack(xm);
        std::vector<double> xm_proj;
        st.pack(xm_proj);
        if (std::abs(xm_proj[i] - xm[i]) > 1e-12) continue;
        const double fm = st.objective(xm, nullptr);
        const double fd = (fp - fm) / (2 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(2e-4));
        ++checked;
    }
    CHECK(checked > 10);
}

}  // namespace

TEST_CASE("analytic gradients match finite differences") {
    fd_check(TargetSpace::euclidean(2), 1.0, 0.0, 0.0, 3);
    fd_check(TargetSpace::euclidean(2), 0.0, 1.0, 0.0, 5);
    fd_check(TargetSpace::euclidean(2), 0.1, 0.0, 1.0, 7);
    fd_check(TargetSpace::normed_plane(NormDescriptor::linf()), 1.0, 0.0, 0.0, 11);
    fd_check(TargetSpace::normed_plane(NormDescriptor::linf()), 0.0, 1.0, 0.0, 13);
    fd_check(TargetSpace::normed_plane(NormDescriptor::linf()), 0.1, 0.0, 1.0, 17);
    fd_check(TargetSpace::normed_plane(NormDescriptor::l1()), 1.0, 0.0, 0.0, 19);
    fd_check(TargetSpace::cone(0.5), 1.0, 0.0, 0.0, 23);
    fd_check(TargetSpace::cone(0.5), 0.1, 0.0, 1.0, 29);
    fd_check(TargetSpace::cone(0.75), 0.0, 1.0, 0.0, 31);
}

TEST_CASE("boundary projection is monotone and keeps pins") {
    PlateauProblem problem{TargetSpace::euclidean(2),
                           JordanBoundary(TargetSpace::euclidean(2), circle_polyline(64)), 2,
                           FunctionalKind::EnergyPlus};
    const DiscMesh mesh = make_disc_mesh(2);
    BoundaryDofs dofs = make_boundary_dofs(mesh, problem);
    Rng rng(2);
    for (auto& t : dofs.params) t += 0.8 * rng.normal();
    project_boundary(dofs);
    CHECK(dofs.params[dofs.pin_pos[0]] == doctest::Approx(dofs.pin_tau[0]));
    CHECK(dofs.params[dofs.pin_pos[1]] == doctest::Approx(dofs.pin_tau[1]));
    CHECK(dofs.params[dofs.pin_pos[2]] == doctest::Approx(dofs.pin_tau[2]));
    for (std::size_t i = 1; i < dofs.params.size(); ++i)
        CHECK(dofs.params[i] >= dofs.params[i - 1] - 1e-12);
}
