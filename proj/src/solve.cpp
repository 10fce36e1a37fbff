#include "plateau/solve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plateau/error.hpp"
#include "solver_internal.hpp"

namespace plateau {

namespace {

using detail::BoundaryDofs;
using detail::DescentOutcome;
using detail::Kernel;
using detail::SolverState;
using detail::descend;
using detail::make_boundary_dofs;
using detail::tutte_fill;

SolverState make_state(std::shared_ptr<const DiscMesh> mesh, const PlateauProblem& problem,
                       const SolverConfig& cfg, VolumeDefinition mu, double w_plus, double w_ks,
                       double w_area, const PLMap* warm_start) {
    SolverState st;
    st.mesh = std::move(mesh);
    st.problem = &problem;
    st.dim = problem.target.chart_dim();
    st.dofs = make_boundary_dofs(*st.mesh, problem);
    st.boundary_slot.assign(st.mesh->num_vertices(), -1);
    for (std::size_t p = 0; p < st.dofs.cycle.size(); ++p) st.boundary_slot[st.dofs.cycle[p]] = static_cast<int>(p);
    for (int v = 0; v < st.mesh->num_vertices(); ++v)
        if (st.boundary_slot[v] < 0) st.interior.push_back(v);
    st.images.assign(static_cast<std::size_t>(st.mesh->num_vertices()) * st.dim, 0.0);

    st.kernel.w_plus = w_plus;
    st.kernel.w_ks = w_ks;
    st.kernel.w_area = w_area;
    st.boundary_frozen = (w_area > 0);
    st.kernel.build(*st.mesh, problem.target, mu, cfg.grid_k, cfg.beta);

    if (warm_start) {
        // fresh linear boundary parameters; the interior transfers by
        // evaluating the coarse map at the fine vertices
        st.sync_boundary_images();
        for (int v : st.interior) {
            const TargetPoint p = warm_start->evaluate(st.mesh->vertices[v]);
            for (int k = 0; k < st.dim; ++k) st.images[v * st.dim + k] = p.x[k];
        }
    } else {
        st.sync_boundary_images();
        tutte_fill(st);
        if (const auto* ct = std::get_if<ConeTarget>(&problem.target.variant())) {
            // radial profile remap toward the conformal scaling of the chart;
            // descent then only polishes locally
            const double r = ct->r;
            for (int v : st.interior) {
                Vec2 p(st.images[v * st.dim], st.images[v * st.dim + 1]);
                const double n = p.norm();
                if (n > 1e-14) p *= r * std::pow(n / r, r) / n;
                st.images[v * st.dim] = p.x();
                st.images[v * st.dim + 1] = p.y();
            }
        }
    }
    st.kernel.freeze_scales(st.images);
    return st;
}

SolveResult finalize(SolverState& st, std::vector<double> trace, std::string termination,
                     std::vector<StageInfo> stages) {
    PLMap map(st.mesh, st.problem->target, st.images);
    SolveResult result(std::move(map));
    result.energy_plus = result.map.energy_plus();
    result.energy_ks = result.map.energy_ks();
    for (std::size_t i = 0; i < kAllVolumes.size(); ++i) result.area[i] = result.map.area_mu(kAllVolumes[i]);
    result.qc = result.map.qc_report();
    result.trace = std::move(trace);
    result.termination = std::move(termination);
    result.boundary_params = st.dofs.params;
    result.stages = std::move(stages);
    return result;
}

SolveResult solve_impl(const PlateauProblem& problem, VolumeDefinition mu, double w_plus,
                       double w_ks, bool with_area, const SolverConfig& cfg,
                       const std::vector<double>& eps_schedule) {
    if (!problem.boundary.injective_polyline())
        throw InfeasibleBoundary("boundary polyline crosses itself");

    std::vector<int> levels;
    if (cfg.hierarchical)
        for (int l = std::min(cfg.min_level, problem.mesh_level); l <= problem.mesh_level; ++l)
            levels.push_back(l);
    else
        levels.push_back(problem.mesh_level);

    std::unique_ptr<PLMap> warm;
    std::vector<StageInfo> stages;
    std::string termination = "tolerance";

    for (std::size_t li = 0; li < levels.size(); ++li) {
        auto mesh = std::make_shared<DiscMesh>(make_disc_mesh(levels[li]));
        SolverState st = make_state(mesh, problem, cfg, mu, w_plus, w_ks,
                                    with_area ? 1.0 : 0.0, warm.get());
        const bool final_level = (li + 1 == levels.size());
        std::vector<double> level_trace;  // reported trace covers the final level

        if (with_area) {
            for (double eps : eps_schedule) {
                st.kernel.w_plus = eps;
                const DescentOutcome oc = descend(st, cfg, level_trace);
                termination = oc.termination;
                if (final_level) {
                    PLMap snapshot(st.mesh, problem.target, st.images);
                    stages.push_back({eps, snapshot.area_mu(mu), snapshot.energy_plus(), oc.iters});
                }
            }
        } else {
            const DescentOutcome oc = descend(st, cfg, level_trace);
            termination = oc.termination;
        }
        if (final_level)
            return finalize(st, std::move(level_trace), std::move(termination), std::move(stages));
        warm = std::make_unique<PLMap>(st.mesh, problem.target, st.images);
    }
    throw Error("unreachable");
}

}  // namespace

SolveResult minimize_energy(const PlateauProblem& problem, const SolverConfig& cfg) {
    if (problem.functional != FunctionalKind::EnergyPlus &&
        problem.functional != FunctionalKind::EnergyKS)
        throw ConfigError("minimize_energy expects an energy functional");
    const bool ks = problem.functional == FunctionalKind::EnergyKS;
    return solve_impl(problem, problem.mu, ks ? 0.0 : 1.0, ks ? 1.0 : 0.0, false, cfg, {});
}

SolveResult minimize_area(const PlateauProblem& problem, VolumeDefinition mu,
                          const SolverConfig& cfg) {
    if (problem.functional != FunctionalKind::AreaMu &&
        problem.functional != FunctionalKind::AreaMuRegularized)
        throw ConfigError("minimize_area expects an area functional");
    std::vector<double> eps_schedule;
    if (problem.functional == FunctionalKind::AreaMuRegularized) {
        double eps = cfg.eps0;
        for (int s = 0; s < cfg.eps_stages; ++s) {
            eps_schedule.push_back(eps);
            eps *= cfg.eps_ratio;
        }
    } else {
        eps_schedule.push_back(0.0);
    }
    return solve_impl(problem, mu, 0.0, 0.0, true, cfg, eps_schedule);
}

// ---------------------------------------------------------------------------
// inner variation
// ---------------------------------------------------------------------------

namespace {

double point_triangle_distance(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
    auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
    const double d1 = cross(b - a, p - a), d2 = cross(c - b, p - b), d3 = cross(a - c, p - c);
    if (d1 >= 0 && d2 >= 0 && d3 >= 0) return 0.0;
    auto seg = [&](const Vec2& u, const Vec2& v) {
        const Vec2 uv = v - u;
        const double t = std::clamp((p - u).dot(uv) / uv.squaredNorm(), 0.0, 1.0);
        return (p - (u + t * uv)).norm();
    };
    return std::min({seg(a, b), seg(b, c), seg(c, a)});
}

double triangle_disc_overlap(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& z0,
                             double r, int depth) {
    const double area = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    const bool in_a = (a - z0).norm() <= r, in_b = (b - z0).norm() <= r, in_c = (c - z0).norm() <= r;
    if (in_a && in_b && in_c) return area;
    if (point_triangle_distance(z0, a, b, c) >= r) return 0.0;
    if (depth == 0) {
        const Vec2 centroid = (a + b + c) / 3.0;
        return (centroid - z0).norm() <= r ? area : 0.0;
    }
    const Vec2 ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    return triangle_disc_overlap(a, ab, ca, z0, r, depth - 1) +
           triangle_disc_overlap(b, bc, ab, z0, r, depth - 1) +
           triangle_disc_overlap(c, ca, bc, z0, r, depth - 1) +
           triangle_disc_overlap(ab, bc, ca, z0, r, depth - 1);
}

}  // namespace

VariationResult variation_test(const PLMap& u, const Vec2& z0, double r, const Mat2& T_in) {
    if (z0.norm() + r >= 1.0 - 1e-9) throw ConfigError("deformation ball must sit inside the disc");
    Mat2 T = T_in;
    const double det = T.determinant();
    if (!(det > 0)) throw DeformationDegenerate("deformation matrix must preserve orientation");
    T /= std::sqrt(det);

    const LocalDeformation rho(z0, r, T.inverse());
    VariationResult out;
    out.c = rho.c();
    out.d = rho.d();

    // exact change: the conformal gauge cancels the outside contribution and
    // the inside contribution composes with T triangle by triangle
    const DiscMesh& mesh = u.mesh();
    double delta = 0.0;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        const double overlap =
            triangle_disc_overlap(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                  mesh.vertices[tri[2]], z0, r, 9);
        if (overlap <= 0) continue;
        const Seminorm2& s = u.triangle_seminorm(t);
        delta += overlap * (i_plus(compose(s, T), 2.0) - i_plus(s, 2.0));
    }
    out.delta_energy_plus = delta;

    // numerically computed conformal map onto the deformed disc
    const DiscConformalMap phi(
        [&](double theta) { return rho.apply(Vec2(std::cos(theta), std::sin(theta))); }, z0);
    out.conformal_residual = phi.conformality_residual();

    auto psi = [&](const Vec2& z) { return rho.inverse(phi.apply(z)); };
    auto psi_jacobian = [&](const Vec2& z) {
        return rho.inverse_jacobian(phi.apply(z)) * phi.jacobian(z);
    };

    // boundary roundtrip: psi must carry the circle to itself
    double roundtrip = 0.0;
    for (int k = 0; k < 256; ++k) {
        const double a = 2.0 * M_PI * k / 256;
        const Vec2 w = psi(Vec2(std::cos(a), std::sin(a)) * (1.0 - 1e-12));
        roundtrip = std::max(roundtrip, std::abs(w.norm() - 1.0));
    }
    out.boundary_roundtrip_error = roundtrip;

    // injectivity on samples of the deformation itself
    std::vector<Vec2> samples, mapped;
    for (int i = 0; i < 18; ++i)
        for (int j = 0; j < 16; ++j) {
            const double rad = 0.08 * (i + 1);
            const double ang = 2.0 * M_PI * (j + 0.5 * (i % 2)) / 16;
            const Vec2 z = z0 + rad * Vec2(std::cos(ang), std::sin(ang));
            samples.push_back(z);
            mapped.push_back(rho.apply(z));
        }
    out.injective = true;
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            if ((samples[i] - samples[j]).norm() > 1e-3 && (mapped[i] - mapped[j]).norm() < 1e-9)
                out.injective = false;

    // conformality of the discretized deformation away from the ball
    const DiscMesh probe = make_disc_mesh(6);
    double max_q = 1.0;
    for (int t = 0; t < probe.num_triangles(); ++t) {
        const auto& tri = probe.triangles[t];
        bool outside = true;
        for (int k = 0; k < 3; ++k)
            if ((probe.vertices[tri[k]] - z0).norm() < 1.05 * r) outside = false;
        if (!outside) continue;
        std::array<Vec2, 3> dom, img;
        for (int k = 0; k < 3; ++k) {
            dom[k] = probe.vertices[tri[k]];
            img[k] = rho.apply(dom[k]);
        }
        const TargetSpace e2 = TargetSpace::euclidean(2);
        const Seminorm2 s = e2.seminorm_from_chart(dom, img[0].data(), img[1].data(),
                                                   img[2].data(), 1);
        max_q = std::max(max_q, q_factor(s));
    }
    out.conformal_outside_max_q = max_q;

    // direct quadrature of the composed map as a cross-check
    const DiscMesh quad = make_disc_mesh(std::max(u.mesh().level, 6));
    double direct = 0.0;
    for (int t = 0; t < quad.num_triangles(); ++t) {
        const auto& tri = quad.triangles[t];
        const Vec2 zc = (quad.vertices[tri[0]] + quad.vertices[tri[1]] + quad.vertices[tri[2]]) / 3.0;
        const double w = quad.triangle_area(t);
        const Vec2 wq = psi(zc);
        const Mat2 J = psi_jacobian(zc);
        const Seminorm2 s_new = compose(u.triangle_seminorm(u.locate_triangle(wq)), J);
        const Seminorm2 s_old = u.triangle_seminorm(u.locate_triangle(zc));
        direct += w * (i_plus(s_new, 2.0) - i_plus(s_old, 2.0));
    }
    out.direct_delta = direct;
    return out;
}

// ---------------------------------------------------------------------------
// constructive fillings and probes
// ---------------------------------------------------------------------------

PLMap fill_injective(const JordanBoundary& curve, int mesh_level) {
    if (curve.target().chart_dim() != 2 ||
        !std::holds_alternative<NormedPlaneTarget>(curve.target().variant()))
        throw ConfigError("filling is defined for curves in a normed plane");
    const double lambda = curve.length() / (2.0 * M_PI);

    auto mesh = std::make_shared<DiscMesh>(make_disc_mesh(mesh_level));
    const int nv = mesh->num_vertices();

    // hemisphere positions of the domain vertices
    std::vector<Eigen::Vector3d> sphere(nv);
    for (int i = 0; i < nv; ++i) {
        const Vec2& v = mesh->vertices[i];
        const double rho = std::min(1.0, v.norm());
        const double chi = rho * M_PI / 2.0;
        const double theta = std::atan2(v.y(), v.x());
        sphere[i] = Eigen::Vector3d(std::sin(chi) * std::cos(theta),
                                    std::sin(chi) * std::sin(theta), std::cos(chi));
    }

    const int m = std::max<int>(1024, 4 * static_cast<int>(mesh->boundary_cycle.size()));
    std::vector<Eigen::Vector3d> equator(m);
    std::vector<std::array<double, 2>> values(m);
    for (int j = 0; j < m; ++j) {
        const double w = 2.0 * M_PI * j / m;
        equator[j] = Eigen::Vector3d(std::cos(w), std::sin(w), 0.0);
        const TargetPoint p = curve.point_at(w);
        values[j] = {p.x[0], p.x[1]};
    }

    // per-coordinate lipschitz extension along intrinsic distances: midpoint
    // of the lower and upper extremal extensions, so constant boundary data
    // extends to a constant
    std::vector<double> images(static_cast<std::size_t>(nv) * 2);
    for (int i = 0; i < nv; ++i) {
        double lo0 = std::numeric_limits<double>::infinity(), lo1 = lo0;
        double hi0 = -lo0, hi1 = -lo0;
        for (int j = 0; j < m; ++j) {
            const double d = std::acos(std::clamp(sphere[i].dot(equator[j]), -1.0, 1.0));
            lo0 = std::min(lo0, values[j][0] + lambda * d);
            lo1 = std::min(lo1, values[j][1] + lambda * d);
            hi0 = std::max(hi0, values[j][0] - lambda * d);
            hi1 = std::max(hi1, values[j][1] - lambda * d);
        }
        images[2 * i] = 0.5 * (lo0 + hi0);
        images[2 * i + 1] = 0.5 * (lo1 + hi1);
    }
    return PLMap(std::move(mesh), curve.target(), std::move(images));
}

IsoperimetricProbe isoperimetric_probe(const std::vector<PlateauProblem>& problems,
                                       VolumeDefinition mu, const SolverConfig& cfg) {
    IsoperimetricProbe probe;
    for (const auto& problem : problems) {
        const SolveResult result = minimize_area(problem, mu, cfg);
        std::size_t mu_idx = 0;
        for (std::size_t i = 0; i < kAllVolumes.size(); ++i)
            if (kAllVolumes[i] == mu) mu_idx = i;
        const double len = problem.boundary.length();
        probe.ratios.push_back(result.area[mu_idx] / (len * len));
        probe.max_ratio = std::max(probe.max_ratio, probe.ratios.back());
    }
    return probe;
}

BiDiscReport bi_disc_scenario(const NormDescriptor& norm, double lambda, VolumeDefinition mu,
                              VolumeDefinition nu, int mesh_level) {
    BiDiscReport report;
    report.window_lo = norm_constant(mu, norm);
    report.window_hi = norm_constant(nu, norm);
    const double l2 = lambda * lambda;
    if (!(report.window_lo < l2 && l2 < report.window_hi))
        throw ParameterOutOfWindow("lambda^2 must lie strictly between the two norm constants");

    auto mesh = std::make_shared<DiscMesh>(make_disc_mesh(mesh_level));
    const TargetSpace target = TargetSpace::bi_disc(norm, lambda);
    std::vector<double> images(static_cast<std::size_t>(mesh->num_vertices()) * 2);
    for (int i = 0; i < mesh->num_vertices(); ++i) {
        images[2 * i] = mesh->vertices[i].x();
        images[2 * i + 1] = mesh->vertices[i].y();
    }
    const PLMap u1(mesh, target, images, std::vector<int>(mesh->num_vertices(), 1));
    const PLMap u2(mesh, target, images, std::vector<int>(mesh->num_vertices(), 2));

    report.area_mu_u1 = u1.area_mu(mu);
    report.area_mu_u2 = u2.area_mu(mu);
    report.area_nu_u1 = u1.area_mu(nu);
    report.area_nu_u2 = u2.area_mu(nu);

    auto argmin = [](double a1, double a2) {
        if (std::abs(a1 - a2) <= 1e-9 * std::max(a1, a2)) return 0;  // tie, never a violation
        return a1 < a2 ? 1 : 2;
    };
    report.argmin_mu = argmin(report.area_mu_u1, report.area_mu_u2);
    report.argmin_nu = argmin(report.area_nu_u1, report.area_nu_u2);
    report.argmins_differ =
        report.argmin_mu != 0 && report.argmin_nu != 0 && report.argmin_mu != report.argmin_nu;
    return report;
}

}  // namespace plateau
