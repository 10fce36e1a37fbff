#pragma once

// Solver internals: discrete functional kernels, boundary parameter
// handling, initialization and the projected descent loop. Header-local to
// the library sources (and to the tests that probe gradients directly).

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "plateau/error.hpp"
#include "plateau/solve.hpp"

namespace plateau::detail {

// ---------------------------------------------------------------------------
// discrete functional with analytic gradient
// ---------------------------------------------------------------------------

struct Kernel {
    const DiscMesh* mesh = nullptr;
    const TargetSpace* target = nullptr;
    int dim = 2;
    bool normed = false;  // normed plane vs inner-product chart
    bool cone = false;
    double cone_k = 0.0;
    NormDescriptor base;
    std::vector<Vec2> dirs;
    double beta = 32.0;
    double w_plus = 0.0, w_ks = 0.0, w_area = 0.0;
    double area_c = 1.0;  // volume normalization constant of the target norm
    double delta_sm = 1e-12, delta_det = 1e-12;

    std::vector<Mat2> z_inv;
    std::vector<double> tri_w;

    void build(const DiscMesh& m, const TargetSpace& t, VolumeDefinition mu, int grid_k,
               double beta_) {
        mesh = &m;
        target = &t;
        beta = beta_;
        dim = t.chart_dim();
        if (const auto* np = std::get_if<NormedPlaneTarget>(&t.variant())) {
            normed = !np->norm.is_inner_product();
            base = np->norm;
            area_c = norm_constant(mu, np->norm);
        } else if (const auto* ct = std::get_if<ConeTarget>(&t.variant())) {
            cone = true;
            cone_k = std::sqrt(1.0 - ct->r * ct->r) / ct->r;
            // area element of the chart map is (1/r)|det| exactly:
            // det(I + k^2 phat phat') = 1 + k^2 at every chart point
            area_c = 1.0 / ct->r;
        } else if (std::holds_alternative<BiDiscTarget>(t.variant())) {
            throw ConfigError("bi-disc targets are evaluated, not solved");
        }
        dirs.resize(grid_k);
        for (int k = 0; k < grid_k; ++k) {
            const double a = 2.0 * M_PI * (k + 0.5) / grid_k;
            dirs[k] = Vec2(std::cos(a), std::sin(a));
        }
        z_inv.resize(m.num_triangles());
        tri_w.resize(m.num_triangles());
        for (int t_i = 0; t_i < m.num_triangles(); ++t_i) {
            const auto& tri = m.triangles[t_i];
            Mat2 Z;
            Z.col(0) = m.vertices[tri[1]] - m.vertices[tri[0]];
            Z.col(1) = m.vertices[tri[2]] - m.vertices[tri[0]];
            z_inv[t_i] = Z.inverse();
            tri_w[t_i] = m.triangle_area(t_i);
        }
    }

    void freeze_scales(const std::vector<double>& images) {
        double acc = 0.0;
        int count = 0;
        for (int t_i = 0; t_i < mesh->num_triangles(); ++t_i) {
            const auto& tri = mesh->triangles[t_i];
            for (int e = 0; e < 3; ++e) {
                const int a = tri[e], b = tri[(e + 1) % 3];
                double d2 = 0.0;
                for (int k = 0; k < dim; ++k) {
                    const double diff = images[a * dim + k] - images[b * dim + k];
                    d2 += diff * diff;
                }
                const double dom = (mesh->vertices[a] - mesh->vertices[b]).squaredNorm();
                if (dom > 0) {
                    acc += d2 / dom;
                    ++count;
                }
            }
        }
        const double scale = (count > 0) ? acc / count : 1.0;
        // smoothing wide enough that the descent sees curvature at conformal
        // configurations; the reported functionals are re-evaluated exactly
        delta_sm = 3e-3 * (scale + 1e-12);
        delta_det = 1e-3 * (scale + 1e-12);
    }

    double eval(const std::vector<double>& images, std::vector<double>* grad) const {
        if (grad) std::fill(grad->begin(), grad->end(), 0.0);
        double total = 0.0;
        const int nt = mesh->num_triangles();
        for (int t_i = 0; t_i < nt; ++t_i) {
            const auto& tri = mesh->triangles[t_i];
            const double w = tri_w[t_i];
            const double* q0 = &images[tri[0] * dim];
            const double* q1 = &images[tri[1] * dim];
            const double* q2 = &images[tri[2] * dim];

            if (normed) {
                Mat2 X;
                X.col(0) = Vec2(q1[0] - q0[0], q1[1] - q0[1]);
                X.col(1) = Vec2(q2[0] - q0[0], q2[1] - q0[1]);
                const Mat2 A = X * z_inv[t_i];
                Mat2 dA = Mat2::Zero();
                double f = 0.0;
                if (w_plus > 0) {
                    // softmax of the squared directional stretches
                    double bmax = 0.0;
                    static thread_local std::vector<double> b;
                    b.resize(dirs.size());
                    for (std::size_t k = 0; k < dirs.size(); ++k) {
                        b[k] = base(A * dirs[k]);
                        bmax = std::max(bmax, b[k]);
                    }
                    if (bmax > 0) {
                        double pn = 0.0;
                        for (double bk : b) pn += std::pow(bk / bmax, 2.0 * beta);
                        pn /= static_cast<double>(dirs.size());
                        const double val = bmax * bmax * std::pow(pn, 1.0 / beta);
                        f += w_plus * val;
                        const double lead =
                            2.0 * bmax * std::pow(pn, 1.0 / beta - 1.0) / dirs.size();
                        for (std::size_t k = 0; k < dirs.size(); ++k) {
                            if (b[k] <= 0) continue;
                            const double crt = std::pow(b[k] / bmax, 2.0 * beta - 1.0);
                            if (crt == 0.0) continue;
                            const Vec2 g = base.subgradient(A * dirs[k]);
                            dA += (w_plus * lead * crt) * g * dirs[k].transpose();
                        }
                    }
                }
                if (w_ks > 0) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < dirs.size(); ++k) {
                        const double bk = base(A * dirs[k]);
                        acc += bk * bk;
                        if (bk > 0) {
                            const Vec2 g = base.subgradient(A * dirs[k]);
                            dA += (w_ks * 4.0 / dirs.size() * bk) * g * dirs[k].transpose();
                        }
                    }
                    f += w_ks * 2.0 * acc / dirs.size();
                }
                if (w_area > 0) {
                    const double det = A.determinant();
                    const double sd = std::sqrt(det * det + delta_det * delta_det);
                    f += w_area * area_c * sd;
                    Mat2 ddet;
                    ddet << A(1, 1), -A(1, 0), -A(0, 1), A(0, 0);
                    dA += (w_area * area_c * det / sd) * ddet;
                }
                total += w * f;
                if (grad) {
                    const Mat2 dX = dA * z_inv[t_i].transpose();
                    for (int c = 0; c < 2; ++c) {
                        (*grad)[tri[1] * dim + c] += w * dX(c, 0);
                        (*grad)[tri[2] * dim + c] += w * dX(c, 1);
                        (*grad)[tri[0] * dim + c] -= w * (dX(c, 0) + dX(c, 1));
                    }
                }
                continue;
            }

            // cone chart: exact area element (1/r)|det A| plus chart-metric
            // energies at edge-midpoint quadrature points
            if (cone) {
                Mat2 X;
                X.col(0) = Vec2(q1[0] - q0[0], q1[1] - q0[1]);
                X.col(1) = Vec2(q2[0] - q0[0], q2[1] - q0[1]);
                const Mat2 A = X * z_inv[t_i];
                double f = 0.0;
                Mat2 dA = Mat2::Zero();
                if (w_area > 0) {
                    const double det = A.determinant();
                    const double sd = std::sqrt(det * det + delta_det * delta_det);
                    f += w_area * area_c * sd;
                    Mat2 ddet;
                    ddet << A(1, 1), -A(1, 0), -A(0, 1), A(0, 0);
                    dA += (w_area * area_c * det / sd) * ddet;
                }
                std::array<Vec2, 3> p_grad = {Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
                if (w_plus > 0 || w_ks > 0) {
                    const double kk = cone_k * cone_k;
                    const std::array<std::array<int, 2>, 3> edges = {{{0, 1}, {1, 2}, {2, 0}}};
                    const double* qs[3] = {q0, q1, q2};
                    for (const auto& e : edges) {
                        const Vec2 pq(0.5 * (qs[e[0]][0] + qs[e[1]][0]),
                                      0.5 * (qs[e[0]][1] + qs[e[1]][1]));
                        const double n = std::max(pq.norm(), 1e-12);
                        const Vec2 ph = pq / n;
                        const Mat2 M = Mat2::Identity() + kk * ph * ph.transpose();
                        const Mat2 G = A.transpose() * M * A;
                        const double g11 = G(0, 0), g22 = G(1, 1), g12 = G(0, 1);
                        Mat2 S = Mat2::Zero();
                        if (w_plus > 0) {
                            const double R = std::sqrt((g11 - g22) * (g11 - g22) +
                                                       4.0 * g12 * g12 + delta_sm * delta_sm);
                            f += (w_plus / 3.0) * 0.5 * (g11 + g22 + R);
                            S(0, 0) += (w_plus / 3.0) * 0.5 * (1.0 + (g11 - g22) / R);
                            S(1, 1) += (w_plus / 3.0) * 0.5 * (1.0 - (g11 - g22) / R);
                            S(0, 1) += (w_plus / 3.0) * g12 / R;
                            S(1, 0) += (w_plus / 3.0) * g12 / R;
                        }
                        if (w_ks > 0) {
                            f += (w_ks / 3.0) * (g11 + g22);
                            S(0, 0) += w_ks / 3.0;
                            S(1, 1) += w_ks / 3.0;
                        }
                        if (grad) {
                            dA += 2.0 * M * A * S;
                            // metric variation through the midpoint direction
                            const Mat2 ASA = A * S * A.transpose();
                            const Vec2 cvec =
                                (2.0 * kk / n) * ((Mat2::Identity() - ph * ph.transpose()) * (ASA * ph));
                            p_grad[e[0]] += 0.5 * cvec;
                            p_grad[e[1]] += 0.5 * cvec;
                        }
                    }
                }
                total += w * f;
                if (grad) {
                    const Mat2 dX = dA * z_inv[t_i].transpose();
                    for (int c = 0; c < 2; ++c) {
                        (*grad)[tri[1] * dim + c] += w * (dX(c, 0) + p_grad[1][c]);
                        (*grad)[tri[2] * dim + c] += w * (dX(c, 1) + p_grad[2][c]);
                        (*grad)[tri[0] * dim + c] += w * (p_grad[0][c] - dX(c, 0) - dX(c, 1));
                    }
                }
                continue;
            }

            const double w_area_eff = w_area;
            const int edim = dim;
            Eigen::MatrixXd Qe(edim, 2);
            for (int k = 0; k < edim; ++k) {
                Qe(k, 0) = q1[k] - q0[k];
                Qe(k, 1) = q2[k] - q0[k];
            }
            const Eigen::MatrixXd L = Qe * z_inv[t_i];
            const double g11 = L.col(0).squaredNorm();
            const double g22 = L.col(1).squaredNorm();
            const double g12 = L.col(0).dot(L.col(1));
            Mat2 S = Mat2::Zero();
            double f = 0.0;
            if (w_plus > 0) {
                const double R = std::sqrt((g11 - g22) * (g11 - g22) + 4.0 * g12 * g12 +
                                           delta_sm * delta_sm);
                f += w_plus * 0.5 * (g11 + g22 + R);
                S(0, 0) += w_plus * 0.5 * (1.0 + (g11 - g22) / R);
                S(1, 1) += w_plus * 0.5 * (1.0 - (g11 - g22) / R);
                S(0, 1) += w_plus * g12 / R;
                S(1, 0) += w_plus * g12 / R;
            }
            if (w_ks > 0) {
                f += w_ks * (g11 + g22);
                S(0, 0) += w_ks;
                S(1, 1) += w_ks;
            }
            if (w_area_eff > 0) {
                const double det = g11 * g22 - g12 * g12;
                const double sd = std::sqrt(std::max(det, 0.0) + delta_det * delta_det);
                f += w_area_eff * sd;
                S(0, 0) += w_area_eff * g22 / (2.0 * sd);
                S(1, 1) += w_area_eff * g11 / (2.0 * sd);
                S(0, 1) -= w_area_eff * g12 / (2.0 * sd);
                S(1, 0) -= w_area_eff * g12 / (2.0 * sd);
            }
            total += w * f;
            if (grad) {
                const Eigen::MatrixXd dQe = 2.0 * L * S * z_inv[t_i].transpose();
                const Eigen::VectorXd gv0 = -(dQe.col(0) + dQe.col(1));
                for (int k = 0; k < edim; ++k) {
                    (*grad)[tri[0] * dim + k] += w * gv0[k];
                    (*grad)[tri[1] * dim + k] += w * dQe(k, 0);
                    (*grad)[tri[2] * dim + k] += w * dQe(k, 1);
                }
            }
        }
        return total;
    }
};

// ---------------------------------------------------------------------------
// boundary parameters with three pins and monotone projection
// ---------------------------------------------------------------------------

struct BoundaryDofs {
    std::vector<int> cycle;       // boundary vertex ids, rotated to start at pin 0
    std::vector<double> params;   // lifted parameters, one per cycle entry
    std::array<int, 3> pin_pos{};
    std::array<double, 3> pin_tau{};
};

inline double wrap_positive(double x) {
    double y = std::fmod(x, 2.0 * M_PI);
    if (y <= 0) y += 2.0 * M_PI;
    return y;
}

inline BoundaryDofs make_boundary_dofs(const DiscMesh& mesh, const PlateauProblem& problem) {
    BoundaryDofs dofs;
    const auto& cyc = mesh.boundary_cycle;
    const int nb = static_cast<int>(cyc.size());

    auto angle_of = [&](int pos) {
        const Vec2& v = mesh.vertices[cyc[pos]];
        return std::atan2(v.y(), v.x());
    };
    auto nearest_pos = [&](double target_angle) {
        int best = 0;
        double best_d = 1e9;
        for (int p = 0; p < nb; ++p) {
            double d = std::abs(wrap_positive(angle_of(p) - target_angle + M_PI) - M_PI);
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
        return best;
    };
    std::array<int, 3> raw_pos;
    std::array<double, 3> snapped_params;
    for (int i = 0; i < 3; ++i) {
        raw_pos[i] = nearest_pos(problem.pin_domain_angles[i]);
        // pinning the nearest mesh vertex shifts the curve parameter by the
        // same angle, else the pin itself would shear its neighborhood
        const double shift =
            wrap_positive(angle_of(raw_pos[i]) - problem.pin_domain_angles[i] + M_PI) - M_PI;
        snapped_params[i] = problem.pin_params[i] + shift;
    }
    if (raw_pos[0] == raw_pos[1] || raw_pos[1] == raw_pos[2] || raw_pos[0] == raw_pos[2])
        throw ConfigError("pinned boundary vertices must be distinct");

    // rotate so pin 0 comes first; the cycle orientation is ccw already
    std::vector<int> order(nb);
    for (int p = 0; p < nb; ++p) order[p] = cyc[(raw_pos[0] + p) % nb];
    dofs.cycle = order;
    dofs.pin_pos = {0, (raw_pos[1] - raw_pos[0] + nb) % nb, (raw_pos[2] - raw_pos[0] + nb) % nb};
    if (!(dofs.pin_pos[1] < dofs.pin_pos[2]))
        throw ConfigError("pinned vertices must appear in cyclic order");

    const double tau0 = snapped_params[0];
    const double tau1 = tau0 + wrap_positive(snapped_params[1] - snapped_params[0]);
    const double tau2 = tau1 + wrap_positive(snapped_params[2] - snapped_params[1]);
    if (!(tau2 < tau0 + 2.0 * M_PI + 1e-12))
        throw ConfigError("pin parameters must be distinct in cyclic order");
    dofs.pin_tau = {tau0, tau1, tau2};

    // linear initialization between pins by position
    dofs.params.assign(nb, tau0);
    const std::array<int, 4> stops = {0, dofs.pin_pos[1], dofs.pin_pos[2], nb};
    const std::array<double, 4> taus = {tau0, tau1, tau2, tau0 + 2.0 * M_PI};
    for (int seg = 0; seg < 3; ++seg)
        for (int p = stops[seg]; p < stops[seg + 1]; ++p) {
            const double f = static_cast<double>(p - stops[seg]) / (stops[seg + 1] - stops[seg]);
            dofs.params[p] = taus[seg] + f * (taus[seg + 1] - taus[seg]);
        }
    return dofs;
}

// pool-adjacent-violators with box clamp; keeps pins fixed
inline void project_boundary(BoundaryDofs& dofs) {
    const int nb = static_cast<int>(dofs.params.size());
    const std::array<int, 4> stops = {0, dofs.pin_pos[1], dofs.pin_pos[2], nb};
    const std::array<double, 4> taus = {dofs.pin_tau[0], dofs.pin_tau[1], dofs.pin_tau[2],
                                        dofs.pin_tau[0] + 2.0 * M_PI};
    for (int seg = 0; seg < 3; ++seg) {
        const int a = stops[seg], b = stops[seg + 1];
        dofs.params[a] = taus[seg];
        const int m = b - a - 1;  // free entries strictly inside the arc
        if (m <= 0) continue;
        std::vector<double> value(dofs.params.begin() + a + 1, dofs.params.begin() + b);
        std::vector<double> pooled;
        std::vector<int> size;
        for (double v : value) {
            pooled.push_back(v);
            size.push_back(1);
            while (pooled.size() > 1 && pooled[pooled.size() - 2] > pooled.back()) {
                const double merged = (pooled[pooled.size() - 2] * size[size.size() - 2] +
                                       pooled.back() * size.back()) /
                                      (size[size.size() - 2] + size.back());
                size[size.size() - 2] += size.back();
                pooled.pop_back();
                size.pop_back();
                pooled.back() = merged;
            }
        }
        int idx = 0;
        for (std::size_t blk = 0; blk < pooled.size(); ++blk)
            for (int rep = 0; rep < size[blk]; ++rep)
                value[idx++] = std::clamp(pooled[blk], taus[seg], taus[seg + 1]);
        std::copy(value.begin(), value.end(), dofs.params.begin() + a + 1);
    }
}

// ---------------------------------------------------------------------------
// solver state: packing, initialization, descent
// ---------------------------------------------------------------------------

struct SolverState {
    std::shared_ptr<const DiscMesh> mesh;
    const PlateauProblem* problem = nullptr;
    int dim = 2;
    BoundaryDofs dofs;
    std::vector<int> interior;          // interior vertex ids
    std::vector<int> boundary_slot;     // vertex id -> position in dofs.cycle (or -1)
    std::vector<double> images;         // full image array, dim per vertex
    Kernel kernel;
    std::vector<std::vector<int>> adjacency;  // vertex graph, for the h1 metric
    // area descent runs with the boundary correspondence held fixed: the
    // area functional is invariant under boundary reparametrization, while
    // its discretization gains spurious decrease from parameter bunching
    bool boundary_frozen = false;
    std::unique_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> laplacian_llt;

    int num_dofs() const {
        return static_cast<int>(interior.size()) * dim + static_cast<int>(dofs.cycle.size());
    }

    void sync_boundary_images() {
        for (std::size_t p = 0; p < dofs.cycle.size(); ++p) {
            const TargetPoint pt = problem->boundary.point_at(dofs.params[p]);
            for (int k = 0; k < dim; ++k) images[dofs.cycle[p] * dim + k] = pt.x[k];
        }
    }

    void pack(std::vector<double>& x) const {
        x.resize(num_dofs());
        int at = 0;
        for (int v : interior)
            for (int k = 0; k < dim; ++k) x[at++] = images[v * dim + k];
        for (double t : dofs.params) x[at++] = t;
    }

    void unpack(const std::vector<double>& x) {
        int at = 0;
        for (int v : interior)
            for (int k = 0; k < dim; ++k) images[v * dim + k] = x[at++];
        if (!boundary_frozen) {
            std::copy(x.begin() + at, x.end(), dofs.params.begin());
            project_boundary(dofs);
        }
        sync_boundary_images();
    }

    double objective(const std::vector<double>& x, std::vector<double>* grad_x) {
        unpack(x);
        static thread_local std::vector<double> grad_images;
        if (grad_x) grad_images.resize(images.size());
        const double f = kernel.eval(images, grad_x ? &grad_images : nullptr);
        if (grad_x) {
            grad_x->assign(num_dofs(), 0.0);
            int at = 0;
            for (int v : interior)
                for (int k = 0; k < dim; ++k) (*grad_x)[at++] = grad_images[v * dim + k];
            for (std::size_t p = 0; p < dofs.cycle.size(); ++p) {
                const bool pinned = (static_cast<int>(p) == dofs.pin_pos[0] ||
                                     static_cast<int>(p) == dofs.pin_pos[1] ||
                                     static_cast<int>(p) == dofs.pin_pos[2]);
                if (pinned || boundary_frozen) {
                    (*grad_x)[at++] = 0.0;
                    continue;
                }
                const auto tangent = problem->boundary.tangent_at(dofs.params[p]);
                double acc = 0.0;
                for (int k = 0; k < dim; ++k) acc += grad_images[dofs.cycle[p] * dim + k] * tangent[k];
                (*grad_x)[at++] = acc;
            }
        }
        return f;
    }
};

inline void build_adjacency(SolverState& st) {
    const DiscMesh& mesh = *st.mesh;
    st.adjacency.assign(mesh.num_vertices(), {});
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e], b = tri[(e + 1) % 3];
            st.adjacency[a].push_back(b);
            st.adjacency[b].push_back(a);
        }
    for (auto& list : st.adjacency) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
}

// uniform-weight harmonic fill of the interior, one scalar system per
// coordinate, solved by conjugate gradients on the graph laplacian
inline void tutte_fill(SolverState& st) {
    const DiscMesh& mesh = *st.mesh;
    const int nv = mesh.num_vertices();
    if (st.adjacency.empty()) build_adjacency(st);
    const auto& adj = st.adjacency;
    const int ni = static_cast<int>(st.interior.size());
    std::vector<int> slot(nv, -1);
    for (int i = 0; i < ni; ++i) slot[st.interior[i]] = i;

    for (int k = 0; k < st.dim; ++k) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni), x = Eigen::VectorXd::Zero(ni);
        for (int i = 0; i < ni; ++i) {
            const int v = st.interior[i];
            for (int nb : adj[v])
                if (slot[nb] < 0) rhs[i] += st.images[nb * st.dim + k];
        }
        auto apply = [&](const Eigen::VectorXd& in) {
            Eigen::VectorXd out(ni);
            for (int i = 0; i < ni; ++i) {
                const int v = st.interior[i];
                double acc = static_cast<double>(adj[v].size()) * in[i];
                for (int nb : adj[v])
                    if (slot[nb] >= 0) acc -= in[slot[nb]];
                out[i] = acc;
            }
            return out;
        };
        Eigen::VectorXd r = rhs - apply(x), p = r;
        double rs = r.squaredNorm();
        const double tol = 1e-22 * (rhs.squaredNorm() + 1e-300);
        for (int it = 0; it < 4 * ni + 64 && rs > tol; ++it) {
            const Eigen::VectorXd ap = apply(p);
            const double alpha = rs / p.dot(ap);
            x += alpha * p;
            r -= alpha * ap;
            const double rs_new = r.squaredNorm();
            p = r + (rs_new / rs) * p;
            rs = rs_new;
        }
        for (int i = 0; i < ni; ++i) st.images[st.interior[i] * st.dim + k] = x[i];
    }
}

struct DescentOutcome {
    std::string termination;
    int iters = 0;
};

// graph-laplacian (dirichlet) preconditioner on the interior block, applied
// through a cached sparse factorization; the boundary-parameter block is
// diagonally scaled
inline void precondition(SolverState& st, const std::vector<double>& g, std::vector<double>& d) {
    if (st.adjacency.empty()) build_adjacency(st);
    const int ni = static_cast<int>(st.interior.size());
    const int dim = st.dim;
    std::vector<int> slot(st.mesh->num_vertices(), -1);
    for (int i = 0; i < ni; ++i) slot[st.interior[i]] = i;
    if (!st.laplacian_llt) {
        std::vector<Eigen::Triplet<double>> trip;
        for (int i = 0; i < ni; ++i) {
            const int v = st.interior[i];
            trip.emplace_back(i, i, static_cast<double>(st.adjacency[v].size()));
            for (int nb : st.adjacency[v])
                if (slot[nb] >= 0) trip.emplace_back(i, slot[nb], -1.0);
        }
        Eigen::SparseMatrix<double> L(ni, ni);
        L.setFromTriplets(trip.begin(), trip.end());
        st.laplacian_llt = std::make_unique<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
        st.laplacian_llt->compute(L);
        if (st.laplacian_llt->info() != Eigen::Success)
            throw Error("laplacian factorization failed");
    }
    d.assign(g.size(), 0.0);
    Eigen::VectorXd rhs(ni);
    for (int k = 0; k < dim; ++k) {
        for (int i = 0; i < ni; ++i) rhs[i] = g[i * dim + k];
        const Eigen::VectorXd x = st.laplacian_llt->solve(rhs);
        for (int i = 0; i < ni; ++i) d[i * dim + k] = x[i];
    }
    // boundary block: emulate the laplacian diagonal
    for (std::size_t p = 0; p < st.dofs.cycle.size(); ++p) {
        const std::size_t at = static_cast<std::size_t>(ni) * dim + p;
        d[at] = g[at] / 6.0;
    }
}

inline DescentOutcome descend(SolverState& st, const SolverConfig& cfg, std::vector<double>& trace) {
    const std::size_t trace_start = trace.size();
    std::vector<double> x, g, x_new, g_new, dir;
    st.pack(x);
    double f = st.objective(x, &g);
    trace.push_back(f);

    double alpha = 1.0;  // natural scale for the h1-preconditioned direction

    DescentOutcome out;
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        out.iters = iter + 1;
        precondition(st, g, dir);
        bool accepted = false;
        int backtracks = 0;
        double f_new = f;
        for (int bt = 0; bt < cfg.max_backtracks; ++bt, ++backtracks) {
            x_new = x;
            for (int i = 0; i < st.num_dofs(); ++i) x_new[i] -= alpha * dir[i];
            st.unpack(x_new);
            st.pack(x_new);  // read back the projected point
            f_new = st.objective(x_new, nullptr);
            double decrease_ref = 0.0;
            for (int i = 0; i < st.num_dofs(); ++i) decrease_ref += g[i] * (x[i] - x_new[i]);
            if (f_new <= f - cfg.armijo_c * decrease_ref && f_new < f) {
                accepted = true;
                break;
            }
            alpha *= cfg.backtrack;
        }
        if (!accepted) {
            double dd = 0.0;
            for (int i = 0; i < st.num_dofs(); ++i) dd += g[i] * dir[i];
            if (dd > 1e-4 * (std::abs(f) + 1e-300))
                throw NonDecrease("line search failed with a live descent direction");
            out.termination = "line-search-floor";
            return out;
        }
        if (backtracks == 0) alpha = std::min(alpha * 1.7, 64.0);
        st.objective(x_new, &g_new);

        x.swap(x_new);
        g.swap(g_new);
        f = f_new;
        trace.push_back(f);

        const int w = cfg.tol_window;
        const int n = static_cast<int>(trace.size() - trace_start);
        if (n > w && trace[trace_start + n - 1 - w] - trace[trace_start + n - 1] <=
                         cfg.tol_rel * (std::abs(trace[trace_start + n - 1]) + 1e-300)) {
            out.termination = "tolerance";
            return out;
        }
    }
    out.termination = "max-iters";
    return out;
}


}  // namespace plateau::detail
