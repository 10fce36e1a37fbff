#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>

#include "plateau/error.hpp"
#include "plateau/scenario.hpp"
#include "plateau/serialize.hpp"

namespace py = pybind11;
using namespace plateau;

namespace {

Mat2 to_mat(const std::array<std::array<double, 2>, 2>& m) {
    Mat2 out;
    out << m[0][0], m[0][1], m[1][0], m[1][1];
    return out;
}

std::vector<TargetPoint> to_points(const std::vector<std::vector<double>>& pts, int chart) {
    std::vector<TargetPoint> out;
    for (const auto& p : pts) out.emplace_back(p, chart);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "discrete fillings of Jordan curves in normed and metric targets";

    py::register_exception<Error>(m, "PlateauError");

    py::class_<NormDescriptor>(m, "Norm")
        .def_static("euclidean", &NormDescriptor::euclidean)
        .def_static("p_norm", &NormDescriptor::p_norm, py::arg("p"))
        .def_static("linf", &NormDescriptor::linf)
        .def_static("l1", &NormDescriptor::l1)
        .def_static(
            "polygon",
            [](const std::vector<std::array<double, 2>>& verts) {
                std::vector<Vec2> v;
                for (const auto& p : verts) v.emplace_back(p[0], p[1]);
                return NormDescriptor::polygon(std::move(v));
            },
            py::arg("vertices"))
        .def_static(
            "ellipse",
            [](const std::array<std::array<double, 2>, 2>& g) {
                return NormDescriptor::ellipse(to_mat(g));
            },
            py::arg("gram"))
        .def("__call__",
             [](const NormDescriptor& n, double x, double y) { return n(Vec2(x, y)); })
        .def("__repr__", [](const NormDescriptor& n) { return "<Norm " + n.describe() + ">"; });

    py::class_<Seminorm2>(m, "Seminorm")
        .def(py::init([](const std::array<std::array<double, 2>, 2>& a, const NormDescriptor& base) {
                 return Seminorm2(to_mat(a), base);
             }),
             py::arg("matrix"), py::arg("base") = NormDescriptor::euclidean())
        .def("__call__", [](const Seminorm2& s, double x, double y) { return s(Vec2(x, y)); })
        .def_property_readonly("degenerate", &Seminorm2::degenerate)
        .def("i_plus", [](const Seminorm2& s, double p) { return i_plus(s, p); }, py::arg("p") = 2.0)
        .def("i_avg", [](const Seminorm2& s, double p) { return i_avg(s, p); }, py::arg("p") = 2.0)
        .def("q_factor", [](const Seminorm2& s) { return q_factor(s); })
        .def("compose",
             [](const Seminorm2& s, const std::array<std::array<double, 2>, 2>& t) {
                 return compose(s, to_mat(t));
             })
        .def("distance_to",
             [](const Seminorm2& s, const Seminorm2& t, int grid) {
                 return seminorm_distance(s, t, grid);
             },
             py::arg("other"), py::arg("grid") = 256);

    py::enum_<VolumeDefinition>(m, "Volume")
        .value("busemann", VolumeDefinition::Busemann)
        .value("holmes_thompson", VolumeDefinition::HolmesThompson)
        .value("mass_star", VolumeDefinition::MassStar)
        .value("inscribed_ellipse", VolumeDefinition::InscribedEllipse);

    m.def("jacobian", &mu_jacobian, py::arg("volume"), py::arg("seminorm"));
    m.def("norm_constant", &norm_constant, py::arg("volume"), py::arg("norm"),
          py::arg("ball_vertices") = 4096);

    py::class_<TargetSpace>(m, "Target")
        .def_static("normed_plane", &TargetSpace::normed_plane, py::arg("norm"))
        .def_static("euclidean", &TargetSpace::euclidean, py::arg("dim"))
        .def_static("cone", &TargetSpace::cone, py::arg("r"))
        .def_static("bi_disc", &TargetSpace::bi_disc, py::arg("norm"), py::arg("scale"))
        .def("distance",
             [](const TargetSpace& t, const std::vector<double>& a, const std::vector<double>& b,
                int chart_a, int chart_b) {
                 return t.distance(TargetPoint(a, chart_a), TargetPoint(b, chart_b));
             },
             py::arg("a"), py::arg("b"), py::arg("chart_a") = 1, py::arg("chart_b") = 1)
        .def("__repr__", [](const TargetSpace& t) { return "<Target " + t.describe() + ">"; });

    py::class_<DiscMesh, std::shared_ptr<DiscMesh>>(m, "DiscMesh")
        .def_property_readonly("num_vertices", &DiscMesh::num_vertices)
        .def_property_readonly("num_triangles", &DiscMesh::num_triangles)
        .def_property_readonly("level", [](const DiscMesh& mesh) { return mesh.level; })
        .def("total_area", &DiscMesh::total_area)
        .def("to_off", [](const DiscMesh& mesh) { return write_off(mesh); });

    m.def("make_disc_mesh",
          [](int level) { return std::make_shared<DiscMesh>(make_disc_mesh(level)); },
          py::arg("level"));
    m.def("read_off",
          [](const std::string& text) { return std::make_shared<DiscMesh>(read_off(text)); });

    py::class_<QcReport>(m, "QcReport")
        .def_readonly("max_q", &QcReport::max_q)
        .def_readonly("median", &QcReport::median)
        .def_readonly("q25", &QcReport::q25)
        .def_readonly("q75", &QcReport::q75)
        .def_readonly("q90", &QcReport::q90)
        .def_readonly("degenerate_area_fraction", &QcReport::degenerate_area_fraction)
        .def_readonly("per_triangle", &QcReport::per_triangle);

    py::class_<CourantLebesgueResult>(m, "CourantLebesgue")
        .def_readonly("r_star", &CourantLebesgueResult::r_star)
        .def_readonly("arc_length", &CourantLebesgueResult::arc_length)
        .def_readonly("bound", &CourantLebesgueResult::bound)
        .def_readonly("passed", &CourantLebesgueResult::pass);

    py::class_<HolderFitResult>(m, "HolderFit")
        .def_readonly("alpha", &HolderFitResult::alpha_hat)
        .def_readonly("constant", &HolderFitResult::constant_hat)
        .def_readonly("rmse", &HolderFitResult::rmse);

    py::class_<PLMap>(m, "PLMap")
        .def(py::init([](std::shared_ptr<DiscMesh> mesh, const TargetSpace& target,
                         const std::vector<double>& images, const std::vector<int>& charts) {
                 return PLMap(std::move(mesh), target, images, charts);
             }),
             py::arg("mesh"), py::arg("target"), py::arg("images"),
             py::arg("charts") = std::vector<int>{})
        .def_property_readonly("images", &PLMap::images)
        .def_property_readonly("target", &PLMap::target)
        .def("energy_plus", &PLMap::energy_plus)
        .def("energy_ks", &PLMap::energy_ks)
        .def("area", &PLMap::area_mu, py::arg("volume"))
        .def("qc_report", &PLMap::qc_report)
        .def("courant_lebesgue",
             [](const PLMap& u, double x, double y, double delta) {
                 return u.courant_lebesgue(Vec2(x, y), delta);
             },
             py::arg("x"), py::arg("y"), py::arg("delta"))
        .def("holder_fit",
             [](const PLMap& u, double cx, double cy, double radius, std::uint64_t seed) {
                 return u.holder_fit(Vec2(cx, cy), radius, seed);
             },
             py::arg("cx"), py::arg("cy"), py::arg("radius"), py::arg("seed") = 7)
        .def("refine", &PLMap::refine)
        .def("trace_length", [](const PLMap& u) { return u.trace_curve().length; })
        .def("evaluate",
             [](const PLMap& u, double x, double y) {
                 const TargetPoint p = u.evaluate(Vec2(x, y));
                 return std::make_pair(p.x, p.chart);
             })
        .def("to_json", [](const PLMap& u) { return map_to_json(u); })
        .def("to_svg", [](const PLMap& u) { return plot_map(u); });

    m.def("map_from_json", &map_from_json, py::arg("text"));

    py::class_<JordanBoundary>(m, "JordanBoundary")
        .def(py::init([](const TargetSpace& t, const std::vector<std::vector<double>>& pts,
                         int chart) { return JordanBoundary(t, to_points(pts, chart)); }),
             py::arg("target"), py::arg("points"), py::arg("chart") = 1)
        .def_property_readonly("length", &JordanBoundary::length)
        .def("point_at", [](const JordanBoundary& b, double t) { return b.point_at(t).x; })
        .def("is_injective", &JordanBoundary::injective_polyline);

    py::enum_<FunctionalKind>(m, "Functional")
        .value("energy_plus", FunctionalKind::EnergyPlus)
        .value("energy_ks", FunctionalKind::EnergyKS)
        .value("area", FunctionalKind::AreaMu)
        .value("area_regularized", FunctionalKind::AreaMuRegularized);

    py::class_<PlateauProblem>(m, "Problem")
        .def(py::init([](const TargetSpace& target, const JordanBoundary& boundary, int level,
                         FunctionalKind functional) {
                 return PlateauProblem{target, boundary, level, functional};
             }),
             py::arg("target"), py::arg("boundary"), py::arg("level"),
             py::arg("functional") = FunctionalKind::EnergyPlus)
        .def_readwrite("pin_domain_angles", &PlateauProblem::pin_domain_angles)
        .def_readwrite("pin_params", &PlateauProblem::pin_params);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("tol_rel", &SolverConfig::tol_rel)
        .def_readwrite("grid_k", &SolverConfig::grid_k)
        .def_readwrite("beta", &SolverConfig::beta)
        .def_readwrite("eps0", &SolverConfig::eps0)
        .def_readwrite("eps_ratio", &SolverConfig::eps_ratio)
        .def_readwrite("eps_stages", &SolverConfig::eps_stages)
        .def_readwrite("seed", &SolverConfig::seed)
        .def_readwrite("hierarchical", &SolverConfig::hierarchical);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("map", &SolveResult::map)
        .def_readonly("energy_plus", &SolveResult::energy_plus)
        .def_readonly("energy_ks", &SolveResult::energy_ks)
        .def_readonly("qc", &SolveResult::qc)
        .def_readonly("trace", &SolveResult::trace)
        .def_readonly("termination", &SolveResult::termination)
        .def("area",
             [](const SolveResult& r, VolumeDefinition mu) {
                 for (std::size_t i = 0; i < kAllVolumes.size(); ++i)
                     if (kAllVolumes[i] == mu) return r.area[i];
                 return 0.0;
             },
             py::arg("volume"));

    m.def("minimize_energy", &minimize_energy, py::arg("problem"),
          py::arg("config") = SolverConfig{});
    m.def("minimize_area", &minimize_area, py::arg("problem"), py::arg("volume"),
          py::arg("config") = SolverConfig{});

    py::class_<VariationResult>(m, "VariationResult")
        .def_readonly("delta_energy_plus", &VariationResult::delta_energy_plus)
        .def_readonly("direct_delta", &VariationResult::direct_delta)
        .def_readonly("c", &VariationResult::c)
        .def_readonly("d", &VariationResult::d)
        .def_readonly("injective", &VariationResult::injective)
        .def_readonly("conformal_outside_max_q", &VariationResult::conformal_outside_max_q)
        .def_readonly("conformal_residual", &VariationResult::conformal_residual);

    m.def("variation_test",
          [](const PLMap& u, double x, double y, double r,
             const std::array<std::array<double, 2>, 2>& t) {
              return variation_test(u, Vec2(x, y), r, to_mat(t));
          },
          py::arg("map"), py::arg("x"), py::arg("y"), py::arg("r"), py::arg("matrix"));

    m.def("fill_injective", &fill_injective, py::arg("curve"), py::arg("level"));

    py::class_<BiDiscReport>(m, "BiDiscReport")
        .def_readonly("area_mu_u1", &BiDiscReport::area_mu_u1)
        .def_readonly("area_mu_u2", &BiDiscReport::area_mu_u2)
        .def_readonly("area_nu_u1", &BiDiscReport::area_nu_u1)
        .def_readonly("area_nu_u2", &BiDiscReport::area_nu_u2)
        .def_readonly("argmin_mu", &BiDiscReport::argmin_mu)
        .def_readonly("argmin_nu", &BiDiscReport::argmin_nu)
        .def_readonly("argmins_differ", &BiDiscReport::argmins_differ);

    m.def("bi_disc_scenario", &bi_disc_scenario, py::arg("norm"), py::arg("scale"), py::arg("mu"),
          py::arg("nu"), py::arg("level"));

    py::class_<AssertionRow>(m, "Assertion")
        .def_readonly("name", &AssertionRow::name)
        .def_readonly("expected", &AssertionRow::expected)
        .def_readonly("got", &AssertionRow::got)
        .def_readonly("tol", &AssertionRow::tol)
        .def_readonly("passed", &AssertionRow::pass);

    py::class_<RunArtifact>(m, "RunArtifact")
        .def_readonly("result_path", &RunArtifact::result_path)
        .def_readonly("files", &RunArtifact::files)
        .def_readonly("assertions", &RunArtifact::assertions)
        .def_readonly("passed", &RunArtifact::pass);

    m.def("run_scenario",
          [](const std::string& name, int level, std::uint64_t seed, const std::string& out_dir,
             double tol_scale) {
              ScenarioSpec spec;
              spec.name = name;
              spec.level = level;
              spec.seed = seed;
              spec.out_dir = out_dir;
              spec.tol_scale = tol_scale;
              return run_scenario(spec);
          },
          py::arg("name"), py::arg("level") = -1, py::arg("seed") = 17, py::arg("out_dir") = "out",
          py::arg("tol_scale") = 1.0);
    m.def("list_scenarios", &list_scenarios);
}
