#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "plateau/error.hpp"
#include "plateau/plmap.hpp"
#include "plateau/rng.hpp"
#include "plateau/serialize.hpp"

using namespace plateau;

namespace {

std::shared_ptr<const DiscMesh> mesh_at(int level) {
    return std::make_shared<DiscMesh>(make_disc_mesh(level));
}

std::vector<double> linear_images(const DiscMesh& mesh, const Mat2& L) {
    std::vector<double> images(static_cast<std::size_t>(mesh.num_vertices()) * 2);
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        const Vec2 q = L * mesh.vertices[i];
        images[2 * i] = q.x();
        images[2 * i + 1] = q.y();
    }
    return images;
}

// conformal parametrization of the cone cap of slope r in the developed chart
std::vector<double> cone_map_images(const DiscMesh& mesh, double r) {
    std::vector<double> images(static_cast<std::size_t>(mesh.num_vertices()) * 2);
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        const Vec2& z = mesh.vertices[i];
        const double rho = z.norm();
        Vec2 p = Vec2::Zero();
        if (rho > 0) p = r * std::pow(rho, r) * (z / rho);
        images[2 * i] = p.x();
        images[2 * i + 1] = p.y();
    }
    return images;
}

}  // namespace

TEST_CASE("structured disc meshes satisfy all invariants") {
    for (int level = 0; level <= 3; ++level) {
        const DiscMesh mesh = make_disc_mesh(level);
        mesh.validate();
        CHECK(static_cast<int>(mesh.boundary_cycle.size()) == 8 * (1 << level));
        const double defect = M_PI - mesh.total_area();
        CHECK(defect > 0);
        CHECK(defect <= M_PI * 1.7 / std::pow(4.0, level));
        // shoelace oracle over all triangles
        double shoelace_total = 0.0;
        for (int t = 0; t < mesh.num_triangles(); ++t) {
            const auto& tri = mesh.triangles[t];
            shoelace_total += oracle::shoelace(
                {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]});
        }
        CHECK(shoelace_total == doctest::Approx(mesh.total_area()));
    }
}

TEST_CASE("energies of affine maps") {
    auto mesh = mesh_at(5);
    const double mesh_area = mesh->total_area();

    PLMap identity(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    CHECK(identity.energy_plus() == doctest::Approx(M_PI).epsilon(5e-3));
    CHECK(identity.energy_plus() == doctest::Approx(mesh_area).epsilon(1e-12));
    CHECK(identity.energy_ks() == doctest::Approx(2 * M_PI).epsilon(5e-3));
    // conformal maps: ks energy doubles the directional maximum exactly
    CHECK(identity.energy_ks() == doctest::Approx(2 * identity.energy_plus()).epsilon(1e-12));

    PLMap doubled(mesh, TargetSpace::euclidean(2), linear_images(*mesh, 2 * Mat2::Identity()));
    CHECK(doubled.energy_plus() == doctest::Approx(4 * M_PI).epsilon(5e-3));

    PLMap into_linf(mesh, TargetSpace::normed_plane(NormDescriptor::linf()),
                    linear_images(*mesh, Mat2::Identity()));
    CHECK(into_linf.energy_plus() == doctest::Approx(M_PI).epsilon(5e-3));
    CHECK(into_linf.energy_ks() == doctest::Approx(M_PI + 2).epsilon(5e-3));
}

TEST_CASE("areas of affine and cone maps") {
    auto mesh = mesh_at(5);
    PLMap identity(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    for (VolumeDefinition mu : kAllVolumes)
        CHECK(identity.area_mu(mu) == doctest::Approx(M_PI).epsilon(5e-3));

    PLMap into_linf(mesh, TargetSpace::normed_plane(NormDescriptor::linf()),
                    linear_images(*mesh, Mat2::Identity()));
    CHECK(into_linf.area_mu(VolumeDefinition::Busemann) ==
          doctest::Approx(M_PI * M_PI / 4).epsilon(5e-3));
    CHECK(into_linf.area_mu(VolumeDefinition::MassStar) == doctest::Approx(M_PI).epsilon(5e-3));

    auto fine = mesh_at(6);
    for (double r : {0.5, 0.75}) {
        PLMap cone_map(fine, TargetSpace::cone(r), cone_map_images(*fine, r));
        for (VolumeDefinition mu : kAllVolumes)
            CHECK(cone_map.area_mu(mu) == doctest::Approx(M_PI * r).epsilon(1e-2));
    }
}

TEST_CASE("area-energy comparisons and the conformal equality chain") {
    auto mesh = mesh_at(3);
    Rng rng(71);
    // random piecewise-linear map into the sup-norm plane
    std::vector<double> images = linear_images(*mesh, Mat2::Identity());
    const auto boundary = mesh->boundary_mask();
    for (int i = 0; i < mesh->num_vertices(); ++i)
        if (!boundary[i]) {
            images[2 * i] += 0.2 * rng.normal();
            images[2 * i + 1] += 0.2 * rng.normal();
        }
    PLMap u(mesh, TargetSpace::normed_plane(NormDescriptor::linf()), std::move(images));

    double q_max = 1.0;
    for (int t = 0; t < mesh->num_triangles(); ++t) {
        const Seminorm2& s = u.triangle_seminorm(t);
        const double area_w = mesh->triangle_area(t);
        const double plus = area_w * i_plus(s, 2.0), avg = area_w * i_avg(s, 2.0);
        for (VolumeDefinition mu : kAllVolumes) {
            const double a = area_w * mu_jacobian(mu, s);
            CHECK(a <= plus * (1 + 1e-9) + 1e-12);
            CHECK(a <= avg * (1 + 1e-9) + 1e-12);
        }
        const double q = q_factor(s);
        if (!std::isinf(q)) q_max = std::max(q_max, q);
    }
    for (VolumeDefinition mu : kAllVolumes) {
        const double area = u.area_mu(mu);
        CHECK(area <= u.energy_plus() * (1 + 1e-9));
        CHECK(area <= u.energy_ks() * (1 + 1e-9));
        CHECK(u.energy_plus() <= q_max * q_max * area * (1 + 1e-9));
        CHECK(u.energy_ks() <= 2 * q_max * q_max * area * (1 + 1e-9));
    }

    // conformal chain at per-triangle level
    PLMap conf(mesh, TargetSpace::euclidean(2), linear_images(*mesh, 1.3 * Mat2::Identity()));
    for (VolumeDefinition mu : kAllVolumes) {
        CHECK(conf.energy_ks() == doctest::Approx(2 * conf.energy_plus()).epsilon(1e-12));
        CHECK(conf.energy_ks() == doctest::Approx(2 * conf.area_mu(mu)).epsilon(1e-12));
    }
}

TEST_CASE("additivity over triangle partitions") {
    auto mesh = mesh_at(3);
    PLMap u(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    double sum_a = 0.0, sum_b = 0.0;
    for (int t = 0; t < mesh->num_triangles(); ++t) {
        const double v = mesh->triangle_area(t) * i_plus(u.triangle_seminorm(t), 2.0);
        (t % 2 == 0 ? sum_a : sum_b) += v;
    }
    CHECK(sum_a + sum_b == doctest::Approx(u.energy_plus()).epsilon(1e-13));
}

TEST_CASE("rotation of the domain leaves functionals invariant") {
    auto mesh = mesh_at(3);
    // rotation by pi/4 is a mesh automorphism: per-ring index shift
    const DiscMesh& m = *mesh;
    std::vector<int> perm(m.num_vertices());
    perm[0] = 0;
    int base = 1;
    for (int j = 1; j <= (1 << 3); ++j) {
        const int n = 8 * j;
        for (int i = 0; i < n; ++i) perm[base + i] = base + (i + j) % n;
        base += n;
    }
    Rng rng(5);
    std::vector<double> images(static_cast<std::size_t>(m.num_vertices()) * 2);
    for (auto& v : images) v = rng.normal();
    PLMap u(mesh, TargetSpace::normed_plane(NormDescriptor::l1()), images);
    std::vector<double> rotated(images.size());
    for (int i = 0; i < m.num_vertices(); ++i) {
        rotated[2 * perm[i]] = images[2 * i];
        rotated[2 * perm[i] + 1] = images[2 * i + 1];
    }
    PLMap ur(mesh, TargetSpace::normed_plane(NormDescriptor::l1()), rotated);
    CHECK(ur.energy_plus() == doctest::Approx(u.energy_plus()).epsilon(1e-9));
    CHECK(ur.energy_ks() == doctest::Approx(u.energy_ks()).epsilon(1e-9));
    for (VolumeDefinition mu : kAllVolumes)
        CHECK(ur.area_mu(mu) == doctest::Approx(u.area_mu(mu)).epsilon(1e-9));
}

TEST_CASE("qc report") {
    auto mesh = mesh_at(4);
    PLMap identity(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    CHECK(identity.qc_report().max_q == doctest::Approx(1.0));

    PLMap into_linf(mesh, TargetSpace::normed_plane(NormDescriptor::linf()),
                    linear_images(*mesh, Mat2::Identity()));
    const QcReport linf_report = into_linf.qc_report();
    CHECK(linf_report.max_q == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(linf_report.median == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(linf_report.degenerate_count == 0);

    Mat2 aniso;
    aniso << 2, 0, 0, 0.5;
    PLMap stretched(mesh, TargetSpace::euclidean(2), linear_images(*mesh, aniso));
    CHECK(stretched.qc_report().max_q == doctest::Approx(4.0).epsilon(1e-9));

    // collapsed map: every triangle degenerate-anisotropic
    std::vector<double> collapsed(static_cast<std::size_t>(mesh->num_vertices()) * 2);
    for (int i = 0; i < mesh->num_vertices(); ++i) collapsed[2 * i] = mesh->vertices[i].x();
    PLMap flat(mesh, TargetSpace::euclidean(2), std::move(collapsed));
    CHECK(flat.qc_report().degenerate_area_fraction == doctest::Approx(1.0));
}

TEST_CASE("courant-lebesgue probe") {
    auto mesh = mesh_at(5);
    PLMap identity(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    for (double delta : {0.01, 0.05}) {
        const auto cl = identity.courant_lebesgue(Vec2(0, 0), delta);
        CHECK(cl.pass);
        CHECK(cl.arc_length <= 2 * M_PI * std::sqrt(delta) + 1e-6);
        const auto off_center = identity.courant_lebesgue(Vec2(0.3, -0.2), delta);
        CHECK(off_center.pass);
    }
    PLMap constant(mesh, TargetSpace::euclidean(2),
                   std::vector<double>(static_cast<std::size_t>(mesh->num_vertices()) * 2, 0.25));
    const auto cl = constant.courant_lebesgue(Vec2(0, 0), 0.01);
    CHECK(cl.arc_length == doctest::Approx(0.0));
    CHECK(cl.pass);
}

TEST_CASE("holder exponent fits") {
    auto mesh = mesh_at(6);
    PLMap identity(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    const auto fit_id = identity.holder_fit(Vec2(0, 0), 0.5);
    CHECK(fit_id.alpha_hat == doctest::Approx(1.0).epsilon(0.02));

    PLMap cone_map(mesh, TargetSpace::cone(0.5), cone_map_images(*mesh, 0.5));
    const auto fit_cone = cone_map.holder_fit(Vec2(0, 0), 0.35);
    CHECK(fit_cone.alpha_hat == doctest::Approx(0.5).epsilon(0.1));
    CHECK(std::abs(fit_cone.alpha_hat - 0.5) <= 0.05);

    // z -> z^2 away from the origin is smooth: exponent one
    std::vector<double> sq(static_cast<std::size_t>(mesh->num_vertices()) * 2);
    for (int i = 0; i < mesh->num_vertices(); ++i) {
        const Vec2& z = mesh->vertices[i];
        sq[2 * i] = z.x() * z.x() - z.y() * z.y();
        sq[2 * i + 1] = 2 * z.x() * z.y();
    }
    PLMap square_map(mesh, TargetSpace::euclidean(2), std::move(sq));
    const auto fit_sq = square_map.holder_fit(Vec2(0.55, 0.0), 0.3);
    CHECK(std::abs(fit_sq.alpha_hat - 1.0) <= 0.05);
}

TEST_CASE("refinement preserves boundary and approximates functionals") {
    auto mesh = mesh_at(3);
    PLMap cone_map(mesh, TargetSpace::cone(0.5), cone_map_images(*mesh, 0.5));
    const PLMap fine = cone_map.refine();
    CHECK(fine.mesh().num_triangles() == 4 * mesh->num_triangles());
    CHECK(fine.mesh().num_vertices() > 3 * mesh->num_vertices());
    fine.mesh().validate();
    CHECK(fine.energy_plus() == doctest::Approx(cone_map.energy_plus()).epsilon(0.05));

    // affine maps change only through the projected boundary ring
    PLMap affine(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    const PLMap affine_fine = affine.refine();
    CHECK(affine_fine.energy_plus() == doctest::Approx(affine.energy_plus()).epsilon(5e-3));
    CHECK(affine_fine.energy_plus() >= affine.energy_plus());  // domain polygon grows
}

TEST_CASE("trace curves") {
    auto mesh = mesh_at(5);
    PLMap identity(mesh, TargetSpace::euclidean(2), linear_images(*mesh, Mat2::Identity()));
    CHECK(identity.trace_curve().length == doctest::Approx(2 * M_PI).epsilon(1e-3));

    PLMap constant(mesh, TargetSpace::euclidean(2),
                   std::vector<double>(static_cast<std::size_t>(mesh->num_vertices()) * 2, 1.0));
    CHECK(constant.trace_curve().length == doctest::Approx(0.0));

    // disc-to-square projection: boundary maps onto the sup-norm unit sphere
    std::vector<double> sq_images(static_cast<std::size_t>(mesh->num_vertices()) * 2);
    for (int i = 0; i < mesh->num_vertices(); ++i) {
        const Vec2& z = mesh->vertices[i];
        const double sup = std::max(std::abs(z.x()), std::abs(z.y()));
        const Vec2 q = (sup > 0) ? Vec2(z * (z.norm() / sup)) : Vec2(0, 0);
        sq_images[2 * i] = q.x();
        sq_images[2 * i + 1] = q.y();
    }
    PLMap square_map(mesh, TargetSpace::normed_plane(NormDescriptor::linf()), std::move(sq_images));
    CHECK(square_map.trace_curve().length == doctest::Approx(8.0).epsilon(1e-9));
}

TEST_CASE("off and json round trips") {
    const DiscMesh mesh = make_disc_mesh(2);
    const DiscMesh back = read_off(write_off(mesh));
    CHECK(back.num_vertices() == mesh.num_vertices());
    CHECK(back.num_triangles() == mesh.num_triangles());
    CHECK(back.boundary_cycle.size() == mesh.boundary_cycle.size());
    CHECK(back.level == mesh.level);
    back.validate();

    auto shared = mesh_at(2);
    PLMap u(shared, TargetSpace::cone(0.5), cone_map_images(*shared, 0.5));
    const PLMap v = map_from_json(map_to_json(u));
    CHECK(v.images() == u.images());
    CHECK(v.energy_plus() == doctest::Approx(u.energy_plus()).epsilon(1e-14));
}

TEST_CASE("cone map distortion settles at one away from the apex") {
    auto mesh = mesh_at(6);
    PLMap cone_map(mesh, TargetSpace::cone(0.5), cone_map_images(*mesh, 0.5));
    const auto qc = cone_map.qc_report();
    double worst = 1.0;
    for (int t = 0; t < mesh->num_triangles(); ++t) {
        const auto& tri = mesh->triangles[t];
        const Vec2 c = (mesh->vertices[tri[0]] + mesh->vertices[tri[1]] + mesh->vertices[tri[2]]) / 3;
        if (c.norm() > 0.2) worst = std::max(worst, qc.per_triangle[t]);
    }
    CHECK(worst <= 1.05);
}
