#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "plateau/rng.hpp"
#include "plateau/error.hpp"
#include "plateau/volume.hpp"

using namespace plateau;

namespace {

Mat2 mat(double a, double b, double c, double d) {
    Mat2 m;
    m << a, b, c, d;
    return m;
}

Mat2 rotation(double t) { return mat(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)); }

NormDescriptor random_polygon_norm(Rng& rng, int max_pairs = 8) {
    const int pairs = rng.uniform_int(2, max_pairs);
    Mat2 M;
    do {
        M << rng.normal(), rng.normal(), rng.normal(), rng.normal();
    } while (std::abs(M.determinant()) < 0.2);
    std::vector<Vec2> verts;
    for (int i = 0; i < 2 * pairs; ++i) {
        const double t = 2.0 * M_PI * i / (2 * pairs);
        verts.push_back(M * Vec2(std::cos(t), std::sin(t)));
    }
    if (M.determinant() < 0) std::reverse(verts.begin(), verts.end());
    return NormDescriptor::polygon(verts);
}

const Seminorm2 kLinf(Mat2::Identity(), NormDescriptor::linf());
const Seminorm2 kL1(Mat2::Identity(), NormDescriptor::l1());

}  // namespace

TEST_CASE("unit ball areas: disc, square, diamond") {
    const Seminorm2 euclid;
    CHECK(unit_ball(euclid, 4096).area() == doctest::Approx(M_PI).epsilon(1e-5));
    CHECK(unit_ball(kLinf, 4096).area() == doctest::Approx(4.0).epsilon(1e-5));
    CHECK(unit_ball(kL1, 4096).area() == doctest::Approx(2.0).epsilon(1e-5));
    // shoelace oracle agrees with the area member
    const auto ball = unit_ball(kL1, 4096);
    CHECK(ball.area() == doctest::Approx(oracle::shoelace(ball.vertices)));
    CHECK_THROWS_AS(unit_ball(Seminorm2(mat(1, 0, 0, 0), NormDescriptor::euclidean()), 64),
                    DegenerateSeminorm);
}

TEST_CASE("polar body: square <-> diamond, disc self-polar, involution") {
    const ConvexBody2 square({Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1), Vec2(-1, -1)});
    const ConvexBody2 diamond = polar_body(square);
    CHECK(diamond.area() == doctest::Approx(2.0));
    for (const auto& v : diamond.vertices) CHECK(std::abs(v.x()) + std::abs(v.y()) == doctest::Approx(1.0));
    CHECK(polar_body(diamond).area() == doctest::Approx(4.0));

    const auto disc = unit_ball(Seminorm2(), 2048);
    CHECK(polar_body(disc).area() == doctest::Approx(M_PI).epsilon(1e-4));

    // halfplane-intersection oracle
    const auto oracle_poly = oracle::halfplane_polar(square.vertices);
    CHECK(oracle::shoelace(oracle_poly) == doctest::Approx(diamond.area()).epsilon(1e-9));

    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const auto norm = random_polygon_norm(rng);
        const ConvexBody2 body(norm.polygon_vertices());
        const auto polar = polar_body(body);
        CHECK(polar_body(polar).area() == doctest::Approx(body.area()).epsilon(1e-9));
        CHECK(polar.area() ==
              doctest::Approx(oracle::shoelace(oracle::halfplane_polar(body.vertices))).epsilon(1e-9));
    }
}

TEST_CASE("minimal circumscribed parallelogram") {
    const ConvexBody2 square({Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1), Vec2(-1, -1)});
    CHECK(min_circumscribed_parallelogram(square).area == doctest::Approx(4.0));
    const ConvexBody2 diamond({Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)});
    CHECK(min_circumscribed_parallelogram(diamond).area == doctest::Approx(2.0));
    const auto disc = unit_ball(Seminorm2(), 4096);
    CHECK(min_circumscribed_parallelogram(disc).area == doctest::Approx(4.0).epsilon(1e-3));

    Rng rng(13);
    for (int i = 0; i < 10; ++i) {
        const auto norm = random_polygon_norm(rng, 5);
        const ConvexBody2 body(norm.polygon_vertices());
        const double exact = min_circumscribed_parallelogram(body).area;
        // the functional-grid oracle can only overshoot the minimum
        const double approx = oracle::parallelogram_grid(body);
        CHECK(exact <= approx * (1 + 1e-12));
        CHECK(approx - exact <= 5e-3 * approx);
    }
}

TEST_CASE("maximal inscribed ellipse") {
    const ConvexBody2 square({Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1), Vec2(-1, -1)});
    const Ellipse2 e1 = max_inscribed_ellipse(square);
    CHECK(e1.area() == doctest::Approx(M_PI).epsilon(1e-7));
    CHECK(e1.G(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(e1.G(0, 1) == doctest::Approx(0.0).epsilon(1e-6));

    const ConvexBody2 diamond({Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)});
    CHECK(max_inscribed_ellipse(diamond).area() == doctest::Approx(M_PI / 2).epsilon(1e-7));

    Rng rng(17);
    for (int i = 0; i < 8; ++i) {
        const auto norm = random_polygon_norm(rng, 3);  // hexagons
        const ConvexBody2 body(norm.polygon_vertices());
        const Ellipse2 e = max_inscribed_ellipse(body);
        CHECK(e.area() == doctest::Approx(oracle::ellipse_grid_area(body)).epsilon(1e-4));
        // containment: support at each edge functional stays below 1
        const Mat2 H = e.G.inverse();
        for (const auto& eta : polar_body(body).vertices)
            CHECK(std::sqrt(eta.dot(H * eta)) <= 1.0 + 1e-8);
        // local maximality over a parameter grid
        Eigen::SelfAdjointEigenSolver<Mat2> es(H);
        for (double da : {-0.02, 0.02})
            for (double db : {-0.02, 0.02}) {
                Vec2 lam = es.eigenvalues();
                Mat2 Hp = es.eigenvectors() *
                          Vec2(lam[0] * (1 + da), lam[1] * (1 + db)).asDiagonal() *
                          es.eigenvectors().transpose();
                bool feasible = true;
                for (const auto& eta : polar_body(body).vertices)
                    if (eta.dot(Hp * eta) > 1.0) feasible = false;
                if (feasible) CHECK(Hp.determinant() <= H.determinant() * (1 + 1e-6));
            }
    }
}

TEST_CASE("jacobian tables for the reference norms") {
    const Seminorm2 euclid;
    for (VolumeDefinition mu : kAllVolumes) {
        CHECK(mu_jacobian(mu, euclid) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mu_jacobian_polygonal(mu, euclid) == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(mu_jacobian(VolumeDefinition::Busemann, kLinf) == doctest::Approx(M_PI / 4).epsilon(1e-9));
    CHECK(mu_jacobian(VolumeDefinition::HolmesThompson, kLinf) == doctest::Approx(2 / M_PI).epsilon(1e-9));
    CHECK(mu_jacobian(VolumeDefinition::MassStar, kLinf) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mu_jacobian(VolumeDefinition::InscribedEllipse, kLinf) == doctest::Approx(1.0).epsilon(1e-7));

    CHECK(mu_jacobian(VolumeDefinition::Busemann, kL1) == doctest::Approx(M_PI / 2).epsilon(1e-9));
    CHECK(mu_jacobian(VolumeDefinition::HolmesThompson, kL1) == doctest::Approx(4 / M_PI).epsilon(1e-9));
    CHECK(mu_jacobian(VolumeDefinition::MassStar, kL1) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(mu_jacobian(VolumeDefinition::InscribedEllipse, kL1) == doctest::Approx(2.0).epsilon(1e-7));

    // degenerate seminorms have zero jacobian
    const Seminorm2 rank1(mat(2, 1, 4, 2), NormDescriptor::linf());
    for (VolumeDefinition mu : kAllVolumes) CHECK(mu_jacobian(mu, rank1) == 0.0);
}

TEST_CASE("norm constants cross-checked by two discretizations") {
    const NormDescriptor p3 = NormDescriptor::p_norm(3.0);
    for (VolumeDefinition mu : kAllVolumes) {
        const double a = norm_constant(mu, p3, 4096);
        const double b = norm_constant(mu, p3, 8192);
        CHECK(a == doctest::Approx(b).epsilon(1e-4));
    }
    CHECK(norm_constant(VolumeDefinition::Busemann, NormDescriptor::euclidean()) == 1.0);
}

TEST_CASE("factorized jacobian matches the polygonal route") {
    Rng rng(29);
    for (int i = 0; i < 20; ++i) {
        const NormDescriptor base = (i % 2 == 0) ? random_polygon_norm(rng)
                                                 : NormDescriptor::p_norm(rng.uniform(1.0, 4.0));
        // moderate condition number keeps the polygonal route's own
        // discretization error below the comparison tolerance
        const Mat2 A = rotation(rng.uniform(0, M_PI)) *
                       mat(rng.uniform(0.5, 2.0), 0, 0, rng.uniform(0.5, 2.0)) *
                       rotation(rng.uniform(0, M_PI));
        const Seminorm2 s(A, base);
        for (VolumeDefinition mu : kAllVolumes)
            CHECK(mu_jacobian(mu, s) == doctest::Approx(mu_jacobian_polygonal(mu, s)).epsilon(1e-2));
    }
}

TEST_CASE("scaling equivariance, ordering and factor-2 closeness") {
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const NormDescriptor base = random_polygon_norm(rng);
        Mat2 A, T;
        A << rng.normal(), rng.normal(), rng.normal(), rng.normal();
        T << rng.normal(), rng.normal(), rng.normal(), rng.normal();
        const Seminorm2 s(A, base);
        for (VolumeDefinition mu : kAllVolumes) {
            const double lhs = mu_jacobian(mu, compose(s, T));
            const double rhs = std::abs(T.determinant()) * mu_jacobian(mu, s);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
        }
        const double jb = mu_jacobian(VolumeDefinition::Busemann, s);
        const double jht = mu_jacobian(VolumeDefinition::HolmesThompson, s);
        const double jm = mu_jacobian(VolumeDefinition::MassStar, s);
        const double ji = mu_jacobian(VolumeDefinition::InscribedEllipse, s);
        if (s.degenerate()) continue;
        // universal facts: polar duality puts holmes-thompson below busemann,
        // the inscribed ellipse above it, and everything within a factor 2
        CHECK(jht <= jb * (1 + 1e-9));
        CHECK(jb <= ji * (1 + 1e-9));
        const double top = std::max({jb, jht, jm, ji});
        const double bot = std::min({jb, jht, jm, ji});
        CHECK(top <= 2.0 * bot * (1 + 1e-9));
    }
}

TEST_CASE("full ordering holds on the shipped norm families") {
    // busemann <= mass-star is a property of these families, not of all norms
    std::vector<NormDescriptor> family = {NormDescriptor::euclidean(), NormDescriptor::linf(),
                                          NormDescriptor::l1()};
    for (double p : {1.2, 1.5, 2.5, 3.0, 4.0}) family.push_back(NormDescriptor::p_norm(p));
    for (const auto& n : family) {
        const Seminorm2 s(Mat2::Identity(), n);
        const double jb = mu_jacobian(VolumeDefinition::Busemann, s);
        const double jht = mu_jacobian(VolumeDefinition::HolmesThompson, s);
        const double jm = mu_jacobian(VolumeDefinition::MassStar, s);
        CHECK(jht <= jb * (1 + 1e-9));
        CHECK(jb <= jm * (1 + 1e-9));
    }
}

TEST_CASE("quasi-convexity of the four volume definitions") {
    const Mat2 L = mat(1.1, 0.2, -0.3, 0.9);
    for (VolumeDefinition mu : kAllVolumes) {
        const auto report = quasi_convexity_test(mu, L, NormDescriptor::linf(), 50, 3, 99);
        CHECK(report.violations == 0);
        CHECK(report.min_margin >= -report.tolerance);
    }
    // identity perturbation has zero margin by construction
    const auto self_report = quasi_convexity_test(VolumeDefinition::Busemann, L,
                                                  NormDescriptor::euclidean(), 0, 3, 1);
    CHECK(self_report.min_margin == 0.0);
    CHECK(self_report.base_volume ==
          doctest::Approx(M_PI * std::abs(L.determinant())).epsilon(2e-3));
}
