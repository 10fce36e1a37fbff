#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "plateau/rng.hpp"
#include "plateau/seminorm.hpp"

using namespace plateau;

namespace {

Mat2 mat(double a, double b, double c, double d) {
    Mat2 m;
    m << a, b, c, d;
    return m;
}

Mat2 rotation(double t) { return mat(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)); }

// random seminorm over all base kinds; occasionally singular A
Seminorm2 random_seminorm(Rng& rng, bool allow_degenerate = true) {
    NormDescriptor base;
    switch (rng.uniform_int(0, 3)) {
        case 0: base = NormDescriptor::euclidean(); break;
        case 1: base = NormDescriptor::p_norm(rng.uniform(1.0, 4.0)); break;
        case 2: {
            // linear image of a regular polygon: symmetric and strictly convex
            const int pairs = rng.uniform_int(2, 8);
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
            base = NormDescriptor::polygon(verts);
            break;
        }
        default: {
            const double a = rng.uniform(0.4, 2.5), b = rng.uniform(0.4, 2.5), t = rng.uniform(0.0, M_PI);
            const Mat2 R = rotation(t);
            Mat2 G = R * mat(a, 0, 0, b) * R.transpose();
            base = NormDescriptor::ellipse(G);
            break;
        }
    }
    Mat2 A;
    A << rng.normal(), rng.normal(), rng.normal(), rng.normal();
    if (allow_degenerate && rng.uniform() < 0.15) A.row(1) = rng.normal() * A.row(0);  // rank <= 1
    if (rng.uniform() < 0.05) A.setZero();
    return Seminorm2(A, base);
}

}  // namespace

TEST_CASE("norm evaluation basics") {
    Seminorm2 euclid;  // identity
    CHECK(eval(euclid, Vec2(3, 4)) == doctest::Approx(5.0));
    Seminorm2 l1(Mat2::Identity(), NormDescriptor::p_norm(1.0));
    CHECK(eval(l1, Vec2(1, -1)) == doctest::Approx(2.0));
    Seminorm2 linf(Mat2::Identity(), NormDescriptor::linf());
    CHECK(eval(linf, Vec2(0.5, 1.0)) == doctest::Approx(1.0));
    CHECK(eval(linf, Vec2(-0.25, 0.1)) == doctest::Approx(0.25));
}

TEST_CASE("homogeneity holds to rounding") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Seminorm2 s = random_seminorm(rng);
        const Vec2 v(rng.normal(), rng.normal());
        const double lam = rng.uniform(-3.0, 3.0);
        CHECK(eval(s, lam * v) == doctest::Approx(std::abs(lam) * eval(s, v)).epsilon(1e-12));
    }
}

TEST_CASE("directional extrema against the dense-grid oracle") {
    // frozen oracle values at 2^16 directions
    Seminorm2 linf(Mat2::Identity(), NormDescriptor::linf());
    CHECK(i_plus(linf, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(i_plus(linf, 2.0) == doctest::Approx(oracle::circle_max(linf, 2.0)).epsilon(1e-7));

    Seminorm2 l1(Mat2::Identity(), NormDescriptor::l1());
    CHECK(i_plus(l1, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(i_plus(l1, 2.0) == doctest::Approx(oracle::circle_max(l1, 2.0)).epsilon(1e-7));

    Seminorm2 euclid;
    CHECK(i_plus(euclid, 2.0) == doctest::Approx(1.0));

    Rng rng(23);
    for (int i = 0; i < 60; ++i) {
        const Seminorm2 s = random_seminorm(rng);
        // the grid oracle underestimates maxima and overestimates minima, by
        // O(h * |f'|) at kinks of the direction profile
        const double pl = i_plus(s, 2.0), pl_oracle = oracle::circle_max(s, 2.0);
        CHECK(pl >= pl_oracle - 1e-10 * (1 + pl_oracle));
        CHECK(pl - pl_oracle <= 5e-4 * (1 + pl_oracle));
        const double mn = i_min(s, 2.0), mn_oracle = oracle::circle_min(s, 2.0);
        CHECK(mn <= mn_oracle + 1e-10 * (1 + mn_oracle));
        CHECK(mn_oracle - mn <= 5e-4 * (1 + mn_oracle));
    }
}

TEST_CASE("circle averages against the quadrature oracle") {
    Seminorm2 euclid;
    CHECK(i_avg(euclid, 2.0) == doctest::Approx(2.0).epsilon(1e-14));

    Seminorm2 zero(Mat2::Zero(), NormDescriptor::euclidean());
    CHECK(i_avg(zero, 2.0) == doctest::Approx(0.0));

    Seminorm2 linf(Mat2::Identity(), NormDescriptor::linf());
    const double frozen = 1.6366197723675814;  // oracle at 2^16 nodes; equals (pi+2)/pi
    CHECK(i_avg(linf, 2.0) == doctest::Approx(frozen).epsilon(1e-10));
    CHECK(i_avg(linf, 2.0) == doctest::Approx(oracle::circle_avg(linf, 2.0)).epsilon(1e-8));
    CHECK(i_avg(linf, 2.0) == doctest::Approx((M_PI + 2.0) / M_PI).epsilon(1e-12));

    Rng rng(37);
    for (int i = 0; i < 60; ++i) {
        const Seminorm2 s = random_seminorm(rng);
        CHECK(i_avg(s, 2.0) == doctest::Approx(oracle::circle_avg(s, 2.0)).epsilon(1e-7));
    }
}

TEST_CASE("q-factor: euclidean, sup-norm, zero, degenerate") {
    Seminorm2 euclid;
    CHECK(q_factor(euclid) == doctest::Approx(1.0));

    Seminorm2 linf(Mat2::Identity(), NormDescriptor::linf());
    CHECK(q_factor(linf) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    Seminorm2 zero(Mat2::Zero(), NormDescriptor::euclidean());
    CHECK(q_factor(zero) == doctest::Approx(1.0));

    Seminorm2 rank1(mat(1, 0, 0, 0), NormDescriptor::euclidean());
    CHECK(std::isinf(q_factor(rank1)));
}

TEST_CASE("seminorm distance examples and metric axioms") {
    Seminorm2 euclid;
    Seminorm2 twice(2.0 * Mat2::Identity(), NormDescriptor::euclidean());
    CHECK(seminorm_distance(euclid, euclid) == doctest::Approx(0.0));
    CHECK(seminorm_distance(euclid, twice) == doctest::Approx(1.0));

    Seminorm2 linf(Mat2::Identity(), NormDescriptor::linf());
    CHECK(seminorm_distance(linf, euclid, kOracleGrid) ==
          doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-6));

    Rng rng(41);
    for (int i = 0; i < 40; ++i) {
        const Seminorm2 a = random_seminorm(rng), b = random_seminorm(rng), c = random_seminorm(rng);
        const double ab = seminorm_distance(a, b), bc = seminorm_distance(b, c),
                     ac = seminorm_distance(a, c);
        CHECK(ab >= 0.0);
        CHECK(ab == doctest::Approx(seminorm_distance(b, a)));
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("compose: identity, diagonal stretch, rotation invariance of q") {
    Rng rng(5);
    Seminorm2 euclid;
    CHECK(i_plus(compose(euclid, mat(2, 0, 0, 0.5)), 2.0) == doctest::Approx(4.0));
    Seminorm2 linf(Mat2::Identity(), NormDescriptor::linf());
    const Seminorm2 rot = compose(linf, rotation(M_PI / 4));
    CHECK(q_factor(rot) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    for (int i = 0; i < 30; ++i) {
        const Seminorm2 s = random_seminorm(rng, false);
        const Seminorm2 sr = compose(s, rotation(rng.uniform(0, 2 * M_PI)));
        if (s.degenerate()) continue;
        CHECK(q_factor(sr) == doctest::Approx(q_factor(s)).epsilon(1e-7));
    }
    // compose(s, I) == s pointwise
    for (int i = 0; i < 10; ++i) {
        const Seminorm2 s = random_seminorm(rng);
        const Seminorm2 si = compose(s, Mat2::Identity());
        for (int k = 0; k < 16; ++k) {
            const Vec2 v(rng.normal(), rng.normal());
            CHECK(eval(si, v) == doctest::Approx(eval(s, v)));
        }
    }
}

TEST_CASE("sandwich and conformality characterization") {
    Rng rng(101);
    for (int i = 0; i < 2000; ++i) {
        const Seminorm2 s = random_seminorm(rng);
        const double plus = i_plus(s, 2.0), avg = i_avg(s, 2.0);
        CHECK(0.5 * avg <= plus + 1e-9 + 1e-9 * avg);
        CHECK(plus <= avg + 1e-9 + 1e-9 * avg);
    }
    // equality on the left exactly at conformal seminorms
    Seminorm2 conf(1.7 * rotation(0.3), NormDescriptor::euclidean());
    CHECK(0.5 * i_avg(conf, 2.0) == doctest::Approx(i_plus(conf, 2.0)).epsilon(1e-14));
    CHECK(q_factor(conf) == doctest::Approx(1.0));
    // equality on the right at rank-one seminorms
    Seminorm2 rank1(mat(1.3, 0.7, 2.6, 1.4), NormDescriptor::euclidean());
    CHECK(i_plus(rank1, 2.0) == doctest::Approx(i_avg(rank1, 2.0)).epsilon(1e-9));
}

TEST_CASE("transform inequalities under quasi-conformal composition") {
    Rng rng(59);
    for (int i = 0; i < 300; ++i) {
        const Seminorm2 s = random_seminorm(rng);
        Mat2 T;
        T << rng.normal(), rng.normal(), rng.normal(), rng.normal();
        if (std::abs(T.determinant()) < 1e-3) continue;
        const Seminorm2 tn(T, NormDescriptor::euclidean());
        const double Q = q_factor(tn);
        const double det = std::abs(T.determinant());
        const double p0 = i_plus(s, 2.0), p1 = i_plus(compose(s, T), 2.0) / det;
        const double a0 = i_avg(s, 2.0), a1 = i_avg(compose(s, T), 2.0) / det;
        const double tol = 1e-9 * (1.0 + p0 + a0);
        CHECK(p1 >= p0 / Q - tol);
        CHECK(p1 <= p0 * Q + tol);
        CHECK(a1 >= a0 / (Q * Q) - tol);
        CHECK(a1 <= a0 * (Q * Q) + tol);
    }
}
