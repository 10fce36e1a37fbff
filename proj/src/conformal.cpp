#include "plateau/conformal.hpp"

#include <algorithm>
#include <cmath>

#include "plateau/error.hpp"

namespace plateau {

namespace {

Complex to_c(const Vec2& v) { return Complex(v.x(), v.y()); }
Vec2 to_v(const Complex& z) { return Vec2(z.real(), z.imag()); }

Mat2 conformal_matrix(const Complex& f_prime) {
    Mat2 m;
    m << f_prime.real(), -f_prime.imag(), f_prime.imag(), f_prime.real();
    return m;
}

}  // namespace

void fft_radix2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const Complex wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            Complex w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const Complex u = a[i + k];
                const Complex v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

LocalDeformation::LocalDeformation(const Vec2& z0, double r, const Mat2& inside)
    : z0_(z0), r_(r), inside_(inside) {
    if (!(r > 0)) throw ConfigError("deformation radius must be positive");
    if (inside.determinant() <= 0) throw DeformationDegenerate("inside map must preserve orientation");
    Eigen::JacobiSVD<Mat2> svd(inside, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat2 U = svd.matrixU(), V = svd.matrixV();
    if (U.determinant() < 0) {  // det(inside) > 0 forces det U = det V
        U.col(1) *= -1;
        V.col(1) *= -1;
    }
    s1_ = svd.singularValues()[0];
    s2_ = svd.singularValues()[1];
    alpha_ = std::atan2(U(1, 0), U(0, 0));
    beta_ = -std::atan2(V(1, 0), V(0, 0));  // M = R_alpha diag R_beta with R_beta = V'
    c_ = 0.5 * (s1_ + s2_);
    d_ = 0.5 * (s1_ - s2_);
    if (!(std::abs(d_) < c_)) throw DeformationDegenerate();
}

Complex LocalDeformation::hat(const Complex& w) const {
    const Complex wp = std::polar(1.0, beta_) * w;
    Complex out;
    if (std::abs(wp) <= 1.0)
        out = Complex(s1_ * wp.real(), s2_ * wp.imag());
    else
        out = c_ * wp + d_ / wp;
    return std::polar(1.0, alpha_) * out;
}

Complex LocalDeformation::hat_inverse(const Complex& v) const {
    const Complex vp = std::polar(1.0, -alpha_) * v;
    const double ex = vp.real() / s1_, ey = vp.imag() / s2_;
    Complex wp;
    if (ex * ex + ey * ey <= 1.0) {
        wp = Complex(ex, ey);
    } else {
        const Complex disc = std::sqrt(vp * vp - 4.0 * c_ * d_);
        const Complex w1 = (vp + disc) / (2.0 * c_);
        const Complex w2 = (vp - disc) / (2.0 * c_);
        wp = (std::abs(w1) >= std::abs(w2)) ? w1 : w2;
    }
    return std::polar(1.0, -beta_) * wp;
}

Vec2 LocalDeformation::apply(const Vec2& z) const {
    const Complex w = to_c(z - z0_) / r_;
    return z0_ + r_ * to_v(hat(w));
}

Vec2 LocalDeformation::inverse(const Vec2& y) const {
    const Complex v = to_c(y - z0_) / r_;
    return z0_ + r_ * to_v(hat_inverse(v));
}

Mat2 LocalDeformation::jacobian(const Vec2& z) const {
    const Complex w = to_c(z - z0_) / r_;
    const Complex wp = std::polar(1.0, beta_) * w;
    if (std::abs(wp) <= 1.0) return inside_;
    const Complex fp =
        std::polar(1.0, alpha_) * (c_ - d_ / (wp * wp)) * std::polar(1.0, beta_);
    return conformal_matrix(fp);
}

Mat2 LocalDeformation::inverse_jacobian(const Vec2& y) const {
    return jacobian(inverse(y)).inverse();
}

DiscConformalMap::DiscConformalMap(std::function<Vec2(double)> boundary, const Vec2& center,
                                   int samples)
    : center_(center) {
    const int n = samples;
    if (n < 16 || (n & (n - 1)) != 0) throw ConfigError("sample count must be a power of two");

    // polar profile of the boundary about the center
    std::vector<double> chi(n), logr(n);
    double prev = 0.0;
    for (int k = 0; k < n; ++k) {
        const Vec2 p = boundary(2.0 * M_PI * k / n) - center;
        const double rad = p.norm();
        if (!(rad > 0)) throw ConfigError("boundary passes through the center");
        double a = std::atan2(p.y(), p.x());
        if (k > 0) {
            while (a < prev - M_PI) a += 2.0 * M_PI;
            while (a > prev + M_PI) a -= 2.0 * M_PI;
            if (a <= prev) throw ConfigError("boundary is not star-shaped about the center");
        }
        chi[k] = a;
        logr[k] = std::log(rad);
        prev = a;
    }

    // log-radius as a function of the polar angle: catmull-rom pieces on the
    // (increasing, periodic) angle nodes
    auto node = [&](int i) {
        int m = i, wrap = 0;
        while (m < 0) {
            m += n;
            --wrap;
        }
        while (m >= n) {
            m -= n;
            ++wrap;
        }
        return std::pair<double, double>(chi[m] + 2.0 * M_PI * wrap, logr[m]);
    };
    auto rho_of = [&](double angle) {
        double a = angle;
        while (a < chi[0]) a += 2.0 * M_PI;
        while (a >= chi[0] + 2.0 * M_PI) a -= 2.0 * M_PI;
        int lo = 0, hi = n;
        while (lo + 1 < hi) {
            const int mid = (lo + hi) / 2;
            if (chi[mid] <= a)
                lo = mid;
            else
                hi = mid;
        }
        const auto [x0, y0] = node(lo - 1);
        const auto [x1, y1] = node(lo);
        const auto [x2, y2] = node(lo + 1);
        const auto [x3, y3] = node(lo + 2);
        const double t = (a - x1) / (x2 - x1);
        const double m1 = (y2 - y0) / (x2 - x0) * (x2 - x1);
        const double m2 = (y3 - y1) / (x3 - x1) * (x2 - x1);
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y1 + (t3 - 2 * t2 + t) * m1 + (-2 * t3 + 3 * t2) * y2 +
               (t3 - t2) * m2;
    };

    // boundary correspondence iteration: disc angle -> target polar angle
    std::vector<double> corr(n);
    for (int k = 0; k < n; ++k) corr[k] = 2.0 * M_PI * k / n;
    std::vector<Complex> work(n);
    const double damping = 0.8;
    for (int iter = 0; iter < 400; ++iter) {
        for (int k = 0; k < n; ++k) work[k] = Complex(rho_of(corr[k]), 0.0);
        fft_radix2(work, false);
        // circular conjugation: multiply mode m by -i sign(m)
        for (int m = 1; m < n / 2; ++m) {
            work[m] *= Complex(0, -1);
            work[n - m] *= Complex(0, 1);
        }
        work[0] = 0;
        work[n / 2] = 0;
        fft_radix2(work, true);
        double delta = 0.0;
        for (int k = 0; k < n; ++k) {
            const double next = 2.0 * M_PI * k / n + work[k].real();
            delta = std::max(delta, std::abs(next - corr[k]));
            corr[k] = (1.0 - damping) * corr[k] + damping * next;
        }
        if (delta < 1e-14) break;
    }

    // taylor coefficients of log((f - c)/z) from its boundary values
    std::vector<Complex> fb(n);
    for (int k = 0; k < n; ++k)
        fb[k] = Complex(rho_of(corr[k]), corr[k] - 2.0 * M_PI * k / n);
    fft_radix2(fb, false);
    coeffs_.assign(n / 2, Complex(0, 0));
    for (int m = 0; m < n / 2; ++m) coeffs_[m] = fb[m] / static_cast<double>(n);
    double neg = 0.0, pos = 0.0;
    for (int m = 1; m < n / 2; ++m) {
        neg += std::norm(fb[n - m]) / (static_cast<double>(n) * n);
        pos += std::norm(fb[m]) / (static_cast<double>(n) * n);
    }
    residual_ = std::sqrt(neg / std::max(1e-300, pos + neg));
}

Complex DiscConformalMap::series(const Complex& z, Complex* derivative) const {
    Complex g(0, 0), gp(0, 0);
    for (int m = static_cast<int>(coeffs_.size()) - 1; m >= 1; --m) {
        g = (g + coeffs_[m]) * z;
        gp = gp * z + static_cast<double>(m) * coeffs_[m];
    }
    g += coeffs_[0];
    if (derivative) *derivative = gp;
    return g;
}

Vec2 DiscConformalMap::apply(const Vec2& z) const {
    const Complex zc = to_c(z);
    const Complex g = series(zc, nullptr);
    return center_ + to_v(zc * std::exp(g));
}

Mat2 DiscConformalMap::jacobian(const Vec2& z) const {
    const Complex zc = to_c(z);
    Complex gp;
    const Complex g = series(zc, &gp);
    const Complex fp = std::exp(g) * (Complex(1, 0) + zc * gp);
    return conformal_matrix(fp);
}

}  // namespace plateau
