#include "mscat/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mscat/error.hpp"

namespace mscat::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kBig = 1e250;
constexpr double kSmall = 1e-250;

// Above this argument Y_0 and Y_1 come from the Hankel asymptotic series.
constexpr double kAsymptoticThreshold = 25.0;
// Below this argument J comes from the ascending power series.
constexpr double kSeriesThreshold = 1.0;

double series_j(int n, double x) {
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    const double half = 0.5 * x;
    double term = std::exp(n * std::log(half) - std::lgamma(n + 1.0));
    if (term == 0.0) return 0.0;
    double sum = term;
    const double q = -half * half;
    for (int k = 1; k < 200; ++k) {
        term *= q / (double(k) * double(k + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Miller backward recurrence, normalized by J_0 + 2 sum_k J_{2k} = 1.
std::vector<double> miller_j(int nmax, double x) {
    const int base = std::max(nmax, static_cast<int>(std::ceil(x)));
    int m = base + 30 + static_cast<int>(std::sqrt(60.0 * base));
    if (m % 2) ++m;
    std::vector<double> t(m + 2, 0.0);
    t[m] = 1e-30;
    for (int k = m; k >= 1; --k) {
        t[k - 1] = (2.0 * k / x) * t[k] - t[k + 1];
        if (std::abs(t[k - 1]) > kBig) {
            for (int i = k - 1; i <= m; ++i) t[i] *= kSmall;
        }
    }
    double norm = t[0];
    for (int k = 2; k <= m; k += 2) norm += 2.0 * t[k];
    for (double& v : t) v /= norm;
    t.resize(std::max(nmax + 1, m + 1));
    return t;
}

// J_0..J_K for K >= nmax; long enough for the Neumann series of Y_0, Y_1.
std::vector<double> j_sequence(int nmax, double x, int min_len) {
    const int len = std::max(nmax, min_len);
    if (x < kSeriesThreshold) {
        std::vector<double> j(len + 1);
        for (int n = 0; n <= len; ++n) j[n] = series_j(n, x);
        return j;
    }
    return miller_j(len, x);
}

// Hankel asymptotic expansion for J_nu, Y_nu with nu in {0, 1}.
void hankel_asymptotic(int nu, double x, double& jv, double& yv) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0, q = 0.0;
    double a = 1.0;
    double prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        a *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
        const double mag = std::abs(a);
        if (mag > prev) break;
        prev = mag;
        // k odd -> Q, k even -> P; signs alternate in pairs.
        const int r = k / 2;
        const double sgn = (r % 2 == 0) ? 1.0 : -1.0;
        if (k % 2) q += sgn * a;
        else p += sgn * a;
        if (mag < 1e-17) break;
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    const double s = std::sqrt(2.0 / (kPi * x));
    jv = s * (p * std::cos(chi) - q * std::sin(chi));
    yv = s * (p * std::sin(chi) + q * std::cos(chi));
}

void check_order(int n, int cap) {
    if (std::abs(n) > cap)
        throw DomainError("Bessel order " + std::to_string(n) + " exceeds cap " +
                          std::to_string(cap));
}

}  // namespace

BesselTable cyl_bessel_table(int nmax, double x, bool want_y) {
    if (nmax < 0) throw DomainError("negative table order");
    if (x < 0.0 || !std::isfinite(x)) throw DomainError("Bessel argument must be finite and >= 0");
    if (want_y && x == 0.0) throw DomainError("Y_n(x) requires x > 0");

    BesselTable t;
    t.x = x;
    const int need = want_y && x <= kAsymptoticThreshold ? static_cast<int>(x) + 60 : 0;
    std::vector<double> js = j_sequence(std::max(nmax, 1), x, need);
    t.j.assign(js.begin(), js.begin() + nmax + 1);
    if (!want_y) return t;

    double y0, y1;
    if (x > kAsymptoticThreshold) {
        double jdummy;
        hankel_asymptotic(0, x, jdummy, y0);
        hankel_asymptotic(1, x, jdummy, y1);
    } else {
        const double lg = std::log(0.5 * x) + kEulerGamma;
        double s0 = 0.0, s1 = 0.0;
        const int kmax = (static_cast<int>(js.size()) - 2) / 2;
        for (int k = 1; k <= kmax; ++k) {
            const double sg = (k % 2) ? -1.0 : 1.0;
            s0 += sg * js[2 * k] / k;
            s1 += sg * (js[2 * k - 1] - js[2 * k + 1]) / k;
        }
        y0 = (2.0 / kPi) * (lg * js[0]) - (4.0 / kPi) * s0;
        y1 = (2.0 / kPi) * (lg * js[1]) - 2.0 * js[0] / (kPi * x) + (2.0 / kPi) * s1;
    }
    t.y.resize(nmax + 1);
    t.y[0] = y0;
    if (nmax >= 1) t.y[1] = y1;
    for (int n = 1; n < nmax; ++n) {
        t.y[n + 1] = (2.0 * n / x) * t.y[n] - t.y[n - 1];
        if (!std::isfinite(t.y[n + 1]))
            throw OverflowError("Y_" + std::to_string(n + 1) + "(" + std::to_string(x) +
                                ") overflows double precision");
    }
    return t;
}

cplx cyl_bessel(CylKind kind, int n, double x, int cap) {
    check_order(n, cap);
    const int an = std::abs(n);
    const double sign = (n < 0 && (an % 2)) ? -1.0 : 1.0;
    if (kind != CylKind::J && x <= 0.0) throw DomainError("Y_n / H1_n require x > 0");
    if (x < 0.0) throw DomainError("J_n(x) requires x >= 0");
    const double jv = x < kSeriesThreshold ? series_j(an, x) : miller_j(an, x)[an];
    if (kind == CylKind::J) return sign * jv;
    const double yv = cyl_bessel_table(an, x, true).y[an];
    if (kind == CylKind::Y) return sign * yv;
    return sign * cplx(jv, yv);
}

cplx cyl_bessel_deriv(CylKind kind, int n, double x, int cap) {
    check_order(n, cap);
    check_order(std::abs(n) + 1, cap + 1);
    const int an = std::abs(n);
    const double sign = (n < 0 && (an % 2)) ? -1.0 : 1.0;
    if (kind == CylKind::J && x == 0.0) {
        return sign * (an == 1 ? 0.5 : 0.0);
    }
    if (an == 0) return -cyl_bessel(kind, 1, x, cap + 1);
    const cplx cm1 = cyl_bessel(kind, an - 1, x, cap);
    const cplx c = cyl_bessel(kind, an, x, cap);
    return sign * (cm1 - (double(an) / x) * c);
}

std::vector<double> sph_bessel_halfint_table(int mmax, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("J_{m+1/2}(z) requires z > 0");
    if (mmax < 0) throw DomainError("negative table order");
    std::vector<double> sj(mmax + 1);
    const double j0 = std::sin(z) / z;
    if (mmax < z) {
        sj[0] = j0;
        if (mmax >= 1) sj[1] = (std::sin(z) - z * std::cos(z)) / (z * z);
        for (int m = 1; m < mmax; ++m) sj[m + 1] = (2.0 * m + 1.0) / z * sj[m] - sj[m - 1];
    } else {
        const double base = std::max<double>(mmax, z);
        int top = static_cast<int>(base) + 25 + static_cast<int>(std::sqrt(50.0 * base));
        std::vector<double> t(top + 2, 0.0);
        t[top] = 1e-30;
        for (int k = top; k >= 1; --k) {
            t[k - 1] = (2.0 * k + 1.0) / z * t[k] - t[k + 1];
            if (std::abs(t[k - 1]) > kBig) {
                for (int i = k - 1; i <= top; ++i) t[i] *= kSmall;
            }
        }
        const double j1 = (std::sin(z) - z * std::cos(z)) / (z * z);
        const double scale = std::abs(j0) >= std::abs(j1) ? j0 / t[0] : j1 / t[1];
        for (int m = 0; m <= mmax; ++m) sj[m] = t[m] * scale;
    }
    const double f = std::sqrt(2.0 * z / kPi);
    for (double& v : sj) v *= f;
    return sj;
}

double sph_bessel_halfint(int m, double z) {
    if (m < 0) throw DomainError("J_{m+1/2}: m must be >= 0");
    return sph_bessel_halfint_table(m, z)[m];
}

}  // namespace mscat::specfun
