#pragma once

// Real-argument Bessel machinery: integer-order J, Y, H^(1) and
// half-integer-order J_{m+1/2}.

#include <complex>
#include <vector>

namespace mscat::specfun {

using cplx = std::complex<double>;

enum class CylKind { J, Y, H1 };

/// Orders above this are rejected unless the caller passes a larger cap.
/// Callers tied to a DtN cutoff N should pass order_cap(N).
inline constexpr int kDefaultOrderCap = 400;

/// Cap used by every consumer bounded by a DtN cutoff N.
constexpr int order_cap(int N) { return 2 * N + 8; }

/// J_0..J_nmax and (optionally) Y_0..Y_nmax at one argument.
struct BesselTable {
    double x = 0.0;
    std::vector<double> j;
    std::vector<double> y;  // empty when Y was not requested

    cplx h1(int n) const { return {j[n], y[n]}; }
};

/// Fills J (backward recurrence with normalization, or the ascending
/// series for small x) and Y (Neumann series / Hankel asymptotics for
/// Y_0, Y_1, then forward recurrence).
/// Throws DomainError for x < 0, or x == 0 with want_y; OverflowError if
/// some Y_n overflows.
BesselTable cyl_bessel_table(int nmax, double x, bool want_y = true);

/// J_n, Y_n or H^(1)_n at x. Negative n is resolved by reflection.
cplx cyl_bessel(CylKind kind, int n, double x, int cap = kDefaultOrderCap);

/// Derivative via C'_n = C_{n-1} - (n/x) C_n, with C'_0 = -C_1.
cplx cyl_bessel_deriv(CylKind kind, int n, double x, int cap = kDefaultOrderCap);

/// J_{m+1/2}(z) for z > 0.
double sph_bessel_halfint(int m, double z);

/// J_{k+1/2}(z) for k = 0..mmax.
std::vector<double> sph_bessel_halfint_table(int mmax, double z);

}  // namespace mscat::specfun
