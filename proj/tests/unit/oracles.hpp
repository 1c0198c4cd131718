#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

using cplx = std::complex<double>;
constexpr double pi = std::numbers::pi;

inline double semicircle_density(double a, double u) {
    const double r2 = 4.0 * a;
    return u * u < r2 ? std::sqrt(r2 - u * u) / (2.0 * pi * a) : 0.0;
}

// Root of z G^2 - z G + 1 = 0 with Im G < 0, the Cauchy transform of the free Poisson law.
inline cplx mp_cauchy(cplx z) {
    const cplx d = std::sqrt(z * z - 4.0 * z);
    const cplx g1 = (z + d) / (2.0 * z), g2 = (z - d) / (2.0 * z);
    return g1.imag() < g2.imag() ? g1 : g2;
}

inline double mp_density(double u) { return -mp_cauchy(cplx(u, 1e-13)).imag() / pi; }

inline double cauchy_density(double s, double u) { return s / (pi * (u * u + s * s)); }

// Free Poisson at time s: G solves z G^2 - (z + 1 - s) G + 1 = 0 (rate s, jump 1).
inline cplx mp_rate_cauchy(double s, cplx z) {
    const cplx b = z + 1.0 - s;
    const cplx d = std::sqrt(b * b - 4.0 * z);
    const cplx g1 = (b + d) / (2.0 * z), g2 = (b - d) / (2.0 * z);
    return g1.imag() < g2.imag() ? g1 : g2;
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace oracle
