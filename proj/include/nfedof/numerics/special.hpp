#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "nfedof/errors.hpp"

namespace nfedof {

inline constexpr double kEulerGamma = 0.57721566490153286061;

namespace detail {

inline constexpr double kSiCiSplit = 6.0;

// Si/Ci power series, |x| <= 6.
inline void sici_series(double x, double& si, double& ci_tail) {
    const double x2 = x * x;
    double s = x, term = x;  // term_k = (-1)^k x^{2k+1}/(2k+1)!
    double c = 0.0, cterm = 1.0;  // cterm_k = (-1)^k x^{2k}/(2k)!
    for (int k = 1; k < 60; ++k) {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        cterm *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
        const double ds = term / (2.0 * k + 1.0);
        const double dc = cterm / (2.0 * k);
        s += ds;
        c += dc;
        if (std::abs(ds) < 1e-17 * std::abs(s) && std::abs(dc) < 1e-17 * (std::abs(c) + 1e-300)) break;
    }
    si = s;
    ci_tail = c;
}

// Auxiliary functions via the Lentz continued fraction for E1(ix), x > 6:
// E1(ix) = -Ci(x) + i(Si(x) - pi/2).
inline void sici_fraction(double x, double& si, double& ci) {
    using C = std::complex<double>;
    constexpr double tiny = 1e-300;
    C b(1.0, x);
    C c(1.0 / tiny, 0.0);
    C d = 1.0 / b;
    C h = d;
    for (int i = 1; i < 1000; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const C del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
    }
    h *= C(std::cos(x), -std::sin(x));
    ci = -h.real();
    si = std::numbers::pi / 2.0 + h.imag();
}

}  // namespace detail

inline double sine_integral(double x) {
    if (std::isnan(x)) throw DomainError("sine_integral: NaN argument");
    if (x < 0.0) return -sine_integral(-x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return std::numbers::pi / 2.0;
    double si = 0.0, ci = 0.0;
    if (x <= detail::kSiCiSplit)
        detail::sici_series(x, si, ci);
    else
        detail::sici_fraction(x, si, ci);
    return si;
}

inline double cosine_integral(double x) {
    if (!(x > 0.0)) throw DomainError("cosine_integral: x must be > 0, got " + std::to_string(x));
    if (std::isinf(x)) return 0.0;
    double si = 0.0, ci = 0.0;
    if (x <= detail::kSiCiSplit) {
        detail::sici_series(x, si, ci);
        return kEulerGamma + std::log(x) + ci;
    }
    detail::sici_fraction(x, si, ci);
    return ci;
}

}  // namespace nfedof
