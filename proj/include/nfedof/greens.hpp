#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "nfedof/errors.hpp"
#include "nfedof/geometry.hpp"

namespace nfedof {

using Matrix3c = Eigen::Matrix<std::complex<double>, 3, 3>;

enum class Pol : int { x = 0, y = 1, z = 2 };

inline double singularity_guard(const WaveParams& w) { return w.wavelength / 100.0; }

inline void check_separation(double d, const WaveParams& w) {
    if (!(d >= singularity_guard(w)))
        throw SingularityError("Green's function: points " + std::to_string(d) + " m apart, guard is lambda/100 = " +
                               std::to_string(singularity_guard(w)) + " m");
}

// exp(-j k d) / (4 pi d)
inline std::complex<double> scalar_green_at(double d, double k) {
    return std::polar(1.0 / (4.0 * std::numbers::pi * d), -k * d);
}

inline std::complex<double> scalar_green(const Point3& r, const Point3& s, const WaveParams& w) {
    const double d = distance(r, s);
    check_separation(d, w);
    return scalar_green_at(d, w.wavenumber);
}

// eta(p,q) = c_diag * delta_pq + c_dir * a_p a_q
struct EtaCoefficients {
    std::complex<double> diag;  // 1 + j/(kd) - 1/(kd)^2
    std::complex<double> dir;   // 3/(kd)^2 - 3j/(kd) - 1
};

inline EtaCoefficients eta_coefficients(double kd) {
    const double u = 1.0 / kd;
    return {{1.0 - u * u, u}, {3.0 * u * u - 1.0, -3.0 * u}};
}

struct DyadicSample {
    Matrix3c G;
    Matrix3c eta;
    Point3 r, s;
    double distance = 0.0;
    std::array<double, 3> a{};  // unit vector from s to r
};

inline DyadicSample dyadic_green(const Point3& r, const Point3& s, const WaveParams& w) {
    DyadicSample out;
    out.r = r;
    out.s = s;
    const double d = distance(r, s);
    check_separation(d, w);
    out.distance = d;
    out.a = {(r.x - s.x) / d, (r.y - s.y) / d, (r.z - s.z) / d};
    const auto c = eta_coefficients(w.wavenumber * d);
    const auto g = scalar_green_at(d, w.wavenumber);
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            const double apq = out.a[p] * out.a[q];
            out.eta(p, q) = c.dir * apq + (p == q ? c.diag : 0.0);
            out.G(p, q) = out.eta(p, q) * g;
        }
    return out;
}

}  // namespace nfedof
