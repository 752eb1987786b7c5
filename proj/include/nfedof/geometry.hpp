#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nfedof/errors.hpp"

namespace nfedof {

inline constexpr double kSpeedOfLight = 299792458.0;

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline double distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct WaveParams {
    double frequency = 0.0;   // Hz
    double wavelength = 0.0;  // m
    double wavenumber = 0.0;  // rad/m

    static WaveParams from_frequency(double f) {
        if (!(f > 0.0) || !std::isfinite(f)) throw ArgumentError("WaveParams: frequency must be positive");
        const double lam = kSpeedOfLight / f;
        return {f, lam, 2.0 * std::numbers::pi / lam};
    }
    static WaveParams from_wavelength(double lam) {
        if (!(lam > 0.0) || !std::isfinite(lam)) throw ArgumentError("WaveParams: wavelength must be positive");
        return {kSpeedOfLight / lam, lam, 2.0 * std::numbers::pi / lam};
    }
};

inline void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(what) + " must be positive and finite");
}

struct UpaGeometry {
    int MH = 1, MV = 1;
    double LH = 1.0, LV = 1.0;
    double z = 0.0;
    bool centered = false;  // shift by half a spacing so the array is symmetric

    double delta_h() const { return LH / MH; }
    double delta_v() const { return LV / MV; }
    int count() const { return MH * MV; }

    void validate() const {
        if (MH < 1 || MV < 1) throw ArgumentError("UpaGeometry: antenna counts must be >= 1");
        require_positive(LH, "UpaGeometry: L_H");
        require_positive(LV, "UpaGeometry: L_V");
    }

    static UpaGeometry square(int M, double L, double z = 0.0) { return {M, M, L, L, z, false}; }
};

struct UlaGeometry {
    int M = 1;
    double L = 1.0;
    double z = 0.0;
    bool centered = false;

    double delta() const { return L / M; }
    int count() const { return M; }

    void validate() const {
        if (M < 1) throw ArgumentError("UlaGeometry: antenna count must be >= 1");
        require_positive(L, "UlaGeometry: L");
    }
};

struct CapPlane {
    double LH = 1.0, LV = 1.0;
    double z = 0.0;

    void validate() const {
        require_positive(LH, "CapPlane: L_H");
        require_positive(LV, "CapPlane: L_V");
    }
    static CapPlane square(double L, double z = 0.0) { return {L, L, z}; }
};

struct CapLine {
    double L = 1.0;
    double z = 0.0;

    void validate() const { require_positive(L, "CapLine: L"); }
};

struct PatchUpaGeometry {
    UpaGeometry upa;
    double AH = 0.0, AV = 0.0;

    int count() const { return upa.count(); }

    void validate() const {
        upa.validate();
        require_positive(AH, "PatchUpaGeometry: A_H");
        require_positive(AV, "PatchUpaGeometry: A_V");
        constexpr double slack = 1.0 + 1e-12;
        if (AH > upa.delta_h() * slack || AV > upa.delta_v() * slack)
            throw ArgumentError("PatchUpaGeometry: element size exceeds spacing (patches overlap)");
    }
};

struct Rect {
    Point3 center;
    double half_h = 0.0, half_v = 0.0;
};

// Row-by-row index m = 1..M: i = (m-1) mod M_H, j = floor((m-1)/M_H).
inline std::vector<Point3> upa_positions(const UpaGeometry& g) {
    g.validate();
    const double dh = g.delta_h(), dv = g.delta_v();
    const double sh = g.centered ? 0.5 * dh : 0.0;
    const double sv = g.centered ? 0.5 * dv : 0.0;
    std::vector<Point3> out;
    out.reserve(g.count());
    for (int m = 0; m < g.count(); ++m) {
        const int i = m % g.MH, j = m / g.MH;
        out.push_back({-g.LH / 2.0 + i * dh + sh, -g.LV / 2.0 + j * dv + sv, g.z});
    }
    return out;
}

inline std::vector<Point3> ula_positions(const UlaGeometry& g) {
    g.validate();
    const double d = g.delta();
    const double s = g.centered ? 0.5 * d : 0.0;
    std::vector<Point3> out;
    out.reserve(g.M);
    for (int m = 0; m < g.M; ++m) out.push_back({0.0, -g.L / 2.0 + m * d + s, g.z});
    return out;
}

inline std::vector<Rect> patch_regions(const PatchUpaGeometry& g) {
    g.validate();
    std::vector<Rect> out;
    for (const auto& c : upa_positions(g.upa)) out.push_back({c, g.AH / 2.0, g.AV / 2.0});
    return out;
}

inline double rayleigh_distance(double aperture_t, double aperture_r, const WaveParams& w) {
    if (aperture_t < 0.0 || aperture_r < 0.0) throw ArgumentError("rayleigh_distance: negative aperture");
    const double a = aperture_t + aperture_r;
    return 2.0 * a * a / w.wavelength;
}

inline double diagonal_aperture(const UpaGeometry& g) { return std::hypot(g.LH, g.LV); }
inline double diagonal_aperture(const CapPlane& g) { return std::hypot(g.LH, g.LV); }

}  // namespace nfedof
