#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "nfedof/channel.hpp"
#include "nfedof/edof.hpp"
#include "nfedof/errors.hpp"
#include "nfedof/geometry.hpp"
#include "nfedof/numerics/matrix.hpp"
#include "nfedof/numerics/special.hpp"

namespace nfedof {

struct CouplingParams {
    cplx ZL{50.0, 0.0};
    double eta = 120.0 * std::numbers::pi;
    double gamma0 = 0.577;
    double dl = 0.0;  // dipole length, m
    double a = 0.0;   // wire radius, m

    void validate() const {
        require_positive(dl, "CouplingParams: d_l");
        require_positive(a, "CouplingParams: a");
        require_positive(eta, "CouplingParams: eta");
        if (a > 1e-2 * dl) throw ArgumentError("CouplingParams: wire radius must satisfy a <= 1e-2 d_l");
    }

    // Z_L = 50 ohm, eta = 120 pi, gamma0 = 0.577, d_l = 0.1 lambda, a = 1e-5 lambda
    static CouplingParams reference(double wavelength) {
        CouplingParams p;
        p.dl = 0.1 * wavelength;
        p.a = 1e-5 * wavelength;
        return p;
    }
};

// Thin-wire dipole self impedance, normalised to the input current.
inline cplx self_impedance(const CouplingParams& p, double k) {
    p.validate();
    const double kl = k * p.dl;
    const double s2 = std::pow(std::sin(kl / 2.0), 2);
    const double Si1 = sine_integral(kl), Si2 = sine_integral(2 * kl);
    const double Ci1 = cosine_integral(kl), Ci2 = cosine_integral(2 * kl);
    const double R = p.eta / (2 * std::numbers::pi * s2) *
                     (p.gamma0 + std::log(kl) - Ci1 + std::sin(kl) / 2 * (Si2 - 2 * Si1) +
                      std::cos(kl) / 2 * (p.gamma0 + std::log(kl / 2) + Ci2 - 2 * Ci1));
    const double X = p.eta / (4 * std::numbers::pi * s2) *
                     (2 * Si1 + std::cos(kl) * (2 * Si1 - Si2) -
                      std::sin(kl) * (2 * Ci1 - Ci2 - cosine_integral(2 * k * p.a * p.a / p.dl)));
    return {R, X};
}

// Induced-EMF mutual impedances of two parallel dipoles of length l.
// d: horizontal separation; h: vertical offset of the centres.

inline cplx mutual_side_by_side(double k, double l, double d, double eta) {
    require_positive(d, "mutual_side_by_side: d");
    const double s = std::sqrt(d * d + l * l);
    const double u0 = k * d, u1 = k * (s + l), u2 = k * (s - l);
    const double c = eta / (4 * std::numbers::pi);
    const double R = c * (2 * cosine_integral(u0) - cosine_integral(u1) - cosine_integral(u2));
    const double X = -c * (2 * sine_integral(u0) - sine_integral(u1) - sine_integral(u2));
    return {R, X};
}

inline cplx mutual_echelon(double k, double l, double d, double h, double eta) {
    require_positive(d, "mutual_echelon: d");
    const double c = eta / (8 * std::numbers::pi);
    const double s1 = std::sqrt(d * d + h * h);
    const double s2 = std::sqrt(d * d + (h - l) * (h - l));
    const double s3 = std::sqrt(d * d + (h + l) * (h + l));
    const double w1 = k * (s1 + h), w1p = k * (s1 - h);
    const double w2 = k * (s2 + h - l), w2p = k * (s2 - (h - l));
    const double w3 = k * (s3 + h + l), w3p = k * (s3 - (h + l));
    const double w0 = k * h;
    auto Ci = [](double x) { return cosine_integral(x); };
    auto Si = [](double x) { return sine_integral(x); };
    const double cw = std::cos(w0), sw = std::sin(w0);
    const double R = -c * cw * (-2 * Ci(w1) - 2 * Ci(w1p) + Ci(w2) + Ci(w2p) + Ci(w3) + Ci(w3p)) +
                     c * sw * (2 * Si(w1) - 2 * Si(w1p) - Si(w2) + Si(w2p) - Si(w3) + Si(w3p));
    const double X = -c * cw * (2 * Si(w1) + 2 * Si(w1p) - Si(w2) - Si(w2p) - Si(w3) - Si(w3p)) +
                     c * sw * (2 * Ci(w1) - 2 * Ci(w1p) - Ci(w2) + Ci(w2p) - Ci(w3) + Ci(w3p));
    return {R, X};
}

inline cplx mutual_collinear(double k, double l, double h, double eta) {
    if (!(h > l))
        throw DomainError("mutual_collinear: centre spacing " + std::to_string(h) + " m must exceed dipole length " +
                          std::to_string(l) + " m");
    const double c = eta / (8 * std::numbers::pi);
    const double v0 = k * h, v1 = 2 * k * (h + l), v2 = 2 * k * (h - l), v3 = (h * h - l * l) / (h * h);
    auto Ci = [](double x) { return cosine_integral(x); };
    auto Si = [](double x) { return sine_integral(x); };
    const double cv = std::cos(v0), sv = std::sin(v0);
    const double R = -c * cv * (-2 * Ci(2 * v0) + Ci(v2) + Ci(v1) - std::log(v3)) +
                     c * sv * (2 * Si(2 * v0) - Si(v2) - Si(v1));
    const double X = -c * cv * (2 * Si(2 * v0) - Si(v2) - Si(v1)) +
                     c * sv * (2 * Ci(2 * v0) - Ci(v2) - Ci(v1) - std::log(v3));
    return {R, X};
}

enum class ImpedanceProvenance { Computed, Loaded };

struct ImpedanceMatrix {
    ComplexMatrix Z;
    ImpedanceProvenance provenance = ImpedanceProvenance::Computed;

    Eigen::Index size() const { return Z.rows(); }
};

// Vertical dipoles. Same row -> side-by-side, same column -> collinear,
// otherwise parallel-in-echelon.
inline ImpedanceMatrix mutual_impedance_matrix(const UpaGeometry& g, const CouplingParams& p, double k) {
    g.validate();
    p.validate();
    const int n = g.count();
    const cplx ZA = self_impedance(p, k);
    const double dh = g.delta_h(), dv = g.delta_v();
    ImpedanceMatrix out;
    out.Z.resize(n, n);
    for (int a = 0; a < n; ++a) {
        out.Z(a, a) = ZA;
        for (int b = a + 1; b < n; ++b) {
            const int di = std::abs(a % g.MH - b % g.MH), dj = std::abs(a / g.MH - b / g.MH);
            cplx z;
            if (dj == 0)
                z = mutual_side_by_side(k, p.dl, di * dh, p.eta);
            else if (di == 0)
                z = mutual_collinear(k, p.dl, dj * dv, p.eta);
            else
                z = mutual_echelon(k, p.dl, di * dh, dj * dv, p.eta);
            out.Z(a, b) = z;
            out.Z(b, a) = z;
        }
    }
    return out;
}

// The line runs along y, the dipole axis, so every pair is collinear.
inline ImpedanceMatrix mutual_impedance_matrix(const UlaGeometry& g, const CouplingParams& p, double k) {
    g.validate();
    p.validate();
    const int n = g.count();
    const cplx ZA = self_impedance(p, k);
    ImpedanceMatrix out;
    out.Z.resize(n, n);
    for (int a = 0; a < n; ++a) {
        out.Z(a, a) = ZA;
        for (int b = a + 1; b < n; ++b) {
            const cplx z = mutual_collinear(k, p.dl, (b - a) * g.delta(), p.eta);
            out.Z(a, b) = z;
            out.Z(b, a) = z;
        }
    }
    return out;
}

inline constexpr double kMaxCouplingCondition = 1e12;

struct CouplingMatrix {
    ComplexMatrix Z;
    double condition = 1.0;  // 1-norm estimate of Z_C + Z_L I
};

// Z = (Z_A + Z_L)(Z_C + Z_L I)^{-1}: partial-pivot LU, one refinement step.
inline CouplingMatrix coupling_matrix(const ComplexMatrix& Zc, cplx ZA, cplx ZL) {
    if (Zc.rows() != Zc.cols() || Zc.rows() == 0) throw ArgumentError("coupling_matrix: Z_C must be square");
    require_finite(Zc, "coupling_matrix");
    const Eigen::Index n = Zc.rows();
    const ComplexMatrix A = Zc + ZL * ComplexMatrix::Identity(n, n);
    Eigen::PartialPivLU<ComplexMatrix> lu(A);
    const double rc = lu.rcond();
    const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(cond < kMaxCouplingCondition))
        throw NumericalError("coupling_matrix: Z_C + Z_L I is ill-conditioned (condition estimate " +
                             std::to_string(cond) + ")");
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    ComplexMatrix X = lu.solve(I);
    X += lu.solve(I - A * X);
    CouplingMatrix out;
    out.Z = (ZA + ZL) * X;
    out.condition = cond;
    return out;
}

// Same coupling matrix on every polarization block.
inline ComplexMatrix apply_coupling(const ComplexMatrix& H, const ComplexMatrix& Zr, const ComplexMatrix& Zt) {
    const Eigen::Index N = Zr.rows(), M = Zt.rows();
    if (N == 0 || M == 0 || H.rows() % N != 0 || H.cols() % M != 0 || H.rows() / N != H.cols() / M)
        throw ArgumentError("apply_coupling: channel blocks do not match the coupling matrices");
    const Eigen::Index P = H.rows() / N;
    ComplexMatrix out(H.rows(), H.cols());
    for (Eigen::Index bp = 0; bp < P; ++bp)
        for (Eigen::Index bq = 0; bq < P; ++bq)
            out.block(bp * N, bq * M, N, M) = Zr * H.block(bp * N, bq * M, N, M) * Zt;
    return out;
}

inline EdofResult coupled_edof(const ComplexMatrix& H, const ComplexMatrix& Zr, const ComplexMatrix& Zt) {
    auto r = edof_trace_ratio(apply_coupling(H, Zr, Zt));
    r.diagnostics["coupled"] = 1.0;
    return r;
}

template <class G>
EdofResult coupled_edof(const Link<G>& link, ChannelKind kind, const CouplingParams& p, int threads = 1) {
    const double k = link.wave.wavenumber;
    const cplx ZA = self_impedance(p, k);
    const auto Zt = coupling_matrix(mutual_impedance_matrix(link.tx, p, k).Z, ZA, p.ZL);
    const auto Zr = coupling_matrix(mutual_impedance_matrix(link.rx, p, k).Z, ZA, p.ZL);
    auto r = coupled_edof(assemble(link, kind, threads), Zr.Z, Zt.Z);
    r.diagnostics["cond_tx"] = Zt.condition;
    r.diagnostics["cond_rx"] = Zr.condition;
    return r;
}

// ---- NFZC text format ----
// "NFZC v1 <n>" then n*n lines "<row> <col> <re_ohms> <im_ohms>", 0-based.

inline void write_impedance(std::ostream& os, const ImpedanceMatrix& Z) {
    const Eigen::Index n = Z.size();
    os << "NFZC v1 " << n << '\n';
    os << std::setprecision(17);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) os << i << ' ' << j << ' ' << Z.Z(i, j).real() << ' ' << Z.Z(i, j).imag() << '\n';
}

inline void write_impedance(const std::string& path, const ImpedanceMatrix& Z) {
    std::ofstream os(path);
    if (!os) throw IoError("NFZC: cannot open '" + path + "' for writing");
    write_impedance(os, Z);
    if (!os) throw IoError("NFZC: write failed for '" + path + "'");
}

inline ImpedanceMatrix read_impedance(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw IoError("NFZC: empty input");
    std::istringstream hs(line);
    std::string magic, ver;
    long long n = -1;
    if (!(hs >> magic >> ver >> n) || magic != "NFZC" || ver != "v1" || n < 1)
        throw IoError("NFZC: bad header '" + line + "'");
    ImpedanceMatrix out;
    out.provenance = ImpedanceProvenance::Loaded;
    out.Z = ComplexMatrix::Constant(n, n, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
    for (long long e = 0; e < n * n; ++e) {
        if (!std::getline(is, line)) throw IoError("NFZC: expected " + std::to_string(n * n) + " entries");
        std::istringstream ls(line);
        long long i, j;
        double re, im;
        if (!(ls >> i >> j >> re >> im)) throw IoError("NFZC: malformed line '" + line + "'");
        if (i < 0 || j < 0 || i >= n || j >= n) throw IoError("NFZC: index out of range in '" + line + "'");
        out.Z(i, j) = cplx(re, im);
    }
    if (!all_finite(out.Z)) throw IoError("NFZC: missing or non-finite entries");
    return out;
}

inline ImpedanceMatrix read_impedance(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("NFZC: cannot open '" + path + "'");
    return read_impedance(is);
}

}  // namespace nfedof
