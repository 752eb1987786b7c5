#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "nfedof/channel.hpp"
#include "nfedof/errors.hpp"
#include "nfedof/geometry.hpp"
#include "nfedof/numerics/matrix.hpp"
#include "nfedof/numerics/sampler.hpp"

namespace nfedof {

// ---- discrete arrays (Fresnel-expanded sums) ----

struct ClosedSums {
    double numerator = 0.0;    // D^4 |sum 1/(D^2 + dx^2 + dy^2)|^2
    double denominator = 0.0;  // sum_{m1,m2} |sum_n exp(-j k/D (x_r dx_t + y_r dy_t))|^2
    double value() const { return numerator / denominator; }
};

namespace detail {

inline ClosedSums discrete_closed(const std::vector<Point3>& rx, const std::vector<Point3>& tx, double D, double k) {
    require_positive(D, "closed form: D");
    std::vector<double> inv;
    inv.reserve(rx.size() * tx.size());
    for (const auto& r : rx)
        for (const auto& t : tx) {
            const double dx = r.x - t.x, dy = r.y - t.y;
            inv.push_back(1.0 / (D * D + dx * dx + dy * dy));
        }
    const double s = pairwise_sum(inv);
    ClosedSums out;
    out.numerator = D * D * D * D * s * s;
    ComplexMatrix P(rx.size(), tx.size());
    for (std::size_t n = 0; n < rx.size(); ++n)
        for (std::size_t m = 0; m < tx.size(); ++m)
            P(n, m) = std::polar(1.0, -(k / D) * (rx[n].x * tx[m].x + rx[n].y * tx[m].y));
    // P^H P entries are exactly the inner phase sums
    ComplexMatrix R = P.adjoint() * P;
    std::vector<double> rows(R.rows());
    for (Eigen::Index i = 0; i < R.rows(); ++i) rows[i] = R.row(i).squaredNorm();
    out.denominator = pairwise_sum(rows);
    return out;
}

}  // namespace detail

inline ClosedSums upa_closed_sums(const Link<UpaGeometry>& link) {
    return detail::discrete_closed(upa_positions(link.rx), upa_positions(link.tx), link.D, link.wave.wavenumber);
}

inline ClosedSums ula_closed_sums(const Link<UlaGeometry>& link) {
    return detail::discrete_closed(ula_positions(link.rx), ula_positions(link.tx), link.D, link.wave.wavenumber);
}

inline double upa_edof_closed(const Link<UpaGeometry>& link) { return upa_closed_sums(link).value(); }
inline double ula_edof_closed(const Link<UlaGeometry>& link) { return ula_closed_sums(link).value(); }

// ---- 2D continuous planes ----

enum class PhiSampling { random, grid };

inline constexpr int kDefaultPhiSamples = 96;
inline constexpr int kDefaultPhiReplicates = 8;

struct Cap2dClosedParams {
    double LtH = 1.0, LtV = 1.0, LrH = 1.0, LrV = 1.0;
    double D = 1.0;
    double kappa = 1.0;
    int Ms = kDefaultPhiSamples, Ns = kDefaultPhiSamples;
    std::uint64_t seed = 1;
    int replicates = kDefaultPhiReplicates;
    PhiSampling sampling = PhiSampling::random;

    void validate() const {
        require_positive(LtH, "Cap2dClosedParams: L_tH");
        require_positive(LtV, "Cap2dClosedParams: L_tV");
        require_positive(LrH, "Cap2dClosedParams: L_rH");
        require_positive(LrV, "Cap2dClosedParams: L_rV");
        require_positive(D, "Cap2dClosedParams: D");
        require_positive(kappa, "Cap2dClosedParams: kappa");
        if (Ms < 1 || Ns < 1) throw ArgumentError("Cap2dClosedParams: M_s and N_s must be >= 1");
        if (replicates < 1) throw ArgumentError("Cap2dClosedParams: replicates must be >= 1");
    }
};

inline constexpr double kMu0 = 1.0 / (16.0 * std::numbers::pi * std::numbers::pi);

namespace detail {

inline double side_pdf(double x, double Lt, double Lr) {
    const double a = std::abs(Lt - Lr) / 2.0, b = (Lt + Lr) / 2.0;
    if (x < 0.0 || x > b) return 0.0;
    if (a > 0.0 && x <= a) return 2.0 / std::max(Lt, Lr);
    return (Lt + Lr - 2.0 * x) / (Lt * Lr);
}

struct Mu {
    long double mu1, mu2;
};

inline Mu mus(const Cap2dClosedParams& p) {
    const long double D = p.D, tv = p.LtV, rv = p.LrV;
    return {(tv - rv) * (tv - rv) + 4 * D * D, (tv + rv) * (tv + rv) + 4 * D * D};
}

}  // namespace detail

// Density of the horizontal offset |x_r - x_t|.
inline double pdf_f(double x, const Cap2dClosedParams& p) { return detail::side_pdf(x, p.LtH, p.LrH); }
// Density of the vertical offset |y_r - y_t|.
inline double pdf_g(double y, const Cap2dClosedParams& p) { return detail::side_pdf(y, p.LtV, p.LrV); }

inline double gamma1(double x, const Cap2dClosedParams& p) {
    const auto [m1, m2] = detail::mus(p);
    const long double X = x, D = p.D;
    const long double v = 2.0L * p.LtV * p.LrV / (D * D + X * X) + std::log((m1 + 4 * X * X) / (m2 + 4 * X * X));
    return static_cast<double>(v);
}

inline double t_function(double x, const Cap2dClosedParams& p) {
    const auto [m1, m2] = detail::mus(p);
    const long double X = x, D = p.D;
    const long double s1 = std::sqrt(m1), s2 = std::sqrt(m2);
    const long double v = 2.0L * p.LtV * p.LrV / D * std::atan(X / D) +
                          X * std::log((m1 + 4 * X * X) / (m2 + 4 * X * X)) + s1 * std::atan(2 * X / s1) -
                          s2 * std::atan(2 * X / s2);
    return static_cast<double>(v);
}

inline double q_function(double x, const Cap2dClosedParams& p) {
    const auto [m1, m2] = detail::mus(p);
    const long double X = x, D = p.D;
    const long double v = (long double)p.LtV * p.LrV * std::log(D * D + X * X) +
                          (4 * X * X + m1) / 8 * std::log(m1 + 4 * X * X) -
                          (4 * X * X + m2) / 8 * std::log(m2 + 4 * X * X);
    return static_cast<double>(v);
}

// ---- phase coefficient ----

struct PhiResult {
    double value = 0.0;       // mean over replicates
    double std_error = 0.0;   // standard error of the mean
    double rel_spread = 0.0;  // std / mean across replicates
    std::vector<double> replicates;
};

// (1/(Ns^2 Ms^2)) sum_{o,u} |sum_k exp(j k d(r_k, t_o)) exp(-j k d(r_k, t'_u))|^2
inline double phi_from_points(const std::vector<Point3>& t, const std::vector<Point3>& tp,
                              const std::vector<Point3>& r, double kappa) {
    if (t.empty() || tp.empty() || r.empty()) throw ArgumentError("phi: empty sample set");
    const Eigen::Index Ns = r.size(), Mo = t.size(), Mu = tp.size();
    ComplexMatrix A(Ns, Mo), B(Ns, Mu);
    for (Eigen::Index k = 0; k < Ns; ++k) {
        for (Eigen::Index o = 0; o < Mo; ++o) A(k, o) = std::polar(1.0, kappa * distance(r[k], t[o]));
        for (Eigen::Index u = 0; u < Mu; ++u) B(k, u) = std::polar(1.0, -kappa * distance(r[k], tp[u]));
    }
    const ComplexMatrix S = A.transpose() * B;
    std::vector<double> rows(S.rows());
    for (Eigen::Index i = 0; i < S.rows(); ++i) rows[i] = S.row(i).squaredNorm();
    return pairwise_sum(rows) / (double(Ns) * Ns * double(Mo) * Mu);
}

namespace detail {

inline std::vector<Point3> random_rect(const SeededSampler& s, int n, double LH, double LV, double z) {
    std::vector<Point3> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = {s.uniform(-LH / 2, LH / 2, 2 * std::uint64_t(i)), s.uniform(-LV / 2, LV / 2, 2 * std::uint64_t(i) + 1),
                  z};
    return out;
}

inline std::vector<Point3> grid_rect(int n, double LH, double LV, double z) {
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(double(n)))));
    std::vector<Point3> out;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            out.push_back({-LH / 2 + (i + 0.5) * LH / side, -LV / 2 + (j + 0.5) * LV / side, z});
    return out;
}

inline std::vector<Point3> random_segment(const SeededSampler& s, int n, double L, double z) {
    std::vector<Point3> out(n);
    for (int i = 0; i < n; ++i) out[i] = {0.0, s.uniform(-L / 2, L / 2, std::uint64_t(i)), z};
    return out;
}

inline std::vector<Point3> grid_segment(int n, double L, double z) {
    std::vector<Point3> out;
    for (int i = 0; i < n; ++i) out.push_back({0.0, -L / 2 + (i + 0.5) * L / n, z});
    return out;
}

inline PhiResult summarize(std::vector<double> reps) {
    PhiResult out;
    double s = 0.0;
    for (double v : reps) s += v;
    const double mean = s / reps.size();
    double v2 = 0.0;
    for (double v : reps) v2 += (v - mean) * (v - mean);
    const double sd = reps.size() > 1 ? std::sqrt(v2 / (reps.size() - 1)) : 0.0;
    out.value = mean;
    out.std_error = sd / std::sqrt(double(reps.size()));
    out.rel_spread = mean > 0.0 ? sd / mean : 0.0;
    out.replicates = std::move(reps);
    return out;
}

}  // namespace detail

// Independent uniform samples for t, t' on S_T and r on S_R; replicate i uses
// stream i of the seed.
inline PhiResult phi_coefficient(const Cap2dClosedParams& p) {
    p.validate();
    if (p.sampling == PhiSampling::grid) {
        const auto t = detail::grid_rect(p.Ms, p.LtH, p.LtV, 0.0);
        const auto r = detail::grid_rect(p.Ns, p.LrH, p.LrV, p.D);
        return detail::summarize({phi_from_points(t, t, r, p.kappa)});
    }
    std::vector<double> reps;
    for (int i = 0; i < p.replicates; ++i) {
        const SeededSampler base(p.seed, std::uint64_t(i));
        const auto t = detail::random_rect(base.substream(0), p.Ms, p.LtH, p.LtV, 0.0);
        const auto tp = detail::random_rect(base.substream(1), p.Ms, p.LtH, p.LtV, 0.0);
        const auto r = detail::random_rect(base.substream(2), p.Ns, p.LrH, p.LrV, p.D);
        reps.push_back(phi_from_points(t, tp, r, p.kappa));
    }
    return detail::summarize(std::move(reps));
}

inline PhiResult phi_coefficient_1d(double Lt, double Lr, double D, double kappa, int Ms, int Ns, std::uint64_t seed,
                                    int replicates = kDefaultPhiReplicates,
                                    PhiSampling sampling = PhiSampling::random) {
    require_positive(Lt, "phi_1d: L_t");
    require_positive(Lr, "phi_1d: L_r");
    require_positive(D, "phi_1d: D");
    if (Ms < 1 || Ns < 1 || replicates < 1) throw ArgumentError("phi_1d: sample counts must be >= 1");
    if (sampling == PhiSampling::grid) {
        const auto t = detail::grid_segment(Ms, Lt, 0.0);
        return detail::summarize({phi_from_points(t, t, detail::grid_segment(Ns, Lr, D), kappa)});
    }
    std::vector<double> reps;
    for (int i = 0; i < replicates; ++i) {
        const SeededSampler base(seed, std::uint64_t(i));
        const auto t = detail::random_segment(base.substream(0), Ms, Lt, 0.0);
        const auto tp = detail::random_segment(base.substream(1), Ms, Lt, 0.0);
        const auto r = detail::random_segment(base.substream(2), Ns, Lr, D);
        reps.push_back(phi_from_points(t, tp, r, kappa));
    }
    return detail::summarize(std::move(reps));
}

// ---- closed forms ----

struct ClosedFormResult {
    double value = 0.0;
    double gamma = 0.0;  // numerator before squaring (overall channel gain)
    double xi = 0.0;
    PhiResult phi;
    bool flagged = false;
    std::map<std::string, double> diagnostics;
};

inline double cap2d_gamma(const Cap2dClosedParams& p) {
    const double a = std::abs(p.LtH - p.LrH) / 2.0, b = (p.LtH + p.LrH) / 2.0;
    const double Lmax = std::max(p.LtH, p.LrH), s = p.LtH + p.LrH;
    const double g = kMu0 * (2.0 * p.LtH * p.LrH / Lmax * t_function(a, p) + s * t_function(b, p) -
                             s * t_function(a, p) - 2.0 * q_function(b, p) + 2.0 * q_function(a, p));
    return g;
}

// Four-term bracket of xi without the mu_3 phi factor.
inline double cap2d_xi_bracket(const Cap2dClosedParams& p) {
    const long double D = p.D, H = p.LtH, V = p.LtV;
    const long double v = 4 * H * H * V * V / (D * D * (4 * D * D + H * H)) +
                          2 * H * V * V / (D * D * D) * std::atan(H / (2 * D)) + 16 * V * V / (4 * D * D + H * H) -
                          4 * V * V / (D * D);
    return static_cast<double>(v);
}

inline ClosedFormResult cap2d_edof_closed(const Cap2dClosedParams& p) {
    p.validate();
    ClosedFormResult r;
    r.gamma = cap2d_gamma(p);
    if (!(r.gamma > 0.0)) throw NumericalError("cap2d_edof_closed: non-positive gamma " + std::to_string(r.gamma));
    r.phi = phi_coefficient(p);
    const double mu3 = std::pow(kMu0 * p.LrV * p.LrH, 2);
    r.xi = mu3 * r.phi.value * cap2d_xi_bracket(p);
    if (!(r.xi > 0.0)) throw NumericalError("cap2d_edof_closed: non-positive xi");
    r.value = r.gamma * r.gamma / r.xi;
    r.diagnostics["phi"] = r.phi.value;
    r.diagnostics["phi_std_error"] = r.phi.std_error;
    r.diagnostics["phi_rel_spread"] = r.phi.rel_spread;
    return r;
}

inline constexpr double kLargeTxRatio = 5.0;

// Large-transmitter simplification: gamma ~ 2 L_rH mu0 T(L_tH / 2).
inline ClosedFormResult cap2d_edof_approx_large_tx(const Cap2dClosedParams& p) {
    p.validate();
    ClosedFormResult r;
    const double T = t_function(p.LtH / 2.0, p);
    r.gamma = 2.0 * p.LrH * kMu0 * T;
    r.phi = phi_coefficient(p);
    const double D = p.D, H = p.LtH, V2 = p.LtV * p.LtV, R2 = p.LrV * p.LrV, ph = r.phi.value;
    const double den = ph * H * H * V2 * R2 / (D * D * (4 * D * D + H * H)) +
                       ph * H * V2 * R2 / (2 * D * D * D) * std::atan(H / (2 * D)) +
                       4 * ph * V2 * R2 / (4 * D * D + H * H) - ph * V2 * R2 / (D * D);
    r.xi = den;
    r.value = T * T / den;
    const double ratio = std::min(p.LtH / p.LrH, p.LtV / p.LrV);
    r.flagged = ratio < kLargeTxRatio;
    r.diagnostics["size_ratio"] = ratio;
    r.diagnostics["size_ratio_flag"] = r.flagged ? 1.0 : 0.0;
    r.diagnostics["phi"] = ph;
    return r;
}

// 1D segments on the y axis.
inline double cap1d_numerator_root(double Lt, double Lr, double D) {
    const long double a = Lt, b = Lr, d = D;
    return static_cast<double>(2 * a * b - d * d * std::log(((a + b) * (a + b) + 4 * d * d) / ((a - b) * (a - b) + 4 * d * d)));
}

inline ClosedFormResult cap1d_edof_closed(double Lt, double Lr, double D, double kappa, int Ms = kDefaultPhiSamples,
                                          int Ns = kDefaultPhiSamples, std::uint64_t seed = 1,
                                          int replicates = kDefaultPhiReplicates,
                                          PhiSampling sampling = PhiSampling::random) {
    ClosedFormResult r;
    r.phi = phi_coefficient_1d(Lt, Lr, D, kappa, Ms, Ns, seed, replicates, sampling);
    r.gamma = cap1d_numerator_root(Lt, Lr, D);
    r.xi = r.phi.value * (Lt * Lr) * (Lt * Lr);
    r.value = r.gamma * r.gamma / r.xi;
    r.diagnostics["phi"] = r.phi.value;
    r.diagnostics["phi_std_error"] = r.phi.std_error;
    return r;
}

}  // namespace nfedof
