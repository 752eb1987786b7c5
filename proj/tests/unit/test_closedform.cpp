#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nfedof/closedform.hpp"
#include "nfedof/edof.hpp"
#include "oracles.hpp"

using namespace nfedof;

namespace {
const WaveParams kUnit = WaveParams::from_wavelength(1.0);

Cap2dClosedParams square_params(double L, double D, double kappa = 2 * std::numbers::pi) {
    Cap2dClosedParams p;
    p.LtH = p.LtV = p.LrH = p.LrV = L;
    p.D = D;
    p.kappa = kappa;
    return p;
}
}  // namespace

// ---- discrete closed forms ----

TEST(UpaClosed, SingleAlignedPairIsOne) {
    Link<UpaGeometry> link({1, 1, 1e-9, 1e-9}, {1, 1, 1e-9, 1e-9}, 3.0, kUnit);
    EXPECT_NEAR(upa_edof_closed(link), 1.0, 1e-12);
}

TEST(UpaClosed, FarFieldIsOne) {
    Link<UpaGeometry> link(UpaGeometry::square(4, 2.0), UpaGeometry::square(4, 2.0), 1e6, kUnit);
    EXPECT_NEAR(upa_edof_closed(link), 1.0, 1e-3);
}

TEST(UpaClosed, MatchesDirectFourByFour) {
    Link<UpaGeometry> link(UpaGeometry::square(4, 4.0), UpaGeometry::square(4, 4.0), 10.0, kUnit);
    const double c = upa_edof_closed(link), d = edof_direct(link, ChannelKind::scalar).value;
    EXPECT_LT(std::abs(c - d) / d, 0.05) << c << " vs " << d;
}

TEST(UlaClosed, SingleAndFarField) {
    Link<UlaGeometry> one({1, 1e-9}, {1, 1e-9}, 2.0, kUnit);
    EXPECT_NEAR(ula_edof_closed(one), 1.0, 1e-12);
    Link<UlaGeometry> far({16, 3.0}, {16, 3.0}, 1e6, kUnit);
    EXPECT_NEAR(ula_edof_closed(far), 1.0, 1e-3);
}

TEST(UlaClosed, MatchesDirectSixtyFourElements) {
    const auto w = WaveParams::from_frequency(30e9);
    Link<UlaGeometry> link({64, 1.0}, {64, 1.0}, 10.0, w);
    const double c = ula_edof_closed(link), d = edof_direct(link, ChannelKind::scalar).value;
    EXPECT_LT(std::abs(c - d) / d, 0.05) << c << " vs " << d;
}

TEST(DiscreteClosed, SumsMatchPairwiseOracle) {
    Link<UpaGeometry> link({3, 2, 2.0, 1.0}, {2, 2, 1.5, 1.5}, 5.0, kUnit);
    const auto t = upa_positions(link.tx), r = upa_positions(link.rx);
    const double D = 5.0, k = kUnit.wavenumber;
    double num = 0;
    for (const auto& a : r)
        for (const auto& b : t) num += D * D / (D * D + std::pow(a.x - b.x, 2) + std::pow(a.y - b.y, 2));
    num *= num;
    double den = 0;
    for (const auto& t1 : t)
        for (const auto& t2 : t) {
            cplx s = 0;
            for (const auto& a : r) s += std::exp(cplx(0, -k / D * (a.x * (t1.x - t2.x) + a.y * (t1.y - t2.y))));
            den += std::norm(s);
        }
    const auto cs = upa_closed_sums(link);
    EXPECT_NEAR(cs.numerator, num, 1e-12 * num);
    EXPECT_NEAR(cs.denominator, den, 1e-12 * den);
}

// ---- offset densities and T, Q ----

TEST(Pdf, EqualSidesStartAtTwoOverL) {
    auto p = square_params(1.5, 3.0);
    EXPECT_NEAR(pdf_f(0.0, p), 2.0 / 1.5, 1e-15);
    EXPECT_EQ(pdf_f(-0.1, p), 0.0);
    EXPECT_EQ(pdf_f(1.6, p), 0.0);
}

TEST(Pdf, FirstBranchValue) {
    Cap2dClosedParams p;
    p.LtH = 2.0;
    p.LrH = 1.0;
    EXPECT_NEAR(pdf_f(0.4, p), 1.0, 1e-15);
}

namespace {
// integral of a side density over [lo, hi], split at its kink
double side_mass(double (*pdf)(double, const Cap2dClosedParams&), const Cap2dClosedParams& p, double Lt, double Lr,
                 double lo, double hi) {
    const auto rule = gauss_legendre(20);
    const double a = std::abs(Lt - Lr) / 2;
    double s = 0;
    if (lo < a) s += integrate(rule, lo, std::min(hi, a), [&](double x) { return pdf(x, p); });
    if (hi > a) s += integrate(rule, std::max(lo, a), hi, [&](double x) { return pdf(x, p); });
    return s;
}
}  // namespace

TEST(Pdf, NormalizedAndNonNegative) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    for (int i = 0; i < 25; ++i) {
        Cap2dClosedParams p;
        p.LtH = u(rng), p.LrH = u(rng), p.LtV = u(rng), p.LrV = u(rng);
        const double bh = (p.LtH + p.LrH) / 2, bv = (p.LtV + p.LrV) / 2;
        EXPECT_NEAR(side_mass(pdf_f, p, p.LtH, p.LrH, 0, bh), 1.0, 1e-10);
        EXPECT_NEAR(side_mass(pdf_g, p, p.LtV, p.LrV, 0, bv), 1.0, 1e-10);
        for (int j = 0; j <= 50; ++j) {
            EXPECT_GE(pdf_f(bh * j / 50, p), 0.0);
            EXPECT_GE(pdf_g(bv * j / 50, p), 0.0);
        }
    }
}

// Monte Carlo check that f is the density of |x_r - x_t| for uniform points.
TEST(Pdf, MatchesSampledOffsetHistogram) {
    Cap2dClosedParams p;
    p.LtH = 2.0;
    p.LrH = 0.8;
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> ut(-1.0, 1.0), ur(-0.4, 0.4);
    const int n = 400000, bins = 14;
    const double b = 1.4;
    std::vector<int> h(bins);
    for (int i = 0; i < n; ++i) {
        const double x = std::abs(ur(rng) - ut(rng));
        h[std::min(bins - 1, int(x / b * bins))]++;
    }
    for (int k = 0; k < bins; ++k) {
        const double mass = side_mass(pdf_f, p, p.LtH, p.LrH, b * k / bins, b * (k + 1) / bins);
        EXPECT_NEAR(double(h[k]) / n, mass, 4e-3) << k;
    }
}

TEST(Gamma1, UnitExample) {
    Cap2dClosedParams p;
    p.LtV = p.LrV = 1.0;
    p.D = 1.0;
    EXPECT_NEAR(gamma1(0.0, p), 2.0 - std::log(2.0), 1e-14);
    EXPECT_NEAR(gamma1(1e6, p), 0.0, 1e-11);
}

TEST(TQ, ValuesAtZero) {
    Cap2dClosedParams p;
    p.LtV = 1.3, p.LrV = 0.7, p.D = 2.1;
    EXPECT_NEAR(t_function(0.0, p), 0.0, 1e-15);
    const double m1 = std::pow(1.3 - 0.7, 2) + 4 * 2.1 * 2.1, m2 = std::pow(2.0, 2) + 4 * 2.1 * 2.1;
    const double q0 = 1.3 * 0.7 * std::log(2.1 * 2.1) + m1 / 8 * std::log(m1) - m2 / 8 * std::log(m2);
    EXPECT_NEAR(q_function(0.0, p), q0, 1e-13);
}

TEST(TQ, CentralDifferencesMatchGamma1) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int i = 0; i < 50; ++i) {
        Cap2dClosedParams p;
        p.LtH = u(rng), p.LrH = u(rng), p.LtV = u(rng), p.LrV = u(rng), p.D = u(rng);
        const double b = (p.LtH + p.LrH) / 2;
        for (double x : {0.13 * b, 0.5 * b, 0.97 * b}) {
            const double h = 1e-5 * std::max(x, 1.0);
            const double dT = (t_function(x + h, p) - t_function(x - h, p)) / (2 * h);
            const double dQ = (q_function(x + h, p) - q_function(x - h, p)) / (2 * h);
            const double g = gamma1(x, p);
            EXPECT_NEAR(dT, g, std::max(1e-5 * std::abs(g), 1e-8));
            EXPECT_NEAR(dQ, x * g, std::max(1e-5 * std::abs(x * g), 1e-8));
        }
    }
}

// ---- phi ----

TEST(Phi, SingleSampleIsOne) {
    auto p = square_params(10, 10);
    p.Ms = p.Ns = 1;
    EXPECT_NEAR(phi_coefficient(p).value, 1.0, 1e-15);
}

TEST(Phi, CoincidentTransmitSamplesGiveOne) {
    std::vector<Point3> t(7, Point3{0.3, -0.2, 0}), r;
    for (int i = 0; i < 9; ++i) r.push_back({0.1 * i, -0.05 * i, 5.0});
    EXPECT_NEAR(phi_from_points(t, t, r, 40.0), 1.0, 1e-14);
}

TEST(Phi, ReplicateSpreadOnTenWavelengthPlanes) {
    auto p = square_params(10, 10);
    p.Ms = p.Ns = 64;
    const auto r = phi_coefficient(p);
    EXPECT_EQ(r.replicates.size(), 8u);
    EXPECT_LE(r.rel_spread, 0.05);
}

TEST(Phi, InUnitIntervalAndSeedDeterministic) {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> u(0.5, 5.0);
    for (int i = 0; i < 10; ++i) {
        Cap2dClosedParams p;
        p.LtH = u(rng), p.LrH = u(rng), p.LtV = u(rng), p.LrV = u(rng), p.D = u(rng);
        p.kappa = 2 * std::numbers::pi;
        p.Ms = p.Ns = 16;
        p.seed = 1000 + i;
        const auto a = phi_coefficient(p), b = phi_coefficient(p);
        EXPECT_EQ(a.value, b.value);
        for (double v : a.replicates) {
            EXPECT_GT(v, 0.0);
            EXPECT_LE(v, 1.0 + 1e-12);
        }
    }
}

TEST(Phi, GridSamplingVariant) {
    auto p = square_params(4, 4);
    p.Ms = p.Ns = 1;
    p.sampling = PhiSampling::grid;
    EXPECT_NEAR(phi_coefficient(p).value, 1.0, 1e-15);
    p.Ms = p.Ns = 49;
    const auto r = phi_coefficient(p);
    EXPECT_EQ(r.replicates.size(), 1u);
    EXPECT_GT(r.value, 0.0);
    EXPECT_LE(r.value, 1.0);
}

// ---- 2D planes ----

TEST(Cap2dClosed, GammaPositive) {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int i = 0; i < 200; ++i) {
        Cap2dClosedParams p;
        p.LtH = u(rng), p.LrH = u(rng), p.LtV = u(rng), p.LrV = u(rng), p.D = u(rng) * 4;
        EXPECT_GT(cap2d_gamma(p), 0.0);
    }
}

// The closed-form gamma expands the power integral of |G|^2 to leading order;
// the residual must fall off as (L/D)^2.
TEST(Cap2dClosed, GammaConvergesToPowerIntegral) {
    auto rel_err = [](double D) {
        Cap2dClosedParams p;
        p.LtH = p.LtV = 2.0;
        p.LrH = 1.0, p.LrV = 1.5;
        p.D = D;
        const auto t = detail::region_nodes(CapPlane{2.0, 2.0}, 0.0, 16, 1, kUnit);
        const auto r = detail::region_nodes(CapPlane{1.0, 1.5}, D, 16, 1, kUnit);
        double num = 0;
        for (std::size_t a = 0; a < r.points.size(); ++a)
            for (std::size_t b = 0; b < t.points.size(); ++b) {
                const double d = distance(r.points[a], t.points[b]);
                num += r.weights[a] * t.weights[b] / (16 * std::numbers::pi * std::numbers::pi * d * d);
            }
        return std::abs(cap2d_gamma(p) - num) / num;
    };
    const double e6 = rel_err(6), e12 = rel_err(12), e24 = rel_err(24);
    EXPECT_NEAR(e6 / e12, 4.0, 0.6);
    EXPECT_NEAR(e12 / e24, 4.0, 0.6);
    EXPECT_LT(e24, 0.01);
}

TEST(Cap2dClosed, FarFieldIsOne) {
    auto p = square_params(1.0, 1000.0);
    EXPECT_NEAR(cap2d_edof_closed(p).value, 1.0, 0.05);
}

TEST(Cap2dClosed, TwentySixWavelengthsAgainstQuadrature) {
    auto p = square_params(10, 26);
    const double c = cap2d_edof_closed(p).value;
    CapOrders o;
    const auto q = cap_edof_scalar_quadrature(CapPlane::square(10), CapPlane::square(10), 26, kUnit, o);
    EXPECT_LT(std::abs(c - q.value) / q.value, 0.10) << c << " vs " << q.value;
}

TEST(Cap2dClosed, SeedDeterminism) {
    auto p = square_params(3, 5);
    p.seed = 77;
    EXPECT_EQ(cap2d_edof_closed(p).value, cap2d_edof_closed(p).value);
    auto q = p;
    q.seed = 78;
    EXPECT_NE(cap2d_edof_closed(p).value, cap2d_edof_closed(q).value);
}

TEST(Cap2dClosed, InvalidParams) {
    auto p = square_params(1, 1);
    p.Ms = 0;
    EXPECT_THROW(cap2d_edof_closed(p), ArgumentError);
    p = square_params(1, -1);
    EXPECT_THROW(cap2d_edof_closed(p), ArgumentError);
}

TEST(LargeTx, LargeTransmitterMatchesFullForm) {
    const double kappa = WaveParams::from_frequency(30e9).wavenumber;
    Cap2dClosedParams p;
    p.LtH = p.LtV = 10.0;
    p.LrH = p.LrV = 0.1;
    p.D = 50.0;
    p.kappa = kappa;
    const auto a = cap2d_edof_approx_large_tx(p), f = cap2d_edof_closed(p);
    EXPECT_FALSE(a.flagged);
    EXPECT_LT(std::abs(a.value - f.value) / f.value, 0.05) << a.value << " vs " << f.value;
}

TEST(LargeTx, EqualSizesFlagged) {
    auto p = square_params(1, 5);
    const auto a = cap2d_edof_approx_large_tx(p);
    EXPECT_TRUE(a.flagged);
    EXPECT_EQ(a.diagnostics.at("size_ratio_flag"), 1.0);
}

TEST(LargeTx, FarFieldMatchesFullForm) {
    auto p = square_params(1.0, 1000.0);
    p.LtH = p.LtV = 2.0;
    const double a = cap2d_edof_approx_large_tx(p).value, f = cap2d_edof_closed(p).value;
    EXPECT_LT(std::abs(a - f) / f, 0.05);
}

// ---- 1D segments ----

TEST(Cap1dClosed, FarFieldIsOne) {
    EXPECT_NEAR(cap1d_edof_closed(1.0, 1.0, 1e4, 2 * std::numbers::pi).value, 1.0, 0.01);
}

TEST(Cap1dClosed, UnitLengthsNumerator) {
    const auto r = cap1d_edof_closed(1.0, 1.0, 1.0, 1e4, 32, 32, 5);
    const double num = std::pow(2 - std::log(2.0), 2);
    EXPECT_NEAR(r.gamma * r.gamma, num, 1e-12);
    EXPECT_NEAR(r.value, num / r.phi.value, 1e-12 * r.value);
}

// Far from the segments the root tends to L_t L_r.
TEST(Cap1dClosed, NumeratorFarFieldLimit) {
    for (double D : {50.0, 200.0, 1000.0}) EXPECT_NEAR(cap1d_numerator_root(3.0, 2.0, D) / 6.0, 1.0, 10.0 / (D * D));
}

TEST(Cap1dClosed, SeedDeterminism) {
    const auto a = cap1d_edof_closed(2.0, 2.0, 3.0, 50.0, 32, 32, 9);
    const auto b = cap1d_edof_closed(2.0, 2.0, 3.0, 50.0, 32, 32, 9);
    EXPECT_EQ(a.value, b.value);
}
