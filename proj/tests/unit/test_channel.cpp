#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "nfedof/channel.hpp"
#include "nfedof/edof.hpp"
#include "oracles.hpp"

using namespace nfedof;

namespace {
const WaveParams kUnit = WaveParams::from_wavelength(1.0);
}

TEST(AssembleScalar, SingleAlignedPair) {
    Link<UlaGeometry> link({1, 1e-9}, {1, 1e-9}, 1.0, kUnit);
    const auto H = assemble_scalar(link);
    ASSERT_EQ(H.rows(), 1);
    ASSERT_EQ(H.cols(), 1);
    EXPECT_NEAR(H(0, 0).real(), 1 / (4 * std::numbers::pi), 1e-14);
    EXPECT_NEAR(H(0, 0).imag(), 0.0, 1e-14);
}

TEST(AssembleScalar, ShapeIsRxByTx) {
    Link<UpaGeometry> link({3, 2, 2.0, 1.0}, {4, 5, 2.0, 3.0}, 4.0, kUnit);
    const auto H = assemble_scalar(link);
    EXPECT_EQ(H.rows(), 20);
    EXPECT_EQ(H.cols(), 6);
}

TEST(AssembleScalar, PairwiseOracleOnUla) {
    Link<UlaGeometry> link({2, 1.0}, {2, 1.0}, 5.0, kUnit);
    const auto H = assemble_scalar(link);
    const auto t = ula_positions(link.tx), r = ula_positions(link.rx);
    for (int n = 0; n < 2; ++n)
        for (int m = 0; m < 2; ++m) {
            const double d = std::sqrt(std::pow(r[n].y - t[m].y, 2) + 25.0);
            const cplx ref = std::exp(cplx(0, -2 * std::numbers::pi * d)) / (4 * std::numbers::pi * d);
            EXPECT_NEAR(std::abs(H(n, m) - ref), 0.0, 1e-14);
        }
}

TEST(AssembleScalar, ReciprocityTransposes) {
    const auto w = WaveParams::from_frequency(30e9);
    const UpaGeometry a{3, 4, 0.05, 0.07}, b{2, 5, 0.08, 0.04};
    const auto H = assemble_scalar(Link<UpaGeometry>(a, b, 0.2, w));
    // swap roles: b transmits from z = 0, a receives at z = D; mirror through z = D/2
    auto pa = upa_positions(a), pb = upa_positions(b);
    for (auto& p : pa) p.z = 0.2;
    const auto Hs = assemble_scalar(pa, pb, w);
    EXPECT_EQ(Hs.rows(), H.cols());
    for (int i = 0; i < H.rows(); ++i)
        for (int j = 0; j < H.cols(); ++j) EXPECT_EQ(H(i, j), Hs(j, i));
}

TEST(AssembleScalar, SingularityPropagates) {
    const auto r = std::vector<Point3>{{0, 0, 0.001}};
    const auto t = std::vector<Point3>{{0, 0, 0}};
    EXPECT_THROW(assemble_scalar(r, t, kUnit), SingularityError);
}

TEST(AssembleDyadic, SinglePolarizationFarFieldMatchesScalar) {
    Link<UpaGeometry> link({3, 3, 1.0, 1.0}, {3, 3, 1.0, 1.0}, 1e5, kUnit);
    const auto Hs = assemble_scalar(link);
    const auto Hx = assemble_dyadic(link, PolarizationSet::single());
    for (int i = 0; i < Hs.rows(); ++i)
        for (int j = 0; j < Hs.cols(); ++j) EXPECT_LE(std::abs(Hx(i, j) - Hs(i, j)), 1e-3 * std::abs(Hs(i, j)));
}

TEST(AssembleDyadic, TripleShape) {
    Link<UpaGeometry> link({2, 3, 1.0, 1.0}, {4, 1, 1.0, 1.0}, 3.0, kUnit);
    const auto H = assemble_dyadic(link, PolarizationSet::triple());
    EXPECT_EQ(H.rows(), 12);
    EXPECT_EQ(H.cols(), 18);
}

TEST(AssembleDyadic, ReducedSetsAreExactSubBlocks) {
    Link<UpaGeometry> link({3, 3, 2.0, 2.0}, {4, 4, 2.0, 2.0}, 1.5, kUnit);
    const auto H3 = assemble_dyadic(link, PolarizationSet::triple());
    const auto H2 = assemble_dyadic(link, PolarizationSet::dual());
    const auto H1 = assemble_dyadic(link, PolarizationSet::single());
    const int N = 16, M = 9;
    EXPECT_TRUE(H2 == H3.block(0, 0, 2 * N, 2 * M));
    EXPECT_TRUE(H1 == H3.block(0, 0, N, M));
    // arbitrary ordering picks the matching blocks
    const auto Hzx = assemble_dyadic(link, PolarizationSet{{2, 0}});
    EXPECT_TRUE(Hzx.block(0, 0, N, M) == H3.block(2 * N, 2 * M, N, M));
    EXPECT_TRUE(Hzx.block(0, M, N, M) == H3.block(2 * N, 0, N, M));
}

TEST(AssembleDyadic, BlocksAreEtaTimesScalar) {
    Link<UlaGeometry> link({3, 2.0}, {2, 1.0}, 0.7, kUnit);
    const auto H = assemble_dyadic(link, PolarizationSet::triple());
    const auto t = ula_positions(link.tx), r = ula_positions(link.rx);
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            for (int n = 0; n < 2; ++n)
                for (int m = 0; m < 3; ++m)
                    EXPECT_NEAR(std::abs(H(p * 2 + n, q * 3 + m) - dyadic_green(r[n], t[m], kUnit).G(p, q)), 0.0, 1e-15);
}

TEST(PolarizationSet, ValidationAndKinds) {
    EXPECT_THROW(PolarizationSet{}.validate(), ArgumentError);
    EXPECT_THROW((PolarizationSet{{0, 0}}.validate()), ArgumentError);
    EXPECT_THROW((PolarizationSet{{3}}.validate()), ArgumentError);
    EXPECT_EQ(polarizations(ChannelKind::dyadic2).components, (std::vector<int>{0, 1}));
    EXPECT_THROW(polarizations(ChannelKind::scalar), ArgumentError);
    EXPECT_THROW(PolarizationSet::with_count(4), ArgumentError);
    EXPECT_EQ(parse_channel_kind("dyadic3"), ChannelKind::dyadic3);
    EXPECT_THROW(parse_channel_kind("tensor"), ArgumentError);
}

TEST(Gram, Examples) {
    const auto I = gram(ComplexMatrix::Identity(2, 2));
    EXPECT_TRUE(I.R.isApprox(ComplexMatrix::Identity(2, 2)));
    const auto J = gram(ComplexMatrix::Ones(2, 2));
    EXPECT_TRUE(J.R.isApprox(ComplexMatrix::Constant(2, 2, 2.0)));
    const auto T = gram(ComplexMatrix::Ones(3, 2));
    EXPECT_EQ(T.R.rows(), 2);
    EXPECT_FALSE(T.outer);
    const auto W = gram(ComplexMatrix::Ones(2, 5));
    EXPECT_EQ(W.R.rows(), 2);
    EXPECT_TRUE(W.outer);
}

TEST(Gram, HermitianPsdAndTraceIsFrobenius) {
    std::mt19937_64 rng(5);
    for (auto [r, c] : {std::pair{7, 3}, {4, 9}, {16, 16}}) {
        const auto H = oracle::random_matrix(rng, r, c);
        const auto g = gram(H);
        EXPECT_LE((g.R - g.R.adjoint()).norm(), 1e-12 * g.R.norm());
        const auto ev = oracle::eigenvalues(g.R);
        EXPECT_GE(ev.back(), -1e-10 * ev.front());
        EXPECT_NEAR(g.R.trace().real(), H.squaredNorm(), 1e-12 * H.squaredNorm());
        const auto st = gram_stats(H);
        EXPECT_NEAR(st.trace, H.squaredNorm(), 1e-12 * st.trace);
        EXPECT_NEAR(st.frob_sq, g.R.squaredNorm(), 1e-12 * st.frob_sq);
    }
}

TEST(ChannelLimits, GuardReportsMemory) {
    ChannelLimits lim;
    lim.max_per_side = 10;
    std::vector<Point3> r(11, Point3{0, 0, 1}), t(3);
    try {
        assemble_scalar(r, t, kUnit, {}, {}, 1, lim);
        FAIL();
    } catch (const ResourceError& e) {
        EXPECT_NE(std::string(e.what()).find("GB"), std::string::npos);
    }
}

TEST(Nfcm, RoundTripAndHeader) {
    std::mt19937_64 rng(8);
    const auto H = oracle::random_matrix(rng, 3, 5);
    std::stringstream ss;
    write_nfcm(ss, H);
    const std::string bytes = ss.str();
    ASSERT_EQ(bytes.size(), 16u + 15u * 16u);
    EXPECT_EQ(bytes.substr(0, 4), "NFCM");
    std::uint32_t hdr[3];
    std::memcpy(hdr, bytes.data() + 4, 12);
    EXPECT_EQ(hdr[0], 1u);
    EXPECT_EQ(hdr[1], 3u);
    EXPECT_EQ(hdr[2], 5u);
    double first[2];
    std::memcpy(first, bytes.data() + 16, 16);
    EXPECT_EQ(first[0], H(0, 0).real());
    EXPECT_EQ(first[1], H(0, 0).imag());
    const auto back = read_nfcm(ss);
    EXPECT_TRUE(back == H);
}

TEST(Nfcm, BadMagicIsIoError) {
    std::stringstream ss("XXXX0000000000000000");
    EXPECT_THROW(read_nfcm(ss), IoError);
    EXPECT_THROW(read_nfcm(std::string("/nonexistent/dir/h.nfcm")), IoError);
}

// ---- patch evaluators ----

TEST(PatchChannel, CentreRuleGivesScaledDipolePower) {
    const auto w = WaveParams::from_wavelength(1.0);
    const double A = 0.5;
    Link<PatchUpaGeometry> link({{3, 3, 3.0, 3.0}, A, A}, {{2, 2, 2.0, 2.0}, A, A}, 4.0, w);
    const auto pc = assemble_patch_scalar(link, gauss_legendre(1));
    const auto H = assemble_scalar(upa_positions(link.rx.upa), upa_positions(link.tx.upa), w);
    for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 9; ++m)
            EXPECT_NEAR(pc.pair_power(n, m), std::norm(H(n, m)) * A * A * A * A, 1e-14 * std::norm(H(n, m)));
}

TEST(PatchChannel, SinglePairConvergesUnderOrderDoubling) {
    const auto w = WaveParams::from_wavelength(1.0);
    Link<PatchUpaGeometry> link({{1, 1, 0.5, 0.5}, 0.5, 0.5}, {{1, 1, 0.5, 0.5}, 0.5, 0.5}, 10.0, w);
    const double a = assemble_patch_scalar(link, gauss_legendre(3)).pair_power(0, 0);
    const double b = assemble_patch_scalar(link, gauss_legendre(6)).pair_power(0, 0);
    EXPECT_LT(std::abs(a - b) / b, 1e-3);
}

TEST(PatchChannel, FullTilingSumsToPlaneIntegral) {
    const auto w = WaveParams::from_wavelength(1.0);
    const double L = 4.0;
    Link<PatchUpaGeometry> link({{4, 4, L, L}, 1.0, 1.0}, {{4, 4, L, L}, 1.0, 1.0}, 4.0, w);
    const auto pc = assemble_patch_scalar(link, gauss_legendre(4));
    double tiles = 0;
    for (int n = 0; n < 16; ++n)
        for (int m = 0; m < 16; ++m) tiles += pc.pair_power(n, m);
    // the tiles cover [-L/2 - A/2, L/2 - A/2] per axis
    const auto rule = map_rule(gauss_legendre(24), -L / 2 - 0.5, L / 2 - 0.5);
    double plane = 0;
    for (std::size_t a = 0; a < rule.nodes.size(); ++a)
        for (std::size_t b = 0; b < rule.nodes.size(); ++b)
            for (std::size_t c = 0; c < rule.nodes.size(); ++c)
                for (std::size_t d = 0; d < rule.nodes.size(); ++d) {
                    const double r2 = std::pow(rule.nodes[a] - rule.nodes[c], 2) +
                                      std::pow(rule.nodes[b] - rule.nodes[d], 2) + 16.0;
                    plane += rule.weights[a] * rule.weights[b] * rule.weights[c] * rule.weights[d] /
                             (16 * std::numbers::pi * std::numbers::pi * r2);
                }
    EXPECT_LT(std::abs(tiles - plane) / plane, 5e-3);
}

TEST(PatchChannel, KernelIsHermitian) {
    const auto w = WaveParams::from_wavelength(1.0);
    Link<PatchUpaGeometry> link({{2, 2, 2.0, 2.0}, 0.5, 0.5}, {{2, 2, 2.0, 2.0}, 0.5, 0.5}, 3.0, w);
    const auto pc = assemble_patch_scalar(link, gauss_legendre(2));
    const Point3 a{0.1, 0.2, 0}, b{-0.4, 0.3, 0};
    EXPECT_NEAR(std::abs(pc.kernel(a, b) - std::conj(pc.kernel(b, a))), 0.0, 1e-15);
    EXPECT_GT(pc.kernel(a, a).real(), 0.0);
    EXPECT_THROW(patch_nodes(link.tx, QuadratureRule{}), ArgumentError);
}
