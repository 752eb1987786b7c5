#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "nfedof/errors.hpp"
#include "nfedof/geometry.hpp"
#include "nfedof/greens.hpp"
#include "nfedof/numerics/matrix.hpp"
#include "nfedof/numerics/parallel.hpp"
#include "nfedof/numerics/quadrature.hpp"

namespace nfedof {

enum class ChannelKind { scalar, dyadic1, dyadic2, dyadic3 };

inline const char* to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::scalar: return "scalar";
        case ChannelKind::dyadic1: return "dyadic1";
        case ChannelKind::dyadic2: return "dyadic2";
        case ChannelKind::dyadic3: return "dyadic3";
    }
    return "?";
}

inline ChannelKind parse_channel_kind(const std::string& s) {
    if (s == "scalar") return ChannelKind::scalar;
    if (s == "dyadic1") return ChannelKind::dyadic1;
    if (s == "dyadic2") return ChannelKind::dyadic2;
    if (s == "dyadic3") return ChannelKind::dyadic3;
    throw ArgumentError("unknown channel kind '" + s + "'");
}

// single = {x}, double = {x, y}, triple = {x, y, z}
struct PolarizationSet {
    std::vector<int> components;

    int size() const { return static_cast<int>(components.size()); }

    static PolarizationSet single() { return {{0}}; }
    static PolarizationSet dual() { return {{0, 1}}; }
    static PolarizationSet triple() { return {{0, 1, 2}}; }

    static PolarizationSet with_count(int n) {
        if (n == 1) return single();
        if (n == 2) return dual();
        if (n == 3) return triple();
        throw ArgumentError("PolarizationSet: count must be 1, 2 or 3");
    }

    void validate() const {
        if (components.empty() || components.size() > 3) throw ArgumentError("PolarizationSet: size must be 1..3");
        for (std::size_t i = 0; i < components.size(); ++i) {
            if (components[i] < 0 || components[i] > 2) throw ArgumentError("PolarizationSet: component outside {x,y,z}");
            for (std::size_t j = 0; j < i; ++j)
                if (components[i] == components[j]) throw ArgumentError("PolarizationSet: repeated component");
        }
    }
};

inline PolarizationSet polarizations(ChannelKind k) {
    switch (k) {
        case ChannelKind::dyadic1: return PolarizationSet::single();
        case ChannelKind::dyadic2: return PolarizationSet::dual();
        case ChannelKind::dyadic3: return PolarizationSet::triple();
        default: throw ArgumentError("polarizations: scalar channel has no polarization set");
    }
}

// Transmitter plane at z = 0, receiver plane at z = D.
template <class Geometry>
struct Link {
    Geometry tx;
    Geometry rx;
    double D = 1.0;
    WaveParams wave;

    Link() = default;
    Link(Geometry t, Geometry r, double d, WaveParams w) : tx(t), rx(r), D(d), wave(w) {
        set_z(tx, 0.0);
        set_z(rx, D);
        require_positive(D, "Link: D");
    }

private:
    static void set_z(UpaGeometry& g, double z) { g.z = z; }
    static void set_z(UlaGeometry& g, double z) { g.z = z; }
    static void set_z(CapPlane& g, double z) { g.z = z; }
    static void set_z(CapLine& g, double z) { g.z = z; }
    static void set_z(PatchUpaGeometry& g, double z) { g.upa.z = z; }
};

inline std::vector<Point3> positions(const UpaGeometry& g) { return upa_positions(g); }
inline std::vector<Point3> positions(const UlaGeometry& g) { return ula_positions(g); }
inline std::vector<Point3> positions(const PatchUpaGeometry& g) { return upa_positions(g.upa); }

struct ChannelLimits {
    std::size_t max_per_side = 20000;
};

inline void check_size(std::size_t rows, std::size_t cols, int npol, const ChannelLimits& lim) {
    if (rows > lim.max_per_side || cols > lim.max_per_side) {
        const double r = double(rows) * npol, c = double(cols) * npol;
        const double bytes = 16.0 * (r * c + std::min(r, c) * std::min(r, c));
        throw ResourceError("channel: " + std::to_string(rows) + " x " + std::to_string(cols) +
                            " points exceeds the per-side guard of " + std::to_string(lim.max_per_side) +
                            " (channel + Gram would need about " + std::to_string(bytes / 1e9) + " GB)");
    }
}

// Optional sqrt-weights give the quadrature-weighted node matrix
// diag(sqrt(w_r)) G diag(sqrt(w_t)); pass empty vectors for plain channels.
inline ComplexMatrix assemble_scalar(const std::vector<Point3>& rx, const std::vector<Point3>& tx, const WaveParams& w,
                                     const std::vector<double>& wr = {}, const std::vector<double>& wt = {},
                                     int threads = 1, const ChannelLimits& lim = {}) {
    check_size(rx.size(), tx.size(), 1, lim);
    const Eigen::Index N = rx.size(), M = tx.size();
    ComplexMatrix H(N, M);
    std::vector<double> sr(N, 1.0), st(M, 1.0);
    for (Eigen::Index n = 0; n < N && !wr.empty(); ++n) sr[n] = std::sqrt(wr[n]);
    for (Eigen::Index m = 0; m < M && !wt.empty(); ++m) st[m] = std::sqrt(wt[m]);
    parallel_for(N, threads, [&](std::size_t n) {
        for (Eigen::Index m = 0; m < M; ++m) {
            const double d = distance(rx[n], tx[m]);
            check_separation(d, w);
            H(n, m) = sr[n] * st[m] * scalar_green_at(d, w.wavenumber);
        }
    });
    return H;
}

// Block (bp, bq) holds eta(p, q) G for p = pols[bp], q = pols[bq].
inline ComplexMatrix assemble_dyadic(const std::vector<Point3>& rx, const std::vector<Point3>& tx, const WaveParams& w,
                                     const PolarizationSet& pols, const std::vector<double>& wr = {},
                                     const std::vector<double>& wt = {}, int threads = 1,
                                     const ChannelLimits& lim = {}) {
    pols.validate();
    check_size(rx.size(), tx.size(), pols.size(), lim);
    const Eigen::Index N = rx.size(), M = tx.size();
    const int P = pols.size();
    ComplexMatrix H(P * N, P * M);
    std::vector<double> sr(N, 1.0), st(M, 1.0);
    for (Eigen::Index n = 0; n < N && !wr.empty(); ++n) sr[n] = std::sqrt(wr[n]);
    for (Eigen::Index m = 0; m < M && !wt.empty(); ++m) st[m] = std::sqrt(wt[m]);
    parallel_for(N, threads, [&](std::size_t n) {
        for (Eigen::Index m = 0; m < M; ++m) {
            const Point3& r = rx[n];
            const Point3& s = tx[m];
            const double d = distance(r, s);
            check_separation(d, w);
            const double a[3] = {(r.x - s.x) / d, (r.y - s.y) / d, (r.z - s.z) / d};
            const auto c = eta_coefficients(w.wavenumber * d);
            const auto g = sr[n] * st[m] * scalar_green_at(d, w.wavenumber);
            for (int bp = 0; bp < P; ++bp)
                for (int bq = 0; bq < P; ++bq) {
                    const int p = pols.components[bp], q = pols.components[bq];
                    const cplx eta = c.dir * (a[p] * a[q]) + (p == q ? c.diag : cplx(0.0));
                    H(bp * N + n, bq * M + m) = eta * g;
                }
        }
    });
    return H;
}

inline ComplexMatrix assemble(const std::vector<Point3>& rx, const std::vector<Point3>& tx, const WaveParams& w,
                              ChannelKind kind, const std::vector<double>& wr = {}, const std::vector<double>& wt = {},
                              int threads = 1, const ChannelLimits& lim = {}) {
    if (kind == ChannelKind::scalar) return assemble_scalar(rx, tx, w, wr, wt, threads, lim);
    return assemble_dyadic(rx, tx, w, polarizations(kind), wr, wt, threads, lim);
}

template <class G>
ComplexMatrix assemble_scalar(const Link<G>& link, int threads = 1) {
    return assemble_scalar(positions(link.rx), positions(link.tx), link.wave, {}, {}, threads);
}

template <class G>
ComplexMatrix assemble_dyadic(const Link<G>& link, const PolarizationSet& pols, int threads = 1) {
    return assemble_dyadic(positions(link.rx), positions(link.tx), link.wave, pols, {}, {}, threads);
}

template <class G>
ComplexMatrix assemble(const Link<G>& link, ChannelKind kind, int threads = 1) {
    return assemble(positions(link.rx), positions(link.tx), link.wave, kind, {}, {}, threads);
}

// ---- Gram ----

struct GramResult {
    ComplexMatrix R;
    bool outer = false;  // true: R = H H^H, false: R = H^H H
};

inline GramResult gram(const ComplexMatrix& H) {
    GramResult g;
    g.outer = H.rows() < H.cols();
    const Eigen::Index n = g.outer ? H.rows() : H.cols();
    ComplexMatrix L = ComplexMatrix::Zero(n, n);
    if (g.outer)
        L.selfadjointView<Eigen::Lower>().rankUpdate(H);
    else
        L.selfadjointView<Eigen::Lower>().rankUpdate(H.adjoint());
    g.R = L.selfadjointView<Eigen::Lower>();
    return g;
}

// tr(R) and ||R||_F^2 of the Gram matrix without storing its upper half.
struct GramStats {
    double trace = 0.0;
    double frob_sq = 0.0;
};

inline GramStats gram_stats(const ComplexMatrix& H) {
    const bool outer = H.rows() < H.cols();
    const Eigen::Index n = outer ? H.rows() : H.cols();
    ComplexMatrix L = ComplexMatrix::Zero(n, n);
    if (outer)
        L.selfadjointView<Eigen::Lower>().rankUpdate(H);
    else
        L.selfadjointView<Eigen::Lower>().rankUpdate(H.adjoint());
    std::vector<double> diag(n), off(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        diag[i] = L(i, i).real();
        double s = 0.0;
        for (Eigen::Index j = 0; j < i; ++j) s += std::norm(L(i, j));
        off[i] = s;
    }
    GramStats st;
    st.trace = pairwise_sum(diag);
    double d2 = 0.0;
    for (double v : diag) d2 += v * v;
    st.frob_sq = d2 + 2.0 * pairwise_sum(off);
    return st;
}

// ---- patch elements ----

struct NodeSet {
    std::vector<Point3> points;
    std::vector<double> weights;  // area weights
    std::vector<int> element;     // owning element index
};

inline NodeSet patch_nodes(const PatchUpaGeometry& g, const QuadratureRule& rule) {
    if (rule.order < 1) throw ArgumentError("patch_nodes: quadrature order must be >= 1");
    NodeSet ns;
    const auto regions = patch_regions(g);
    for (std::size_t e = 0; e < regions.size(); ++e) {
        const Rect& r = regions[e];
        const auto hx = map_rule(rule, r.center.x - r.half_h, r.center.x + r.half_h);
        const auto hy = map_rule(rule, r.center.y - r.half_v, r.center.y + r.half_v);
        for (std::size_t i = 0; i < hx.nodes.size(); ++i)
            for (std::size_t j = 0; j < hy.nodes.size(); ++j) {
                ns.points.push_back({hx.nodes[i], hy.nodes[j], r.center.z});
                ns.weights.push_back(hx.weights[i] * hy.weights[j]);
                ns.element.push_back(static_cast<int>(e));
            }
    }
    return ns;
}

// Element-pair integral evaluators over patch regions. The weighted node
// matrix turns the patch double sums into a trace ratio.
class PatchChannel {
public:
    PatchChannel(NodeSet tx, NodeSet rx, WaveParams w, int tx_elements, int rx_elements)
        : tx_(std::move(tx)), rx_(std::move(rx)), w_(w), mt_(tx_elements), nr_(rx_elements) {}

    const NodeSet& tx_nodes() const { return tx_; }
    const NodeSet& rx_nodes() const { return rx_; }
    int tx_elements() const { return mt_; }
    int rx_elements() const { return nr_; }

    // integral over V_T,m x V_R,n of |G|^2
    double pair_power(int n, int m) const {
        double s = 0.0;
        for (std::size_t a = 0; a < rx_.points.size(); ++a) {
            if (rx_.element[a] != n) continue;
            for (std::size_t b = 0; b < tx_.points.size(); ++b) {
                if (tx_.element[b] != m) continue;
                const double d = distance(rx_.points[a], tx_.points[b]);
                check_separation(d, w_);
                const double g = 1.0 / (4.0 * std::numbers::pi * d);
                s += rx_.weights[a] * tx_.weights[b] * g * g;
            }
        }
        return s;
    }

    // K(t, t') = sum_n integral over V_R,n of G*(r, t) G(r, t')
    cplx kernel(const Point3& t, const Point3& tp) const {
        cplx s = 0.0;
        for (std::size_t a = 0; a < rx_.points.size(); ++a)
            s += rx_.weights[a] * std::conj(scalar_green(rx_.points[a], t, w_)) * scalar_green(rx_.points[a], tp, w_);
        return s;
    }

    ComplexMatrix weighted(ChannelKind kind, int threads = 1) const {
        return assemble(rx_.points, tx_.points, w_, kind, rx_.weights, tx_.weights, threads);
    }

private:
    NodeSet tx_, rx_;
    WaveParams w_;
    int mt_, nr_;
};

inline PatchChannel assemble_patch_scalar(const Link<PatchUpaGeometry>& link, const QuadratureRule& rule) {
    link.tx.validate();
    link.rx.validate();
    return PatchChannel(patch_nodes(link.tx, rule), patch_nodes(link.rx, rule), link.wave, link.tx.count(),
                        link.rx.count());
}

// ---- NFCM dump ----
// "NFCM", u32 version, u32 rows, u32 cols, then rows*cols (re, im) f64 pairs,
// row-major, little-endian.

namespace detail {
template <class T>
void put_le(std::ostream& os, T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    os.write(reinterpret_cast<const char*>(b), sizeof(T));
}
template <class T>
T get_le(std::istream& is) {
    unsigned char b[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw IoError("NFCM: truncated file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}
}  // namespace detail

inline constexpr std::uint32_t kNfcmVersion = 1;

inline void write_nfcm(std::ostream& os, const ComplexMatrix& H) {
    os.write("NFCM", 4);
    detail::put_le<std::uint32_t>(os, kNfcmVersion);
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(H.rows()));
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(H.cols()));
    for (Eigen::Index i = 0; i < H.rows(); ++i)
        for (Eigen::Index j = 0; j < H.cols(); ++j) {
            detail::put_le<double>(os, H(i, j).real());
            detail::put_le<double>(os, H(i, j).imag());
        }
}

inline void write_nfcm(const std::string& path, const ComplexMatrix& H) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("NFCM: cannot open '" + path + "' for writing");
    write_nfcm(os, H);
    if (!os) throw IoError("NFCM: write failed for '" + path + "'");
}

inline ComplexMatrix read_nfcm(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "NFCM", 4) != 0) throw IoError("NFCM: bad magic");
    const auto version = detail::get_le<std::uint32_t>(is);
    if (version != kNfcmVersion) throw IoError("NFCM: unsupported version " + std::to_string(version));
    const auto rows = detail::get_le<std::uint32_t>(is);
    const auto cols = detail::get_le<std::uint32_t>(is);
    ComplexMatrix H(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j) {
            const double re = detail::get_le<double>(is);
            const double im = detail::get_le<double>(is);
            H(i, j) = cplx(re, im);
        }
    return H;
}

inline ComplexMatrix read_nfcm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("NFCM: cannot open '" + path + "'");
    return read_nfcm(is);
}

}  // namespace nfedof
