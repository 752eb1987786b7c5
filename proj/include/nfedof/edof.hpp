#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "nfedof/channel.hpp"
#include "nfedof/errors.hpp"
#include "nfedof/geometry.hpp"
#include "nfedof/numerics/eigen_jacobi.hpp"
#include "nfedof/numerics/matrix.hpp"
#include "nfedof/numerics/quadrature.hpp"

namespace nfedof {

enum class EdofMethod { TraceRatio, Threshold, CapQuadrature, CapDenseGrid, PatchQuadrature, ClosedForm };

inline const char* to_string(EdofMethod m) {
    switch (m) {
        case EdofMethod::TraceRatio: return "TraceRatio";
        case EdofMethod::Threshold: return "Threshold";
        case EdofMethod::CapQuadrature: return "CapQuadrature";
        case EdofMethod::CapDenseGrid: return "CapDenseGrid";
        case EdofMethod::PatchQuadrature: return "PatchQuadrature";
        case EdofMethod::ClosedForm: return "ClosedForm";
    }
    return "?";
}

struct EdofResult {
    double value = 0.0;
    EdofMethod method = EdofMethod::TraceRatio;
    std::map<std::string, double> diagnostics;

    double diag(const std::string& k, double fallback = 0.0) const {
        auto it = diagnostics.find(k);
        return it == diagnostics.end() ? fallback : it->second;
    }
};

// tr^2(R) / ||R||_F^2 with R the smaller Gram of H.
inline EdofResult edof_trace_ratio(const ComplexMatrix& H) {
    if (H.size() == 0) throw DegenerateInputError("edof_trace_ratio: empty matrix");
    require_finite(H, "edof_trace_ratio");
    const GramStats st = gram_stats(H);
    if (!(st.trace > 0.0) || !(st.frob_sq > 0.0)) throw DegenerateInputError("edof_trace_ratio: zero channel");
    EdofResult r;
    r.method = EdofMethod::TraceRatio;
    r.value = st.trace * st.trace / st.frob_sq;
    r.diagnostics["trace"] = st.trace;
    r.diagnostics["frob_sq"] = st.frob_sq;
    r.diagnostics["rows"] = double(H.rows());
    r.diagnostics["cols"] = double(H.cols());
    return r;
}

inline double trace_ratio_from_eigenvalues(const std::vector<double>& lambda) {
    double s = 0.0, s2 = 0.0;
    for (double l : lambda) {
        s += l;
        s2 += l * l;
    }
    if (!(s2 > 0.0)) throw DegenerateInputError("trace_ratio_from_eigenvalues: zero spectrum");
    return s * s / s2;
}

inline constexpr double kDefaultThresholdEps = 0.01;

// Number of sigma_n^2 >= eps * sigma_1^2.
inline int edof_threshold(const ComplexMatrix& H, double eps = kDefaultThresholdEps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("edof_threshold: eps must lie in (0, 1)");
    if (H.size() == 0) throw DegenerateInputError("edof_threshold: empty matrix");
    const auto ev = hermitian_eigenvalues(gram(H).R);
    if (ev.empty() || !(ev.front() > 0.0)) throw DegenerateInputError("edof_threshold: zero channel");
    int count = 0;
    for (double l : ev)
        if (l >= eps * ev.front()) ++count;
    return count;
}

// ---- continuous apertures ----

struct CapOrders {
    int outer = 24;  // per axis on S_T
    int inner = 24;  // per axis on S_R
    int panels = 0;  // per axis; 0 = one panel per started 10 wavelengths
    bool convergence_check = true;
    double convergence_tolerance = 0.02;
    std::size_t max_refined_size = 2500;  // largest refined system (nodes x polarizations) for the check
    int threads = 1;
};

namespace detail {

inline int auto_panels(double side, const WaveParams& w, int requested) {
    if (requested > 0) return requested;
    return std::max(1, static_cast<int>(std::ceil(side / (10.0 * w.wavelength) - 1e-9)));
}

inline NodeSet region_nodes(const CapPlane& g, double z, int order, int panels_req, const WaveParams& w) {
    const auto rule = gauss_legendre(order);
    const auto hx = map_rule(rule, -g.LH / 2.0, g.LH / 2.0, auto_panels(g.LH, w, panels_req));
    const auto hy = map_rule(rule, -g.LV / 2.0, g.LV / 2.0, auto_panels(g.LV, w, panels_req));
    NodeSet ns;
    for (std::size_t i = 0; i < hx.nodes.size(); ++i)
        for (std::size_t j = 0; j < hy.nodes.size(); ++j) {
            ns.points.push_back({hx.nodes[i], hy.nodes[j], z});
            ns.weights.push_back(hx.weights[i] * hy.weights[j]);
            ns.element.push_back(0);
        }
    return ns;
}

inline NodeSet region_nodes(const CapLine& g, double z, int order, int panels_req, const WaveParams& w) {
    const auto rule = gauss_legendre(order);
    const auto hy = map_rule(rule, -g.L / 2.0, g.L / 2.0, auto_panels(g.L, w, panels_req));
    NodeSet ns;
    for (std::size_t j = 0; j < hy.nodes.size(); ++j) {
        ns.points.push_back({0.0, hy.nodes[j], z});
        ns.weights.push_back(hy.weights[j]);
        ns.element.push_back(0);
    }
    return ns;
}

// Cell-centred samples, n = round(side * density / lambda) per axis.
inline int grid_count(double side, double density, const WaveParams& w) {
    return std::max(1, static_cast<int>(std::lround(side * density / w.wavelength)));
}

inline std::vector<Point3> grid_points(const CapPlane& g, double z, double density, const WaveParams& w) {
    const int nh = grid_count(g.LH, density, w), nv = grid_count(g.LV, density, w);
    std::vector<Point3> out;
    out.reserve(std::size_t(nh) * nv);
    for (int i = 0; i < nh; ++i)
        for (int j = 0; j < nv; ++j)
            out.push_back({-g.LH / 2.0 + (i + 0.5) * g.LH / nh, -g.LV / 2.0 + (j + 0.5) * g.LV / nv, z});
    return out;
}

inline std::vector<Point3> grid_points(const CapLine& g, double z, double density, const WaveParams& w) {
    const int n = grid_count(g.L, density, w);
    std::vector<Point3> out;
    for (int j = 0; j < n; ++j) out.push_back({0.0, -g.L / 2.0 + (j + 0.5) * g.L / n, z});
    return out;
}

// Empty polarization set selects the scalar kernel.
template <class Region>
double cap_quadrature_value(const Region& tx, const Region& rx, double D, const WaveParams& w,
                            const PolarizationSet& pols, int outer, int inner, int panels, int threads) {
    const NodeSet t = region_nodes(tx, 0.0, outer, panels, w);
    const NodeSet r = region_nodes(rx, D, inner, panels, w);
    const ComplexMatrix Hw = pols.components.empty()
                                 ? assemble_scalar(r.points, t.points, w, r.weights, t.weights, threads)
                                 : assemble_dyadic(r.points, t.points, w, pols, r.weights, t.weights, threads);
    return edof_trace_ratio(Hw).value;
}

template <class Region>
EdofResult cap_quadrature(const Region& tx, const Region& rx, double D, const WaveParams& w,
                          const PolarizationSet& pols, const CapOrders& o) {
    tx.validate();
    rx.validate();
    require_positive(D, "cap quadrature: D");
    if (o.outer < 1 || o.inner < 1) throw ArgumentError("cap quadrature: orders must be >= 1");
    EdofResult res;
    res.method = EdofMethod::CapQuadrature;
    res.value = cap_quadrature_value(tx, rx, D, w, pols, o.outer, o.inner, o.panels, o.threads);
    res.diagnostics["outer_order"] = o.outer;
    res.diagnostics["inner_order"] = o.inner;
    if (o.convergence_check) {
        // refine to 2n when the refined system stays small, otherwise compare n/2 against n
        const std::size_t npol = std::max<std::size_t>(1, pols.components.size());
        const std::size_t refined = npol * region_nodes(tx, 0.0, 2 * o.outer, o.panels, w).points.size();
        const bool upward = refined <= o.max_refined_size && 2 * std::max(o.outer, o.inner) <= kMaxQuadratureOrder;
        double other = 0.0;
        if (upward)
            other = cap_quadrature_value(tx, rx, D, w, pols, 2 * o.outer, 2 * o.inner, o.panels, o.threads);
        else if (o.outer >= 2 && o.inner >= 2)
            other = cap_quadrature_value(tx, rx, D, w, pols, o.outer / 2, o.inner / 2, o.panels, o.threads);
        if (other > 0.0) {
            const double change = std::abs(res.value - other) / std::max(res.value, other);
            res.diagnostics["convergence_rel_change"] = change;
            res.diagnostics["convergence_upward"] = upward ? 1.0 : 0.0;
            res.diagnostics["nonconverged"] = change > o.convergence_tolerance ? 1.0 : 0.0;
        }
    }
    return res;
}

}  // namespace detail

inline EdofResult cap_edof_scalar_quadrature(const CapPlane& tx, const CapPlane& rx, double D, const WaveParams& w,
                                             const CapOrders& o = {}) {
    return detail::cap_quadrature(tx, rx, D, w, PolarizationSet{}, o);
}

inline EdofResult cap_edof_scalar_quadrature(const CapLine& tx, const CapLine& rx, double D, const WaveParams& w,
                                             const CapOrders& o = {}) {
    return detail::cap_quadrature(tx, rx, D, w, PolarizationSet{}, o);
}

// A single polarization reduces to the scalar kernel and takes the scalar path.
template <class Region>
EdofResult cap_edof_polarized(const Region& tx, const Region& rx, double D, const WaveParams& w,
                              const PolarizationSet& pols, const CapOrders& o = {}) {
    pols.validate();
    if (pols.size() == 1) return detail::cap_quadrature(tx, rx, D, w, PolarizationSet{}, o);
    auto res = detail::cap_quadrature(tx, rx, D, w, pols, o);
    res.diagnostics["polarizations"] = pols.size();
    return res;
}

inline constexpr double kMinGridDensity = 2.0;

template <class Region>
EdofResult cap_edof_dense_grid(const Region& tx, const Region& rx, double D, const WaveParams& w, double density,
                               ChannelKind kind = ChannelKind::scalar, int threads = 1,
                               const ChannelLimits& lim = {}) {
    tx.validate();
    rx.validate();
    require_positive(D, "cap_edof_dense_grid: D");
    if (!(density >= kMinGridDensity))
        throw ArgumentError("cap_edof_dense_grid: density must be >= 2 samples per wavelength");
    const auto t = detail::grid_points(tx, 0.0, density, w);
    const auto r = detail::grid_points(rx, D, density, w);
    auto res = edof_trace_ratio(assemble(r, t, w, kind, {}, {}, threads, lim));
    res.method = EdofMethod::CapDenseGrid;
    res.diagnostics["density"] = density;
    res.diagnostics["tx_samples"] = double(t.size());
    res.diagnostics["rx_samples"] = double(r.size());
    return res;
}

// Discrete arrays: assemble and take the trace ratio.
template <class G>
EdofResult edof_direct(const Link<G>& link, ChannelKind kind, int threads = 1) {
    return edof_trace_ratio(assemble(link, kind, threads));
}

inline constexpr int kDefaultPatchOrder = 3;

// Element-region double sums evaluated through the weighted node matrix.
inline EdofResult patch_edof(const Link<PatchUpaGeometry>& link, ChannelKind kind, int order = kDefaultPatchOrder,
                             int threads = 1) {
    const PatchChannel pc = assemble_patch_scalar(link, gauss_legendre(order));
    auto res = edof_trace_ratio(pc.weighted(kind, threads));
    res.method = EdofMethod::PatchQuadrature;
    res.diagnostics["order"] = order;
    return res;
}

inline EdofResult patch_edof(const Link<PatchUpaGeometry>& link, const PolarizationSet& pols,
                             int order = kDefaultPatchOrder, int threads = 1) {
    const PatchChannel pc = assemble_patch_scalar(link, gauss_legendre(order));
    const auto& t = pc.tx_nodes();
    const auto& r = pc.rx_nodes();
    auto res = edof_trace_ratio(assemble_dyadic(r.points, t.points, link.wave, pols, r.weights, t.weights, threads));
    res.method = EdofMethod::PatchQuadrature;
    res.diagnostics["order"] = order;
    return res;
}

}  // namespace nfedof
