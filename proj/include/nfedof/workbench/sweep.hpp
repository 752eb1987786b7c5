#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <string>
#include <vector>

#include "nfedof/closedform.hpp"
#include "nfedof/coupling.hpp"
#include "nfedof/edof.hpp"
#include "nfedof/numerics/parallel.hpp"
#include "nfedof/numerics/sampler.hpp"
#include "nfedof/workbench/spec.hpp"

namespace nfedof::workbench {

struct SweepRow {
    std::string scenario, channel, method;
    PointParams p;
    std::uint64_t seed = 0;
    double edof = kNaN;
    double alpha = kNaN;
    double runtime_s = kNaN;
    std::string error;
    bool over_budget = false;
};

struct ComparisonRow {
    std::size_t index = 0;
    double value = kNaN;  // swept variable
    double edof_a = kNaN, edof_b = kNaN;
    double rel_diff = kNaN;  // |a - b| / reference
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepRow> compare_rows;
    std::vector<ComparisonRow> comparison;
};

struct PointValue {
    double edof = kNaN;
    double alpha = kNaN;
};

namespace detail {

inline double need(double v, const char* name) {
    if (!std::isfinite(v)) throw ConfigError(std::string("missing parameter ") + name);
    return v;
}

inline int need(int v, const char* name) {
    if (v < 1) throw ConfigError(std::string("missing or invalid count ") + name);
    return v;
}

inline PointValue from_edof(const EdofResult& r) { return {r.value, r.diag("trace", kNaN)}; }

}  // namespace detail

// Fills in the effective sampling counts so rows echo what was used.
inline PointParams effective_params(const SweepSpec& spec, Method m, PointParams p) {
    if (m == Method::closed && (spec.scenario == Scenario::cap2d || spec.scenario == Scenario::cap1d)) {
        if (p.Ms < 1) p.Ms = kDefaultPhiSamples;
        if (p.Ns < 1) p.Ns = kDefaultPhiSamples;
    } else {
        p.Ms = p.Ns = -1;
    }
    if (spec.scenario != Scenario::upa_patch) p.AH = p.AV = kNaN;
    return p;
}

inline PointValue evaluate_point(const SweepSpec& spec, Method m, const PointParams& p, std::uint64_t point_seed) {
    using detail::need;
    const WaveParams w = spec.wave();
    const ChannelKind ch = spec.channel;
    const double D = need(p.D, "D");
    const auto& o = spec.options;

    switch (spec.scenario) {
        case Scenario::upa_dipole:
        case Scenario::ula: {
            auto run = [&](const auto& link) -> PointValue {
                if (m == Method::closed) {
                    ClosedSums s;
                    if constexpr (std::is_same_v<std::decay_t<decltype(link.tx)>, UpaGeometry>)
                        s = upa_closed_sums(link);
                    else
                        s = ula_closed_sums(link);
                    return {s.value(), std::sqrt(s.numerator)};
                }
                if (spec.coupling) return detail::from_edof(coupled_edof(link, ch, *spec.coupling));
                const ComplexMatrix H = assemble(link, ch);
                if (m == Method::threshold) {
                    const double tr = gram_stats(H).trace;
                    return {double(edof_threshold(H, o.threshold_eps)), tr};
                }
                return detail::from_edof(edof_trace_ratio(H));
            };
            if (spec.scenario == Scenario::upa_dipole) {
                UpaGeometry tx{need(p.MH, "MH"), need(p.MV, "MV"), need(p.LtH, "LtH"), need(p.LtV, "LtV")};
                UpaGeometry rx{need(p.NH, "NH"), need(p.NV, "NV"), need(p.LrH, "LrH"), need(p.LrV, "LrV")};
                return run(Link<UpaGeometry>(tx, rx, D, w));
            }
            UlaGeometry tx{need(p.MV, "MV"), need(p.LtV, "LtV")};
            UlaGeometry rx{need(p.NV, "NV"), need(p.LrV, "LrV")};
            return run(Link<UlaGeometry>(tx, rx, D, w));
        }
        case Scenario::upa_patch: {
            PatchUpaGeometry tx{{need(p.MH, "MH"), need(p.MV, "MV"), need(p.LtH, "LtH"), need(p.LtV, "LtV")},
                                need(p.AH, "AH"), need(p.AV, "AV")};
            PatchUpaGeometry rx{{need(p.NH, "NH"), need(p.NV, "NV"), need(p.LrH, "LrH"), need(p.LrV, "LrV")}, p.AH, p.AV};
            return detail::from_edof(patch_edof(Link<PatchUpaGeometry>(tx, rx, D, w), ch, o.patch_order));
        }
        case Scenario::cap2d: {
            CapPlane tx{need(p.LtH, "LtH"), need(p.LtV, "LtV")};
            CapPlane rx{need(p.LrH, "LrH"), need(p.LrV, "LrV")};
            if (m == Method::closed) {
                Cap2dClosedParams cp{tx.LH, tx.LV, rx.LH, rx.LV, D, w.wavenumber};
                cp.Ms = p.Ms > 0 ? p.Ms : kDefaultPhiSamples;
                cp.Ns = p.Ns > 0 ? p.Ns : kDefaultPhiSamples;
                cp.seed = point_seed;
                cp.replicates = o.phi_replicates;
                const auto r = cap2d_edof_closed(cp);
                return {r.value, r.gamma};
            }
            CapOrders co;
            co.outer = co.inner = o.quad_order;
            co.convergence_check = o.quad_convergence_check;
            if (m == Method::quadrature) {
                if (ch == ChannelKind::scalar) return detail::from_edof(cap_edof_scalar_quadrature(tx, rx, D, w, co));
                return detail::from_edof(cap_edof_polarized(tx, rx, D, w, polarizations(ch), co));
            }
            return detail::from_edof(cap_edof_dense_grid(tx, rx, D, w, o.grid_density, ch));
        }
        case Scenario::cap1d: {
            CapLine tx{need(p.LtV, "LtV")};
            CapLine rx{need(p.LrV, "LrV")};
            if (m == Method::closed) {
                const auto r = cap1d_edof_closed(tx.L, rx.L, D, w.wavenumber, p.Ms > 0 ? p.Ms : kDefaultPhiSamples,
                                                 p.Ns > 0 ? p.Ns : kDefaultPhiSamples, point_seed, o.phi_replicates);
                return {r.value, std::abs(r.gamma)};
            }
            CapOrders co;
            co.outer = co.inner = o.quad_order;
            co.convergence_check = o.quad_convergence_check;
            if (m == Method::quadrature) {
                if (ch == ChannelKind::scalar) return detail::from_edof(cap_edof_scalar_quadrature(tx, rx, D, w, co));
                return detail::from_edof(cap_edof_polarized(tx, rx, D, w, polarizations(ch), co));
            }
            return detail::from_edof(cap_edof_dense_grid(tx, rx, D, w, o.grid_density, ch));
        }
    }
    throw ConfigError("unhandled scenario");
}

inline std::uint64_t point_seed(std::uint64_t seed, std::size_t index) { return hash_combine(seed, index); }

inline SweepRow run_point(const SweepSpec& spec, Method m, const PointParams& raw, std::size_t index) {
    SweepRow row;
    row.scenario = to_string(spec.scenario);
    row.channel = to_string(spec.channel);
    row.method = to_string(m);
    row.p = effective_params(spec, m, raw);
    row.seed = spec.seed;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const PointValue v = evaluate_point(spec, m, row.p, point_seed(spec.seed, index));
        row.edof = v.edof;
        row.alpha = v.alpha;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.over_budget = spec.budget_s > 0.0 && row.runtime_s > spec.budget_s;
    return row;
}

// Points run concurrently; rows come back in sweep order.
inline SweepResult run_sweep(const SweepSpec& spec, int threads = 1) {
    validate(spec);
    const auto values = spec.sweep.points();
    const std::size_t n = values.size();
    SweepResult res;
    res.rows.resize(n);
    if (spec.compare) res.compare_rows.resize(n);
    const std::size_t jobs = spec.compare ? 2 * n : n;
    parallel_for(jobs, threads, [&](std::size_t j) {
        const std::size_t i = j % n;
        const PointParams p = apply_variable(spec, values[i]);
        if (j < n)
            res.rows[i] = run_point(spec, spec.method, p, i);
        else
            res.compare_rows[i] = run_point(spec, *spec.compare, p, i);
    });
    if (spec.compare) {
        // reference: the direct estimator when present, else the compare method
        const bool a_is_ref = spec.method == Method::direct;
        for (std::size_t i = 0; i < n; ++i) {
            ComparisonRow c;
            c.index = i;
            c.value = values[i];
            c.edof_a = res.rows[i].edof;
            c.edof_b = res.compare_rows[i].edof;
            const double ref = a_is_ref ? c.edof_a : c.edof_b;
            c.rel_diff = std::abs(c.edof_a - c.edof_b) / ref;
            res.comparison.push_back(c);
        }
    }
    return res;
}

}  // namespace nfedof::workbench
