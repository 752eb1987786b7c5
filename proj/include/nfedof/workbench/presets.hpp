#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nfedof/errors.hpp"
#include "nfedof/workbench/spec.hpp"

namespace nfedof::workbench {

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig1", "fig3", "fig4", "fig5", "fig8", "fig10", "fig11"};
    return names;
}

namespace detail {

inline SweepSpec base_spec(std::string name, Scenario s, ChannelKind ch, Method m) {
    SweepSpec spec;
    spec.name = std::move(name);
    spec.scenario = s;
    spec.channel = ch;
    spec.method = m;
    spec.frequency = 30e9;
    spec.seed = 2024;
    spec.budget_s = 600.0;
    return spec;
}

inline void square(PointParams& p, double L) { p.LtH = p.LtV = p.LrH = p.LrV = L; }

inline void upa_counts(PointParams& p, int M) { p.MH = p.MV = p.NH = p.NV = M; }

inline std::vector<double> scaled(std::initializer_list<double> v, double s) {
    std::vector<double> out;
    for (double x : v) out.push_back(x * s);
    return out;
}

inline std::vector<double> counts(std::initializer_list<double> v) { return std::vector<double>(v); }

}  // namespace detail

// Each bundle member is run and written separately.
inline std::vector<SweepSpec> figure_preset(const std::string& name) {
    using detail::base_spec;
    const double lam = WaveParams::from_frequency(30e9).wavelength;
    std::vector<SweepSpec> out;

    if (name == "fig1") {
        // 10 lambda squares over D; UPA at several densities against the CAP limit
        const auto Ds = detail::scaled({6, 10, 14, 18, 22, 26, 30}, lam);
        for (ChannelKind ch : {ChannelKind::scalar, ChannelKind::dyadic3}) {
            const std::string tag = to_string(ch);
            for (int M : {5, 10, 20}) {
                auto s = base_spec("fig1_upa_M" + std::to_string(M) + "_" + tag, Scenario::upa_dipole, ch, Method::direct);
                s.sweep = {SweepVariable::D, 0, 0, 1, false, Ds};
                detail::square(s.fixed, 10 * lam);
                detail::upa_counts(s.fixed, M);
                out.push_back(s);
            }
            auto c = base_spec("fig1_cap_" + tag, Scenario::cap2d, ch, Method::quadrature);
            c.sweep = {SweepVariable::D, 0, 0, 1, false, Ds};
            detail::square(c.fixed, 10 * lam);
            c.compare = Method::grid;
            out.push_back(c);
        }
    } else if (name == "fig3") {
        // CAP squares over D, closed form against quadrature
        for (double L : {10.0, 20.0}) {
            auto s = base_spec("fig3_cap_L" + std::to_string(int(L)) + "lambda", Scenario::cap2d, ChannelKind::scalar,
                               Method::closed);
            s.sweep = {SweepVariable::D, 0, 0, 1, false, detail::scaled({10, 20, 30, 40, 50}, lam)};
            detail::square(s.fixed, L * lam);
            s.compare = Method::quadrature;
            out.push_back(s);
        }
    } else if (name == "fig4") {
        // rectangles: L_tH = L_rH = 1 m, L_rV = 1.5 m, D = 8 m, sweep L_tV
        auto s = base_spec("fig4_cap_rect", Scenario::cap2d, ChannelKind::scalar, Method::closed);
        s.sweep = {SweepVariable::LtV, 0, 0, 1, false, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}};
        s.fixed.LtH = s.fixed.LrH = 1.0;
        s.fixed.LrV = 1.5;
        s.fixed.D = 8.0;
        out.push_back(s);
    } else if (name == "fig5") {
        // patch vs dipole over M_V = N_V; L = 10 lambda, D = 10 lambda, A = lambda/2
        const auto all = detail::counts({4, 7, 10, 13, 16, 20});
        const auto small = detail::counts({4, 7, 10});  // dyadic patch cost grows as (9 M^2)^3
        for (ChannelKind ch : {ChannelKind::scalar, ChannelKind::dyadic3}) {
            const std::string tag = to_string(ch);
            auto d = base_spec("fig5_dipole_" + tag, Scenario::upa_dipole, ch, Method::direct);
            d.sweep = {SweepVariable::M, 0, 0, 1, false, all};
            auto p = base_spec("fig5_patch_" + tag, Scenario::upa_patch, ch, Method::quadrature);
            p.sweep = {SweepVariable::M, 0, 0, 1, false, ch == ChannelKind::scalar ? all : small};
            for (auto* s : {&d, &p}) {
                detail::square(s->fixed, 10 * lam);
                s->fixed.D = 10 * lam;
            }
            p.fixed.AH = p.fixed.AV = lam / 2;
            out.push_back(d);
            out.push_back(p);
        }
    } else if (name == "fig8") {
        // 2D plane vs 1D segment at equal aperture, D = 20 m
        const std::vector<double> ap{1.0, 2.0, 3.0, 4.0, 5.0};
        for (Scenario sc : {Scenario::cap2d, Scenario::cap1d}) {
            auto s = base_spec(std::string("fig8_") + to_string(sc), sc, ChannelKind::scalar, Method::closed);
            s.sweep = {SweepVariable::aperture, 0, 0, 1, false, ap};
            s.fixed.D = 20.0;
            out.push_back(s);
        }
    } else if (name == "fig10") {
        // polarization ladder on CAP squares at D = 6 lambda
        for (ChannelKind ch : {ChannelKind::scalar, ChannelKind::dyadic2, ChannelKind::dyadic3}) {
            auto s = base_spec(std::string("fig10_cap_") + to_string(ch), Scenario::cap2d, ch, Method::grid);
            s.sweep = {SweepVariable::L, 0, 0, 1, false, detail::scaled({2, 4, 6, 8, 10, 12}, lam)};
            s.fixed.D = 6 * lam;
            out.push_back(s);
        }
    } else if (name == "fig11") {
        // mutual coupling: L = 2 lambda, D = 1 lambda, reference impedance parameters
        const auto Ms = detail::counts({2, 3, 4, 6, 8, 10, 12, 14, 16});
        for (ChannelKind ch : {ChannelKind::scalar, ChannelKind::dyadic3}) {
            for (bool coupled : {false, true}) {
                auto s = base_spec(std::string("fig11_") + (coupled ? "coupled_" : "uncoupled_") + to_string(ch),
                                   Scenario::upa_dipole, ch, Method::direct);
                s.sweep = {SweepVariable::M, 0, 0, 1, false, Ms};
                detail::square(s.fixed, 2 * lam);
                s.fixed.D = lam;
                if (coupled) s.coupling = CouplingParams::reference(lam);
                out.push_back(s);
            }
        }
    } else {
        throw ArgumentError("unknown figure preset '" + name + "'");
    }
    for (const auto& s : out) validate(s);
    return out;
}

}  // namespace nfedof::workbench
