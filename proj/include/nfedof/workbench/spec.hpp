#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nfedof/channel.hpp"
#include "nfedof/closedform.hpp"
#include "nfedof/coupling.hpp"
#include "nfedof/errors.hpp"

namespace nfedof::workbench {

enum class Scenario { upa_dipole, upa_patch, ula, cap2d, cap1d };
enum class Method { direct, closed, quadrature, grid, threshold };
enum class SweepVariable { D, L, LtV, LrV, aperture, M, Ms };

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::upa_dipole: return "upa-dipole";
        case Scenario::upa_patch: return "upa-patch";
        case Scenario::ula: return "ula";
        case Scenario::cap2d: return "cap2d";
        case Scenario::cap1d: return "cap1d";
    }
    return "?";
}

inline const char* to_string(Method m) {
    switch (m) {
        case Method::direct: return "direct";
        case Method::closed: return "closed";
        case Method::quadrature: return "quadrature";
        case Method::grid: return "grid";
        case Method::threshold: return "threshold";
    }
    return "?";
}

inline const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::D: return "D";
        case SweepVariable::L: return "L";
        case SweepVariable::LtV: return "LtV";
        case SweepVariable::LrV: return "LrV";
        case SweepVariable::aperture: return "aperture";
        case SweepVariable::M: return "M";
        case SweepVariable::Ms: return "Ms";
    }
    return "?";
}

inline Scenario parse_scenario(const std::string& s) {
    for (auto v : {Scenario::upa_dipole, Scenario::upa_patch, Scenario::ula, Scenario::cap2d, Scenario::cap1d})
        if (s == to_string(v)) return v;
    throw ConfigError("unknown scenario '" + s + "'");
}

inline Method parse_method(const std::string& s) {
    for (auto v : {Method::direct, Method::closed, Method::quadrature, Method::grid, Method::threshold})
        if (s == to_string(v)) return v;
    throw ConfigError("unknown method '" + s + "'");
}

inline SweepVariable parse_variable(const std::string& s) {
    for (auto v : {SweepVariable::D, SweepVariable::L, SweepVariable::LtV, SweepVariable::LrV, SweepVariable::aperture,
                   SweepVariable::M, SweepVariable::Ms})
        if (s == to_string(v)) return v;
    throw ConfigError("unknown sweep variable '" + s + "'");
}

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Lengths in metres. 1D designs keep their length in LtV/LrV and their
// count in MV/NV. Unused fields stay NaN / -1.
struct PointParams {
    double D = kNaN;
    double LtH = kNaN, LtV = kNaN, LrH = kNaN, LrV = kNaN;
    int MH = -1, MV = -1, NH = -1, NV = -1;
    double AH = kNaN, AV = kNaN;
    int Ms = -1, Ns = -1;
};

struct SweepRange {
    SweepVariable variable = SweepVariable::D;
    double start = 0.0, stop = 0.0;
    int steps = 1;
    bool log_spacing = false;
    std::vector<double> values;  // explicit list overrides start/stop/steps

    std::vector<double> points() const {
        if (!values.empty()) return values;
        if (steps < 1) throw ConfigError("sweep: steps must be >= 1");
        std::vector<double> out;
        for (int i = 0; i < steps; ++i) {
            const double t = steps == 1 ? 0.0 : double(i) / (steps - 1);
            out.push_back(log_spacing ? start * std::pow(stop / start, t) : start + (stop - start) * t);
        }
        return out;
    }
};

struct MethodOptions {
    int quad_order = 24;
    bool quad_convergence_check = false;
    double grid_density = 2.0;
    int patch_order = 3;
    double threshold_eps = 0.01;
    int phi_replicates = kDefaultPhiReplicates;
};

struct SweepSpec {
    std::string name = "sweep";
    Scenario scenario = Scenario::upa_dipole;
    ChannelKind channel = ChannelKind::scalar;
    Method method = Method::direct;
    SweepRange sweep;
    PointParams fixed;
    double frequency = 30e9;
    std::optional<CouplingParams> coupling;
    std::uint64_t seed = 1;
    MethodOptions options;
    std::optional<Method> compare;  // second method evaluated on the same grid
    double budget_s = 0.0;          // 0 = no budget

    WaveParams wave() const { return WaveParams::from_frequency(frequency); }
};

inline bool is_discrete(Scenario s) { return s == Scenario::upa_dipole || s == Scenario::upa_patch || s == Scenario::ula; }
inline bool is_1d(Scenario s) { return s == Scenario::ula || s == Scenario::cap1d; }

inline void check_method(Scenario s, Method m, ChannelKind ch, bool coupled) {
    auto bad = [&](const std::string& why) {
        throw ConfigError(std::string("method '") + to_string(m) + "' invalid for scenario '" + to_string(s) + "': " + why);
    };
    if (coupled && !((s == Scenario::upa_dipole || s == Scenario::ula) && m == Method::direct))
        bad("coupling needs a dipole array with method 'direct'");
    switch (s) {
        case Scenario::upa_dipole:
        case Scenario::ula:
            if (m == Method::quadrature || m == Method::grid) bad("discrete arrays use direct, threshold or closed");
            if (m == Method::closed && ch != ChannelKind::scalar) bad("closed forms exist for the scalar channel only");
            break;
        case Scenario::upa_patch:
            if (m != Method::quadrature) bad("patch arrays use quadrature");
            break;
        case Scenario::cap2d:
        case Scenario::cap1d:
            if (m == Method::direct || m == Method::threshold) bad("continuous apertures have no channel matrix");
            if (m == Method::closed && ch != ChannelKind::scalar) bad("closed forms exist for the scalar channel only");
            break;
    }
}

// Applies one sweep value to the fixed parameters.
inline PointParams apply_variable(const SweepSpec& spec, double v) {
    PointParams p = spec.fixed;
    const bool one_d = is_1d(spec.scenario);
    switch (spec.sweep.variable) {
        case SweepVariable::D: p.D = v; break;
        case SweepVariable::L:
            p.LtV = p.LrV = v;
            if (!one_d) p.LtH = p.LrH = v;
            break;
        case SweepVariable::LtV: p.LtV = v; break;
        case SweepVariable::LrV: p.LrV = v; break;
        case SweepVariable::aperture:
            if (one_d) {
                p.LtV = p.LrV = v;
            } else {
                const double s = v / std::sqrt(2.0);
                p.LtH = p.LtV = p.LrH = p.LrV = s;
            }
            break;
        case SweepVariable::M: {
            const int m = static_cast<int>(std::lround(v));
            p.MV = p.NV = m;
            p.MH = p.NH = one_d ? 1 : m;
            break;
        }
        case SweepVariable::Ms: p.Ms = p.Ns = static_cast<int>(std::lround(v)); break;
    }
    return p;
}

inline void validate(const SweepSpec& spec) {
    check_method(spec.scenario, spec.method, spec.channel, spec.coupling.has_value());
    if (spec.compare) check_method(spec.scenario, *spec.compare, spec.channel, spec.coupling.has_value());
    if (spec.sweep.points().empty()) throw ConfigError("sweep: no points");
    if (!(spec.frequency > 0.0)) throw ConfigError("frequency must be positive");
}

}  // namespace nfedof::workbench
