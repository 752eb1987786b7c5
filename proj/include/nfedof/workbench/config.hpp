#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfedof/errors.hpp"
#include "nfedof/workbench/spec.hpp"

namespace nfedof::workbench {

// JSON keys mirror SweepSpec. Lengths are in metres unless "units": "lambda".
//
//   {"name": "...", "scenario": "cap2d", "channel": "scalar", "method": "closed",
//    "frequency_hz": 3e10, "seed": 7, "units": "lambda",
//    "sweep": {"variable": "D", "start": 10, "stop": 30, "steps": 5, "spacing": "linear"},
//    "fixed": {"LtH": 10, "LtV": 10, "LrH": 10, "LrV": 10},
//    "coupling": {"ZL_re": 50, "ZL_im": 0, "eta": 376.99, "gamma0": 0.577, "dl": 0.1, "a": 1e-5},
//    "options": {"quad_order": 24, "quad_convergence_check": false, "grid_density": 2,
//                "patch_order": 3, "threshold_eps": 0.01, "phi_replicates": 8},
//    "compare": "quadrature", "budget_s": 600}

namespace detail {

using json = nlohmann::json;

inline void only_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
T get(const json& j, const char* key, const char* where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

inline bool is_length(SweepVariable v) { return v != SweepVariable::M && v != SweepVariable::Ms; }

inline SweepSpec spec_from_json(const json& j) {
    only_keys(j, "spec", {"name", "scenario", "channel", "method", "frequency_hz", "seed", "units", "sweep", "fixed",
                          "coupling", "options", "compare", "budget_s"});
    SweepSpec s;
    if (j.contains("name")) s.name = get<std::string>(j, "name", "spec");
    s.scenario = parse_scenario(get<std::string>(j, "scenario", "spec"));
    if (j.contains("channel")) {
        try {
            s.channel = parse_channel_kind(get<std::string>(j, "channel", "spec"));
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    s.method = parse_method(get<std::string>(j, "method", "spec"));
    if (j.contains("frequency_hz")) s.frequency = get<double>(j, "frequency_hz", "spec");
    if (!(s.frequency > 0.0)) throw ConfigError("spec.frequency_hz must be positive");
    if (j.contains("seed")) s.seed = get<std::uint64_t>(j, "seed", "spec");
    if (j.contains("budget_s")) s.budget_s = get<double>(j, "budget_s", "spec");
    if (j.contains("compare")) s.compare = parse_method(get<std::string>(j, "compare", "spec"));

    double unit = 1.0;
    if (j.contains("units")) {
        const auto u = get<std::string>(j, "units", "spec");
        if (u == "lambda")
            unit = s.wave().wavelength;
        else if (u != "m")
            throw ConfigError("spec.units must be 'm' or 'lambda'");
    }

    if (!j.contains("sweep")) throw ConfigError("spec: missing 'sweep'");
    const json& sw = j.at("sweep");
    only_keys(sw, "sweep", {"variable", "start", "stop", "steps", "spacing", "values"});
    s.sweep.variable = parse_variable(get<std::string>(sw, "variable", "sweep"));
    const double su = is_length(s.sweep.variable) ? unit : 1.0;
    if (sw.contains("values")) {
        for (double v : get<std::vector<double>>(sw, "values", "sweep")) s.sweep.values.push_back(v * su);
        if (s.sweep.values.empty()) throw ConfigError("sweep.values must not be empty");
    } else {
        s.sweep.start = get<double>(sw, "start", "sweep") * su;
        s.sweep.stop = sw.contains("stop") ? get<double>(sw, "stop", "sweep") * su : s.sweep.start;
        s.sweep.steps = sw.contains("steps") ? get<int>(sw, "steps", "sweep") : 1;
        if (s.sweep.steps < 1) throw ConfigError("sweep.steps must be >= 1");
    }
    if (sw.contains("spacing")) {
        const auto sp = get<std::string>(sw, "spacing", "sweep");
        if (sp == "log")
            s.sweep.log_spacing = true;
        else if (sp != "linear")
            throw ConfigError("sweep.spacing must be 'linear' or 'log'");
    }

    if (j.contains("fixed")) {
        const json& f = j.at("fixed");
        only_keys(f, "fixed", {"D", "LtH", "LtV", "LrH", "LrV", "MH", "MV", "NH", "NV", "AH", "AV", "Ms", "Ns"});
        auto len = [&](const char* k, double& out) {
            if (f.contains(k)) out = get<double>(f, k, "fixed") * unit;
        };
        auto cnt = [&](const char* k, int& out) {
            if (f.contains(k)) out = get<int>(f, k, "fixed");
        };
        auto& p = s.fixed;
        len("D", p.D);
        len("LtH", p.LtH);
        len("LtV", p.LtV);
        len("LrH", p.LrH);
        len("LrV", p.LrV);
        len("AH", p.AH);
        len("AV", p.AV);
        cnt("MH", p.MH);
        cnt("MV", p.MV);
        cnt("NH", p.NH);
        cnt("NV", p.NV);
        cnt("Ms", p.Ms);
        cnt("Ns", p.Ns);
    }

    if (j.contains("coupling")) {
        const json& c = j.at("coupling");
        only_keys(c, "coupling", {"ZL_re", "ZL_im", "eta", "gamma0", "dl", "a"});
        CouplingParams cp = CouplingParams::reference(s.wave().wavelength);
        double zr = cp.ZL.real(), zi = cp.ZL.imag();
        if (c.contains("ZL_re")) zr = get<double>(c, "ZL_re", "coupling");
        if (c.contains("ZL_im")) zi = get<double>(c, "ZL_im", "coupling");
        cp.ZL = {zr, zi};
        if (c.contains("eta")) cp.eta = get<double>(c, "eta", "coupling");
        if (c.contains("gamma0")) cp.gamma0 = get<double>(c, "gamma0", "coupling");
        if (c.contains("dl")) cp.dl = get<double>(c, "dl", "coupling") * unit;
        if (c.contains("a")) cp.a = get<double>(c, "a", "coupling") * unit;
        try {
            cp.validate();
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
        s.coupling = cp;
    }

    if (j.contains("options")) {
        const json& o = j.at("options");
        only_keys(o, "options",
                  {"quad_order", "quad_convergence_check", "grid_density", "patch_order", "threshold_eps", "phi_replicates"});
        auto& m = s.options;
        if (o.contains("quad_order")) m.quad_order = get<int>(o, "quad_order", "options");
        if (o.contains("quad_convergence_check"))
            m.quad_convergence_check = get<bool>(o, "quad_convergence_check", "options");
        if (o.contains("grid_density")) m.grid_density = get<double>(o, "grid_density", "options");
        if (o.contains("patch_order")) m.patch_order = get<int>(o, "patch_order", "options");
        if (o.contains("threshold_eps")) m.threshold_eps = get<double>(o, "threshold_eps", "options");
        if (o.contains("phi_replicates")) m.phi_replicates = get<int>(o, "phi_replicates", "options");
    }

    validate(s);
    return s;
}

}  // namespace detail

// Accepts one spec object or an array of them.
inline std::vector<SweepSpec> parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    std::vector<SweepSpec> out;
    if (j.is_array()) {
        for (const auto& e : j) out.push_back(detail::spec_from_json(e));
        if (out.empty()) throw ConfigError("config: empty spec list");
    } else {
        out.push_back(detail::spec_from_json(j));
    }
    return out;
}

inline std::vector<SweepSpec> load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace nfedof::workbench
