// nfedof command line: edof, sweep, figure, coupling, capacity.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "nfedof.hpp"

using namespace nfedof;
using namespace nfedof::workbench;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct Globals {
    std::optional<std::uint64_t> seed;
    int threads = 1;
    std::string out;
    bool timing = false;

    int thread_count() const {
        if (const char* env = std::getenv("NFEDOF_THREADS")) {
            try {
                const int t = std::stoi(env);
                if (t >= 1) return t;
            } catch (const std::exception&) {
            }
            throw ConfigError(std::string("NFEDOF_THREADS must be a positive integer, got '") + env + "'");
        }
        return std::max(1, threads);
    }
};

struct PointFlags {
    std::string scenario = "upa-dipole", channel = "scalar", method = "direct", units = "m";
    double freq = 30e9;
    double D = NAN, L = NAN, LtH = NAN, LtV = NAN, LrH = NAN, LrV = NAN, A = NAN;
    int M = -1, MH = -1, MV = -1, NH = -1, NV = -1, Ms = -1;
    MethodOptions opt;
    std::string dump_channel;
};

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot open '" + p.string() + "' for writing");
    return os;
}

// writes <dir>/<name>.csv and, when a second method ran, <dir>/<name>_compare.csv
void write_result(const SweepSpec& s, const SweepResult& r, const fs::path& dir, const CsvOptions& opt) {
    emit_csv(r.rows, (dir / (s.name + ".csv")).string(), opt);
    if (s.compare) {
        emit_csv(r.compare_rows, (dir / (s.name + "_" + to_string(*s.compare) + ".csv")).string(), opt);
        auto os = open_out(dir / (s.name + "_compare.csv"));
        write_comparison_csv(os, s, r);
        if (!os) throw IoError("write failed for '" + (dir / (s.name + "_compare.csv")).string() + "'");
    }
}

void run_specs(std::vector<SweepSpec> specs, const Globals& g) {
    const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    const int t = g.thread_count();
    for (auto& s : specs) {
        if (g.seed) s.seed = *g.seed;
        const auto r = run_sweep(s, t);
        write_result(s, r, dir, {g.timing});
        int failed = 0, slow = 0;
        for (const auto& row : r.rows) failed += !row.error.empty(), slow += row.over_budget;
        std::fprintf(stderr, "%s: %zu points, %d failed, %d over budget -> %s\n", s.name.c_str(), r.rows.size(), failed,
                     slow, (dir / (s.name + ".csv")).string().c_str());
    }
}

SweepSpec point_spec(const PointFlags& f) {
    SweepSpec s;
    s.name = "point";
    s.scenario = parse_scenario(f.scenario);
    try {
        s.channel = parse_channel_kind(f.channel);
    } catch (const ArgumentError& e) {
        throw ConfigError(e.what());
    }
    s.method = parse_method(f.method);
    s.frequency = f.freq;
    s.options = f.opt;
    double unit = 1.0;
    if (f.units == "lambda")
        unit = s.wave().wavelength;
    else if (f.units != "m")
        throw ConfigError("--units must be 'm' or 'lambda'");
    auto len = [&](double specific, double common) {
        const double v = std::isfinite(specific) ? specific : common;
        return v * unit;
    };
    auto& p = s.fixed;
    p.LtH = len(f.LtH, f.L), p.LtV = len(f.LtV, f.L), p.LrH = len(f.LrH, f.L), p.LrV = len(f.LrV, f.L);
    p.AH = p.AV = f.A * unit;
    const bool one_d = is_1d(s.scenario);
    auto cnt = [&](int specific, int common, bool h) { return specific > 0 ? specific : (h && one_d ? 1 : common); };
    p.MH = cnt(f.MH, f.M, true), p.MV = cnt(f.MV, f.M, false), p.NH = cnt(f.NH, f.M, true), p.NV = cnt(f.NV, f.M, false);
    p.Ms = p.Ns = f.Ms;
    if (!std::isfinite(f.D)) throw ConfigError("--D is required");
    s.sweep = {SweepVariable::D, 0, 0, 1, false, {f.D * unit}};
    validate(s);
    return s;
}

void cmd_edof(const PointFlags& f, const Globals& g) {
    auto s = point_spec(f);
    if (g.seed) s.seed = *g.seed;
    const auto p = apply_variable(s, s.sweep.values[0]);
    SweepRow row;
    row.scenario = to_string(s.scenario);
    row.channel = to_string(s.channel);
    row.method = to_string(s.method);
    row.p = effective_params(s, s.method, p);
    row.seed = s.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto v = evaluate_point(s, s.method, row.p, point_seed(s.seed, 0));  // errors propagate to exit codes
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.edof = v.edof;
    row.alpha = v.alpha;
    if (!f.dump_channel.empty()) {
        const WaveParams w = s.wave();
        ComplexMatrix H;
        if (s.scenario == Scenario::upa_dipole)
            H = assemble(Link<UpaGeometry>({p.MH, p.MV, p.LtH, p.LtV}, {p.NH, p.NV, p.LrH, p.LrV}, p.D, w), s.channel);
        else if (s.scenario == Scenario::ula)
            H = assemble(Link<UlaGeometry>({p.MV, p.LtV}, {p.NV, p.LrV}, p.D, w), s.channel);
        else
            throw ConfigError("--dump-channel needs a discrete dipole array");
        write_nfcm(f.dump_channel, H);
    }
    if (g.out.empty())
        write_csv(std::cout, {row}, {g.timing});
    else
        emit_csv({row}, g.out, {g.timing});
}

struct CouplingFlags {
    std::string geometry = "upa";
    int M = 4;
    double L = 2.0, freq = 30e9, ZL_re = 50, ZL_im = 0;
    std::string units = "lambda", load;
};

void cmd_coupling(const CouplingFlags& f, const Globals& g) {
    const WaveParams w = WaveParams::from_frequency(f.freq);
    const double unit = f.units == "lambda" ? w.wavelength : 1.0;
    if (f.units != "lambda" && f.units != "m") throw ConfigError("--units must be 'm' or 'lambda'");
    auto p = CouplingParams::reference(w.wavelength);
    p.ZL = {f.ZL_re, f.ZL_im};
    ImpedanceMatrix Zc;
    if (!f.load.empty()) {
        Zc = read_impedance(f.load);
    } else if (f.geometry == "upa") {
        Zc = mutual_impedance_matrix(UpaGeometry::square(f.M, f.L * unit), p, w.wavenumber);
    } else if (f.geometry == "ula") {
        Zc = mutual_impedance_matrix(UlaGeometry{f.M, f.L * unit}, p, w.wavenumber);
    } else {
        throw ConfigError("--geometry must be 'upa' or 'ula'");
    }
    const cplx ZA = self_impedance(p, w.wavenumber);
    const auto C = coupling_matrix(Zc.Z, ZA, p.ZL);
    std::printf("self impedance Z_A = %.6g %+.6gj ohm\n", ZA.real(), ZA.imag());
    std::printf("elements %ld, condition estimate %.3e, max |Z - I| = %.4e\n", long(Zc.size()), C.condition,
                (C.Z - ComplexMatrix::Identity(Zc.size(), Zc.size())).cwiseAbs().maxCoeff());
    if (!g.out.empty()) {
        write_impedance(g.out, Zc);
        std::printf("mutual impedance matrix written to %s\n", g.out.c_str());
    }
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const IoError*>(&e)) return kIo;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ArgumentError*>(&e)) return kConfig;
    return kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-field EDoF workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "override the spec seed");
    app.add_option("--threads", g.threads, "worker threads (NFEDOF_THREADS overrides)")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output file (edof, coupling) or directory (sweep, figure)");
    app.add_flag("--timing", g.timing, "fill the runtime_s column (breaks byte-identical reruns)");

    PointFlags pf;
    auto* edof = app.add_subcommand("edof", "evaluate a single point and print one CSV row");
    edof->add_option("--scenario", pf.scenario, "upa-dipole | upa-patch | ula | cap2d | cap1d");
    edof->add_option("--channel", pf.channel, "scalar | dyadic1 | dyadic2 | dyadic3");
    edof->add_option("--method", pf.method, "direct | closed | quadrature | grid | threshold");
    edof->add_option("--units", pf.units, "m | lambda");
    edof->add_option("--freq", pf.freq, "carrier frequency, Hz");
    edof->add_option("--D", pf.D, "link distance")->required();
    edof->add_option("--L", pf.L, "side length for every aperture dimension");
    edof->add_option("--LtH", pf.LtH);
    edof->add_option("--LtV", pf.LtV);
    edof->add_option("--LrH", pf.LrH);
    edof->add_option("--LrV", pf.LrV);
    edof->add_option("--A", pf.A, "patch element side");
    edof->add_option("--M", pf.M, "antenna count per axis on both sides");
    edof->add_option("--MH", pf.MH);
    edof->add_option("--MV", pf.MV);
    edof->add_option("--NH", pf.NH);
    edof->add_option("--NV", pf.NV);
    edof->add_option("--Ms", pf.Ms, "phi samples per side (closed forms)");
    edof->add_option("--density", pf.opt.grid_density, "grid method: samples per wavelength");
    edof->add_option("--order", pf.opt.quad_order, "quadrature method: Gauss-Legendre order per axis");
    edof->add_option("--patch-order", pf.opt.patch_order, "patch method: order per element axis");
    edof->add_option("--eps", pf.opt.threshold_eps, "threshold method: accuracy level");
    edof->add_option("--dump-channel", pf.dump_channel, "write the channel matrix as NFCM");

    std::string config;
    auto* sweep = app.add_subcommand("sweep", "run every spec in a JSON config");
    sweep->add_option("config", config, "config file")->required();

    std::string figure_name;
    auto* figure = app.add_subcommand("figure", "run a figure preset");
    figure->add_option("name", figure_name, "fig1 | fig3 | fig4 | fig5 | fig8 | fig10 | fig11")->required();

    CouplingFlags cf;
    auto* coupling = app.add_subcommand("coupling", "mutual impedance and coupling matrix summary");
    coupling->add_option("--geometry", cf.geometry, "upa | ula");
    coupling->add_option("--M", cf.M, "antennas per axis")->check(CLI::PositiveNumber);
    coupling->add_option("--L", cf.L, "array side");
    coupling->add_option("--units", cf.units, "m | lambda");
    coupling->add_option("--freq", cf.freq, "carrier frequency, Hz");
    coupling->add_option("--ZL-re", cf.ZL_re);
    coupling->add_option("--ZL-im", cf.ZL_im);
    coupling->add_option("--load", cf.load, "read Z_C from an NFZC file instead");

    CapacityInputs ci;
    auto* cap = app.add_subcommand("capacity", "C = EDoF log2(1 + alpha P / (EDoF^2 N0))");
    cap->add_option("--edof", ci.edof)->required();
    cap->add_option("--alpha", ci.alpha)->required();
    cap->add_option("--P", ci.P)->required();
    cap->add_option("--N0", ci.N0)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }
    if (*seed_opt) g.seed = seed;

    try {
        if (*edof)
            cmd_edof(pf, g);
        else if (*sweep)
            run_specs(load_config(config), g);
        else if (*figure)
            run_specs(figure_preset(figure_name), g);
        else if (*coupling)
            cmd_coupling(cf, g);
        else if (*cap)
            std::printf("%.10g\n", capacity(ci));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "nfedof: %s\n", e.what());
        return exit_code(e);
    }
    return kOk;
}
