#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nfedof/errors.hpp"
#include "nfedof/workbench/sweep.hpp"

namespace nfedof::workbench {

inline const char* kCsvHeader =
    "scenario,channel,method,D_m,LtH_m,LtV_m,LrH_m,LrV_m,MH,MV,NH,NV,AH_m,AV_m,Ms,Ns,seed,edof,alpha,runtime_s,error";

struct CsvOptions {
    bool include_runtime = false;  // wall time breaks byte-identical reruns
};

inline std::string format_real(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.8e", v);
    return buf;
}

inline std::string format_count(int v) { return v < 0 ? "" : std::to_string(v); }

inline std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + "\"";
}

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, const CsvOptions& opt = {}) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        const auto& p = r.p;
        os << r.scenario << ',' << r.channel << ',' << r.method << ',' << format_real(p.D) << ','
           << format_real(p.LtH) << ',' << format_real(p.LtV) << ',' << format_real(p.LrH) << ','
           << format_real(p.LrV) << ',' << format_count(p.MH) << ',' << format_count(p.MV) << ','
           << format_count(p.NH) << ',' << format_count(p.NV) << ',' << format_real(p.AH) << ','
           << format_real(p.AV) << ',' << format_count(p.Ms) << ',' << format_count(p.Ns) << ',' << r.seed << ','
           << format_real(r.edof) << ',' << format_real(r.alpha) << ','
           << (opt.include_runtime ? format_real(r.runtime_s) : std::string()) << ',' << quote_field(r.error)
           << '\n';
    }
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::string& path, const CsvOptions& opt = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_csv(os, rows, opt);
    os.flush();
    if (!os) throw IoError("write failed for '" + path + "'");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<SweepRow> parse_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) throw IoError("CSV: unexpected header");
    auto real = [](const std::string& s) { return s.empty() ? kNaN : std::stod(s); };
    auto count = [](const std::string& s) { return s.empty() ? -1 : std::stoi(s); };
    std::vector<SweepRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 21) throw IoError("CSV: expected 21 fields, got " + std::to_string(f.size()));
        SweepRow r;
        r.scenario = f[0];
        r.channel = f[1];
        r.method = f[2];
        r.p.D = real(f[3]);
        r.p.LtH = real(f[4]);
        r.p.LtV = real(f[5]);
        r.p.LrH = real(f[6]);
        r.p.LrV = real(f[7]);
        r.p.MH = count(f[8]);
        r.p.MV = count(f[9]);
        r.p.NH = count(f[10]);
        r.p.NV = count(f[11]);
        r.p.AH = real(f[12]);
        r.p.AV = real(f[13]);
        r.p.Ms = count(f[14]);
        r.p.Ns = count(f[15]);
        r.seed = std::stoull(f[16]);
        r.edof = real(f[17]);
        r.alpha = real(f[18]);
        r.runtime_s = real(f[19]);
        r.error = f[20];
        rows.push_back(r);
    }
    return rows;
}

inline const char* kComparisonHeader = "index,variable,value,method_a,edof_a,method_b,edof_b,rel_diff";

inline void write_comparison_csv(std::ostream& os, const SweepSpec& spec, const SweepResult& res) {
    os << kComparisonHeader << '\n';
    for (const auto& c : res.comparison)
        os << c.index << ',' << to_string(spec.sweep.variable) << ',' << format_real(c.value) << ','
           << to_string(spec.method) << ',' << format_real(c.edof_a) << ','
           << (spec.compare ? to_string(*spec.compare) : "") << ',' << format_real(c.edof_b) << ','
           << format_real(c.rel_diff) << '\n';
}

inline std::string to_csv_string(const std::vector<SweepRow>& rows, const CsvOptions& opt = {}) {
    std::ostringstream os;
    write_csv(os, rows, opt);
    return os.str();
}

}  // namespace nfedof::workbench
