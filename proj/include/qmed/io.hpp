#pragma once

// File formats: CSV point ingestion, CSV/SVG emission for the median curve
// and the quadrant-count scan, and the structured report document printed by
// the simulate command.
//
// Every artifact embeds a run manifest (command echo, version, seed,
// config). Artifacts are deterministic: numbers are printed with fixed
// formats and nothing time- or host-dependent is written, so re-running a
// command with the same flags reproduces files byte for byte.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmed/common.hpp"
#include "qmed/montecarlo.hpp"
#include "qmed/solver.hpp"

namespace qmed {

struct csv_error : invalid_input {
    using invalid_input::invalid_input;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Shortest round-trip decimal for doubles; %.17g always reads back to the
// same bits.
inline std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view field, double& out) {
    const std::string tmp(trim(field));
    if (tmp.empty()) return false;
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size() && std::isfinite(out);
}

}  // namespace detail

// Parse "x,y" rows. Blank lines and '#' comment lines are skipped; one
// non-numeric header row is tolerated before the data. Any other
// malformed row is reported with its 1-based line number.
inline std::vector<Vec2> read_points_csv(std::istream& in) {
    std::vector<Vec2> pts;
    std::string line;
    std::size_t lineno = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = detail::trim(line);
        if (row.empty() || row.front() == '#') continue;
        const std::size_t comma = row.find(',');
        double x, y;
        const bool ok = comma != std::string_view::npos &&
                        row.find(',', comma + 1) == std::string_view::npos &&
                        detail::parse_double(row.substr(0, comma), x) &&
                        detail::parse_double(row.substr(comma + 1), y);
        if (!ok) {
            if (header_allowed && pts.empty()) {
                header_allowed = false;
                continue;
            }
            throw csv_error("line " + std::to_string(lineno) +
                            ": expected two finite numbers separated by a comma, got \"" +
                            std::string(row) + "\"");
        }
        header_allowed = false;
        pts.push_back({x, y});
    }
    if (pts.empty()) throw csv_error("no data rows");
    return pts;
}

inline std::vector<Vec2> read_points_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    try {
        return read_points_csv(in);
    } catch (const csv_error& e) {
        throw csv_error(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Run manifest

struct RunManifest {
    std::string command;                 // the invocation being reproduced
    std::string version{kVersion};
    std::vector<std::pair<std::string, std::string>> config;  // ordered key/value

    void add(std::string key, std::string value) {
        config.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, double value) {
        config.emplace_back(std::move(key), detail::fmt_g17(value));
    }
    void add(std::string key, std::uint64_t value) {
        config.emplace_back(std::move(key), std::to_string(value));
    }
};

namespace detail {

inline std::vector<std::string> manifest_lines(const RunManifest& m) {
    std::vector<std::string> out;
    out.push_back("command: " + m.command);
    out.push_back("version: " + m.version);
    for (const auto& [k, v] : m.config) out.push_back(k + ": " + v);
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw io_error("write failed for " + path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CSV writers

inline std::string points_csv(const std::vector<Vec2>& pts, const RunManifest& m) {
    std::string s;
    for (const std::string& l : detail::manifest_lines(m)) s += "# " + l + "\n";
    s += "x,y\n";
    for (const Vec2& p : pts)
        s += detail::fmt_g17(p.x) + "," + detail::fmt_g17(p.y) + "\n";
    return s;
}

inline std::string curve_csv(const std::vector<CurvePoint>& curve, const RunManifest& m) {
    std::string s;
    for (const std::string& l : detail::manifest_lines(m)) s += "# " + l + "\n";
    s += "alpha,x,y,valid\n";
    for (const CurvePoint& c : curve)
        s += detail::fmt_g17(c.alpha) + "," + detail::fmt_g17(c.theta.x) + "," +
             detail::fmt_g17(c.theta.y) + "," + (c.valid ? "1" : "0") + "\n";
    return s;
}

inline std::string scan_csv(const std::vector<ScanPoint>& scan, const RunManifest& m) {
    std::string s;
    for (const std::string& l : detail::manifest_lines(m)) s += "# " + l + "\n";
    s += "alpha,count\n";
    for (const ScanPoint& p : scan)
        s += detail::fmt_g17(p.alpha) + "," + detail::fmt_g17(p.count) + "\n";
    return s;
}

// ---------------------------------------------------------------------------
// SVG writers

namespace detail {

constexpr double kSvgSize = 640.0;
constexpr double kSvgPad = 48.0;

struct SvgMap {
    double xlo, xhi, ylo, yhi;
    double sx, sy;

    SvgMap(double x0, double x1, double y0, double y1) {
        // Never let a degenerate range collapse the scale.
        const double dx = x1 - x0, dy = y1 - y0;
        const double padx = dx > 0 ? 0.05 * dx : 1.0;
        const double pady = dy > 0 ? 0.05 * dy : 1.0;
        xlo = x0 - padx;
        xhi = x1 + padx;
        ylo = y0 - pady;
        yhi = y1 + pady;
        sx = (kSvgSize - 2 * kSvgPad) / (xhi - xlo);
        sy = (kSvgSize - 2 * kSvgPad) / (yhi - ylo);
    }
    double px(double x) const { return kSvgPad + (x - xlo) * sx; }
    // SVG y grows downward.
    double py(double y) const { return kSvgSize - kSvgPad - (y - ylo) * sy; }
    std::string at(Vec2 p) const {
        return fmt_fixed(px(p.x), 2) + " " + fmt_fixed(py(p.y), 2);
    }
};

inline std::string xml_escape(const std::string& in) {
    std::string out;
    out.reserve(in.size());
    for (char c : in) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

// The manifest goes into a <desc> element; a comment would choke on the
// "--" of long option names.
inline std::string svg_header(const RunManifest& m) {
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
         "viewBox=\"0 0 640 640\">\n";
    s += "<desc>\n";
    for (const std::string& l : manifest_lines(m)) s += xml_escape(l) + "\n";
    s += "</desc>\n";
    return s;
}

}  // namespace detail

// Median curve plot: the data points plus the curve Psi(alpha), with the
// stretches that validate as quarter medians drawn solid and the rest
// dashed. Consecutive grid points of equal validity share one path.
inline std::string curve_svg(const std::vector<CurvePoint>& curve,
                             const std::vector<Vec2>& pts, const RunManifest& m) {
    double x0 = curve[0].theta.x, x1 = x0, y0 = curve[0].theta.y, y1 = y0;
    auto grow = [&](Vec2 p) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    };
    for (const CurvePoint& c : curve) grow(c.theta);
    for (const Vec2& p : pts) grow(p);
    const detail::SvgMap map(x0, x1, y0, y1);

    std::string s = detail::svg_header(m);
    s += "<style>.valid{fill:none;stroke:#1a7a2e;stroke-width:2}"
         ".invalid{fill:none;stroke:#c0392b;stroke-width:1.5;stroke-dasharray:4 3}"
         ".pt{fill:#55606a}</style>\n";
    for (const Vec2& p : pts)
        s += "<circle class=\"pt\" cx=\"" + detail::fmt_fixed(map.px(p.x), 2) +
             "\" cy=\"" + detail::fmt_fixed(map.py(p.y), 2) + "\" r=\"2.5\"/>\n";
    std::size_t i = 0;
    while (i < curve.size()) {
        const bool v = curve[i].valid;
        std::string d = "M " + map.at(curve[i].theta);
        std::size_t j = i + 1;
        while (j < curve.size() && curve[j].valid == v) {
            d += " L " + map.at(curve[j].theta);
            ++j;
        }
        if (j < curve.size()) d += " L " + map.at(curve[j].theta);  // bridge into next run
        if (j - i > 0)
            s += std::string("<path class=\"") + (v ? "valid" : "invalid") + "\" d=\"" + d +
                 "\"/>\n";
        i = j;
    }
    s += "</svg>\n";
    return s;
}

// Quadrant-count scan: step plot of the open upper-right quadrant count per
// grid angle, with a horizontal reference line at n/4.
inline std::string scan_svg(const std::vector<ScanPoint>& scan, double reference,
                            const RunManifest& m) {
    double c0 = scan[0].count, c1 = c0;
    for (const ScanPoint& p : scan) {
        c0 = std::min(c0, p.count);
        c1 = std::max(c1, p.count);
    }
    c0 = std::min(c0, reference);
    c1 = std::max(c1, reference);
    const detail::SvgMap map(0.0, kPi / 2, c0, c1);

    std::string s = detail::svg_header(m);
    s += "<style>.step{fill:none;stroke:#1f4e8c;stroke-width:2}"
         ".ref{stroke:#c0392b;stroke-width:1;stroke-dasharray:6 4}</style>\n";
    s += "<line class=\"ref\" x1=\"" + detail::fmt_fixed(map.px(0.0), 2) + "\" y1=\"" +
         detail::fmt_fixed(map.py(reference), 2) + "\" x2=\"" +
         detail::fmt_fixed(map.px(kPi / 2), 2) + "\" y2=\"" +
         detail::fmt_fixed(map.py(reference), 2) + "\"/>\n";
    std::string d;
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const double next_a = i + 1 < scan.size() ? scan[i + 1].alpha : kPi / 2;
        if (i == 0)
            d += "M " + detail::fmt_fixed(map.px(scan[i].alpha), 2) + " " +
                 detail::fmt_fixed(map.py(scan[i].count), 2);
        else
            d += " V " + detail::fmt_fixed(map.py(scan[i].count), 2);
        d += " H " + detail::fmt_fixed(map.px(next_a), 2);
    }
    s += "<path class=\"step\" d=\"" + d + "\"/>\n";
    s += "</svg>\n";
    return s;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    detail::write_file(path, content);
}

// ---------------------------------------------------------------------------
// Simulation report document

// Self-describing structured text: a versioned header, the manifest, one
// block per estimator, and the theoretical limits. Numbers use %.17g so the
// document carries full precision; the human-readable table is separate.
inline std::string report_document(const ExperimentReport& rep,
                                   const std::vector<LimitEntry>& limits,
                                   const RunManifest& m) {
    std::string s = "qmed-report/1\n";
    s += "manifest:\n";
    for (const std::string& l : detail::manifest_lines(m)) s += "  " + l + "\n";
    s += "experiment:\n";
    s += "  n: " + std::to_string(rep.n) + "\n";
    s += "  reps: " + std::to_string(rep.reps) + "\n";
    s += "  master_seed: " + std::to_string(rep.master_seed) + "\n";
    for (const EstimatorStats& st : rep.stats) {
        s += std::string("estimator: ") + estimator_name(st.id) + "\n";
        s += "  m_hat: " + detail::fmt_g17(st.m_hat.x) + " " + detail::fmt_g17(st.m_hat.y) +
             "\n";
        s += "  cov: " + detail::fmt_g17(st.cov.a11) + " " + detail::fmt_g17(st.cov.a12) +
             " " + detail::fmt_g17(st.cov.a22) + "\n";
        s += "  l_hat: " + detail::fmt_g17(st.l_hat[0]) + " " + detail::fmt_g17(st.l_hat[1]) +
             "\n";
        s += "  l_band95: " + detail::fmt_g17(st.l_lo[0]) + " " + detail::fmt_g17(st.l_hi[0]) +
             " " + detail::fmt_g17(st.l_lo[1]) + " " + detail::fmt_g17(st.l_hi[1]) + "\n";
        s += "  l_band99: " + detail::fmt_g17(st.l_lo99[0]) + " " + detail::fmt_g17(st.l_hi99[0]) +
             " " + detail::fmt_g17(st.l_lo99[1]) + " " + detail::fmt_g17(st.l_hi99[1]) + "\n";
        s += "  excluded: " + std::to_string(st.excluded) + "\n";
        if (st.angle) {
            s += "  angle_mean_dev: " + detail::fmt_g17(st.angle->mean_dev) + "\n";
            s += "  angle_n_var: " + detail::fmt_g17(st.angle->n_var) + "\n";
            s += "  angle_corr: " + detail::fmt_g17(st.angle->corr_x) + " " +
                 detail::fmt_g17(st.angle->corr_y) + "\n";
        }
    }
    s += "theoretical:\n";
    for (const LimitEntry& e : limits) {
        s += std::string("  ") + estimator_name(e.id) + ": ";
        if (e.eigenvalues)
            s += detail::fmt_g17((*e.eigenvalues)[0]) + " " + detail::fmt_g17((*e.eigenvalues)[1]);
        else
            s += "unavailable (" + e.note + ")";
        s += "\n";
    }
    return s;
}

// Aligned human-readable summary of the same content.
inline std::string report_table(const ExperimentReport& rep,
                                const std::vector<LimitEntry>& limits) {
    auto limit_for = [&](Estimator id) -> const LimitEntry* {
        for (const LimitEntry& e : limits)
            if (e.id == id) return &e;
        return nullptr;
    };
    char buf[256];
    std::string s;
    std::snprintf(buf, sizeof buf, "%-6s %12s %12s %12s %12s %9s\n", "est", "l1_hat",
                  "l2_hat", "l1_theory", "l2_theory", "excluded");
    s += buf;
    for (const EstimatorStats& st : rep.stats) {
        const LimitEntry* le = limit_for(st.id);
        std::string t1 = "-", t2 = "-";
        if (le && le->eigenvalues) {
            t1 = detail::fmt_fixed((*le->eigenvalues)[0], 6);
            t2 = detail::fmt_fixed((*le->eigenvalues)[1], 6);
        }
        std::snprintf(buf, sizeof buf, "%-6s %12.6f %12.6f %12s %12s %9zu\n",
                      estimator_name(st.id), st.l_hat[0], st.l_hat[1], t1.c_str(), t2.c_str(),
                      st.excluded);
        s += buf;
        if (st.angle) {
            std::snprintf(buf, sizeof buf,
                          "       angle: n_var %.6f  corr(theta_x, theta_y) %+.4f %+.4f\n",
                          st.angle->n_var, st.angle->corr_x, st.angle->corr_y);
            s += buf;
        }
    }
    return s;
}

}  // namespace qmed
