// io.hpp: CSV, gnuplot .dat and SVG output
//
// Numbers are written with 12 significant digits ("%.12g") so repeated runs produce
// byte-identical files. Plots are built by reading the CSVs back, never from the
// in-memory results.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "otto_kiln/analysis.hpp"
#include "otto_kiln/cycle.hpp"

namespace otto_kiln::io {

struct IoError : Error {
    using Error::Error;
};

inline std::string fmt(double v) {
    if (v == 0.0) v = 0.0; // fold -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string("undefined"); }

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

inline void close_checked(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// CSV

inline void write_timeseries_csv(const std::filesystem::path& path, const EngineTrace& trace, std::size_t p_columns) {
    auto out = open_out(path);
    const std::size_t levels = trace.timeseries.empty() ? 0 : std::min(p_columns, trace.timeseries.front().dist.size());
    out << "t,omega,U,S,stroke_label";
    for (std::size_t n = 0; n < levels; ++n) out << ",P_" << n;
    out << '\n';
    for (const auto& row : trace.timeseries) {
        out << fmt(row.time) << ',' << fmt(row.omega) << ',' << fmt(row.energy) << ',' << fmt(row.entropy) << ','
            << to_string(row.label);
        for (std::size_t n = 0; n < levels; ++n) out << ',' << fmt(row.dist[n]);
        out << '\n';
    }
    close_checked(out, path);
}

/// Every level of every sample.
inline void write_wide_csv(const std::filesystem::path& path, const EngineTrace& trace) {
    auto out = open_out(path);
    const std::size_t levels = trace.timeseries.empty() ? 0 : trace.timeseries.front().dist.size();
    out << "t";
    for (std::size_t n = 0; n < levels; ++n) out << ",P_" << n;
    out << '\n';
    for (const auto& row : trace.timeseries) {
        out << fmt(row.time);
        for (std::size_t n = 0; n < levels; ++n) out << ',' << fmt(row.dist[n]);
        out << '\n';
    }
    close_checked(out, path);
}

inline void write_cycles_csv(const std::filesystem::path& path, const EngineTrace& trace) {
    auto out = open_out(path);
    out << "cycle,q_in,q_out,w_out,w_in,w_eff,q_pump,pump_energy,efficiency,efficiency_qpump,power,"
           "U_A,U_B,U_C,U_D,U_A_next,S_A,S_B,S_C,S_D,cyclostationarity,first_law_residual\n";
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const CycleRecord& r = trace.records[i];
        const OscillatorSpec hot(r.omega_h), cold(r.omega_c);
        out << r.cycle_index << ',' << fmt(r.q_in) << ',' << fmt(r.q_out) << ',' << fmt(r.w_out) << ','
            << fmt(r.w_in) << ',' << fmt(r.w_eff) << ',' << fmt(r.q_pump) << ',' << fmt(r.pump_energy) << ','
            << fmt(cycle_efficiency(r)) << ',' << fmt(pump_deposit_efficiency(r)) << ',' << fmt(cycle_power(r))
            << ',' << fmt(internal_energy(r.a, hot)) << ',' << fmt(internal_energy(r.b, hot)) << ','
            << fmt(internal_energy(r.c, cold)) << ',' << fmt(internal_energy(r.d, cold)) << ','
            << fmt(internal_energy(r.a_next, hot)) << ',' << fmt(entropy(r.a)) << ',' << fmt(entropy(r.b)) << ','
            << fmt(entropy(r.c)) << ',' << fmt(entropy(r.d)) << ',' << fmt(trace.cyclostationarity[i]) << ','
            << fmt(r.first_law_residual()) << '\n';
    }
    close_checked(out, path);
}

inline void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& points) {
    auto out = open_out(path);
    out << "T_h,ratio,efficiency,power,converged,cycles\n";
    for (const auto& p : points)
        out << fmt(p.t_h) << ',' << fmt(p.ratio) << ',' << fmt(p.efficiency) << ',' << fmt(p.power) << ','
            << (p.converged ? "true" : "false") << ',' << p.cycles << '\n';
    close_checked(out, path);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw IoError("missing CSV column " + std::string(name));
    }

    /// Numeric column; cells that are not numbers ("undefined") become NaN.
    std::vector<double> numbers(std::string_view name) const {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) {
            char* end = nullptr;
            const double v = std::strtod(r.at(c).c_str(), &end);
            out.push_back(end != r[c].c_str() && *end == '\0' ? v : std::numeric_limits<double>::quiet_NaN());
        }
        return out;
    }
};

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    CsvTable table;
    std::string line;
    if (std::getline(in, line)) table.header = split(line);
    while (std::getline(in, line))
        if (!line.empty()) table.rows.push_back(split(line));
    return table;
}

// ---------------------------------------------------------------------------
// gnuplot data

inline void write_dat(const std::filesystem::path& path, std::string_view comment,
                      const std::vector<std::vector<std::pair<double, double>>>& blocks) {
    auto out = open_out(path);
    out << "# " << comment << '\n';
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (b > 0) out << "\n\n";
        for (const auto& [x, y] : blocks[b]) out << fmt(x) << ' ' << fmt(y) << '\n';
    }
    close_checked(out, path);
}

// ---------------------------------------------------------------------------
// SVG

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

class LineChart {
public:
    LineChart(std::string title, std::string x_label, std::string y_label)
        : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

    void add(Series s) { series_.push_back(std::move(s)); }

    /// Horizontal reference line (e.g. a thermodynamic limit).
    void add_reference(std::string name, double y) { refs_.push_back({std::move(name), y}); }

    std::string render() const {
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        for (const auto& s : series_)
            for (const auto& [x, y] : s.points) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                x0 = std::min(x0, x), x1 = std::max(x1, x);
                y0 = std::min(y0, y), y1 = std::max(y1, y);
            }
        for (const auto& r : refs_) y0 = std::min(y0, r.second), y1 = std::max(y1, r.second);
        if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        if (x1 <= x0) x1 = x0 + 1;
        if (y1 <= y0) y1 = y0 + 1;
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad, y1 += pad;

        constexpr double W = 720, H = 440, L = 80, R = 160, T = 40, B = 60;
        auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
        auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

        static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
        std::ostringstream svg;
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
            << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title_
            << "</text>\n"
            << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
            << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 5; ++i) {
            const double fx = x0 + (x1 - x0) * i / 5.0, fy = y0 + (y1 - y0) * i / 5.0;
            svg << "<text x=\"" << sx(fx) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << tick(fx)
                << "</text>\n"
                << "<text x=\"" << L - 6 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">" << tick(fy)
                << "</text>\n";
        }
        svg << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label_
            << "</text>\n"
            << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
            << (T + H - B) / 2 << ")\">" << y_label_ << "</text>\n";

        std::size_t legend = 0;
        for (const auto& [name, y] : refs_) {
            svg << "<line x1=\"" << L << "\" y1=\"" << sy(y) << "\" x2=\"" << W - R << "\" y2=\"" << sy(y)
                << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
            svg << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (legend++ + 1) << "\" fill=\"gray\">- - "
                << name << "</text>\n";
        }
        for (std::size_t i = 0; i < series_.size(); ++i) {
            const char* color = palette[i % std::size(palette)];
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : series_[i].points)
                if (std::isfinite(x) && std::isfinite(y)) svg << sx(x) << ',' << sy(y) << ' ';
            svg << "\"/>\n";
            svg << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (legend++ + 1) << "\" fill=\"" << color
                << "\">" << series_[i].name << "</text>\n";
        }
        svg << "</svg>\n";
        return svg.str();
    }

    void write(const std::filesystem::path& path) const {
        auto out = open_out(path);
        out << render();
        close_checked(out, path);
    }

private:
    static std::string tick(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }

    std::string title_, x_label_, y_label_;
    std::vector<Series> series_;
    std::vector<std::pair<std::string, double>> refs_;
};

inline std::vector<std::pair<double, double>> zip(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) out.emplace_back(x[i], y[i]);
    return out;
}

/// energy.svg / efficiency.svg and their .dat twins, from timeseries.csv and cycles.csv in `dir`.
inline void plot_engine(const std::filesystem::path& dir, double eta_limit) {
    const CsvTable ts = read_csv(dir / "timeseries.csv");
    const auto energy = zip(ts.numbers("t"), ts.numbers("U"));
    LineChart u("Internal energy", "t [2pi/omega_c]", "U [hbar omega_c]");
    u.add({"U(t)", energy});
    u.write(dir / "energy.svg");
    write_dat(dir / "energy.dat", "t U", {energy});

    const CsvTable cyc = read_csv(dir / "cycles.csv");
    const auto eta = zip(cyc.numbers("cycle"), cyc.numbers("efficiency"));
    LineChart e("Efficiency per cycle", "cycle N", "efficiency");
    e.add({"eta(N)", eta});
    e.add_reference("Otto limit", eta_limit);
    e.write(dir / "efficiency.svg");
    write_dat(dir / "efficiency.dat", "cycle efficiency", {eta});
}

/// sweep.svg (power against efficiency, one curve per T_h) and sweep.dat, from sweep.csv.
inline void plot_sweep(const std::filesystem::path& dir, double t_c) {
    const CsvTable sw = read_csv(dir / "sweep.csv");
    const auto th = sw.numbers("T_h");
    const auto eff = sw.numbers("efficiency");
    const auto pow = sw.numbers("power");
    std::vector<double> order;
    std::map<double, Series> by_th;
    for (std::size_t i = 0; i < th.size(); ++i) {
        if (!by_th.count(th[i])) {
            order.push_back(th[i]);
            by_th[th[i]].name = "T_h = " + fmt(th[i]) + " (Carnot " + fmt(1.0 - t_c / th[i]) + ")";
        }
        by_th[th[i]].points.emplace_back(eff[i], pow[i]);
    }
    LineChart chart("Power versus efficiency", "efficiency", "power");
    std::vector<std::vector<std::pair<double, double>>> blocks;
    for (double t : order) {
        blocks.push_back(by_th[t].points);
        chart.add(by_th[t]);
    }
    chart.write(dir / "sweep.svg");
    write_dat(dir / "sweep.dat", "efficiency power (one block per T_h, in sweep.csv order)", blocks);
}

} // namespace otto_kiln::io
