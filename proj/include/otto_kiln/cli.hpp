// cli.hpp: command-line front end
//
//   otto_kiln simulate|pump|sweep|verify [--config <path>] [--out <dir>] [--svg]
//
// The subcommand selects the mode; the config file supplies every other parameter.

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otto_kiln/analysis.hpp"
#include "otto_kiln/config.hpp"
#include "otto_kiln/cycle.hpp"
#include "otto_kiln/io.hpp"
#include "otto_kiln/verify.hpp"

namespace otto_kiln::cli {

inline EngineConfig load_config(const std::string& path) {
    if (path.empty()) return parse_config("");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io::IoError("cannot read config " + path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

inline int run_engine_command(EngineConfig cfg, const std::filesystem::path& out_dir, std::ostream& out,
                              std::ostream& err) {
    const EngineTrace trace = run_engine(cfg);
    std::filesystem::create_directories(out_dir);
    io::write_timeseries_csv(out_dir / "timeseries.csv", trace, cfg.output.p_columns);
    io::write_cycles_csv(out_dir / "cycles.csv", trace);
    if (cfg.output.wide_csv) io::write_wide_csv(out_dir / "timeseries_wide.csv", trace);
    if (cfg.output.svg) io::plot_engine(out_dir, otto_limit(cfg.omega_c, cfg.omega_h));

    out << to_string(cfg.mode) << ": " << trace.records.size() << " cycles from " << describe(cfg.initial_state)
        << (trace.records.empty() ? std::string() : trace.converged ? ", cyclostationary" : ", not cyclostationary")
        << '\n';
    if (!trace.records.empty()) {
        const auto& last = trace.records.back();
        out << "final cycle: w_eff = " << io::fmt(last.w_eff) << ", efficiency = " << io::fmt(cycle_efficiency(last))
            << ", power = " << io::fmt(cycle_power(last)) << '\n';
    }
    const auto checks = trace_invariants(trace, std::string(to_string(cfg.mode)));
    bool ok = true;
    for (const auto& c : checks)
        if (!c.pass()) ok = false;
    if (!ok) {
        err << "invariant audit failed:\n";
        print_checks(checks, err);
        return 3;
    }
    return 0;
}

inline int run_sweep_command(const EngineConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out) {
    const auto points = sweep_efficiency_power(cfg);
    std::filesystem::create_directories(out_dir);
    io::write_sweep_csv(out_dir / "sweep.csv", points);
    if (cfg.output.svg) io::plot_sweep(out_dir, cfg.t_c);
    std::size_t flagged = 0;
    for (const auto& p : points)
        if (!p.converged || !p.efficiency) ++flagged;
    out << "sweep: " << points.size() << " points (" << cfg.sweep.t_h_list.size() << " hot temperatures), "
        << flagged << " flagged as non-convergent or undefined\n";
    return 0;
}

/// Runs one CLI invocation. Returns the process exit status.
inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    CLI::App app{"Quantum Otto engine simulator: harmonic-oscillator working substance, rate-equation baths"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = ".";
    bool svg = false;
    std::vector<CLI::App*> subs;
    for (const char* name : {"simulate", "pump", "sweep", "verify"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "simulate" ? "two-bath Otto engine"
                                             : std::string(name) == "pump"  ? "pump-driven single-bath engine"
                                             : std::string(name) == "sweep" ? "efficiency/power sweep"
                                                                            : "oracle and invariant self-checks");
        sub->add_option("--config", config_path, "key = value config file (defaults if omitted)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--svg", svg, "also write SVG plots and gnuplot .dat files");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        EngineConfig cfg = load_config(config_path);
        if (svg) cfg.output.svg = true;
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "simulate") {
            cfg.mode = Mode::otto;
            return run_engine_command(cfg, out_dir, out, err);
        }
        if (cmd == "pump") {
            cfg.mode = Mode::pump;
            return run_engine_command(cfg, out_dir, out, err);
        }
        if (cmd == "sweep") {
            cfg.mode = Mode::sweep;
            return run_sweep_command(cfg, out_dir, out);
        }
        cfg.mode = Mode::verify;
        const bool ok = print_checks(verification_suite(cfg), out);
        out << (ok ? "verify: all checks passed\n" : "verify: FAILED\n");
        return ok ? 0 : 3;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace otto_kiln::cli
