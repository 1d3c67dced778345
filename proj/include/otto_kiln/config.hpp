// config.hpp: experiment configuration and its plain-text key = value format
//
//   # comment
//   omega_h = 1.5           keys before any header belong to [engine]
//   [initial_state]
//   kind = equal_lowest
//   levels = 3
//
// Sections: [engine], [initial_state], [pump_target], [sweep], [output].
// Unknown sections, unknown keys and duplicate keys are errors.

#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "otto_kiln/fock.hpp"

namespace otto_kiln {

enum class Mode { otto, pump, sweep, verify };

inline std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::otto: return "otto";
    case Mode::pump: return "pump";
    case Mode::sweep: return "sweep";
    case Mode::verify: return "verify";
    }
    return "?";
}

struct SweepSettings {
    std::vector<double> t_h_list{0.8, 1.2, 1.6, 2.0};
    double ratio_min{0.0}; // 0 means T_c/T_h + 0.01 per hot temperature
    double ratio_max{0.99};
    std::size_t ratio_steps{99};
    double tau{20.0};
    bool thermal_balance{true};
    std::size_t max_cycles{50};
    std::size_t threads{0}; // 0 means hardware concurrency, capped by OTTO_KILN_THREADS

    bool operator==(const SweepSettings&) const = default;
};

struct OutputSettings {
    std::size_t p_columns{8};
    bool wide_csv{false};
    bool svg{false};

    bool operator==(const OutputSettings&) const = default;
};

/// Defaults reproduce the reference parameter set: omega_c = 1, omega_h = 1.5,
/// T_c = 0.4, T_h = 1.2, relaxation time 1/(2 gamma0) = 1, tau = 2.
struct EngineConfig {
    Mode mode{Mode::otto};
    double omega_c{1.0};
    double omega_h{1.5};
    double t_c{0.4};
    double t_h{1.2};
    double gamma0{0.5};
    double tau{2.0};
    double tau_bc{1.0};
    double tau_cd{5.0};
    double tau_db{1.0};
    std::size_t n_cycles{20};
    std::size_t n_max{default_n_max};
    double dt{0.0}; // 0 selects the integrator default
    double tail_tolerance{default_tail_tolerance};
    std::size_t adiabatic_samples{64};
    std::size_t sample_stride{0};
    InitialStateSpec initial_state{state::Ground{}};
    InitialStateSpec pump_target{state::Fock{1}};
    SweepSettings sweep{};
    OutputSettings output{};

    double relaxation_time() const { return 1.0 / (2.0 * gamma0); }
    double otto_cycle_time() const { return 4.0 * tau; }
    double pump_cycle_time() const { return tau_bc + tau_cd + tau_db; }
    BathSpec hot_bath() const { return BathSpec(t_h, gamma0); }
    BathSpec cold_bath() const { return BathSpec(t_c, gamma0); }

    bool operator==(const EngineConfig&) const = default;
};

struct ConfigError : Error {
    using Error::Error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

struct Entry {
    std::string value;
    std::size_t line;
    bool used{false};
};

using Section = std::map<std::string, Entry>;

class Reader {
public:
    Reader(std::map<std::string, Section>& sections) : sections_(sections) {}

    [[noreturn]] static void fail(std::size_t line, std::string_view key, std::string_view what) {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        os << "key '" << key << "': " << what;
        throw ConfigError(os.str());
    }

    Entry* find(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto e = s->second.find(key);
        if (e == s->second.end()) return nullptr;
        e->second.used = true;
        return &e->second;
    }

    bool has(const std::string& section, const std::string& key) {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    void real(const std::string& section, const std::string& key, double& out) {
        if (Entry* e = find(section, key)) out = parse_real(*e, key);
    }

    void count(const std::string& section, const std::string& key, std::size_t& out) {
        if (Entry* e = find(section, key)) out = parse_count(*e, key);
    }

    void boolean(const std::string& section, const std::string& key, bool& out) {
        if (Entry* e = find(section, key)) {
            if (e->value == "true" || e->value == "1" || e->value == "yes") out = true;
            else if (e->value == "false" || e->value == "0" || e->value == "no") out = false;
            else fail(e->line, key, "expected a boolean, got '" + e->value + "'");
        }
    }

    void real_list(const std::string& section, const std::string& key, std::vector<double>& out) {
        Entry* e = find(section, key);
        if (!e) return;
        out.clear();
        std::stringstream ss(e->value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            Entry tmp{trim(item), e->line};
            out.push_back(parse_real(tmp, key));
        }
        if (out.empty()) fail(e->line, key, "expected a comma-separated list of numbers");
    }

    std::size_t line_of(const std::string& section, const std::string& key) {
        Entry* e = find(section, key);
        return e ? e->line : 0;
    }

    static double parse_real(const Entry& e, std::string_view key) {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        if (e.value.empty() || end != begin + e.value.size() || errno == ERANGE || !std::isfinite(v))
            fail(e.line, key, "expected a number, got '" + e.value + "'");
        return v;
    }

    static std::size_t parse_count(const Entry& e, std::string_view key) {
        const char* begin = e.value.c_str();
        char* end = nullptr;
        errno = 0;
        const long long v = std::strtoll(begin, &end, 10);
        if (e.value.empty() || end != begin + e.value.size() || errno == ERANGE)
            fail(e.line, key, "expected a non-negative integer, got '" + e.value + "'");
        if (v < 0) fail(e.line, key, "must be non-negative");
        return static_cast<std::size_t>(v);
    }

private:
    std::map<std::string, Section>& sections_;
};

inline InitialStateSpec read_state(Reader& r, const std::string& section, const InitialStateSpec& fallback,
                                   double omega_h, double t_h) {
    Entry* kind_entry = r.find(section, "kind");
    if (!kind_entry) {
        for (const char* key : {"levels", "center", "omega_ref", "temperature_ref", "omega", "temperature", "level"})
            if (r.has(section, key))
                Reader::fail(r.line_of(section, key), key, "state parameter given without 'kind' in [" + section + "]");
        return fallback;
    }
    const std::string kind = kind_entry->value;
    const std::size_t kline = kind_entry->line;
    if (kind == "ground") return state::Ground{};
    if (kind == "equal_lowest") {
        state::EqualLowest s;
        r.count(section, "levels", s.levels);
        if (s.levels < 1) Reader::fail(r.line_of(section, "levels"), "levels", "must be at least 1");
        return s;
    }
    if (kind == "gaussian") {
        state::Gaussian s{2, omega_h, t_h};
        r.count(section, "center", s.center);
        r.real(section, "omega_ref", s.omega_ref);
        r.real(section, "temperature_ref", s.temperature_ref);
        if (!(s.omega_ref > 0.0)) Reader::fail(r.line_of(section, "omega_ref"), "omega_ref", "must be positive");
        if (!(s.temperature_ref > 0.0))
            Reader::fail(r.line_of(section, "temperature_ref"), "temperature_ref", "must be positive");
        return s;
    }
    if (kind == "boltzmann") {
        state::Boltzmann s{omega_h, t_h};
        r.real(section, "omega", s.omega);
        r.real(section, "temperature", s.temperature);
        if (!(s.omega > 0.0)) Reader::fail(r.line_of(section, "omega"), "omega", "must be positive");
        if (!(s.temperature > 0.0)) Reader::fail(r.line_of(section, "temperature"), "temperature", "must be positive");
        return s;
    }
    if (kind == "fock") {
        state::Fock s;
        r.count(section, "level", s.level);
        return s;
    }
    Reader::fail(kline, "kind", "unknown state kind '" + kind + "'");
}

} // namespace detail

inline EngineConfig parse_config(std::string_view text) {
    using detail::Entry;
    using detail::Reader;

    static const std::map<std::string, std::vector<std::string>> known = {
        {"engine",
         {"mode", "omega_c", "omega_h", "t_c", "t_h", "gamma0", "relaxation_time", "tau", "tau_bc", "tau_cd",
          "tau_db", "n_cycles", "n_max", "dt", "tail_tolerance", "adiabatic_samples", "sample_stride"}},
        {"initial_state", {"kind", "levels", "center", "omega_ref", "temperature_ref", "omega", "temperature", "level"}},
        {"pump_target", {"kind", "levels", "center", "omega_ref", "temperature_ref", "omega", "temperature", "level"}},
        {"sweep", {"t_h_list", "ratio_min", "ratio_max", "ratio_steps", "tau", "thermal_balance", "max_cycles", "threads"}},
        {"output", {"p_columns", "wide_csv", "svg"}},
    };

    std::map<std::string, detail::Section> sections;
    std::string current = "engine";
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header '" + line + "'");
            current = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            if (!known.count(current))
                throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + current + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        const auto& keys = known.at(current);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            Reader::fail(line_no, key, "unknown key in [" + current + "]");
        auto& section = sections[current];
        if (section.count(key)) Reader::fail(line_no, key, "duplicate key");
        section.emplace(key, Entry{value, line_no});
    }

    Reader r(sections);
    EngineConfig cfg;
    const std::string eng = "engine";

    if (Entry* e = r.find(eng, "mode")) {
        if (e->value == "otto") cfg.mode = Mode::otto;
        else if (e->value == "pump") cfg.mode = Mode::pump;
        else if (e->value == "sweep") cfg.mode = Mode::sweep;
        else if (e->value == "verify") cfg.mode = Mode::verify;
        else Reader::fail(e->line, "mode", "expected otto, pump, sweep or verify, got '" + e->value + "'");
    }

    auto positive = [&](const std::string& section, const std::string& key, double& v) {
        r.real(section, key, v);
        if (!(v > 0.0)) Reader::fail(r.line_of(section, key), key, "must be positive");
    };
    positive(eng, "omega_c", cfg.omega_c);
    positive(eng, "omega_h", cfg.omega_h);
    positive(eng, "t_c", cfg.t_c);
    positive(eng, "t_h", cfg.t_h);
    if (r.has(eng, "gamma0") && r.has(eng, "relaxation_time"))
        Reader::fail(r.line_of(eng, "relaxation_time"), "relaxation_time", "conflicts with gamma0; give only one");
    positive(eng, "gamma0", cfg.gamma0);
    if (r.has(eng, "relaxation_time")) {
        double relax = 0.0;
        positive(eng, "relaxation_time", relax);
        cfg.gamma0 = 1.0 / (2.0 * relax);
    }
    positive(eng, "tau", cfg.tau);
    positive(eng, "tau_bc", cfg.tau_bc);
    positive(eng, "tau_cd", cfg.tau_cd);
    positive(eng, "tau_db", cfg.tau_db);
    r.count(eng, "n_cycles", cfg.n_cycles);
    r.count(eng, "n_max", cfg.n_max);
    if (cfg.n_max < 2) Reader::fail(r.line_of(eng, "n_max"), "n_max", "must be at least 2");
    r.real(eng, "dt", cfg.dt);
    if (cfg.dt < 0.0) Reader::fail(r.line_of(eng, "dt"), "dt", "must be non-negative (0 selects the default)");
    positive(eng, "tail_tolerance", cfg.tail_tolerance);
    r.count(eng, "adiabatic_samples", cfg.adiabatic_samples);
    if (cfg.adiabatic_samples < 2)
        Reader::fail(r.line_of(eng, "adiabatic_samples"), "adiabatic_samples", "must be at least 2");
    r.count(eng, "sample_stride", cfg.sample_stride);

    if (!(cfg.omega_c < cfg.omega_h))
        Reader::fail(r.line_of(eng, "omega_h"), "omega_h", "must exceed omega_c");
    if (!(cfg.t_c < cfg.t_h)) Reader::fail(r.line_of(eng, "t_h"), "t_h", "must exceed t_c");

    cfg.initial_state = detail::read_state(r, "initial_state", cfg.initial_state, cfg.omega_h, cfg.t_h);
    cfg.pump_target = detail::read_state(r, "pump_target", cfg.pump_target, cfg.omega_h, cfg.t_h);
    if (std::holds_alternative<state::Gaussian>(cfg.initial_state) &&
        std::get<state::Gaussian>(cfg.initial_state).center >= cfg.n_max)
        Reader::fail(r.line_of("initial_state", "center"), "center", "must lie below n_max");

    const std::string sw = "sweep";
    r.real_list(sw, "t_h_list", cfg.sweep.t_h_list);
    for (double t : cfg.sweep.t_h_list)
        if (!(t > cfg.t_c)) Reader::fail(r.line_of(sw, "t_h_list"), "t_h_list", "every hot temperature must exceed t_c");
    r.real(sw, "ratio_min", cfg.sweep.ratio_min);
    r.real(sw, "ratio_max", cfg.sweep.ratio_max);
    if (!(cfg.sweep.ratio_max > 0.0 && cfg.sweep.ratio_max <= 1.0))
        Reader::fail(r.line_of(sw, "ratio_max"), "ratio_max", "must lie in (0, 1]");
    if (cfg.sweep.ratio_min < 0.0 || cfg.sweep.ratio_min >= cfg.sweep.ratio_max)
        Reader::fail(r.line_of(sw, "ratio_min"), "ratio_min", "must be 0 (automatic) or lie below ratio_max");
    r.count(sw, "ratio_steps", cfg.sweep.ratio_steps);
    if (cfg.sweep.ratio_steps < 2) Reader::fail(r.line_of(sw, "ratio_steps"), "ratio_steps", "must be at least 2");
    positive(sw, "tau", cfg.sweep.tau);
    r.boolean(sw, "thermal_balance", cfg.sweep.thermal_balance);
    r.count(sw, "max_cycles", cfg.sweep.max_cycles);
    if (cfg.sweep.max_cycles < 1) Reader::fail(r.line_of(sw, "max_cycles"), "max_cycles", "must be at least 1");
    r.count(sw, "threads", cfg.sweep.threads);

    r.count("output", "p_columns", cfg.output.p_columns);
    r.boolean("output", "wide_csv", cfg.output.wide_csv);
    r.boolean("output", "svg", cfg.output.svg);

    for (auto& [name, section] : sections)
        for (auto& [key, entry] : section)
            if (!entry.used)
                Reader::fail(entry.line, key, "not applicable in [" + name + "] for the chosen state kind");
    return cfg;
}

} // namespace otto_kiln
