// config.hpp — INI-style run configuration: parsing, cross-section defaults,
// validation, canonical rendering and the config digest.
//
// Sections and keys are fixed; unknown names, duplicates and malformed lines
// are rejected with the offending line number.  Only full-line comments
// (leading '#' or ';') are recognized.  The canonical rendering prints the
// resolved effective configuration and is the input of digest().

#pragma once

#include <nvclone/dynamics.hpp>
#include <nvclone/format.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace nvclone {

struct ConfigError : std::runtime_error {
    int line;
    explicit ConfigError(const std::string& msg, int line_ = 0)
        : std::runtime_error(line_ > 0 ? "config line " + std::to_string(line_) + ": " + msg
                                       : "config: " + msg),
          line(line_) {}
};

// ------------------------------ Sections ------------------------------------

struct ExperimentConfig {
    std::string preset;         // empty -> "fig3a" unless a sequence file is given
    std::string sequence_path;  // .seq file; mutually exclusive with preset
    double phi_rad = 0.0;
    int channel = 1;            // probe/calibration channel
    double t_start_ns = 0.0;     // tomography/calibration time grid
    double t_stop_ns = 5997.5;   // 2.5 ns pitch; long enough that sampled fits
    int t_points = 2400;         // at default repetitions land alpha within 0.02
    double f_start_hz = 2.82e9;  // spectrum grid
    double f_stop_hz = 2.92e9;
    int f_points = 201;
    double esr_pulse_ns = 250.0;
    double dt_ns = 20.0;  // wait-sweep step
    long long j_max = -1;  // wait-sweep index bound; -1 -> floor(2000 / dt_ns)
    bool sample = false;
    bool has_seed = false;
    std::uint64_t seed = 0;
    std::optional<long long> repetitions;  // overrides [nv] repetitions
    std::optional<double> alpha_override;  // analyze from externally measured
    std::optional<double> beta_override;   // start points instead of fitting
};

struct OutputConfig {
    std::string dir = "out";
    bool plot_data = false;
};

// ------------------------------ Digest helpers -------------------------------

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xF];
    return out;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double config_double(const std::string& value, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw ConfigError("expected a number, got '" + value + "'", line);
    return v;
}

inline long long config_int(const std::string& value, int line) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("expected an integer, got '" + value + "'", line);
    return v;
}

inline bool config_bool(const std::string& value, int line) {
    if (value == "true") return true;
    if (value == "false") return false;
    throw ConfigError("expected true or false, got '" + value + "'", line);
}

}  // namespace detail

// ------------------------------ RunConfig ------------------------------------

struct RunConfig {
    NvParams params;
    EvolutionPath path = EvolutionPath::ideal;
    double step_s = 5e-9;
    double init_fidelity = 1.0;
    bool dephasing_from_t2star = true;
    std::optional<double> gamma_minus_rad_s;  // explicit rates win over t2star
    std::optional<double> gamma_zero_rad_s;
    std::optional<double> gamma_plus_rad_s;
    ExperimentConfig experiment;
    OutputConfig output;

    // Resolved integrator settings for evolve_sequence.
    EvolutionConfig evolution() const {
        EvolutionConfig cfg;
        cfg.path = path;
        cfg.integrator_step_s = step_s;
        cfg.init_fidelity = init_fidelity;
        if (path == EvolutionPath::lindblad) {
            if (gamma_minus_rad_s || gamma_zero_rad_s || gamma_plus_rad_s)
                cfg.dephasing_rates = {gamma_minus_rad_s.value_or(0.0),
                                       gamma_zero_rad_s.value_or(0.0),
                                       gamma_plus_rad_s.value_or(0.0)};
            else if (dephasing_from_t2star)
                cfg.dephasing_rates = EvolutionConfig::lindblad_from_t2star(params).dephasing_rates;
        }
        return cfg;
    }

    std::string effective_preset() const {
        if (!experiment.sequence_path.empty()) return "";
        return experiment.preset.empty() ? "fig3a" : experiment.preset;
    }

    std::vector<double> time_grid_s() const {
        std::vector<double> t(experiment.t_points);
        const double span = experiment.t_stop_ns - experiment.t_start_ns;
        for (int i = 0; i < experiment.t_points; ++i)
            t[i] = (experiment.t_start_ns +
                    (experiment.t_points > 1 ? span * i / (experiment.t_points - 1) : 0.0)) *
                   1e-9;
        return t;
    }

    std::vector<double> freq_grid_hz() const {
        std::vector<double> f(experiment.f_points);
        const double span = experiment.f_stop_hz - experiment.f_start_hz;
        for (int i = 0; i < experiment.f_points; ++i)
            f[i] = experiment.f_start_hz +
                   (experiment.f_points > 1 ? span * i / (experiment.f_points - 1) : 0.0);
        return f;
    }

    long long fig5_j_max() const {
        if (experiment.j_max >= 0) return experiment.j_max;
        return static_cast<long long>(std::floor(2000.0 / experiment.dt_ns + 1e-9));
    }

    // Folds cross-section overrides in and checks every invariant; call once
    // after parsing and command-line overrides.
    void finalize() {
        if (experiment.repetitions) {
            if (*experiment.repetitions < 1)
                throw ConfigError("experiment repetitions must be >= 1");
            params.repetitions = *experiment.repetitions;
            experiment.repetitions.reset();
        }
        try {
            params.validate();
            evolution().validate(params);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }

        if (!experiment.preset.empty() && !experiment.sequence_path.empty())
            throw ConfigError("preset and sequence are mutually exclusive");
        if (!experiment.sequence_path.empty() &&
            !std::filesystem::exists(experiment.sequence_path))
            throw ConfigError("sequence file not found: " + experiment.sequence_path);

        if (experiment.channel != 1 && experiment.channel != 2)
            throw ConfigError("channel must be 1 or 2");
        if (experiment.t_points < 1) throw ConfigError("t_points must be >= 1");
        if (experiment.t_start_ns < 0.0) throw ConfigError("t_start_ns must be >= 0");
        if (experiment.t_points > 1 && !(experiment.t_stop_ns > experiment.t_start_ns))
            throw ConfigError("t_stop_ns must exceed t_start_ns");
        if (experiment.f_points < 1) throw ConfigError("f_points must be >= 1");
        if (experiment.f_points > 1 && !(experiment.f_stop_hz > experiment.f_start_hz))
            throw ConfigError("f_stop_hz must exceed f_start_hz");
        if (!(experiment.f_start_hz > 0.0)) throw ConfigError("f_start_hz must be > 0");
        if (!(experiment.esr_pulse_ns > 0.0)) throw ConfigError("esr_pulse_ns must be > 0");
        if (!(experiment.dt_ns > 0.0)) throw ConfigError("dt_ns must be > 0");
        if (!std::isfinite(experiment.phi_rad)) throw ConfigError("phi_rad must be finite");
        if (experiment.sample && !experiment.has_seed)
            throw ConfigError("sampling requires a seed ([experiment] seed or --seed)");

        if (experiment.alpha_override.has_value() != experiment.beta_override.has_value())
            throw ConfigError("alpha_override and beta_override must be set together");
        if (experiment.alpha_override) {
            const double a = *experiment.alpha_override, b = *experiment.beta_override;
            if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
                throw ConfigError("alpha_override and beta_override must lie in [0, 1]");
            if (a + b - a * b <= 1e-12)
                throw ConfigError("alpha_override/beta_override are degenerate");
        }
        if (output.dir.empty()) throw ConfigError("output dir must not be empty");
    }

    // Effective physics configuration ([nv], [evolution], [experiment]) in
    // fixed order; [output] never affects results and is excluded, so runs
    // that differ only in destination share a digest.
    std::string canonical_ini() const {
        using detail::g9;
        std::ostringstream os;
        os << "[nv]\n";
        os << "d_hz = " << g9(params.d_hz) << "\n";
        os << "e_hz = " << g9(params.e_hz) << "\n";
        os << "bx_t = " << g9(params.b_field_t[0]) << "\n";
        os << "by_t = " << g9(params.b_field_t[1]) << "\n";
        os << "bz_t = " << g9(params.b_field_t[2]) << "\n";
        os << "gamma_e_hz_per_t = " << g9(params.gamma_e_hz_per_t) << "\n";
        os << "rabi_mw1_hz = " << g9(params.rabi_mw1_hz) << "\n";
        os << "rabi_mw2_hz = " << g9(params.rabi_mw2_hz) << "\n";
        os << "r0_cps = " << g9(params.r0_cps) << "\n";
        os << "r1_cps = " << g9(params.r1_cps) << "\n";
        os << "t2star_s = " << g9(params.t2star_s) << "\n";
        os << "omega_env_rad_s = " << g9(params.omega_env_rad_s) << "\n";
        os << "readout_window_s = " << g9(params.readout_window_s) << "\n";
        os << "repetitions = " << params.repetitions << "\n";
        const EvolutionConfig ev = evolution();
        os << "\n[evolution]\n";
        os << "path = " << (path == EvolutionPath::ideal ? "ideal" : "lindblad") << "\n";
        os << "step_s = " << g9(step_s) << "\n";
        os << "init_fidelity = " << g9(init_fidelity) << "\n";
        os << "gamma_minus_rad_s = " << g9(ev.dephasing_rates[0]) << "\n";
        os << "gamma_zero_rad_s = " << g9(ev.dephasing_rates[1]) << "\n";
        os << "gamma_plus_rad_s = " << g9(ev.dephasing_rates[2]) << "\n";
        os << "\n[experiment]\n";
        if (experiment.sequence_path.empty())
            os << "preset = " << effective_preset() << "\n";
        else
            os << "sequence = " << experiment.sequence_path << "\n";
        os << "phi_rad = " << g9(experiment.phi_rad) << "\n";
        os << "channel = " << experiment.channel << "\n";
        os << "t_start_ns = " << g9(experiment.t_start_ns) << "\n";
        os << "t_stop_ns = " << g9(experiment.t_stop_ns) << "\n";
        os << "t_points = " << experiment.t_points << "\n";
        os << "f_start_hz = " << g9(experiment.f_start_hz) << "\n";
        os << "f_stop_hz = " << g9(experiment.f_stop_hz) << "\n";
        os << "f_points = " << experiment.f_points << "\n";
        os << "esr_pulse_ns = " << g9(experiment.esr_pulse_ns) << "\n";
        os << "dt_ns = " << g9(experiment.dt_ns) << "\n";
        os << "j_max = " << fig5_j_max() << "\n";
        os << "sample = " << (experiment.sample ? "true" : "false") << "\n";
        os << "seed = " << experiment.seed << "\n";
        if (experiment.alpha_override) {
            os << "alpha_override = " << g9(*experiment.alpha_override) << "\n";
            os << "beta_override = " << g9(*experiment.beta_override) << "\n";
        }
        return os.str();
    }

    std::string digest() const { return detail::hex64(detail::fnv1a64(canonical_ini())); }

    static RunConfig from_ini(const std::string& text);
    static RunConfig from_file(const std::string& path);
};

// ------------------------------ Parser ---------------------------------------

namespace detail {

struct IniEntry {
    std::string section;
    std::string key;
    std::string value;
    int line;
};

inline std::vector<IniEntry> parse_ini(const std::string& text) {
    std::vector<IniEntry> entries;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (section != "nv" && section != "evolution" && section != "experiment" &&
                section != "output")
                throw ConfigError("unknown section [" + section + "]", line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line);
        if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
        if (section.empty()) throw ConfigError("key outside any [section]", line);
        for (const auto& e : entries)
            if (e.section == section && e.key == key)
                throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line);
        entries.push_back({section, key, value, line});
    }
    return entries;
}

}  // namespace detail

inline RunConfig RunConfig::from_ini(const std::string& text) {
    using detail::config_bool;
    using detail::config_double;
    using detail::config_int;

    RunConfig cfg;
    for (const auto& e : detail::parse_ini(text)) {
        const int ln = e.line;
        if (e.section == "nv") {
            if (e.key == "d_hz") cfg.params.d_hz = config_double(e.value, ln);
            else if (e.key == "e_hz") cfg.params.e_hz = config_double(e.value, ln);
            else if (e.key == "bx_t") cfg.params.b_field_t[0] = config_double(e.value, ln);
            else if (e.key == "by_t") cfg.params.b_field_t[1] = config_double(e.value, ln);
            else if (e.key == "bz_t") cfg.params.b_field_t[2] = config_double(e.value, ln);
            else if (e.key == "gamma_e_hz_per_t") cfg.params.gamma_e_hz_per_t = config_double(e.value, ln);
            else if (e.key == "rabi_mw1_hz") cfg.params.rabi_mw1_hz = config_double(e.value, ln);
            else if (e.key == "rabi_mw2_hz") cfg.params.rabi_mw2_hz = config_double(e.value, ln);
            else if (e.key == "r0_cps") cfg.params.r0_cps = config_double(e.value, ln);
            else if (e.key == "r1_cps") cfg.params.r1_cps = config_double(e.value, ln);
            else if (e.key == "t2star_s") cfg.params.t2star_s = config_double(e.value, ln);
            else if (e.key == "omega_env_rad_s") cfg.params.omega_env_rad_s = config_double(e.value, ln);
            else if (e.key == "readout_window_s") cfg.params.readout_window_s = config_double(e.value, ln);
            else if (e.key == "repetitions") cfg.params.repetitions = config_int(e.value, ln);
            else throw ConfigError("unknown key '" + e.key + "' in [nv]", ln);
        } else if (e.section == "evolution") {
            if (e.key == "path") {
                if (e.value == "ideal") cfg.path = EvolutionPath::ideal;
                else if (e.value == "lindblad") cfg.path = EvolutionPath::lindblad;
                else throw ConfigError("path must be ideal or lindblad", ln);
            }
            else if (e.key == "step_s") cfg.step_s = config_double(e.value, ln);
            else if (e.key == "init_fidelity") cfg.init_fidelity = config_double(e.value, ln);
            else if (e.key == "dephasing_from_t2star") cfg.dephasing_from_t2star = config_bool(e.value, ln);
            else if (e.key == "gamma_minus_rad_s") cfg.gamma_minus_rad_s = config_double(e.value, ln);
            else if (e.key == "gamma_zero_rad_s") cfg.gamma_zero_rad_s = config_double(e.value, ln);
            else if (e.key == "gamma_plus_rad_s") cfg.gamma_plus_rad_s = config_double(e.value, ln);
            else throw ConfigError("unknown key '" + e.key + "' in [evolution]", ln);
        } else if (e.section == "experiment") {
            if (e.key == "preset") cfg.experiment.preset = e.value;
            else if (e.key == "sequence") cfg.experiment.sequence_path = e.value;
            else if (e.key == "phi_rad") cfg.experiment.phi_rad = config_double(e.value, ln);
            else if (e.key == "channel") cfg.experiment.channel = static_cast<int>(config_int(e.value, ln));
            else if (e.key == "t_start_ns") cfg.experiment.t_start_ns = config_double(e.value, ln);
            else if (e.key == "t_stop_ns") cfg.experiment.t_stop_ns = config_double(e.value, ln);
            else if (e.key == "t_points") cfg.experiment.t_points = static_cast<int>(config_int(e.value, ln));
            else if (e.key == "f_start_hz") cfg.experiment.f_start_hz = config_double(e.value, ln);
            else if (e.key == "f_stop_hz") cfg.experiment.f_stop_hz = config_double(e.value, ln);
            else if (e.key == "f_points") cfg.experiment.f_points = static_cast<int>(config_int(e.value, ln));
            else if (e.key == "esr_pulse_ns") cfg.experiment.esr_pulse_ns = config_double(e.value, ln);
            else if (e.key == "dt_ns") cfg.experiment.dt_ns = config_double(e.value, ln);
            else if (e.key == "j_max") cfg.experiment.j_max = config_int(e.value, ln);
            else if (e.key == "sample") cfg.experiment.sample = config_bool(e.value, ln);
            else if (e.key == "seed") {
                const long long v = config_int(e.value, ln);
                if (v < 0) throw ConfigError("seed must be >= 0", ln);
                cfg.experiment.seed = static_cast<std::uint64_t>(v);
                cfg.experiment.has_seed = true;
            }
            else if (e.key == "repetitions") cfg.experiment.repetitions = config_int(e.value, ln);
            else if (e.key == "alpha_override") cfg.experiment.alpha_override = config_double(e.value, ln);
            else if (e.key == "beta_override") cfg.experiment.beta_override = config_double(e.value, ln);
            else throw ConfigError("unknown key '" + e.key + "' in [experiment]", ln);
        } else if (e.section == "output") {
            if (e.key == "dir") cfg.output.dir = e.value;
            else if (e.key == "plot_data") cfg.output.plot_data = config_bool(e.value, ln);
            else throw ConfigError("unknown key '" + e.key + "' in [output]", ln);
        } else {
            throw ConfigError("unknown section [" + e.section + "]", ln);
        }
    }
    return cfg;
}

inline RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_ini(buf.str());
}

}  // namespace nvclone
