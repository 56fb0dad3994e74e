// nvclone_main.cpp — command-line driver: rabi / esr / clone / analyze /
// reproduce over an INI run configuration.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical or
// analysis error.  Every command is deterministic given (config, seed); the
// clone command analyzes the trace files it just wrote, so a later analyze
// run over the same files emits a byte-identical report.

#include <nvclone/cloning.hpp>
#include <nvclone/config.hpp>
#include <nvclone/fitting.hpp>
#include <nvclone/photonics.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace nvclone;

namespace {

// ------------------------------ File helpers --------------------------------

fs::path ensure_outdir(const RunConfig& cfg) {
    const fs::path dir{cfg.output.dir};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw ConfigError("cannot create output directory " + dir.string());
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw ConfigError("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RabiTrace read_trace_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    return parse_trace_csv(in);
}

std::string trace_csv_text(const RabiTrace& trace) {
    std::ostringstream os;
    write_trace_csv(os, trace);
    return os.str();
}

std::string esr_csv_text(const EsrSpectrum& spec) {
    std::ostringstream os;
    write_esr_csv(os, spec);
    return os.str();
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// ------------------------------ Plot emission -------------------------------

// Long-format companion files for external plotting: x, series, value.
std::string trace_plot_csv(const RabiTrace& trace, const NvParams& p) {
    std::ostringstream os;
    os << "t_ns,series,value\n";
    for (std::size_t i = 0; i < trace.t_s.size(); ++i)
        os << detail::g9(trace.t_s[i] * 1e9) << ",expected," << detail::g9(trace.expected[i])
           << "\n";
    if (trace.sampled()) {
        const auto cal = calibrate(p, p.readout_window_s, trace.reps);
        const auto signals = trace.signals(cal);
        for (std::size_t i = 0; i < trace.t_s.size(); ++i)
            os << detail::g9(trace.t_s[i] * 1e9) << ",signal," << detail::g9(signals[i]) << "\n";
        for (std::size_t i = 0; i < trace.t_s.size(); ++i)
            os << detail::g9(trace.t_s[i] * 1e9) << ",counts," << trace.counts[i] << "\n";
    }
    return os.str();
}

std::string esr_plot_csv(const EsrSpectrum& spec) {
    std::ostringstream os;
    os << "f_hz,series,value\n";
    for (std::size_t i = 0; i < spec.f_hz.size(); ++i)
        os << detail::g9(spec.f_hz[i]) << ",signal," << detail::g9(spec.signal[i]) << "\n";
    return os.str();
}

// ------------------------------ Fit serialization ---------------------------

nlohmann::ordered_json fit_to_json(const DampedCosineFit& fit) {
    using detail::g9_round;
    nlohmann::ordered_json j;
    j["offset"] = g9_round(fit.offset);
    j["amplitude"] = g9_round(fit.amplitude);
    j["omega_rad_s"] = g9_round(fit.omega_rad_s);
    j["rabi_hz"] = g9_round(fit.omega_rad_s / kTwoPi);
    j["phase_rad"] = g9_round(fit.phase_rad);
    j["tau_s"] = g9_round(fit.tau_s);
    j["start_point"] = g9_round(fit.start_point());
    j["stderr_offset"] = g9_round(fit.stderrs[0]);
    j["stderr_amplitude"] = g9_round(fit.stderrs[1]);
    j["stderr_omega_rad_s"] = g9_round(fit.stderrs[2]);
    j["stderr_phase_rad"] = g9_round(fit.stderrs[3]);
    j["stderr_tau_s"] = g9_round(fit.stderrs[4]);
    j["weighted_rss"] = g9_round(fit.weighted_rss);
    j["iterations"] = fit.iterations;
    j["points"] = fit.points;
    return j;
}

// ------------------------------ Analysis core -------------------------------

DampedCosineFit fit_trace(const RabiTrace& trace, const NvParams& p) {
    if (trace.sampled()) {
        const auto cal = calibrate(p, p.readout_window_s, trace.reps);
        return fit_damped_cosine(trace.t_s, trace.signals(cal), trace.weights());
    }
    return fit_damped_cosine(trace.t_s, trace.expected);
}

// Fits both tomography traces, extracts the start-point populations, writes
// the fit summaries and the cloning report.  Shared by clone and analyze so
// the two paths cannot drift apart.
int finish_clone_analysis(const RunConfig& cfg, const fs::path& dir, const RabiTrace& mw1,
                          const RabiTrace& mw2) {
    const DampedCosineFit fit1 = fit_trace(mw1, cfg.params);
    const DampedCosineFit fit2 = fit_trace(mw2, cfg.params);
    const double alpha = fit1.subspace_population();
    const double beta = fit2.subspace_population();

    write_file(dir / "tomo_mw1.fit.json", json_text(fit_to_json(fit1)));
    write_file(dir / "tomo_mw2.fit.json", json_text(fit_to_json(fit2)));

    const CloningReport report =
        make_report(alpha, beta, cfg.experiment.phi_rad, cfg.experiment.seed, cfg.digest());
    write_file(dir / "clone_report.json", report_json_text(report));

    if (cfg.output.plot_data) {
        write_file(dir / "tomo_mw1.plot.csv", trace_plot_csv(mw1, cfg.params));
        write_file(dir / "tomo_mw2.plot.csv", trace_plot_csv(mw2, cfg.params));
    }

    std::cout << "clone: alpha = " << detail::g9(report.alpha)
              << ", beta = " << detail::g9(report.beta) << ", F1 = " << detail::g9(report.f1)
              << ", F2 = " << detail::g9(report.f2)
              << ", cerf = " << detail::g9(report.cerf_value)
              << (report.beats_universal ? " (beats universal bound)" : "") << "\n";
    return 0;
}

// ------------------------------ Sequences -----------------------------------

double prep_angle_for(const std::string& preset_name) {
    std::string base = preset_name;
    if (base.size() > 6 && base.substr(base.size() - 6) == "-clone")
        base = base.substr(0, base.size() - 6);
    if (base == "fig3a" || base == "fig3b") return kPi / 2.0;
    if (base == "fig3c" || base == "fig3d") return 3.0 * kPi / 2.0;
    throw ConfigError("preset '" + preset_name + "' is not a cloning preset");
}

// Clone-verb base sequence: a fig3 preset with the configured preparation
// phase, or a user .seq file.
PulseSequence clone_base_sequence(const RunConfig& cfg) {
    if (!cfg.experiment.sequence_path.empty()) {
        const std::string text = read_file(cfg.experiment.sequence_path);
        auto seq = parse_sequence(text, fs::path(cfg.experiment.sequence_path).stem().string());
        seq.validate();
        return seq;
    }
    const std::string name = cfg.effective_preset();
    return clone_sequence(prep_angle_for(name), cfg.experiment.phi_rad, std::nullopt,
                          cfg.params.readout_window_s, name);
}

// ------------------------------ Commands ------------------------------------

int cmd_rabi(const RunConfig& cfg) {
    const int channel = cfg.experiment.channel;
    const auto base = preset("rabi-cal", cfg.params.readout_window_s);
    const RabiTrace trace =
        generate_rabi_trace(base, channel, cfg.time_grid_s(), cfg.params, cfg.evolution(),
                            cfg.experiment.sample, cfg.experiment.seed);

    const fs::path dir = ensure_outdir(cfg);
    const std::string stem = "rabi_ch" + std::to_string(channel);
    write_file(dir / (stem + ".csv"), trace_csv_text(trace));

    const RabiTrace back = read_trace_file(dir / (stem + ".csv"));
    const DampedCosineFit fit = fit_trace(back, cfg.params);
    auto j = fit_to_json(fit);
    j["seed"] = cfg.experiment.seed;
    j["config_digest"] = cfg.digest();
    write_file(dir / (stem + ".fit.json"), json_text(j));

    if (cfg.output.plot_data) write_file(dir / (stem + ".plot.csv"), trace_plot_csv(back, cfg.params));

    std::cout << stem << ": rabi_hz = " << detail::g9(fit.omega_rad_s / kTwoPi)
              << ", offset = " << detail::g9(fit.offset)
              << ", amplitude = " << detail::g9(fit.amplitude) << "\n";
    return 0;
}

int cmd_esr(const RunConfig& cfg) {
    const EsrSpectrum spec =
        esr_spectrum(cfg.freq_grid_hz(), cfg.params, cfg.experiment.esr_pulse_ns * 1e-9);

    const fs::path dir = ensure_outdir(cfg);
    write_file(dir / "esr.csv", esr_csv_text(spec));
    if (cfg.output.plot_data) write_file(dir / "esr.plot.csv", esr_plot_csv(spec));

    std::size_t dip = 0;
    for (std::size_t i = 1; i < spec.signal.size(); ++i)
        if (spec.signal[i] < spec.signal[dip]) dip = i;
    std::cout << "esr: " << spec.f_hz.size() << " points, deepest dip at "
              << detail::g9(spec.f_hz[dip]) << " Hz (signal " << detail::g9(spec.signal[dip])
              << ")\n";
    return 0;
}

int cmd_clone(const RunConfig& cfg) {
    const fs::path dir = ensure_outdir(cfg);

    if (cfg.experiment.alpha_override) {
        const CloningReport report =
            make_report(*cfg.experiment.alpha_override, *cfg.experiment.beta_override,
                        cfg.experiment.phi_rad, cfg.experiment.seed, cfg.digest());
        write_file(dir / "clone_report.json", report_json_text(report));
        std::cout << "clone: alpha = " << detail::g9(report.alpha)
                  << ", beta = " << detail::g9(report.beta) << " (override), F1 = "
                  << detail::g9(report.f1) << ", F2 = " << detail::g9(report.f2)
                  << ", cerf = " << detail::g9(report.cerf_value)
                  << (report.beats_universal ? " (beats universal bound)" : "") << "\n";
        return 0;
    }

    const PulseSequence base = clone_base_sequence(cfg);
    const auto grid = cfg.time_grid_s();
    const bool sample = cfg.experiment.sample;
    const RabiTrace mw1 = generate_rabi_trace(base, 1, grid, cfg.params, cfg.evolution(), sample,
                                              cfg.experiment.seed);
    const RabiTrace mw2 = generate_rabi_trace(base, 2, grid, cfg.params, cfg.evolution(), sample,
                                              cfg.experiment.seed + 1);

    write_file(dir / "tomo_mw1.csv", trace_csv_text(mw1));
    write_file(dir / "tomo_mw2.csv", trace_csv_text(mw2));

    // Analyze the bytes just written, not the in-memory traces: an analyze
    // run over these files then reproduces the report exactly.
    return finish_clone_analysis(cfg, dir, read_trace_file(dir / "tomo_mw1.csv"),
                                 read_trace_file(dir / "tomo_mw2.csv"));
}

int cmd_analyze(const RunConfig& cfg, const std::string& mw1_path, const std::string& mw2_path) {
    const RabiTrace mw1 = read_trace_file(mw1_path);
    const RabiTrace mw2 = read_trace_file(mw2_path);
    const fs::path dir = ensure_outdir(cfg);
    return finish_clone_analysis(cfg, dir, mw1, mw2);
}

// ------------------------------ Reproduce -----------------------------------

struct Fig5Stats {
    long long points = 0;
    double ideal_max_rel_dev = 0.0;  // fluorescence-rate flatness across j
    double sampled_std = 0.0;        // std of the normalized sampled series
    double poisson_std = 0.0;        // shot-noise prediction for that std
};

Fig5Stats run_fig5(const RunConfig& cfg, const fs::path& dir, double dt_ns, std::uint64_t seed) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir)) throw ConfigError("cannot create " + dir.string());

    const double dt_s = dt_ns * 1e-9;
    const long long j_max = static_cast<long long>(std::floor(2000.0 / dt_ns + 1e-9));
    const double window = cfg.params.readout_window_s;
    const long long reps = cfg.params.repetitions;
    const auto cal = calibrate(cfg.params, window, reps);

    std::ostringstream csv;
    csv << "j,t_ns,expected,counts,reps\n";
    std::vector<double> rates, norms;
    for (long long j = 0; j <= j_max; ++j) {
        const auto seq = preset_fig5(static_cast<int>(j), dt_s, cfg.experiment.phi_rad, window);
        const auto res = evolve_sequence(seq, cfg.params, cfg.evolution());
        const QutritDensity& rho = res.final_density();
        const double rate = fluorescence_rate(rho, cfg.params);
        const long long counts = sample_readout(rho, cfg.params, window, reps, seed,
                                                static_cast<std::uint64_t>(j));
        rates.push_back(rate);
        norms.push_back(normalize_signal(static_cast<double>(counts), cal));
        csv << j << ',' << detail::g9(j * dt_ns) << ',' << detail::g9(rho.population(0)) << ','
            << counts << ',' << reps << "\n";
    }
    write_file(dir / "wait_scan.csv", csv.str());

    if (cfg.output.plot_data) {
        std::ostringstream plot;
        plot << "t_ns,series,value\n";
        for (std::size_t i = 0; i < norms.size(); ++i)
            plot << detail::g9(static_cast<double>(i) * dt_ns) << ",signal,"
                 << detail::g9(norms[i]) << "\n";
        write_file(dir / "wait_scan.plot.csv", plot.str());
    }

    Fig5Stats stats;
    stats.points = j_max + 1;
    for (double r : rates)
        stats.ideal_max_rel_dev = std::max(stats.ideal_max_rel_dev, std::abs(r / rates[0] - 1.0));
    double mean = 0.0;
    for (double v : norms) mean += v;
    mean /= static_cast<double>(norms.size());
    double ss = 0.0;
    for (double v : norms) ss += (v - mean) * (v - mean);
    stats.sampled_std = std::sqrt(ss / static_cast<double>(norms.size() - 1));
    const double lambda = rates[0] * window * static_cast<double>(reps);
    stats.poisson_std = std::sqrt(lambda) / (cal.bright_counts - cal.dark_counts);
    return stats;
}

int cmd_reproduce(const RunConfig& cfg) {
    if (!cfg.experiment.has_seed)
        throw ConfigError("reproduce requires a seed (--seed or [experiment] seed)");
    const fs::path root = ensure_outdir(cfg);

    using detail::g9;
    using detail::g9_round;
    nlohmann::ordered_json summary;
    std::ostringstream table;
    table << "copy-fidelity summary\n";
    table << "bound (equatorial) = " << g9(bounds().pc) << ", bound (universal) = "
          << g9(bounds().universal) << "\n\n";
    summary["pc_bound"] = g9_round(bounds().pc);
    summary["universal_bound"] = g9_round(bounds().universal);

    // -- simulated ideal pipeline, all four tomography presets --
    table << "simulated (ideal path)\n";
    for (const std::string name : {"fig3a", "fig3b", "fig3c", "fig3d"}) {
        RunConfig sub = cfg;
        sub.experiment.preset = name;
        sub.experiment.sequence_path.clear();
        sub.experiment.sample = false;
        sub.experiment.alpha_override.reset();
        sub.experiment.beta_override.reset();
        sub.experiment.phi_rad = (name == "fig3c" || name == "fig3d") ? kPi : 0.0;
        sub.output.dir = (root / name).string();
        sub.output.plot_data = cfg.output.plot_data;
        sub.finalize();
        cmd_clone(sub);

        const auto rep = report_from_json(
            nlohmann::ordered_json::parse(read_file(root / name / "clone_report.json")));
        summary["simulated"][name] = {{"alpha", rep.alpha},
                                      {"beta", rep.beta},
                                      {"F1", rep.f1},
                                      {"F2", rep.f2}};
        table << "  " << name << ": alpha = " << g9(rep.alpha) << ", beta = " << g9(rep.beta)
              << ", F1 = " << g9(rep.f1) << ", F2 = " << g9(rep.f2) << "\n";
    }

    // -- analysis of the reference start points --
    table << "\nreference start points\n";
    const struct { const char* name; double alpha, beta; } pairs[] = {
        {"pair1", 0.33, 0.48}, {"pair2", 0.36, 0.44}};
    std::vector<double> four;
    for (const auto& pr : pairs) {
        RunConfig sub = cfg;
        sub.experiment.preset.clear();
        sub.experiment.sequence_path.clear();
        sub.experiment.sample = false;
        sub.experiment.phi_rad = 0.0;
        sub.experiment.alpha_override = pr.alpha;
        sub.experiment.beta_override = pr.beta;
        sub.output.dir = (root / "reference" / pr.name).string();
        sub.finalize();
        cmd_clone(sub);

        const auto rep = report_from_json(nlohmann::ordered_json::parse(
            read_file(root / "reference" / pr.name / "clone_report.json")));
        four.push_back(rep.f1);
        four.push_back(rep.f2);
        summary["reference"][pr.name] = {{"alpha", rep.alpha},
                                         {"beta", rep.beta},
                                         {"F1", rep.f1},
                                         {"F2", rep.f2},
                                         {"cerf_value", rep.cerf_value},
                                         {"beats_universal", rep.beats_universal}};
        table << "  " << pr.name << ": alpha = " << g9(rep.alpha) << ", beta = " << g9(rep.beta)
              << ", F1 = " << g9(rep.f1) << ", F2 = " << g9(rep.f2)
              << ", cerf = " << g9(rep.cerf_value)
              << (rep.beats_universal ? " (beats universal bound)" : "") << "\n";
    }
    const double mean4 = 0.25 * (four[0] + four[1] + four[2] + four[3]);
    summary["reference_mean_fidelity"] = g9_round(mean4);
    table << "  mean fidelity over the four copies = " << g9(mean4) << "\n";

    // -- wait-time sweep: output intensity stays flat over j * dt <= 2 us --
    table << "\nwait-time sweep\n";
    int dt_index = 0;
    for (const double dt_ns : {20.0, 50.0}) {
        const std::string key = "dt" + std::to_string(static_cast<int>(dt_ns));
        const Fig5Stats st = run_fig5(cfg, root / ("fig5_" + key), dt_ns,
                                      cfg.experiment.seed + 2 + static_cast<std::uint64_t>(dt_index));
        ++dt_index;
        summary["fig5"][key] = {{"points", st.points},
                                {"ideal_max_rel_dev", g9_round(st.ideal_max_rel_dev)},
                                {"sampled_std", g9_round(st.sampled_std)},
                                {"poisson_std", g9_round(st.poisson_std)}};
        table << "  dt = " << g9(dt_ns) << " ns: " << st.points
              << " points, ideal max rel dev = " << g9(st.ideal_max_rel_dev)
              << ", sampled std = " << g9(st.sampled_std)
              << ", poisson prediction = " << g9(st.poisson_std) << "\n";
    }

    summary["seed"] = cfg.experiment.seed;
    summary["config_digest"] = cfg.digest();
    write_file(root / "summary.json", json_text(summary));
    write_file(root / "summary.txt", table.str());
    std::cout << table.str();
    return 0;
}

// ------------------------------ Entry point ---------------------------------

const char* kConfigReference =
    "Configuration file sections and keys (INI 'key = value' lines):\n"
    "  [nv]          d_hz e_hz bx_t by_t bz_t gamma_e_hz_per_t rabi_mw1_hz rabi_mw2_hz\n"
    "                r0_cps r1_cps t2star_s omega_env_rad_s readout_window_s repetitions\n"
    "  [evolution]   path (ideal|lindblad) step_s init_fidelity dephasing_from_t2star\n"
    "                gamma_minus_rad_s gamma_zero_rad_s gamma_plus_rad_s\n"
    "  [experiment]  preset sequence phi_rad channel t_start_ns t_stop_ns t_points\n"
    "                f_start_hz f_stop_hz f_points esr_pulse_ns dt_ns j_max sample seed\n"
    "                repetitions alpha_override beta_override\n"
    "  [output]      dir plot_data\n";

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-level pulse simulator and equatorial-cloning analysis toolkit"};
    app.require_subcommand(1);
    app.footer(kConfigReference);

    std::string config_path, out_dir, mw1_path, mw2_path;
    bool plot_data = false;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed for sampling streams");
    app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
    app.add_flag("--plot-data", plot_data, "also write long-format plot CSVs");

    auto* rabi = app.add_subcommand("rabi", "calibration trace: rabi_ch<k>.csv + fit JSON");
    auto* esr = app.add_subcommand("esr", "spectrum scan: esr.csv");
    auto* clone = app.add_subcommand(
        "clone", "prep + clone + two tomography traces: clone_report.json, tomo_mw{1,2}.csv");
    auto* analyze = app.add_subcommand(
        "analyze", "analysis only: cloning report from existing tomography CSVs");
    auto* reproduce = app.add_subcommand(
        "reproduce", "full deterministic bundle: tomography presets, reference start-point "
                     "analysis, wait-time sweeps");
    for (auto* sub : {rabi, esr, clone, analyze, reproduce}) sub->fallthrough();
    analyze->add_option("--mw1", mw1_path, "first-channel tomography CSV")
        ->required()
        ->check(CLI::ExistingFile);
    analyze->add_option("--mw2", mw2_path, "second-channel tomography CSV")
        ->required()
        ->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_file(config_path);
        if (seed_opt->count() > 0) {
            cfg.experiment.seed = seed;
            cfg.experiment.has_seed = true;
        }
        if (!out_dir.empty()) cfg.output.dir = out_dir;
        if (plot_data) cfg.output.plot_data = true;
        cfg.finalize();

        if (rabi->parsed()) return cmd_rabi(cfg);
        if (esr->parsed()) return cmd_esr(cfg);
        if (clone->parsed()) return cmd_clone(cfg);
        if (analyze->parsed()) return cmd_analyze(cfg, mw1_path, mw2_path);
        return cmd_reproduce(cfg);
    } catch (const DegenerateInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NoOscillation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const EmptySubspace& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateCalibration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const IntegrationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidDensity& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateLevels& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CsvError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SemanticError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownPreset& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
