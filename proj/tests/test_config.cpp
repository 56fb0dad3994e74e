// test_config.cpp — INI parsing, cross-field validation, derived grids, and
// the canonical-rendering/digest contract.

#include <catch_amalgamated.hpp>

#include <nvclone/config.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

using namespace nvclone;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Parse + finalize in one step for configs expected to be valid.
RunConfig load(const std::string& text) {
    RunConfig cfg = RunConfig::from_ini(text);
    cfg.finalize();
    return cfg;
}

int error_line(const std::string& text) {
    try {
        RunConfig::from_ini(text);
    } catch (const ConfigError& e) {
        return e.line;
    }
    return -1;
}

// Scratch file that removes itself; for from_file and sequence-path checks.
struct TempFile {
    std::filesystem::path path;
    TempFile(const std::string& name, const std::string& contents)
        : path(std::filesystem::temp_directory_path() / name) {
        std::ofstream out(path, std::ios::binary);
        out << contents;
    }
    ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
};

}  // namespace

TEST_CASE("defaults resolve to the documented experiment", "[config]") {
    RunConfig cfg;
    cfg.finalize();

    SECTION("physics defaults survive finalize") {
        CHECK_THAT(cfg.params.d_hz, WithinRel(2.87e9, 1e-12));
        CHECK_THAT(cfg.params.rabi_mw1_hz, WithinRel(2e6, 1e-12));
        CHECK(cfg.params.repetitions == 100000);
        CHECK(cfg.path == EvolutionPath::ideal);
        CHECK_THAT(cfg.step_s, WithinRel(5e-9, 1e-12));
        CHECK(cfg.effective_preset() == "fig3a");
        CHECK(cfg.output.dir == "out");
        CHECK_FALSE(cfg.output.plot_data);
        CHECK_FALSE(cfg.experiment.sample);
        CHECK_FALSE(cfg.experiment.has_seed);
    }

    SECTION("time grid is a uniform ns-pitch grid in seconds") {
        const auto t = cfg.time_grid_s();
        REQUIRE(t.size() == static_cast<std::size_t>(cfg.experiment.t_points));
        CHECK_THAT(t.front(), WithinAbs(0.0, 1e-18));
        CHECK_THAT(t.back(), WithinRel(5997.5e-9, 1e-12));
        CHECK_THAT(t[1] - t[0], WithinRel(2.5e-9, 1e-12));
        CHECK_THAT(t[1200] - t[1199], WithinRel(2.5e-9, 1e-9));
    }

    SECTION("frequency grid spans the ESR window") {
        const auto f = cfg.freq_grid_hz();
        REQUIRE(f.size() == 201);
        CHECK_THAT(f.front(), WithinRel(2.82e9, 1e-12));
        CHECK_THAT(f.back(), WithinRel(2.92e9, 1e-12));
        CHECK_THAT(f[1] - f[0], WithinRel(0.5e6, 1e-9));
    }

    SECTION("single-point grids collapse to the start value") {
        cfg.experiment.t_points = 1;
        cfg.experiment.t_start_ns = 40.0;
        const auto t = cfg.time_grid_s();
        REQUIRE(t.size() == 1);
        CHECK_THAT(t[0], WithinRel(40e-9, 1e-12));
    }

    SECTION("wait-sweep bound covers exactly 2 us unless overridden") {
        CHECK(cfg.fig5_j_max() == 100);  // dt = 20 ns
        cfg.experiment.dt_ns = 50.0;
        CHECK(cfg.fig5_j_max() == 40);
        cfg.experiment.dt_ns = 30.0;
        CHECK(cfg.fig5_j_max() == 66);
        cfg.experiment.j_max = 7;
        CHECK(cfg.fig5_j_max() == 7);
        cfg.experiment.j_max = 0;
        CHECK(cfg.fig5_j_max() == 0);
    }
}

TEST_CASE("ini text sets every documented key", "[config]") {
    const std::string text = R"(# full-line comment
; alternate comment style
[nv]
d_hz = 2.871e9
e_hz = 4e6
bx_t = 1e-4
by_t = 2e-4
bz_t = 3e-4
gamma_e_hz_per_t = 28e9
rabi_mw1_hz = 1.5e6
rabi_mw2_hz = 2.5e6
r0_cps = 31e3
r1_cps = 20e3
t2star_s = 2e-6
omega_env_rad_s = 5e6
readout_window_s = 400e-9
repetitions = 20000

[evolution]
path = lindblad
step_s = 2e-9
init_fidelity = 0.9
dephasing_from_t2star = false
gamma_minus_rad_s = 1e5
gamma_zero_rad_s = 0
gamma_plus_rad_s = 3e5

[experiment]
preset = fig3b
phi_rad = 0.25
channel = 2
t_start_ns = 10
t_stop_ns = 2010
t_points = 201
f_start_hz = 2.8e9
f_stop_hz = 2.9e9
f_points = 11
esr_pulse_ns = 300
dt_ns = 40
j_max = 12
sample = true
seed = 99
repetitions = 50000

[output]
dir = results
plot_data = true
)";
    RunConfig cfg = load(text);

    CHECK_THAT(cfg.params.d_hz, WithinRel(2.871e9, 1e-12));
    CHECK_THAT(cfg.params.e_hz, WithinRel(4e6, 1e-12));
    CHECK_THAT(cfg.params.b_field_t[0], WithinRel(1e-4, 1e-12));
    CHECK_THAT(cfg.params.b_field_t[1], WithinRel(2e-4, 1e-12));
    CHECK_THAT(cfg.params.b_field_t[2], WithinRel(3e-4, 1e-12));
    CHECK_THAT(cfg.params.gamma_e_hz_per_t, WithinRel(28e9, 1e-12));
    CHECK_THAT(cfg.params.rabi_mw1_hz, WithinRel(1.5e6, 1e-12));
    CHECK_THAT(cfg.params.rabi_mw2_hz, WithinRel(2.5e6, 1e-12));
    CHECK_THAT(cfg.params.r0_cps, WithinRel(31e3, 1e-12));
    CHECK_THAT(cfg.params.r1_cps, WithinRel(20e3, 1e-12));
    CHECK_THAT(cfg.params.t2star_s, WithinRel(2e-6, 1e-12));
    CHECK_THAT(cfg.params.omega_env_rad_s, WithinRel(5e6, 1e-12));
    CHECK_THAT(cfg.params.readout_window_s, WithinRel(400e-9, 1e-12));

    CHECK(cfg.path == EvolutionPath::lindblad);
    CHECK_THAT(cfg.step_s, WithinRel(2e-9, 1e-12));
    CHECK_THAT(cfg.init_fidelity, WithinRel(0.9, 1e-12));
    CHECK_FALSE(cfg.dephasing_from_t2star);
    REQUIRE(cfg.gamma_minus_rad_s.has_value());
    CHECK_THAT(*cfg.gamma_minus_rad_s, WithinRel(1e5, 1e-12));
    CHECK_THAT(*cfg.gamma_zero_rad_s, WithinAbs(0.0, 1e-18));
    CHECK_THAT(*cfg.gamma_plus_rad_s, WithinRel(3e5, 1e-12));

    CHECK(cfg.experiment.preset == "fig3b");
    CHECK(cfg.effective_preset() == "fig3b");
    CHECK_THAT(cfg.experiment.phi_rad, WithinRel(0.25, 1e-12));
    CHECK(cfg.experiment.channel == 2);
    CHECK_THAT(cfg.experiment.t_start_ns, WithinRel(10.0, 1e-12));
    CHECK_THAT(cfg.experiment.t_stop_ns, WithinRel(2010.0, 1e-12));
    CHECK(cfg.experiment.t_points == 201);
    CHECK(cfg.experiment.f_points == 11);
    CHECK_THAT(cfg.experiment.esr_pulse_ns, WithinRel(300.0, 1e-12));
    CHECK_THAT(cfg.experiment.dt_ns, WithinRel(40.0, 1e-12));
    CHECK(cfg.experiment.j_max == 12);
    CHECK(cfg.fig5_j_max() == 12);
    CHECK(cfg.experiment.sample);
    CHECK(cfg.experiment.has_seed);
    CHECK(cfg.experiment.seed == 99);

    CHECK(cfg.output.dir == "results");
    CHECK(cfg.output.plot_data);

    SECTION("experiment repetitions replace the readout default") {
        CHECK(cfg.params.repetitions == 50000);          // folded by finalize
        CHECK_FALSE(cfg.experiment.repetitions.has_value());
    }

    SECTION("explicit rates beat the t2star-derived ones") {
        const auto ev = cfg.evolution();
        CHECK_THAT(ev.dephasing_rates[0], WithinRel(1e5, 1e-12));
        CHECK_THAT(ev.dephasing_rates[1], WithinAbs(0.0, 1e-18));
        CHECK_THAT(ev.dephasing_rates[2], WithinRel(3e5, 1e-12));
    }

    SECTION("whitespace and CRLF endings are tolerated") {
        RunConfig crlf = load("[experiment]\r\n  channel   =   2  \r\n");
        CHECK(crlf.experiment.channel == 2);
    }
}

TEST_CASE("parse errors name the offending line", "[config]") {
    SECTION("unknown names") {
        CHECK(error_line("[bogus]\n") == 1);
        CHECK(error_line("\n\n[telemetry]\nx = 1\n") == 3);
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv]\nvolume = 11\n"),
                          ContainsSubstring("unknown key 'volume'"));
        CHECK(error_line("[nv]\nvolume = 11\n") == 2);
        CHECK(error_line("[evolution]\nsolver = rk4\n") == 2);
        CHECK(error_line("[experiment]\ngrid = fine\n") == 2);
        CHECK(error_line("[output]\nformat = hdf5\n") == 2);
    }

    SECTION("structural problems") {
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv\nd_hz = 1e9\n"),
                          ContainsSubstring("unterminated section header"));
        CHECK_THROWS_WITH(RunConfig::from_ini("d_hz = 1e9\n"),
                          ContainsSubstring("outside any [section]"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv]\nd_hz 2.87e9\n"),
                          ContainsSubstring("expected key = value"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv]\n= 2.87e9\n"),
                          ContainsSubstring("empty key"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv]\nd_hz =\n"),
                          ContainsSubstring("empty value"));
    }

    SECTION("duplicates are caught even across reopened sections") {
        const std::string text = "[nv]\nd_hz = 1e9\n[experiment]\nchannel = 1\n[nv]\nd_hz = 2e9\n";
        CHECK_THROWS_WITH(RunConfig::from_ini(text),
                          ContainsSubstring("duplicate key 'd_hz'"));
        CHECK(error_line(text) == 6);
    }

    SECTION("malformed values") {
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv]\nd_hz = fast\n"),
                          ContainsSubstring("expected a number"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv]\nd_hz = 2.87e\n"),
                          ContainsSubstring("expected a number"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[nv]\nd_hz = inf\n"),
                          ContainsSubstring("expected a number"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[experiment]\nt_points = 12.5\n"),
                          ContainsSubstring("expected an integer"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[experiment]\nsample = yes\n"),
                          ContainsSubstring("expected true or false"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[evolution]\npath = exact\n"),
                          ContainsSubstring("ideal or lindblad"));
        CHECK_THROWS_WITH(RunConfig::from_ini("[experiment]\nseed = -3\n"),
                          ContainsSubstring("seed must be >= 0"));
    }

    SECTION("comments and blank lines do not shift line numbers") {
        CHECK(error_line("# c\n\n; c\n[nv]\nd_hz = x\n") == 5);
    }
}

TEST_CASE("finalize enforces cross-field invariants", "[config]") {
    SECTION("experiment grid and channel bounds") {
        CHECK_THROWS_WITH(load("[experiment]\nchannel = 3\n"),
                          ContainsSubstring("channel must be 1 or 2"));
        CHECK_THROWS_WITH(load("[experiment]\nt_points = 0\n"),
                          ContainsSubstring("t_points must be >= 1"));
        CHECK_THROWS_WITH(load("[experiment]\nt_start_ns = -1\n"),
                          ContainsSubstring("t_start_ns must be >= 0"));
        CHECK_THROWS_WITH(load("[experiment]\nt_stop_ns = 0\n"),
                          ContainsSubstring("t_stop_ns must exceed t_start_ns"));
        CHECK_THROWS_WITH(load("[experiment]\nf_points = 0\n"),
                          ContainsSubstring("f_points must be >= 1"));
        CHECK_THROWS_WITH(load("[experiment]\nf_stop_hz = 1e9\n"),
                          ContainsSubstring("f_stop_hz must exceed f_start_hz"));
        CHECK_THROWS_WITH(load("[experiment]\nf_start_hz = -2.92e9\nf_stop_hz = -2.82e9\n"),
                          ContainsSubstring("f_start_hz must be > 0"));
        CHECK_THROWS_WITH(load("[experiment]\nesr_pulse_ns = 0\n"),
                          ContainsSubstring("esr_pulse_ns must be > 0"));
        CHECK_THROWS_WITH(load("[experiment]\ndt_ns = -20\n"),
                          ContainsSubstring("dt_ns must be > 0"));
        // A single-point grid needs no stop > start.
        CHECK_NOTHROW(load("[experiment]\nt_points = 1\nt_stop_ns = 0\n"));
    }

    SECTION("sampling requires a seed") {
        CHECK_THROWS_WITH(load("[experiment]\nsample = true\n"),
                          ContainsSubstring("sampling requires a seed"));
        CHECK_NOTHROW(load("[experiment]\nsample = true\nseed = 1\n"));
    }

    SECTION("start-point overrides come as a valid pair") {
        CHECK_THROWS_WITH(load("[experiment]\nalpha_override = 0.33\n"),
                          ContainsSubstring("must be set together"));
        CHECK_THROWS_WITH(load("[experiment]\nbeta_override = 0.48\n"),
                          ContainsSubstring("must be set together"));
        CHECK_THROWS_WITH(load("[experiment]\nalpha_override = 1.2\nbeta_override = 0.5\n"),
                          ContainsSubstring("lie in [0, 1]"));
        CHECK_THROWS_WITH(load("[experiment]\nalpha_override = 0\nbeta_override = 0\n"),
                          ContainsSubstring("degenerate"));
        CHECK_NOTHROW(load("[experiment]\nalpha_override = 0.33\nbeta_override = 0.48\n"));
    }

    SECTION("preset and sequence are mutually exclusive") {
        TempFile seq("nvclone_cfg_test.seq", "init\nreadout 300\n");
        CHECK_THROWS_WITH(
            load("[experiment]\npreset = fig3a\nsequence = " + seq.path.string() + "\n"),
            ContainsSubstring("mutually exclusive"));
        CHECK_THROWS_WITH(load("[experiment]\nsequence = /no/such/file.seq\n"),
                          ContainsSubstring("sequence file not found"));
        RunConfig cfg = load("[experiment]\nsequence = " + seq.path.string() + "\n");
        CHECK(cfg.effective_preset().empty());
    }

    SECTION("physics validation failures surface as ConfigError") {
        CHECK_THROWS_AS(load("[nv]\nr0_cps = -1\n"), ConfigError);
        CHECK_THROWS_AS(load("[nv]\nt2star_s = 0\n"), ConfigError);
        CHECK_THROWS_AS(load("[evolution]\nstep_s = 0\n"), ConfigError);
        CHECK_THROWS_AS(load("[evolution]\ninit_fidelity = 1.5\n"), ConfigError);
        CHECK_THROWS_AS(load("[experiment]\nrepetitions = 0\n"), ConfigError);
        CHECK_THROWS_AS(load("[evolution]\ngamma_minus_rad_s = -1\npath = lindblad\n"),
                        ConfigError);
    }
}

TEST_CASE("canonical rendering backs a stable digest", "[config]") {
    RunConfig base = load("");

    SECTION("rendering is deterministic and names the resolved experiment") {
        const std::string a = base.canonical_ini();
        CHECK(a == base.canonical_ini());
        CHECK(a.rfind("[nv]\n", 0) == 0);
        CHECK_THAT(a, ContainsSubstring("preset = fig3a"));
        CHECK_THAT(a, ContainsSubstring("j_max = 100"));
        CHECK_THAT(a, ContainsSubstring("repetitions = 100000"));
        // The ideal path carries no dephasing.
        CHECK_THAT(a, ContainsSubstring("gamma_minus_rad_s = 0"));
        CHECK_THAT(a, !ContainsSubstring("[output]"));
    }

    SECTION("digest is 16 hex chars and ignores the output section") {
        const std::string d = base.digest();
        REQUIRE(d.size() == 16);
        CHECK(d.find_first_not_of("0123456789abcdef") == std::string::npos);

        RunConfig moved = load("[output]\ndir = elsewhere\nplot_data = true\n");
        CHECK(moved.digest() == d);
    }

    SECTION("any physics change moves the digest") {
        const std::string d = base.digest();
        CHECK(load("[nv]\nd_hz = 2.8701e9\n").digest() != d);
        CHECK(load("[experiment]\nt_points = 2401\n").digest() != d);
        CHECK(load("[experiment]\nseed = 5\n").digest() != d);
        CHECK(load("[experiment]\nsample = true\nseed = 0\n").digest() !=
              load("[experiment]\nseed = 0\n").digest());
        CHECK(load("[evolution]\npath = lindblad\n").digest() != d);
    }

    SECTION("t2star-derived rates appear once the lindblad path is chosen") {
        RunConfig lb = load("[evolution]\npath = lindblad\n");
        CHECK_THAT(lb.canonical_ini(), ContainsSubstring("gamma_minus_rad_s = 2000000"));
        RunConfig off = load("[evolution]\npath = lindblad\ndephasing_from_t2star = false\n");
        CHECK_THAT(off.canonical_ini(), ContainsSubstring("gamma_minus_rad_s = 0"));
    }

    SECTION("override pair is part of the physics") {
        RunConfig ov = load("[experiment]\nalpha_override = 0.33\nbeta_override = 0.48\n");
        CHECK_THAT(ov.canonical_ini(), ContainsSubstring("alpha_override = 0.33"));
        CHECK(ov.digest() != base.digest());
    }
}

TEST_CASE("config files round-trip through the loader", "[config]") {
    const std::string text = "[experiment]\npreset = fig3c\nphi_rad = 3.14159\n";
    TempFile file("nvclone_cfg_roundtrip.ini", text);

    RunConfig from_disk = RunConfig::from_file(file.path.string());
    from_disk.finalize();
    CHECK(from_disk.experiment.preset == "fig3c");
    CHECK(from_disk.digest() == load(text).digest());

    CHECK_THROWS_WITH(RunConfig::from_file("/no/such/config.ini"),
                      ContainsSubstring("cannot open config file"));
}
