// photonics.hpp — fluorescence readout model: count rates, calibration,
// normalization, Poisson-sampled Rabi traces, and the trace/spectrum CSV
// formats.
//
// The noiseless normalized signal of a readout equals the |0> population, so
// trace synthesis reduces to evolving the sequence per grid point and
// recording P0 (plus shot noise when sampling is on).

#pragma once

#include <nvclone/dynamics.hpp>
#include <nvclone/format.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <random>
#include <sstream>

namespace nvclone {

struct DegenerateCalibration : std::runtime_error { using std::runtime_error::runtime_error; };

struct CsvError : std::runtime_error {
    int line;
    explicit CsvError(const std::string& msg, int line_ = 0)
        : std::runtime_error(line_ > 0 ? "csv line " + std::to_string(line_) + ": " + msg : msg),
          line(line_) {}
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent per-point stream: counts at one grid index never depend on the
// rest of the grid.
inline std::mt19937_64 point_rng(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) + index));
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

inline double csv_number(const std::string& field, int line, const char* what) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw CsvError(std::string("expected ") + what + ", got '" + field + "'", line);
    return v;
}

}  // namespace detail

// ------------------------------ Readout model --------------------------------

// Mean emission rate in counts/s for a qutrit state.
inline double fluorescence_rate(const QutritDensity& rho, const NvParams& p) {
    return p.r0_cps * rho.population(0) +
           p.r1_cps * (rho.population(-1) + rho.population(+1));
}

// Reference count levels over one readout window, summed over repetitions.
struct ReadoutCalibration {
    double bright_counts = 0.0;  // all population in |0>
    double dark_counts = 0.0;    // all population in |+-1>

    void validate() const {
        if (!(bright_counts > 0.0))
            throw DegenerateCalibration("bright reference must be positive");
        if (bright_counts - dark_counts < 0.1 * bright_counts)
            throw DegenerateCalibration("bright/dark contrast below 10%");
    }
};

inline ReadoutCalibration calibrate(const NvParams& p, double window_s, long long reps) {
    ReadoutCalibration cal;
    cal.bright_counts = p.r0_cps * window_s * static_cast<double>(reps);
    cal.dark_counts = p.r1_cps * window_s * static_cast<double>(reps);
    cal.validate();
    return cal;
}

// Counts to normalized signal; clamped to [-0.05, 1.05] so shot noise at the
// rails cannot push fits far outside the physical range.
inline double normalize_signal(double counts, const ReadoutCalibration& cal) {
    cal.validate();
    const double x = (counts - cal.dark_counts) / (cal.bright_counts - cal.dark_counts);
    return std::clamp(x, -0.05, 1.05);
}

// One Poisson draw of the repetition-summed counts for reading out rho; uses
// the same per-point stream construction as trace sampling, so a draw at one
// index never depends on the rest of a sweep.
inline long long sample_readout(const QutritDensity& rho, const NvParams& p, double window_s,
                                long long reps, std::uint64_t seed, std::uint64_t index) {
    if (!(window_s > 0.0)) throw std::invalid_argument("readout window must be > 0");
    if (reps < 1) throw std::invalid_argument("repetitions must be >= 1");
    const double lambda = fluorescence_rate(rho, p) * window_s * static_cast<double>(reps);
    auto gen = detail::point_rng(seed, index);
    std::poisson_distribution<long long> poisson(lambda);
    return poisson(gen);
}

// ------------------------------ Rabi traces ----------------------------------

struct RabiTrace {
    std::vector<double> t_s;         // appended-pulse durations
    std::vector<double> expected;    // noiseless normalized signal (the |0> population)
    std::vector<long long> counts;   // Poisson-summed counts; empty when not sampled
    long long reps = 0;              // shots per point; 0 when not sampled

    bool sampled() const { return reps > 0; }

    // Signal the fitter consumes: normalized counts when sampled, else the
    // noiseless expectation.
    std::vector<double> signals(const ReadoutCalibration& cal) const {
        if (!sampled()) return expected;
        std::vector<double> s(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i)
            s[i] = normalize_signal(static_cast<double>(counts[i]), cal);
        return s;
    }

    // Inverse-variance weights up to a common factor (unit when noiseless).
    std::vector<double> weights() const {
        std::vector<double> w(t_s.size(), 1.0);
        if (sampled())
            for (std::size_t i = 0; i < counts.size(); ++i)
                w[i] = 1.0 / static_cast<double>(std::max<long long>(counts[i], 1));
        return w;
    }
};

// Tomography-style trace: drop the base sequence's final readout, append a
// drive of duration t on the probe channel, read out, repeat over the grid.
inline RabiTrace generate_rabi_trace(const PulseSequence& base, int channel,
                                     const std::vector<double>& t_grid_s, const NvParams& p,
                                     const EvolutionConfig& cfg = {}, bool sample = false,
                                     std::uint64_t seed = 0) {
    base.validate();
    if (channel != 1 && channel != 2) throw std::invalid_argument("probe channel must be 1 or 2");

    PulseSequence work = base;
    const double window_s = std::get<ReadoutOp>(work.ops.back()).window_s;
    work.ops.pop_back();
    const std::size_t probe_at = work.ops.size();
    work.ops.emplace_back(MwOp{channel, std::nullopt, 0.0, 0.0, 0.0});
    work.ops.emplace_back(ReadoutOp{window_s});
    work.name = base.name + "+probe";

    RabiTrace trace;
    trace.reps = sample ? p.repetitions : 0;
    const ReadoutCalibration cal = calibrate(p, window_s, sample ? p.repetitions : 1);

    for (std::size_t i = 0; i < t_grid_s.size(); ++i) {
        const double t = t_grid_s[i];
        if (t < 0.0) throw std::invalid_argument("trace durations must be >= 0");
        std::get<MwOp>(work.ops[probe_at]).duration_s = t;
        const auto res = evolve_sequence(work, p, cfg);
        const auto& rho = res.final_density();
        trace.t_s.push_back(t);
        trace.expected.push_back(rho.population(0));
        if (sample) {
            const double lambda = fluorescence_rate(rho, p) * window_s *
                                  static_cast<double>(p.repetitions);
            auto gen = detail::point_rng(seed, i);
            std::poisson_distribution<long long> poisson(lambda);
            trace.counts.push_back(poisson(gen));
        }
    }
    return trace;
}

// ------------------------------ ESR spectrum ---------------------------------

struct EsrSpectrum {
    std::vector<double> f_hz;
    std::vector<double> signal;  // normalized fluorescence, dips at resonance
};

// Two-level response of the nearer transition to a fixed-length probe pulse.
inline EsrSpectrum esr_spectrum(const std::vector<double>& f_grid_hz, const NvParams& p,
                                double pulse_s) {
    if (!(pulse_s > 0.0)) throw std::invalid_argument("esr pulse length must be > 0");
    const auto [f_minus, f_plus] = transition_frequencies(build_hamiltonian(p));

    EsrSpectrum spec;
    for (double f : f_grid_hz) {
        const bool lower = std::abs(f - f_minus) <= std::abs(f - f_plus);
        const double f0 = lower ? f_minus : f_plus;
        const double omega = kTwoPi * (lower ? p.rabi_mw1_hz : p.rabi_mw2_hz);
        const double dw = kTwoPi * (f - f0);
        const double lam = std::hypot(omega, dw);
        const double transfer =
            lam == 0.0 ? 0.0
                       : (omega * omega / (lam * lam)) * std::pow(std::sin(lam * pulse_s / 2.0), 2);
        spec.f_hz.push_back(f);
        spec.signal.push_back(1.0 - transfer);
    }
    return spec;
}

// ------------------------------ CSV formats ----------------------------------

// header: t_ns,expected,counts,reps   (counts empty and reps 0 when unsampled)
inline void write_trace_csv(std::ostream& os, const RabiTrace& trace) {
    os << "t_ns,expected,counts,reps\n";
    for (std::size_t i = 0; i < trace.t_s.size(); ++i) {
        os << detail::g9(trace.t_s[i] / kNsToS) << ',' << detail::g9(trace.expected[i]) << ',';
        if (trace.sampled()) os << trace.counts[i];
        os << ',' << trace.reps << '\n';
    }
}

inline RabiTrace parse_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw CsvError("empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t_ns,expected,counts,reps")
        throw CsvError("bad header '" + line + "'", 1);

    RabiTrace trace;
    int line_no = 1;
    bool first = true;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 4) throw CsvError("expected 4 fields", line_no);

        trace.t_s.push_back(detail::csv_number(fields[0], line_no, "t_ns") * kNsToS);
        const double expected = detail::csv_number(fields[1], line_no, "expected");
        trace.expected.push_back(expected);

        const bool has_counts = !fields[2].empty();
        const double reps = detail::csv_number(fields[3], line_no, "reps");
        if (reps < 0.0 || reps != std::floor(reps)) throw CsvError("reps must be a whole number >= 0", line_no);
        if (has_counts) {
            const double c = detail::csv_number(fields[2], line_no, "counts");
            if (c < 0.0 || c != std::floor(c)) throw CsvError("counts must be a whole number >= 0", line_no);
            if (reps <= 0.0) throw CsvError("sampled row needs reps > 0", line_no);
            trace.counts.push_back(static_cast<long long>(c));
        } else if (reps != 0.0) {
            throw CsvError("unsampled row must have reps 0", line_no);
        }

        if (first) {
            trace.reps = static_cast<long long>(reps);
            first = false;
        } else if (trace.reps != static_cast<long long>(reps) ||
                   has_counts != trace.sampled()) {
            throw CsvError("mixed sampled/unsampled rows", line_no);
        }
    }
    if (trace.t_s.empty()) throw CsvError("no data rows");
    return trace;
}

// header: f_hz,signal
inline void write_esr_csv(std::ostream& os, const EsrSpectrum& spec) {
    os << "f_hz,signal\n";
    for (std::size_t i = 0; i < spec.f_hz.size(); ++i)
        os << detail::g9(spec.f_hz[i]) << ',' << detail::g9(spec.signal[i]) << '\n';
}

inline EsrSpectrum parse_esr_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw CsvError("empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "f_hz,signal") throw CsvError("bad header '" + line + "'", 1);

    EsrSpectrum spec;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_row(line);
        if (fields.size() != 2) throw CsvError("expected 2 fields", line_no);
        spec.f_hz.push_back(detail::csv_number(fields[0], line_no, "f_hz"));
        spec.signal.push_back(detail::csv_number(fields[1], line_no, "signal"));
    }
    if (spec.f_hz.empty()) throw CsvError("no data rows");
    return spec;
}

}  // namespace nvclone
