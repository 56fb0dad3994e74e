// pulse.hpp — pulse-sequence IR, the line-oriented .seq parser, and the
// built-in experiment presets.
//
// Statement grammar (one per line, '#' starts a comment):
//   init
//   mw <1|2> angle=<deg> phase=<deg> [detuning=<Hz>]
//   mw <1|2> dur=<ns> phase=<deg> [detuning=<Hz>]
//   wait <ns>
//   readout <ns>
// Angles/phases are stored in radians, durations in seconds, detunings in Hz.

#pragma once

#include <nvclone/spin.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nvclone {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kNsToS = 1e-9;

struct SyntaxError : std::runtime_error {
    int line, col;
    SyntaxError(int line_, int col_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                             ": " + msg),
          line(line_), col(col_) {}
};

struct SemanticError : std::runtime_error {
    int line;  // 0 = whole-sequence violation
    explicit SemanticError(const std::string& msg, int line_ = 0)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
          line(line_) {}
};

struct UnknownPreset : std::runtime_error { using std::runtime_error::runtime_error; };

// ------------------------------ Operations ----------------------------------

struct InitOp {};

struct MwOp {
    int channel = 1;                       // 1 drives 0<->-1, 2 drives 0<->+1
    std::optional<double> angle_rad;       // exactly one of angle/duration is set
    std::optional<double> duration_s;
    double phase_rad = 0.0;
    double detuning_hz = 0.0;
};

struct WaitOp {
    double duration_s = 0.0;
};

struct ReadoutOp {
    double window_s = 300e-9;
};

using PulseOp = std::variant<InitOp, MwOp, WaitOp, ReadoutOp>;

struct PulseSequence {
    std::string name;
    std::vector<PulseOp> ops;

    // begins with Init, ends with Readout, no Mw after any Readout,
    // plus the per-op field invariants.
    void validate() const {
        if (ops.empty() || !std::holds_alternative<InitOp>(ops.front()))
            throw SemanticError("sequence must begin with init");
        if (!std::holds_alternative<ReadoutOp>(ops.back()))
            throw SemanticError("sequence must end with readout");
        bool seen_readout = false;
        for (const auto& op : ops) {
            if (std::holds_alternative<ReadoutOp>(op)) {
                if (std::get<ReadoutOp>(op).window_s < 0.0)
                    throw SemanticError("readout window must be >= 0");
                seen_readout = true;
            } else if (const auto* mw = std::get_if<MwOp>(&op)) {
                if (seen_readout) throw SemanticError("mw not allowed after readout");
                if (mw->channel != 1 && mw->channel != 2)
                    throw SemanticError("mw channel must be 1 or 2");
                if (mw->angle_rad.has_value() == mw->duration_s.has_value())
                    throw SemanticError("mw requires exactly one of angle/dur");
                if (mw->duration_s && *mw->duration_s < 0.0)
                    throw SemanticError("mw duration must be >= 0");
            } else if (const auto* w = std::get_if<WaitOp>(&op)) {
                if (w->duration_s < 0.0) throw SemanticError("wait duration must be >= 0");
            }
        }
    }

    std::size_t readout_count() const {
        std::size_t n = 0;
        for (const auto& op : ops) n += std::holds_alternative<ReadoutOp>(op) ? 1 : 0;
        return n;
    }
};

inline bool structurally_equal(const PulseSequence& a, const PulseSequence& b, double rtol = 1e-12) {
    auto close = [rtol](double x, double y) {
        return std::abs(x - y) <= rtol * std::max({1.0, std::abs(x), std::abs(y)});
    };
    if (a.ops.size() != b.ops.size()) return false;
    for (std::size_t i = 0; i < a.ops.size(); ++i) {
        if (a.ops[i].index() != b.ops[i].index()) return false;
        if (const auto* ma = std::get_if<MwOp>(&a.ops[i])) {
            const auto& mb = std::get<MwOp>(b.ops[i]);
            if (ma->channel != mb.channel) return false;
            if (ma->angle_rad.has_value() != mb.angle_rad.has_value()) return false;
            if (ma->angle_rad && !close(*ma->angle_rad, *mb.angle_rad)) return false;
            if (ma->duration_s && !close(*ma->duration_s, *mb.duration_s)) return false;
            if (!close(ma->phase_rad, mb.phase_rad) || !close(ma->detuning_hz, mb.detuning_hz))
                return false;
        } else if (const auto* wa = std::get_if<WaitOp>(&a.ops[i])) {
            if (!close(wa->duration_s, std::get<WaitOp>(b.ops[i]).duration_s)) return false;
        } else if (const auto* ra = std::get_if<ReadoutOp>(&a.ops[i])) {
            if (!close(ra->window_s, std::get<ReadoutOp>(b.ops[i]).window_s)) return false;
        }
    }
    return true;
}

// ------------------------------ Parser --------------------------------------

namespace detail {

struct Token {
    std::string text;
    int col;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) { ++i; continue; }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return out;
}

inline double parse_number(const Token& tok, int line, const char* what) {
    const char* begin = tok.text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw SyntaxError(line, tok.col, std::string("expected ") + what + ", got '" + tok.text + "'");
    return v;
}

}  // namespace detail

inline PulseSequence parse_sequence(std::string_view text, std::string name = "seq") {
    PulseSequence seq;
    seq.name = std::move(name);

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        const auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        const auto& kw = toks[0];

        auto expect_argc = [&](std::size_t n, const char* usage) {
            if (toks.size() != n)
                throw SyntaxError(line_no,
                                  toks.size() > n ? toks[n].col : kw.col,
                                  std::string("expected '") + usage + "'");
        };

        if (kw.text == "init") {
            expect_argc(1, "init");
            seq.ops.emplace_back(InitOp{});
        } else if (kw.text == "wait") {
            expect_argc(2, "wait <ns>");
            const double ns = detail::parse_number(toks[1], line_no, "duration in ns");
            if (ns < 0.0) throw SemanticError("wait duration must be >= 0", line_no);
            seq.ops.emplace_back(WaitOp{ns * kNsToS});
        } else if (kw.text == "readout") {
            expect_argc(2, "readout <ns>");
            const double ns = detail::parse_number(toks[1], line_no, "window in ns");
            if (ns < 0.0) throw SemanticError("readout window must be >= 0", line_no);
            seq.ops.emplace_back(ReadoutOp{ns * kNsToS});
        } else if (kw.text == "mw") {
            if (toks.size() < 2)
                throw SyntaxError(line_no, kw.col, "expected 'mw <1|2> ...'");
            if (toks[1].text != "1" && toks[1].text != "2")
                throw SyntaxError(line_no, toks[1].col, "expected channel '1' or '2', got '" + toks[1].text + "'");
            MwOp mw;
            mw.channel = toks[1].text == "1" ? 1 : 2;
            bool have_phase = false;
            for (std::size_t i = 2; i < toks.size(); ++i) {
                const auto eq = toks[i].text.find('=');
                if (eq == std::string::npos)
                    throw SyntaxError(line_no, toks[i].col,
                                      "expected key=value (angle=, dur=, phase=, detuning="
                                      "), got '" + toks[i].text + "'");
                const std::string key = toks[i].text.substr(0, eq);
                const detail::Token val{toks[i].text.substr(eq + 1), toks[i].col + static_cast<int>(eq) + 1};
                if (key == "angle") {
                    if (mw.angle_rad) throw SemanticError("duplicate angle=", line_no);
                    mw.angle_rad = detail::parse_number(val, line_no, "angle in deg") * kDegToRad;
                } else if (key == "dur") {
                    if (mw.duration_s) throw SemanticError("duplicate dur=", line_no);
                    const double ns = detail::parse_number(val, line_no, "duration in ns");
                    if (ns < 0.0) throw SemanticError("mw duration must be >= 0", line_no);
                    mw.duration_s = ns * kNsToS;
                } else if (key == "phase") {
                    if (have_phase) throw SemanticError("duplicate phase=", line_no);
                    mw.phase_rad = detail::parse_number(val, line_no, "phase in deg") * kDegToRad;
                    have_phase = true;
                } else if (key == "detuning") {
                    mw.detuning_hz = detail::parse_number(val, line_no, "detuning in Hz");
                } else {
                    throw SyntaxError(line_no, toks[i].col,
                                      "unknown key '" + key + "', expected angle/dur/phase/detuning");
                }
            }
            if (mw.angle_rad && mw.duration_s)
                throw SemanticError("both angle and dur given", line_no);
            if (!mw.angle_rad && !mw.duration_s)
                throw SemanticError("mw requires angle= or dur=", line_no);
            if (!have_phase) throw SemanticError("mw requires phase=", line_no);
            seq.ops.emplace_back(mw);
        } else {
            throw SyntaxError(line_no, kw.col,
                              "unknown statement '" + kw.text + "', expected init/mw/wait/readout");
        }
    }

    seq.validate();
    return seq;
}

// Canonical text form; parse(render(s)) is structurally equal to s.
inline std::string render(const PulseSequence& seq) {
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::string out;
    for (const auto& op : seq.ops) {
        if (std::holds_alternative<InitOp>(op)) {
            out += "init\n";
        } else if (const auto* mw = std::get_if<MwOp>(&op)) {
            out += "mw " + std::to_string(mw->channel);
            if (mw->angle_rad) out += " angle=" + num(*mw->angle_rad / kDegToRad);
            else out += " dur=" + num(*mw->duration_s / kNsToS);
            out += " phase=" + num(mw->phase_rad / kDegToRad);
            if (mw->detuning_hz != 0.0) out += " detuning=" + num(mw->detuning_hz);
            out += "\n";
        } else if (const auto* w = std::get_if<WaitOp>(&op)) {
            out += "wait " + num(w->duration_s / kNsToS) + "\n";
        } else {
            out += "readout " + num(std::get<ReadoutOp>(op).window_s / kNsToS) + "\n";
        }
    }
    return out;
}

// ------------------------------ Presets -------------------------------------

// init; MW1(prep_angle, prep_phase); [wait]; MW2(pi/2, 0); readout
inline PulseSequence clone_sequence(double prep_angle_rad, double prep_phase_rad,
                                    std::optional<double> wait_s, double window_s,
                                    std::string name) {
    PulseSequence seq;
    seq.name = std::move(name);
    seq.ops.emplace_back(InitOp{});
    seq.ops.emplace_back(MwOp{1, prep_angle_rad, std::nullopt, prep_phase_rad, 0.0});
    if (wait_s) seq.ops.emplace_back(WaitOp{*wait_s});
    seq.ops.emplace_back(MwOp{2, kPi / 2.0, std::nullopt, 0.0, 0.0});
    seq.ops.emplace_back(ReadoutOp{window_s});
    seq.validate();
    return seq;
}

// Tomography channel associated with the fig3 presets: a/c read MW1, b/d MW2.
inline int preset_tomo_channel(const std::string& name) {
    if (name == "fig3a" || name == "fig3c") return 1;
    if (name == "fig3b" || name == "fig3d") return 2;
    throw UnknownPreset("preset_tomo_channel: " + name);
}

// Named sequences. fig3a/b share one op list (they differ in the tomography
// channel only), as do fig3c/d; "-clone" aliases name the same op lists.
inline PulseSequence preset(const std::string& name, double window_s = 300e-9) {
    const auto base = [&](const std::string& n) {
        const auto dash = n.find("-clone");
        return dash == std::string::npos ? n : n.substr(0, dash);
    }(name);

    if (base == "fig3a" || base == "fig3b")
        return clone_sequence(kPi / 2.0, 0.0, std::nullopt, window_s, name);
    if (base == "fig3c" || base == "fig3d")
        return clone_sequence(3.0 * kPi / 2.0, 0.0, std::nullopt, window_s, name);
    if (base == "rabi-cal") {
        PulseSequence seq;
        seq.name = name;
        seq.ops.emplace_back(InitOp{});
        seq.ops.emplace_back(ReadoutOp{window_s});
        return seq;
    }
    throw UnknownPreset("unknown preset '" + name + "'");
}

// Waits j*dt between preparation and cloning pulse (j=0 keeps a 0-length wait).
inline PulseSequence preset_fig5(int j, double dt_s, double prep_phase_rad = 0.0,
                                 double window_s = 300e-9) {
    if (j < 0 || dt_s < 0.0) throw std::invalid_argument("preset_fig5: j and dt must be >= 0");
    return clone_sequence(kPi / 2.0, prep_phase_rad, j * dt_s, window_s,
                          "fig5[j=" + std::to_string(j) + "]");
}

// Single detuned pulse of fixed length, as swept by an ESR scan.
inline PulseSequence preset_esr(double detuning_hz, double pulse_s, double window_s = 300e-9) {
    PulseSequence seq;
    seq.name = "esr";
    seq.ops.emplace_back(InitOp{});
    seq.ops.emplace_back(MwOp{1, std::nullopt, pulse_s, 0.0, detuning_hz});
    seq.ops.emplace_back(ReadoutOp{window_s});
    seq.validate();
    return seq;
}

}  // namespace nvclone
