// cloning.hpp — logical layer: qutrit/two-qubit encoding, the ideal
// equatorial cloning map, tomography-based state reconstruction, closed-form
// per-copy fidelities, and the cloning-bound report.
//
// Logical basis order: {|00>, |01>, |10>, |11>}.  The economical cloner never
// populates |11>; every logical state carries that invariant.

#pragma once

#include <nvclone/format.hpp>
#include <nvclone/spin.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace nvclone {

using Eigen::Vector4cd;

struct DegenerateInput : std::invalid_argument { using std::invalid_argument::invalid_argument; };

// logical basis indices
inline constexpr int kIdx00 = 0;
inline constexpr int kIdx01 = 1;
inline constexpr int kIdx10 = 2;
inline constexpr int kIdx11 = 3;

// ------------------------------ Logical state -------------------------------

struct LogicalTwoQubitState {
    Vector4cd amps = Vector4cd::Zero();

    LogicalTwoQubitState() { amps(kIdx10) = 1.0; }  // image of |m=0>
    explicit LogicalTwoQubitState(const Vector4cd& a) : amps(a) {}

    Complex amp(int a, int b) const {
        if ((a != 0 && a != 1) || (b != 0 && b != 1))
            throw std::invalid_argument("LogicalTwoQubitState::amp: qubit values must be 0 or 1");
        return amps(2 * a + b);
    }

    double norm_sq() const { return amps.squaredNorm(); }

    // Normalized to 1e-12 with the |11> amplitude below 1e-12.
    void validate() const {
        if (std::abs(norm_sq() - 1.0) > 1e-12)
            throw std::invalid_argument("LogicalTwoQubitState: not normalized");
        if (std::abs(amps(kIdx11)) > 1e-12)
            throw std::invalid_argument("LogicalTwoQubitState: |11> amplitude exceeds 1e-12");
    }
};

// ------------------------------ Encoding ------------------------------------

// |m=-1> -> -i|00>,  |m=0> -> |10>,  |m=+1> -> -i|01>, extended linearly.
inline LogicalTwoQubitState decode(const QutritState& physical) {
    Vector4cd a = Vector4cd::Zero();
    a(kIdx00) = -kImag * physical.amps(kIdxMinus);
    a(kIdx01) = -kImag * physical.amps(kIdxPlus);
    a(kIdx10) = physical.amps(kIdxZero);
    return LogicalTwoQubitState{a};
}

// Inverse of decode; rejects states that leak into |11>.
inline QutritState encode(const LogicalTwoQubitState& logical) {
    if (std::abs(logical.amps(kIdx11)) > 1e-12)
        throw std::invalid_argument("encode: |11> amplitude exceeds 1e-12");
    Vector3cd a;
    a(kIdxMinus) = kImag * logical.amps(kIdx00);
    a(kIdxZero) = logical.amps(kIdx10);
    a(kIdxPlus) = kImag * logical.amps(kIdx01);
    return QutritState{a};
}

// ------------------------------ Cloning map ---------------------------------

// (1/sqrt(2))|00> + (1/2) e^{i phi} (|01> + |10>): both copies of an
// equatorial qubit at angle phi, produced by the optimal economical cloner.
inline LogicalTwoQubitState ideal_clone(double phi) {
    const Complex ph = std::exp(kImag * phi);
    Vector4cd a = Vector4cd::Zero();
    a(kIdx00) = 1.0 / std::sqrt(2.0);
    a(kIdx01) = 0.5 * ph;
    a(kIdx10) = 0.5 * ph;
    return LogicalTwoQubitState{a};
}

enum class Copy { A, B };  // A = first logical qubit, B = second

// Partial trace over the other qubit; Hermitian with unit trace.
inline Matrix2cd reduced_copy(const LogicalTwoQubitState& state, Copy which) {
    state.validate();
    const auto c = [&state](int a, int b) { return state.amps(2 * a + b); };
    Matrix2cd rho = Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                rho(i, j) += which == Copy::A ? c(i, k) * std::conj(c(j, k))
                                              : c(k, i) * std::conj(c(k, j));
    return rho;
}

// ------------------------------ Reconstruction ------------------------------

namespace detail {

inline double check_alpha_beta(double alpha, double beta, const char* who) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0))
        throw std::invalid_argument(std::string(who) + ": alpha and beta must lie in [0, 1]");
    const double n_sq = alpha + beta - alpha * beta;
    if (n_sq <= 1e-12)
        throw DegenerateInput(std::string(who) + ": alpha + beta - alpha*beta <= 1e-12");
    return n_sq;
}

}  // namespace detail

// Physical output state implied by the two tomography parameters:
//   (sqrt(alpha beta) e^{i phi} |m=0> + i sqrt((1-alpha) beta) |m=-1>
//    + i sqrt((1-beta) alpha) e^{i phi} |m=+1>) / sqrt(alpha + beta - alpha beta)
// phi is taken from preparation metadata; populations alone cannot fix it.
inline QutritState reconstruct(double alpha, double beta, double phi) {
    const double n = std::sqrt(detail::check_alpha_beta(alpha, beta, "reconstruct"));
    const Complex ph = std::exp(kImag * phi);
    Vector3cd a;
    a(kIdxMinus) = kImag * std::sqrt((1.0 - alpha) * beta) / n;
    a(kIdxZero) = std::sqrt(alpha * beta) * ph / n;
    a(kIdxPlus) = kImag * std::sqrt((1.0 - beta) * alpha) * ph / n;
    return QutritState{a};
}

// Closed forms for the equator-state fidelity of each reduced copy of the
// reconstructed state; phi drops out.  F1 belongs to the first logical qubit
// (the |10>/|m=0> branch), F2 to the second.
inline std::pair<double, double> copy_fidelities(double alpha, double beta) {
    const double n_sq = detail::check_alpha_beta(alpha, beta, "copy_fidelities");
    const double a = std::sqrt((1.0 - alpha) * beta);
    const double b = std::sqrt((1.0 - beta) * alpha);
    const double c = std::sqrt(alpha * beta);
    const double f1 = ((a + c) * (a + c) + alpha * (1.0 - beta)) / (2.0 * n_sq);
    const double f2 = ((a + b) * (a + b) + alpha * beta) / (2.0 * n_sq);
    return {f1, f2};
}

// ------------------------------ Bounds & report -----------------------------

struct CerfCheck {
    double value = 0.0;          // F1 + F2 - sqrt((1-F1)(1-F2))
    bool beats_universal = false;  // value > 3/2 rules out any universal cloner
};

inline CerfCheck cerf_check(double f1, double f2) {
    if (!(f1 >= 0.0 && f1 <= 1.0) || !(f2 >= 0.0 && f2 <= 1.0))
        throw std::invalid_argument("cerf_check: fidelities must lie in [0, 1]");
    const double value = f1 + f2 - std::sqrt((1.0 - f1) * (1.0 - f2));
    return {value, value > 1.5};
}

struct CloningBounds {
    double pc = 0.0;         // optimal equatorial 1->2 cloner, 1/2 + 1/(2 sqrt 2)
    double universal = 0.0;  // optimal universal 1->2 cloner, 5/6
};

inline CloningBounds bounds() {
    return {0.5 + 1.0 / (2.0 * std::sqrt(2.0)), 5.0 / 6.0};
}

struct CloningReport {
    double alpha = 0.0;
    double beta = 0.0;
    double phi = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
    double f_avg = 0.0;
    double pc_bound = 0.0;
    double universal_bound = 0.0;
    double cerf_value = 0.0;
    bool beats_universal = false;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// Full-precision report; f_avg is exactly (f1 + f2) / 2.  Rounding to the
// emitted 9 significant digits happens only at serialization.
inline CloningReport make_report(double alpha, double beta, double phi, std::uint64_t seed,
                                 std::string config_digest) {
    const auto [f1, f2] = copy_fidelities(alpha, beta);
    const CerfCheck cerf = cerf_check(f1, f2);
    const CloningBounds bd = bounds();
    CloningReport r;
    r.alpha = alpha;
    r.beta = beta;
    r.phi = phi;
    r.f1 = f1;
    r.f2 = f2;
    r.f_avg = 0.5 * (f1 + f2);
    r.pc_bound = bd.pc;
    r.universal_bound = bd.universal;
    r.cerf_value = cerf.value;
    r.beats_universal = cerf.beats_universal;
    r.seed = seed;
    r.config_digest = std::move(config_digest);
    return r;
}

// Stable key order and 9-significant-digit values; the emitted bytes are part
// of the determinism contract.
inline nlohmann::ordered_json report_to_json(const CloningReport& r) {
    nlohmann::ordered_json j;
    j["alpha"] = detail::g9_round(r.alpha);
    j["beta"] = detail::g9_round(r.beta);
    j["phi"] = detail::g9_round(r.phi);
    j["F1"] = detail::g9_round(r.f1);
    j["F2"] = detail::g9_round(r.f2);
    j["F_avg"] = detail::g9_round(r.f_avg);
    j["pc_bound"] = detail::g9_round(r.pc_bound);
    j["universal_bound"] = detail::g9_round(r.universal_bound);
    j["cerf_value"] = detail::g9_round(r.cerf_value);
    j["beats_universal"] = r.beats_universal;
    j["seed"] = r.seed;
    j["config_digest"] = r.config_digest;
    return j;
}

inline std::string report_json_text(const CloningReport& r) {
    return report_to_json(r).dump(2) + "\n";
}

inline CloningReport report_from_json(const nlohmann::ordered_json& j) {
    CloningReport r;
    r.alpha = j.at("alpha").get<double>();
    r.beta = j.at("beta").get<double>();
    r.phi = j.at("phi").get<double>();
    r.f1 = j.at("F1").get<double>();
    r.f2 = j.at("F2").get<double>();
    r.f_avg = j.at("F_avg").get<double>();
    r.pc_bound = j.at("pc_bound").get<double>();
    r.universal_bound = j.at("universal_bound").get<double>();
    r.cerf_value = j.at("cerf_value").get<double>();
    r.beats_universal = j.at("beats_universal").get<bool>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config_digest = j.at("config_digest").get<std::string>();
    return r;
}

}  // namespace nvclone
