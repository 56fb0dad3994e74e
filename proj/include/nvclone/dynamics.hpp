// dynamics.hpp — time evolution of pulse sequences on the qutrit, either as
// exact rotating-frame unitaries (ideal path) or as a Lindblad master
// equation with per-level dephasing (lindblad path).
//
// Frame conventions: microwave pulses act in the frame rotating with their
// own carrier, so a resonant pulse of nominal angle theta is the rotation
//   |0>  ->  cos(theta/2)|0> + i e^{+i phi} sin(theta/2)|s>
//   |s>  ->  i e^{-i phi} sin(theta/2)|0> + cos(theta/2)|s>
// with s = -1 for channel 1 and s = +1 for channel 2.  Between pulses the
// |-1> amplitude advances as e^{+i omega_env t} relative to |0> and |+1>.

#pragma once

#include <nvclone/pulse.hpp>
#include <nvclone/spin.hpp>

#include <array>

namespace nvclone {

struct IntegrationError : std::runtime_error { using std::runtime_error::runtime_error; };

enum class EvolutionPath { ideal, lindblad };

struct EvolutionConfig {
    EvolutionPath path = EvolutionPath::ideal;
    double integrator_step_s = 5e-9;
    std::array<double, 3> dephasing_rates{0.0, 0.0, 0.0};  // 1/s, level order (-1, 0, +1)
    double init_fidelity = 1.0;

    // step must resolve the fastest drive; the ideal path is pure-state only.
    void validate(const NvParams& p) const {
        if (!(integrator_step_s > 0.0))
            throw std::invalid_argument("integrator step must be > 0");
        const double max_rabi = std::max(p.rabi_mw1_hz, p.rabi_mw2_hz);
        if (integrator_step_s > 1.0 / (10.0 * max_rabi))
            throw std::invalid_argument("integrator step too coarse for the Rabi rate");
        for (double g : dephasing_rates)
            if (g < 0.0 || !std::isfinite(g))
                throw std::invalid_argument("dephasing rates must be >= 0");
        if (init_fidelity < 0.0 || init_fidelity > 1.0)
            throw std::invalid_argument("init_fidelity must lie in [0, 1]");
        if (path == EvolutionPath::ideal && init_fidelity != 1.0)
            throw std::invalid_argument("ideal path requires init_fidelity = 1");
    }

    // Rates reproducing |rho_{0,+-1}| ~ e^{-t/T2*} during free evolution.
    static EvolutionConfig lindblad_from_t2star(const NvParams& p) {
        EvolutionConfig cfg;
        cfg.path = EvolutionPath::lindblad;
        cfg.dephasing_rates = {2.0 / p.t2star_s, 0.0, 2.0 / p.t2star_s};
        return cfg;
    }
};

// ------------------------------ Propagators ---------------------------------

// Resonant rotation by theta about the phi-axis of the {|0>,|s>} Bloch sphere.
inline Eigen::Matrix3cd mw_rotation(int channel, double theta, double phi) {
    if (channel != 1 && channel != 2) throw std::invalid_argument("mw channel must be 1 or 2");
    const int s = channel == 1 ? kIdxMinus : kIdxPlus;
    const double c = std::cos(theta / 2.0), sn = std::sin(theta / 2.0);
    Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
    u(kIdxZero, kIdxZero) = c;
    u(s, s) = c;
    u(s, kIdxZero) = kImag * std::exp(kImag * phi) * sn;
    u(kIdxZero, s) = kImag * std::exp(-kImag * phi) * sn;
    return u;
}

// Exact propagator for a drive of fixed duration detuned by detuning_hz from
// the channel resonance.  Reduces to mw_rotation(theta = 2*pi*rabi*t) when the
// detuning vanishes.
inline Eigen::Matrix3cd mw_propagator(int channel, double duration_s, double phi,
                                      double detuning_hz, double rabi_hz) {
    if (channel != 1 && channel != 2) throw std::invalid_argument("mw channel must be 1 or 2");
    const int s = channel == 1 ? kIdxMinus : kIdxPlus;
    const double omega = kTwoPi * rabi_hz;    // rad/s
    const double delta = kTwoPi * detuning_hz;
    const double lambda = std::hypot(omega, delta);

    Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
    const double half = lambda * duration_s / 2.0;
    const Complex global = std::exp(-kImag * (delta * duration_s / 2.0));
    if (lambda == 0.0) return u;  // no drive, no detuning

    const double c = std::cos(half), sn = std::sin(half);
    const Complex off = kImag * sn * (omega / lambda);
    u(kIdxZero, kIdxZero) = global * (c + kImag * sn * (delta / lambda));
    u(s, s) = global * (c - kImag * sn * (delta / lambda));
    u(s, kIdxZero) = global * off * std::exp(kImag * phi);
    u(kIdxZero, s) = global * off * std::exp(-kImag * phi);
    return u;
}

// Free evolution: the |-1> amplitude advances by omega_rad_s * t.
inline Eigen::Matrix3cd free_evolution(double omega_rad_s, double duration_s) {
    Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
    u(kIdxMinus, kIdxMinus) = std::exp(kImag * (omega_rad_s * duration_s));
    return u;
}

// ------------------------------ Lindblad path -------------------------------

namespace detail {

// drho/dt = -i[H, rho] + sum_k gamma_k (P_k rho P_k - 1/2 {P_k, rho})
inline Eigen::Matrix3cd lindblad_derivative(const Eigen::Matrix3cd& h,
                                            const std::array<double, 3>& gamma,
                                            const Eigen::Matrix3cd& rho) {
    Eigen::Matrix3cd d = -kImag * (h * rho - rho * h);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
            if (j == k) continue;
            d(j, k) -= 0.5 * (gamma[j] + gamma[k]) * rho(j, k);
        }
    return d;
}

// Fixed-step RK4 over [0, t]; the step count is rounded up so the grid lands
// exactly on t.  Trace is checked every step; divergence raises
// IntegrationError.
inline void integrate_lindblad(Eigen::Matrix3cd& rho, const Eigen::Matrix3cd& h,
                               const std::array<double, 3>& gamma, double t,
                               double max_step) {
    if (t <= 0.0) return;
    const int n = static_cast<int>(std::ceil(t / max_step));
    const double dt = t / n;
    for (int i = 0; i < n; ++i) {
        const Eigen::Matrix3cd k1 = lindblad_derivative(h, gamma, rho);
        const Eigen::Matrix3cd k2 = lindblad_derivative(h, gamma, rho + 0.5 * dt * k1);
        const Eigen::Matrix3cd k3 = lindblad_derivative(h, gamma, rho + 0.5 * dt * k2);
        const Eigen::Matrix3cd k4 = lindblad_derivative(h, gamma, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (!(drift <= 1e-6))
            throw IntegrationError("trace drift " + std::to_string(drift) +
                                   " exceeds 1e-6; reduce the integrator step");
    }
    rho = 0.5 * (rho + rho.adjoint().eval());  // scrub round-off asymmetry
}

// Drive Hamiltonian of a pulse in its own rotating frame (rad/s):
//   H = 2 pi detuning |s><s| - Omega/2 (e^{i phi}|s><0| + e^{-i phi}|0><s|)
inline Eigen::Matrix3cd mw_hamiltonian(int channel, double phi, double detuning_hz,
                                       double rabi_hz) {
    const int s = channel == 1 ? kIdxMinus : kIdxPlus;
    const double omega = kTwoPi * rabi_hz;
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(s, s) = kTwoPi * detuning_hz;
    h(s, kIdxZero) = -0.5 * omega * std::exp(kImag * phi);
    h(kIdxZero, s) = -0.5 * omega * std::exp(-kImag * phi);
    return h;
}

}  // namespace detail

// Master-equation evolution of an arbitrary density under a fixed Hamiltonian
// (rad/s) and per-level dephasing rates, outside any pulse sequence.
inline QutritDensity lindblad_evolve(const QutritDensity& rho0, const Eigen::Matrix3cd& h_rad,
                                     const std::array<double, 3>& dephasing_rates, double t_s,
                                     double step_s) {
    if (!(step_s > 0.0)) throw std::invalid_argument("lindblad_evolve: step must be > 0");
    if (t_s < 0.0) throw std::invalid_argument("lindblad_evolve: duration must be >= 0");
    for (double g : dephasing_rates)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw std::invalid_argument("lindblad_evolve: rates must be finite and >= 0");
    rho0.validate();
    Eigen::Matrix3cd rho = rho0.rho;
    detail::integrate_lindblad(rho, h_rad, dephasing_rates, t_s, step_s);
    return QutritDensity{rho};
}

// ------------------------------ Sequence driver -----------------------------

struct EvolutionResult {
    // State at each Readout op, in sequence order.  readout_states is filled
    // on the ideal path only (global phases intact).
    std::vector<QutritDensity> readouts;
    std::vector<QutritState> readout_states;

    const QutritDensity& final_density() const {
        if (readouts.empty()) throw std::logic_error("no readouts recorded");
        return readouts.back();
    }
    const QutritState& final_state() const {
        if (readout_states.empty()) throw std::logic_error("no pure states recorded");
        return readout_states.back();
    }
};

inline EvolutionResult evolve_sequence(const PulseSequence& seq, const NvParams& p,
                                       const EvolutionConfig& cfg = {}) {
    seq.validate();
    p.validate();
    cfg.validate(p);

    EvolutionResult out;

    if (cfg.path == EvolutionPath::ideal) {
        QutritState psi = QutritState::basis_state(0);
        for (const auto& op : seq.ops) {
            if (std::holds_alternative<InitOp>(op)) {
                psi = QutritState::basis_state(0);
            } else if (const auto* mw = std::get_if<MwOp>(&op)) {
                const double rabi = mw->channel == 1 ? p.rabi_mw1_hz : p.rabi_mw2_hz;
                if (mw->angle_rad && mw->detuning_hz == 0.0) {
                    psi.amps = mw_rotation(mw->channel, *mw->angle_rad, mw->phase_rad) * psi.amps;
                } else {
                    // nominal angle sets the duration; sign flips fold into the phase
                    double t = mw->duration_s ? *mw->duration_s : *mw->angle_rad / (kTwoPi * rabi);
                    double phi = mw->phase_rad;
                    if (t < 0.0) { t = -t; phi += kPi; }
                    psi.amps = mw_propagator(mw->channel, t, phi, mw->detuning_hz, rabi) * psi.amps;
                }
            } else if (const auto* w = std::get_if<WaitOp>(&op)) {
                psi.amps = free_evolution(p.omega_env_rad_s, w->duration_s) * psi.amps;
            } else {
                out.readout_states.push_back(psi);
                out.readouts.push_back(QutritDensity::from_pure(psi));
            }
        }
        return out;
    }

    // lindblad path
    Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();
    auto reset = [&] {
        const double f = cfg.init_fidelity;
        rho = Eigen::Matrix3cd::Zero();
        rho(kIdxZero, kIdxZero) = f;
        rho(kIdxMinus, kIdxMinus) = 0.5 * (1.0 - f);
        rho(kIdxPlus, kIdxPlus) = 0.5 * (1.0 - f);
    };
    reset();
    for (const auto& op : seq.ops) {
        if (std::holds_alternative<InitOp>(op)) {
            reset();
        } else if (const auto* mw = std::get_if<MwOp>(&op)) {
            const double rabi = mw->channel == 1 ? p.rabi_mw1_hz : p.rabi_mw2_hz;
            double t = mw->duration_s ? *mw->duration_s : *mw->angle_rad / (kTwoPi * rabi);
            double phi = mw->phase_rad;
            if (t < 0.0) { t = -t; phi += kPi; }
            const auto h = detail::mw_hamiltonian(mw->channel, phi, mw->detuning_hz, rabi);
            detail::integrate_lindblad(rho, h, cfg.dephasing_rates, t, cfg.integrator_step_s);
        } else if (const auto* w = std::get_if<WaitOp>(&op)) {
            Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
            h(kIdxMinus, kIdxMinus) = -p.omega_env_rad_s;
            detail::integrate_lindblad(rho, h, cfg.dephasing_rates, w->duration_s,
                                       cfg.integrator_step_s);
        } else {
            QutritDensity d;
            d.rho = rho;
            d.validate(1e-6);  // integrator accuracy budget, not the exact-state one
            out.readouts.push_back(d);
        }
    }
    return out;
}

}  // namespace nvclone
