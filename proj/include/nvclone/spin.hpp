// spin.hpp — qutrit state/density types, spin-1 operators, and the NV
// ground-triplet Hamiltonian with zero-field, strain and Zeeman terms.
//
// Basis order everywhere: index 0 = |m=-1>, 1 = |m=0>, 2 = |m=+1>.
// Hamiltonians are held in angular frequency (rad/s); frequencies cross the
// public API in Hz.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace nvclone {

using Complex = std::complex<double>;
using Eigen::Matrix2cd;
using Eigen::Matrix3cd;
using Eigen::Vector3cd;

inline constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
inline constexpr Complex kImag{0.0, 1.0};

// m = -1, 0, +1  ->  index 0, 1, 2
inline constexpr int kIdxMinus = 0;
inline constexpr int kIdxZero = 1;
inline constexpr int kIdxPlus = 2;

inline int level_index(int m) {
    if (m < -1 || m > 1) throw std::invalid_argument("level_index: m must be -1, 0 or +1");
    return m + 1;
}

struct InvalidDensity : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateLevels : std::runtime_error { using std::runtime_error::runtime_error; };

// ------------------------------ Domain types --------------------------------

// Pure 3-level state; amplitudes in the fixed (-1, 0, +1) order.
struct QutritState {
    Vector3cd amps{0.0, 1.0, 0.0};  // defaults to |m=0>

    QutritState() = default;
    explicit QutritState(const Vector3cd& a) : amps(a) {}

    static QutritState basis_state(int m) {
        QutritState s{Vector3cd::Zero()};
        s.amps(level_index(m)) = 1.0;
        return s;
    }

    Complex amp(int m) const { return amps(level_index(m)); }
    double norm_sq() const { return amps.squaredNorm(); }

    QutritState& normalize() {
        const double n = std::sqrt(norm_sq());
        if (n <= 0.0) throw std::invalid_argument("QutritState::normalize: zero vector");
        amps /= n;
        return *this;
    }

    Matrix3cd projector() const { return amps * amps.adjoint(); }
};

namespace detail {

// Shared density-matrix invariant check (3x3 physical, 2x2 logical copies).
// The loose tolerance covers trace and positivity; integrator output passes
// a widened budget, exact constructions use the default.
template <typename Derived>
void check_density(const Eigen::MatrixBase<Derived>& rho, const char* who, double tol = 1e-9) {
    const auto herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > 1e-12)
        throw InvalidDensity(std::string(who) + ": not Hermitian (max dev " + std::to_string(herm_err) + ")");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > tol)
        throw InvalidDensity(std::string(who) + ": trace " + std::to_string(tr) + " not 1");
    Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> es(rho.derived());
    if (es.eigenvalues().minCoeff() < -tol)
        throw InvalidDensity(std::string(who) + ": negative eigenvalue " +
                             std::to_string(es.eigenvalues().minCoeff()));
}

}  // namespace detail

// 3x3 density matrix over the same basis order.
struct QutritDensity {
    Matrix3cd rho = Matrix3cd::Zero();

    QutritDensity() { rho(kIdxZero, kIdxZero) = 1.0; }
    explicit QutritDensity(const Matrix3cd& m) : rho(m) {}

    static QutritDensity from_pure(const QutritState& psi) { return QutritDensity{psi.projector()}; }

    double population(int m) const { return rho(level_index(m), level_index(m)).real(); }
    Complex coherence(int m1, int m2) const { return rho(level_index(m1), level_index(m2)); }

    // Hermiticity to 1e-12, trace and eigenvalues to tol (default 1e-9).
    void validate(double tol = 1e-9) const { detail::check_density(rho, "QutritDensity", tol); }
};

// Physical configuration. Frequencies in Hz, times in s, field in tesla.
struct NvParams {
    double d_hz = 2.87e9;            // zero-field splitting
    double e_hz = 5e6;               // strain/off-diagonal splitting
    std::array<double, 3> b_field_t{0.0, 0.0, 0.0};
    double gamma_e_hz_per_t = 28.024951e9;
    double rabi_mw1_hz = 2e6;
    double rabi_mw2_hz = 2e6;
    double r0_cps = 30e3;            // fluorescence rate of |m=0>
    double r1_cps = 21e3;            // fluorescence rate of |m=+-1>
    double t2star_s = 1e-6;
    double omega_env_rad_s = kTwoPi * 1e6;  // free-evolution rotation speed
    double readout_window_s = 300e-9;
    long long repetitions = 100000;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) throw std::invalid_argument(std::string("NvParams: ") + name + " must be > 0");
        };
        positive(rabi_mw1_hz, "rabi_mw1_hz");
        positive(rabi_mw2_hz, "rabi_mw2_hz");
        positive(r0_cps, "r0_cps");
        positive(r1_cps, "r1_cps");
        positive(t2star_s, "t2star_s");
        positive(readout_window_s, "readout_window_s");
        positive(gamma_e_hz_per_t, "gamma_e_hz_per_t");
        if (d_hz < 0.0 || e_hz < 0.0) throw std::invalid_argument("NvParams: d_hz and e_hz must be >= 0");
        if (omega_env_rad_s < 0.0) throw std::invalid_argument("NvParams: omega_env_rad_s must be >= 0");
        if (r0_cps <= r1_cps) throw std::invalid_argument("NvParams: r0_cps must exceed r1_cps");
        if (repetitions < 1) throw std::invalid_argument("NvParams: repetitions must be >= 1");
    }
};

// ------------------------------ Spin-1 operators ----------------------------

inline Matrix3cd spin1_sz() {
    Matrix3cd m = Matrix3cd::Zero();
    m(kIdxMinus, kIdxMinus) = -1.0;
    m(kIdxPlus, kIdxPlus) = 1.0;
    return m;
}

inline Matrix3cd spin1_sx() {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix3cd m = Matrix3cd::Zero();
    m(kIdxMinus, kIdxZero) = r;
    m(kIdxZero, kIdxMinus) = r;
    m(kIdxZero, kIdxPlus) = r;
    m(kIdxPlus, kIdxZero) = r;
    return m;
}

inline Matrix3cd spin1_sy() {
    const double r = 1.0 / std::sqrt(2.0);
    Matrix3cd m = Matrix3cd::Zero();
    m(kIdxMinus, kIdxZero) = kImag * r;
    m(kIdxZero, kIdxMinus) = -kImag * r;
    m(kIdxZero, kIdxPlus) = kImag * r;
    m(kIdxPlus, kIdxZero) = -kImag * r;
    return m;
}

// ------------------------------ Hamiltonian ---------------------------------

// H = D Sz^2 + E (Sx^2 - Sy^2) + gamma_e (B . S) on the ground triplet.
// Input frequencies in Hz; the returned operator is in rad/s.
inline Matrix3cd build_hamiltonian(const NvParams& p) {
    p.validate();
    const Matrix3cd sx = spin1_sx(), sy = spin1_sy(), sz = spin1_sz();
    Matrix3cd h = p.d_hz * (sz * sz) + p.e_hz * (sx * sx - sy * sy);
    h += p.gamma_e_hz_per_t *
         (p.b_field_t[0] * sx + p.b_field_t[1] * sy + p.b_field_t[2] * sz);
    return kTwoPi * h;
}

// The two gaps from the |m=0>-dominant level, ascending, in Hz.
inline std::pair<double, double> transition_frequencies(const Matrix3cd& h_rad) {
    Eigen::SelfAdjointEigenSolver<Matrix3cd> es(h_rad);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("transition_frequencies: eigensolver failed");

    std::array<double, 3> overlap{};
    for (int i = 0; i < 3; ++i) overlap[i] = std::norm(es.eigenvectors()(kIdxZero, i));

    int ground = 0;
    for (int i = 1; i < 3; ++i)
        if (overlap[i] > overlap[ground]) ground = i;
    for (int i = 0; i < 3; ++i)
        if (i != ground && overlap[ground] - overlap[i] < 1e-6)
            throw DegenerateLevels("transition_frequencies: |m=0> character is ambiguous");

    std::array<double, 2> gaps{};
    int k = 0;
    for (int i = 0; i < 3; ++i)
        if (i != ground) gaps[k++] = std::abs(es.eigenvalues()(i) - es.eigenvalues()(ground));
    if (gaps[0] > gaps[1]) std::swap(gaps[0], gaps[1]);
    return {gaps[0] / kTwoPi, gaps[1] / kTwoPi};
}

// ------------------------------ Equator fidelity ----------------------------

// <psi|rho|psi> with |psi> = (|0> + e^{i phi}|1>)/sqrt(2) on a logical qubit.
inline double fidelity_with_equator_state(const Matrix2cd& rho, double phi) {
    detail::check_density(rho, "fidelity_with_equator_state");
    const Complex ph = std::exp(kImag * phi);
    const Complex val = rho(0, 0) + rho(1, 1) + ph * rho(0, 1) + std::conj(ph) * rho(1, 0);
    return 0.5 * val.real();
}

}  // namespace nvclone
