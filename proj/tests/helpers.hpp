// helpers.hpp — seeded random states/densities shared by the test suites.

#pragma once

#include <nvclone/spin.hpp>

#include <random>

namespace testutil {

using nvclone::Complex;
using nvclone::Matrix2cd;
using nvclone::Matrix3cd;
using nvclone::Vector3cd;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64{seed}; }

inline Complex random_amp(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(g), n(g)};
}

inline nvclone::QutritState random_qutrit(std::mt19937_64& g) {
    Vector3cd v;
    for (int i = 0; i < 3; ++i) v(i) = random_amp(g);
    nvclone::QutritState s{v};
    s.normalize();
    return s;
}

// Random mixed qubit density: convex mixture of a few random pure states.
inline Matrix2cd random_qubit_density(std::mt19937_64& g, int terms = 3) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Matrix2cd rho = Matrix2cd::Zero();
    double wsum = 0.0;
    for (int k = 0; k < terms; ++k) {
        Eigen::Vector2cd v{random_amp(g), random_amp(g)};
        v.normalize();
        const double w = u(g);
        rho += w * (v * v.adjoint());
        wsum += w;
    }
    return rho / wsum;
}

inline Matrix3cd random_qutrit_density(std::mt19937_64& g, int terms = 4) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    Matrix3cd rho = Matrix3cd::Zero();
    double wsum = 0.0;
    for (int k = 0; k < terms; ++k) {
        const auto s = random_qutrit(g);
        const double w = u(g);
        rho += w * s.projector();
        wsum += w;
    }
    return rho / wsum;
}

}  // namespace testutil
