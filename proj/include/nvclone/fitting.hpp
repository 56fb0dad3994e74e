// fitting.hpp — weighted least-squares fit of S(t) = C + A cos(Omega t +
// theta0) e^{-t/tau} by Gauss-Newton iteration with Levenberg damping.
//
// Internally time is rescaled to units of the grid span and the decay is
// parameterized by a rate clamped to stay positive, so undamped traces fit
// without the decay parameter running away.  The frequency is seeded from an
// explicit periodogram; the phase is seeded from the sign of S(0) - C and
// refined from a small set of starts to avoid the antiphase local minimum.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nvclone {

struct NoOscillation : std::runtime_error { using std::runtime_error::runtime_error; };
struct NonConvergence : std::runtime_error { using std::runtime_error::runtime_error; };
struct EmptySubspace : std::runtime_error { using std::runtime_error::runtime_error; };

struct FitOptions {
    int max_iterations = 200;
    double step_tol = 1e-10;  // relative step size declaring convergence
};

struct DampedCosineFit {
    double offset = 0.0;       // C
    double amplitude = 0.0;    // A, normalized >= 0
    double omega_rad_s = 0.0;  // Omega, normalized > 0
    double phase_rad = 0.0;    // theta0 in (-pi, pi]
    double tau_s = 0.0;        // decay constant (very large when undamped)

    std::array<double, 5> stderrs{};  // same order as the fields above
    double weighted_rss = 0.0;
    int iterations = 0;
    std::size_t points = 0;

    double value(double t_s) const {
        return offset + amplitude * std::cos(omega_rad_s * t_s + phase_rad) *
                            std::exp(-t_s / tau_s);
    }

    // Fitted signal at t = 0, clamped to the physical range.
    double start_point() const {
        return std::clamp(offset + amplitude * std::cos(phase_rad), 0.0, 1.0);
    }

    // Population of the probed subspace inferred from the oscillation:
    // S(0) / (2 C).  A near-empty subspace gives no usable contrast.
    double subspace_population() const {
        if (offset <= 0.05)
            throw EmptySubspace("fit offset " + std::to_string(offset) +
                                " is too small to infer a population");
        return start_point() / (2.0 * offset);
    }
};

inline DampedCosineFit fit_damped_cosine(const std::vector<double>& t_s,
                                         const std::vector<double>& y,
                                         std::vector<double> weights = {},
                                         const FitOptions& opts = {}) {
    using Vec5 = Eigen::Matrix<double, 5, 1>;
    using Mat5 = Eigen::Matrix<double, 5, 5>;
    constexpr double kPiLocal = 3.14159265358979323846;
    constexpr double kMinRate = 1e-9;  // scaled decay-rate floor

    const std::size_t n = t_s.size();
    if (y.size() != n) throw std::invalid_argument("fit: t and y sizes differ");
    if (n < 8) throw std::invalid_argument("fit: need at least 8 points");
    if (weights.empty()) weights.assign(n, 1.0);
    if (weights.size() != n) throw std::invalid_argument("fit: weight size differs");
    for (std::size_t j = 0; j < n; ++j)
        if (!std::isfinite(t_s[j]) || !std::isfinite(y[j]) || !std::isfinite(weights[j]) ||
            weights[j] <= 0.0)
            throw std::invalid_argument("fit: inputs must be finite with positive weights");

    const double tmin = *std::min_element(t_s.begin(), t_s.end());
    const double span = *std::max_element(t_s.begin(), t_s.end()) - tmin;
    if (!(span > 0.0)) throw std::invalid_argument("fit: zero time span");

    std::vector<double> tp(n);
    for (std::size_t j = 0; j < n; ++j) tp[j] = t_s[j] / span;

    // ---- initial guesses ----
    double c0 = 0.0, ymin = y[0], ymax = y[0];
    for (double v : y) { c0 += v; ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    c0 /= static_cast<double>(n);
    if (ymax - ymin < 1e-10) throw NoOscillation("signal is flat");
    const double a0 = 0.5 * (ymax - ymin);

    const std::size_t kmax = n / 2;
    std::vector<double> power(kmax + 1, 0.0);
    std::size_t kpeak = 1;
    for (std::size_t k = 1; k <= kmax; ++k) {
        std::complex<double> z = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            z += (y[j] - c0) * std::exp(std::complex<double>(0.0, -2.0 * kPiLocal *
                                                                      static_cast<double>(k) * tp[j]));
        power[k] = std::norm(z);
        if (power[k] > power[kpeak]) kpeak = k;
    }
    std::vector<double> sorted(power.begin() + 1, power.end());
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    if (power[kpeak] < 3.0 * median)
        throw NoOscillation("no dominant frequency in the periodogram");

    double kfrac = static_cast<double>(kpeak);
    if (kpeak > 1 && kpeak < kmax) {  // parabolic peak interpolation
        const double denom = power[kpeak - 1] - 2.0 * power[kpeak] + power[kpeak + 1];
        if (denom < 0.0)
            kfrac += std::clamp(0.5 * (power[kpeak - 1] - power[kpeak + 1]) / denom, -0.5, 0.5);
    }
    const double w0 = 2.0 * kPiLocal * kfrac;

    const std::size_t jmin = static_cast<std::size_t>(
        std::min_element(t_s.begin(), t_s.end()) - t_s.begin());
    const double d0 = y[jmin] - c0;
    const double th_seed = d0 > 0.0 ? 0.0 : (d0 < 0.0 ? kPiLocal : kPiLocal / 2.0);

    // ---- Gauss-Newton with Levenberg damping, in scaled parameters ----
    auto model = [](const Vec5& q, double t) {
        return q[0] + q[1] * std::cos(q[2] * t + q[3]) * std::exp(-q[4] * t);
    };
    auto rss_of = [&](const Vec5& q) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double r = y[j] - model(q, tp[j]);
            s += weights[j] * r * r;
        }
        return s;
    };
    auto normal_equations = [&](const Vec5& q, Mat5& jtwj, Vec5& jtwr) {
        jtwj.setZero();
        jtwr.setZero();
        for (std::size_t j = 0; j < n; ++j) {
            const double env = std::exp(-q[4] * tp[j]);
            const double arg = q[2] * tp[j] + q[3];
            const double co = std::cos(arg), si = std::sin(arg);
            Vec5 grad;
            grad << 1.0, co * env, -q[1] * tp[j] * si * env, -q[1] * si * env,
                -q[1] * tp[j] * co * env;
            const double r = y[j] - model(q, tp[j]);
            jtwj.noalias() += weights[j] * grad * grad.transpose();
            jtwr.noalias() += weights[j] * grad * r;
        }
    };

    // Damped normal-equation step; with the decay rate pinned at its floor the
    // reduced 4-parameter system is solved instead, so the remaining
    // parameters still converge cleanly on the boundary.
    auto solve_step = [](const Mat5& jtwj, const Vec5& jtwr, double lm, bool freeze_rate) {
        if (!freeze_rate) {
            Mat5 m = jtwj;
            for (int k = 0; k < 5; ++k) m(k, k) += lm * std::max(jtwj(k, k), 1e-30);
            return Vec5(m.fullPivLu().solve(jtwr));
        }
        Eigen::Matrix4d m4 = jtwj.topLeftCorner<4, 4>();
        for (int k = 0; k < 4; ++k) m4(k, k) += lm * std::max(jtwj(k, k), 1e-30);
        const Eigen::Vector4d d4 = m4.fullPivLu().solve(jtwr.head<4>());
        Vec5 d = Vec5::Zero();
        d.head<4>() = d4;
        return d;
    };

    struct Candidate { Vec5 q; double rss; int iterations; };
    auto run = [&](double th_init) -> std::optional<Candidate> {
        Vec5 q;
        q << c0, a0, w0, th_init, 1.0;
        double rss = rss_of(q), lm = 1e-3;
        Mat5 jtwj;
        Vec5 jtwr;
        for (int it = 1; it <= opts.max_iterations; ++it) {
            normal_equations(q, jtwj, jtwr);
            while (true) {
                Vec5 q_try = q + solve_step(jtwj, jtwr, lm, false);
                if (q_try[4] < kMinRate) {
                    if (q[4] <= kMinRate) q_try = q + solve_step(jtwj, jtwr, lm, true);
                    q_try[4] = kMinRate;
                }
                const double rss_try = rss_of(q_try);
                if (rss_try <= rss) {
                    // the applied step, after clamping, decides convergence
                    const double rel = (q_try - q).norm() / (q.norm() + 1e-30);
                    q = q_try;
                    rss = rss_try;
                    lm = std::max(lm * 0.1, 1e-12);
                    if (rel < opts.step_tol) return Candidate{q, rss, it};
                    break;
                }
                lm *= 10.0;
                if (lm > 1e12) return Candidate{q, rss, it};  // stalled at a minimum
            }
        }
        return std::nullopt;
    };

    std::optional<Candidate> best;
    for (double shift : {0.0, kPiLocal, kPiLocal / 2.0, -kPiLocal / 2.0}) {
        const auto cand = run(th_seed + shift);
        if (cand && (!best || cand->rss < best->rss)) best = cand;
        if (best && best->rss < 1e-24 * static_cast<double>(n)) break;
    }
    if (!best) throw NonConvergence("fit did not converge within the iteration limit");

    // ---- covariance and mapping back to physical units ----
    Mat5 jtwj;
    Vec5 jtwr;
    normal_equations(best->q, jtwj, jtwr);
    const double dof = static_cast<double>(n) - 5.0;
    const double s2 = dof > 0.0 ? best->rss / dof : 0.0;
    const Mat5 cov = s2 * jtwj.fullPivLu().inverse();

    double c = best->q[0], a = best->q[1], w = best->q[2], th = best->q[3], l = best->q[4];
    if (a < 0.0) { a = -a; th += kPiLocal; }
    if (w < 0.0) { w = -w; th = -th; }
    th = std::remainder(th, 2.0 * kPiLocal);
    if (th <= -kPiLocal) th += 2.0 * kPiLocal;

    DampedCosineFit fit;
    fit.offset = c;
    fit.amplitude = a;
    fit.omega_rad_s = w / span;
    fit.phase_rad = th;
    fit.tau_s = span / l;
    auto dev = [&](int k) { return std::sqrt(std::max(cov(k, k), 0.0)); };
    fit.stderrs = {dev(0), dev(1), dev(2) / span, dev(3), span * dev(4) / (l * l)};
    fit.weighted_rss = best->rss;
    fit.iterations = best->iterations;
    fit.points = n;
    return fit;
}

}  // namespace nvclone
