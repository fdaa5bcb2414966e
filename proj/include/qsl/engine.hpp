#pragma once

// Quantum speed limit time from the modified Bures angle:
//
//   tau_qsl = max{1/Lambda_op, 1/Lambda_tr, 1/Lambda_hs} sin^2 Theta(rho_0, rho_tau),
//   Lambda_x = (1/tau) int_0^tau ||L_t(rho_t)||_x (1 + sqrt(D_0 / D_t)) dt,
//
// with D_t = 1 - tr[rho_t^2]. The generic path works on any Trajectory; the
// closed forms specialise it to the two analytic qubit models and serve as
// its cross-check.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qsl/errors.hpp"
#include "qsl/matcore.hpp"
#include "qsl/metrics.hpp"
#include "qsl/models.hpp"
#include "qsl/quadrature.hpp"

namespace qsl {

enum class BoundMode { strict, capped };

inline constexpr std::string_view to_string(BoundMode m) noexcept {
    return m == BoundMode::strict ? "strict" : "capped";
}

/// Ceiling on sqrt(D_0 / D_t) in capped mode.
inline constexpr double kCappedWeightRatio = 1e6;
/// Rates below this are treated as zero.
inline constexpr double kRateFloor = 1e-14;
/// Purity-deficit level at which a trajectory is considered to touch a pure state.
inline constexpr double kDivergenceDeficit = 1e-13;

struct QslOptions {
    QuadratureSpec quadrature{};
    BoundMode mode = BoundMode::strict;
};

struct QslResult {
    AngleValue theta{0.0};
    double lambda_op = 0.0;
    double lambda_tr = 0.0;
    double lambda_hs = 0.0;
    double tau_qsl = 0.0;
    NormKind dominant = NormKind::op;
    bool degenerate = false;
    bool capped = false;
    double tau_actual = 0.0;
    /// Times in (0, tau] where the weight integrand blows up (mixed start only).
    std::vector<double> divergence_times;

    double ratio() const noexcept { return tau_actual > 0.0 ? tau_qsl / tau_actual : 0.0; }
};

template <class T>
concept Trajectory = requires(const T& tr, double t) {
    { tr.initial() } -> std::convertible_to<BlochState>;
    { tr.state(t) } -> std::convertible_to<BlochState>;
    { tr.generator(t) } -> std::convertible_to<HermMat>;
    { tr.purity_deficit(t) } -> std::convertible_to<double>;
    { tr.breakpoints(t) } -> std::convertible_to<std::vector<double>>;
};

/// Op / trace / HS norm of a traceless Hermitian 2x2 matrix [[a, b], [b*, -a]]
/// from its eigenvalues +-mu, mu = sqrt(a^2 + |b|^2).
inline double qubit_generator_norm(const HermMat& m, NormKind kind) {
    if (m.dim() != 2) throw DimensionMismatch("qubit generator must be 2x2");
    const double a = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const double mu = std::hypot(a, std::abs(m(0, 1)));
    switch (kind) {
        case NormKind::op: return mu;
        case NormKind::trace: return 2.0 * mu;
        case NormKind::hs: return std::numbers::sqrt2 * mu;
    }
    return mu;
}

namespace detail {

inline void require_driving_time(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidInput("driving time tau must be > 0, got " + std::to_string(tau));
    }
}

inline std::vector<double> integration_points(double tau, std::vector<double> interior) {
    std::vector<double> pts{0.0};
    std::sort(interior.begin(), interior.end());
    for (double t : interior) {
        if (t > 0.0 && t < tau && t > pts.back()) pts.push_back(t);
    }
    pts.push_back(tau);
    return pts;
}

template <class F>
double golden_minimum(F&& f, double lo, double hi, double& arg) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    arg = fc <= fd ? c : d;
    return std::min(fc, fd);
}

/// Rates from the two quantities every closed form produces: sin^2 Theta and
/// Lambda_op. For a traceless qubit generator the other norms are fixed
/// multiples of the operator norm.
inline QslResult finalize(double sin2, double lambda_op, double lambda_tr, double lambda_hs,
                          double tau, const QslOptions& opts) {
    QslResult r;
    r.tau_actual = tau;
    r.capped = opts.mode == BoundMode::capped;
    sin2 = std::clamp(sin2, 0.0, 1.0);
    r.theta = AngleValue(std::asin(std::sqrt(sin2)));
    r.lambda_op = lambda_op;
    r.lambda_tr = lambda_tr;
    r.lambda_hs = lambda_hs;
    double best = lambda_op;
    r.dominant = NormKind::op;
    if (lambda_tr < best) {
        best = lambda_tr;
        r.dominant = NormKind::trace;
    }
    if (lambda_hs < best) {
        best = lambda_hs;
        r.dominant = NormKind::hs;
    }
    if (best < kRateFloor) {
        // Nothing moved (or a vanishing rate, which would contradict the bound
        // itself); a fixed point takes zero time to reach itself.
        r.tau_qsl = 0.0;
    } else {
        r.tau_qsl = sin2 / best;
    }
    return r;
}

inline QslResult degenerate_result(double sin2, double tau, std::vector<double> times,
                                   const QslOptions& opts) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    QslResult r;
    r.tau_actual = tau;
    r.capped = opts.mode == BoundMode::capped;
    r.theta = AngleValue(std::asin(std::sqrt(std::clamp(sin2, 0.0, 1.0))));
    r.lambda_op = r.lambda_tr = r.lambda_hs = inf;
    r.tau_qsl = 0.0;
    r.degenerate = true;
    r.dominant = NormKind::op;
    r.divergence_times = std::move(times);
    return r;
}

inline double weight_ratio(double d0, double dt, BoundMode mode) {
    if (d0 <= 0.0) return 0.0;
    const double ratio = dt > 0.0 ? std::sqrt(d0 / dt) : std::numeric_limits<double>::infinity();
    return mode == BoundMode::capped ? std::min(ratio, kCappedWeightRatio) : ratio;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generic trajectory path

/// Times in (0, tau] where a trajectory that starts mixed passes through a pure
/// state. There sqrt(D_0/D_t) has a non-integrable 1/|t - t*| singularity and
/// every rate is infinite. A trajectory that provides purity_hints(tau) lists
/// the candidates itself; otherwise local minima of D_t on a uniform scan are
/// refined by golden-section search.
template <Trajectory T>
std::vector<double> detect_rate_divergence(const T& traj, double tau) {
    detail::require_driving_time(tau);
    std::vector<double> found;
    const double d0 = traj.purity_deficit(0.0);
    if (!(d0 > kDivergenceDeficit)) return found;

    struct Candidate {
        double t;
        double deficit;
    };
    if constexpr (requires { traj.purity_hints(tau); }) {
        for (double t : traj.purity_hints(tau)) {
            if (t > 0.0 && t <= tau && traj.purity_deficit(t) < kDivergenceDeficit) found.push_back(t);
        }
        return found;
    }

    constexpr int kScan = 2048;
    std::vector<Candidate> cands;
    std::vector<double> ts(kScan + 1), ds(kScan + 1);
    for (int i = 0; i <= kScan; ++i) {
        ts[i] = tau * i / kScan;
        ds[i] = traj.purity_deficit(ts[i]);
    }
    auto deficit = [&](double t) { return traj.purity_deficit(t); };
    for (int i = 1; i <= kScan; ++i) {
        const bool left_ok = ds[i] <= ds[i - 1];
        const bool right_ok = i == kScan || ds[i] <= ds[i + 1];
        if (!left_ok || !right_ok) continue;
        double arg = ts[i];
        const double hi = i == kScan ? tau : ts[i + 1];
        const double val = detail::golden_minimum(deficit, ts[i - 1], hi, arg);
        if (val < ds[i]) {
            cands.push_back({arg, val});
        } else {
            cands.push_back({ts[i], ds[i]});
        }
    }

    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.t < b.t; });
    std::vector<Candidate> kept;
    for (const auto& c : cands) {
        if (!(c.deficit < kDivergenceDeficit) || !(c.t > 0.0)) continue;
        if (!kept.empty() && std::abs(c.t - kept.back().t) <= 1e-6 * std::max(1.0, tau)) {
            if (c.deficit < kept.back().deficit) kept.back() = c;
            continue;
        }
        kept.push_back(c);
    }
    for (const auto& c : kept) found.push_back(c.t);
    return found;
}

struct LambdaRates {
    double op = 0.0;
    double tr = 0.0;
    double hs = 0.0;
    bool divergent = false;
    std::vector<double> divergence_times;
};

template <Trajectory T>
LambdaRates lambda_rates(const T& traj, double tau, const QslOptions& opts = {}) {
    detail::require_driving_time(tau);
    LambdaRates out;
    double d0 = traj.purity_deficit(0.0);
    if (d0 < kPureDeficit) d0 = 0.0;

    std::vector<double> interior = traj.breakpoints(tau);
    if (d0 > 0.0) {
        out.divergence_times = detect_rate_divergence(traj, tau);
        if (!out.divergence_times.empty()) {
            if (opts.mode == BoundMode::strict) {
                constexpr double inf = std::numeric_limits<double>::infinity();
                out.op = out.tr = out.hs = inf;
                out.divergent = true;
                return out;
            }
            interior.insert(interior.end(), out.divergence_times.begin(), out.divergence_times.end());
        }
    }
    const auto pts = detail::integration_points(tau, std::move(interior));

    auto rate = [&](NormKind kind) {
        auto integrand = [&](double t) {
            const double w = 1.0 + detail::weight_ratio(d0, traj.purity_deficit(t), opts.mode);
            return norm(traj.generator(t), kind) * w;
        };
        return integrate(integrand, std::span<const double>(pts), opts.quadrature) / tau;
    };
    out.op = rate(NormKind::op);
    out.tr = rate(NormKind::trace);
    out.hs = rate(NormKind::hs);
    return out;
}

template <Trajectory T>
QslResult qsl_time_generic(const T& traj, double tau, const QslOptions& opts = {}) {
    detail::require_driving_time(tau);
    const HermMat rho0 = bloch_to_matrix(traj.initial());
    const HermMat rho_tau = bloch_to_matrix(traj.state(tau));
    const double sin2 = 1.0 - super_fidelity(rho0, rho_tau).value();
    auto rates = lambda_rates(traj, tau, opts);
    if (rates.divergent) return detail::degenerate_result(sin2, tau, std::move(rates.divergence_times), opts);
    auto r = detail::finalize(sin2, rates.op, rates.tr, rates.hs, tau, opts);
    r.divergence_times = std::move(rates.divergence_times);
    return r;
}

// ---------------------------------------------------------------------------
// Closed forms. Each returns sin^2 Theta = N/2 and Lambda_op = D/2, where N and
// D are the numerator and the time-averaged denominator of the closed form.

namespace detail {

inline QslResult closed_form_result(double numerator, double denominator, double tau,
                                    const QslOptions& opts) {
    const double op = 0.5 * denominator;
    return finalize(0.5 * numerator, op, 2.0 * op, std::numbers::sqrt2 * op, tau, opts);
}

}  // namespace detail

/// Damped JC, arbitrary Bloch start r:
///   N = 1 + r_z - q_tau (r_x^2 + r_y^2 + q_tau r_z (1 + r_z)) - k1 k2(tau),
///   D = (1/tau) int |qdot_t sqrt(r_x^2 + r_y^2 + 4 q_t^2 (1+r_z)^2) (1 + k1/k2(t))| dt,
/// k1 = sqrt(1 - |r|^2), k2(t) = sqrt(q_t^2 (2 + 2 r_z - r_x^2 - r_y^2 - q_t^2 (1+r_z)^2)).
inline QslResult qsl_jc_closed(const BlochState& r0, const JcParams& p, double tau,
                               const QslOptions& opts = {}) {
    detail::require_driving_time(tau);
    detail::require_bloch(r0);
    const double perp2 = r0.x * r0.x + r0.y * r0.y;
    const double one_z = 1.0 + r0.z;
    double k1 = std::sqrt(std::max(0.0, 1.0 - perp2 - r0.z * r0.z));
    if (0.5 * k1 * k1 < kPureDeficit) k1 = 0.0;
    auto k2 = [&](double q) {
        return std::sqrt(std::max(0.0, q * q * (2.0 + 2.0 * r0.z - perp2 - q * q * one_z * one_z)));
    };

    const double qt = jc_q(tau, p);
    const double numerator = 1.0 + r0.z - qt * (perp2 + qt * r0.z * one_z) - k1 * k2(qt);

    const auto zeros = jc_q_zeros(p, tau);
    if (k1 > 0.0 && !zeros.empty() && opts.mode == BoundMode::strict) {
        return detail::degenerate_result(0.5 * numerator, tau, zeros, opts);
    }
    auto interior = jc_qdot_zeros(p, tau);
    if (k1 > 0.0) interior.insert(interior.end(), zeros.begin(), zeros.end());
    const auto pts = detail::integration_points(tau, std::move(interior));

    auto integrand = [&](double t) {
        const double q = jc_q(t, p);
        const double qd = jc_qdot(t, p);
        double ratio = 0.0;
        if (k1 > 0.0) {
            const double k = k2(q);
            ratio = k > 0.0 ? k1 / k : std::numeric_limits<double>::infinity();
            if (opts.mode == BoundMode::capped) ratio = std::min(ratio, kCappedWeightRatio);
        }
        return std::abs(qd * std::sqrt(perp2 + 4.0 * q * q * one_z * one_z) * (1.0 + ratio));
    };
    const double denominator = integrate(integrand, std::span<const double>(pts), opts.quadrature) / tau;
    auto r = detail::closed_form_result(numerator, denominator, tau, opts);
    if (k1 > 0.0) r.divergence_times = zeros;
    return r;
}

/// Damped JC from (1-p)/2 I + p |+><+|:
///   N = 1 - p^2 q_tau - k1w k2w(tau),
///   D = (1/tau) int |sqrt(p^2 + 4 q_t^2) qdot_t (1 + k1w/k2w(t))| dt,
/// k1w = sqrt(1 - p^2), k2w(t) = sqrt(q_t^2 (2 - p^2 - q_t^2)).
inline QslResult qsl_jc_noisy_max_coherent(double purity_weight, const JcParams& p, double tau,
                                           const QslOptions& opts = {}) {
    detail::require_driving_time(tau);
    if (!(purity_weight >= 0.0 && purity_weight <= 1.0)) {
        throw InvalidInput("noise parameter p must lie in [0, 1], got " + std::to_string(purity_weight));
    }
    const double p2 = purity_weight * purity_weight;
    double k1 = std::sqrt(1.0 - p2);
    if (0.5 * k1 * k1 < kPureDeficit) k1 = 0.0;
    auto k2 = [&](double q) { return std::sqrt(std::max(0.0, q * q * (2.0 - p2 - q * q))); };

    const double qt = jc_q(tau, p);
    const double numerator = 1.0 - p2 * qt - k1 * k2(qt);

    const auto zeros = jc_q_zeros(p, tau);
    if (k1 > 0.0 && !zeros.empty() && opts.mode == BoundMode::strict) {
        return detail::degenerate_result(0.5 * numerator, tau, zeros, opts);
    }
    auto interior = jc_qdot_zeros(p, tau);
    if (k1 > 0.0) interior.insert(interior.end(), zeros.begin(), zeros.end());
    const auto pts = detail::integration_points(tau, std::move(interior));

    auto integrand = [&](double t) {
        const double q = jc_q(t, p);
        const double qd = jc_qdot(t, p);
        double ratio = 0.0;
        if (k1 > 0.0) {
            const double k = k2(q);
            ratio = k > 0.0 ? k1 / k : std::numeric_limits<double>::infinity();
            if (opts.mode == BoundMode::capped) ratio = std::min(ratio, kCappedWeightRatio);
        }
        return std::abs(std::sqrt(p2 + 4.0 * q * q) * qd * (1.0 + ratio));
    };
    const double denominator = integrate(integrand, std::span<const double>(pts), opts.quadrature) / tau;
    auto r = detail::closed_form_result(numerator, denominator, tau, opts);
    if (k1 > 0.0) r.divergence_times = zeros;
    return r;
}

/// Damped JC from the pure state |+>: (1 - q_tau) / ((1/tau) int |qdot_t sqrt(1 + 4 q_t^2)| dt).
inline QslResult qsl_jc_pure(const JcParams& p, double tau, const QslOptions& opts = {}) {
    detail::require_driving_time(tau);
    const double numerator = 1.0 - jc_q(tau, p);
    const auto pts = detail::integration_points(tau, jc_qdot_zeros(p, tau));
    auto integrand = [&](double t) {
        const double q = jc_q(t, p);
        return std::abs(jc_qdot(t, p) * std::sqrt(1.0 + 4.0 * q * q));
    };
    const double denominator = integrate(integrand, std::span<const double>(pts), opts.quadrature) / tau;
    return detail::closed_form_result(numerator, denominator, tau, opts);
}

/// Dephasing from coherence C and population <sz>:
///   N = 1 - C^2 e^{-Gamma_tau} - sz^2 - x1 x2(tau),
///   D = (1/tau) int |gamma_t C e^{-Gamma_t} (1 + x1/x2(t))| dt,
/// x1 = sqrt(1 - C^2 - sz^2), x2(t) = sqrt(1 - C^2 e^{-2 Gamma_t} - sz^2) >= x1.
inline QslResult qsl_dephasing_closed(double coherence, double sz, const DephasingParams& p, double tau,
                                      const QslOptions& opts = {}) {
    detail::require_driving_time(tau);
    if (!(coherence >= 0.0 && coherence <= 1.0)) {
        throw InvalidState("coherence must lie in [0, 1], got " + std::to_string(coherence));
    }
    if (!std::isfinite(sz) || coherence * coherence + sz * sz > 1.0 + 1e-12) {
        throw InvalidState("coherence^2 + sz^2 must not exceed 1");
    }
    const double c2 = coherence * coherence;
    const double z2 = sz * sz;
    double x1 = std::sqrt(std::max(0.0, 1.0 - c2 - z2));
    if (0.5 * x1 * x1 < kPureDeficit) x1 = 0.0;
    auto x2 = [&](double big_gamma) {
        return std::sqrt(std::max(0.0, 1.0 - c2 * std::exp(-2.0 * big_gamma) - z2));
    };

    const auto& spec = opts.quadrature;
    const double g_tau = dephasing_factor_at(tau, p, spec);
    const double numerator = 1.0 - c2 * std::exp(-g_tau) - z2 - x1 * x2(g_tau);

    if (coherence == 0.0) return detail::closed_form_result(0.0, 0.0, tau, opts);
    std::vector<double> interior;
    if (p.temperature() == 0.0) interior = dephasing_rate_zeros(p, tau);
    const auto pts = detail::integration_points(tau, std::move(interior));
    auto integrand = [&](double t) {
        const double big_gamma = dephasing_factor_at(t, p, spec);
        const double rate = dephasing_rate_at(t, p, spec);
        double ratio = 0.0;
        if (x1 > 0.0) {
            const double x = x2(big_gamma);
            ratio = x > 0.0 ? x1 / x : std::numeric_limits<double>::infinity();
            if (opts.mode == BoundMode::capped) ratio = std::min(ratio, kCappedWeightRatio);
        }
        return std::abs(rate * coherence * std::exp(-big_gamma) * (1.0 + ratio));
    };
    const double denominator = integrate(integrand, std::span<const double>(pts), spec) / tau;
    return detail::closed_form_result(numerator, denominator, tau, opts);
}

}  // namespace qsl
