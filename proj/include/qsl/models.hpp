#pragma once

// Reduced qubit dynamics for two open-system models:
//
//   * damped Jaynes-Cummings: amplitude damping into a Lorentzian reservoir,
//     rho_11(t) = rho_11(0) q_t^2, rho_10(t) = rho_10(0) q_t;
//   * pure dephasing with an Ohmic-family spectral density,
//     rho_10(t) = rho_10(0) exp(-Gamma_t), populations frozen.
//
// Times and rates are in units of omega_0 (JC) or of the cutoff omega_c
// (dephasing). Index 0 of every 2x2 matrix is the excited level.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qsl/errors.hpp"
#include "qsl/matcore.hpp"
#include "qsl/quadrature.hpp"

namespace qsl {

namespace detail {

inline void require_time(double t, const char* name = "t") {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidInput(std::string(name) + " must be a finite time >= 0, got " + std::to_string(t));
    }
}

inline BlochState require_bloch(const BlochState& r) {
    if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z) ||
        r.length() > 1.0 + kBlochSlack) {
        throw InvalidState("initial Bloch vector must lie in the unit ball");
    }
    return r;
}

inline HermMat traceless_qubit(double diag, cplx upper) {
    ComplexMat m(2);
    m(0, 0) = diag;
    m(1, 1) = -diag;
    m(0, 1) = upper;
    m(1, 0) = std::conj(upper);
    return HermMat(std::move(m));
}

}  // namespace detail

// ===========================================================================
// Damped Jaynes-Cummings

enum class JcBranch { markovian, critical, oscillatory };

/// Lorentzian reservoir parameters. The sign of lambda^2 - 2 gamma0 lambda
/// selects how q_t is evaluated; |2 gamma0 - lambda| <= 1e-12 lambda is the
/// critical ridge, where the exact limit formula is used.
class JcParams {
public:
    JcParams(double lambda, double gamma0) : lambda_(lambda), gamma0_(gamma0) {
        if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("lambda must be > 0");
        if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw InvalidInput("gamma0 must be > 0");
        const double disc = lambda * (lambda - 2.0 * gamma0);
        if (std::abs(2.0 * gamma0 - lambda) <= 1e-12 * lambda) {
            branch_ = JcBranch::critical;
            h_abs_ = 0.0;
        } else {
            branch_ = disc > 0.0 ? JcBranch::markovian : JcBranch::oscillatory;
            h_abs_ = std::sqrt(std::abs(disc));
        }
    }

    double lambda() const noexcept { return lambda_; }
    double gamma0() const noexcept { return gamma0_; }
    JcBranch branch() const noexcept { return branch_; }
    /// |h| with h = sqrt(lambda^2 - 2 gamma0 lambda); h is imaginary on the oscillatory branch.
    double h_abs() const noexcept { return h_abs_; }

private:
    double lambda_;
    double gamma0_;
    JcBranch branch_;
    double h_abs_;
};

namespace detail {

/// e^{-lambda t/2} C(x) and e^{-lambda t/2} S(x) with x = |h| t / 2:
/// C = cosh x, S = sinh(x)/x on the Markovian branch, cos x and sin(x)/x on the
/// oscillatory branch, C = S = 1 at criticality. Then q = C + (lambda t/2) S.
struct JcKernel {
    double ec;
    double es;
};

inline JcKernel jc_kernel(double t, const JcParams& p) {
    const double decay = -0.5 * p.lambda() * t;
    const double x = 0.5 * p.h_abs() * t;
    switch (p.branch()) {
        case JcBranch::critical: {
            const double e = std::exp(decay);
            return {e, e};
        }
        case JcBranch::oscillatory: {
            const double e = std::exp(decay);
            const double sinc = x == 0.0 ? 1.0 : std::sin(x) / x;
            return {e * std::cos(x), e * sinc};
        }
        case JcBranch::markovian:
            break;
    }
    if (x < 1.0) {
        const double e = std::exp(decay);
        const double sinhc = x == 0.0 ? 1.0 : std::sinh(x) / x;
        return {e * std::cosh(x), e * sinhc};
    }
    const double up = std::exp(x + decay);
    const double down = std::exp(-x + decay);
    return {0.5 * (up + down), 0.5 * (up - down) / x};
}

}  // namespace detail

/// q_t = e^{-lambda t/2} [cosh(ht/2) + (lambda/h) sinh(ht/2)].
inline double jc_q(double t, const JcParams& p) {
    detail::require_time(t);
    const auto k = detail::jc_kernel(t, p);
    return k.ec + 0.5 * p.lambda() * t * k.es;
}

/// dq/dt = -(gamma0 lambda / h) e^{-lambda t/2} sinh(ht/2).
inline double jc_qdot(double t, const JcParams& p) {
    detail::require_time(t);
    const auto k = detail::jc_kernel(t, p);
    return -p.gamma0() * p.lambda() * 0.5 * t * k.es;
}

/// Zeros of q_t in (0, tau]; only the oscillatory branch has any.
/// cos(x) + (lambda/|h|) sin(x) = 0 at x = pi - atan(|h|/lambda) + k pi.
inline std::vector<double> jc_q_zeros(const JcParams& p, double tau) {
    std::vector<double> out;
    if (p.branch() != JcBranch::oscillatory) return out;
    const double base = std::numbers::pi - std::atan(p.h_abs() / p.lambda());
    for (int k = 0;; ++k) {
        const double t = 2.0 * (base + k * std::numbers::pi) / p.h_abs();
        if (t > tau) break;
        out.push_back(t);
    }
    return out;
}

/// Zeros of dq/dt in (0, tau): t = 2 k pi / |h| on the oscillatory branch.
inline std::vector<double> jc_qdot_zeros(const JcParams& p, double tau) {
    std::vector<double> out;
    if (p.branch() != JcBranch::oscillatory) return out;
    for (int k = 1;; ++k) {
        const double t = 2.0 * k * std::numbers::pi / p.h_abs();
        if (t >= tau) break;
        out.push_back(t);
    }
    return out;
}

/// gamma_t = -2 qdot_t / q_t. Throws PoleError within 1e-12 of a zero of q_t.
inline double jc_gamma(double t, const JcParams& p) {
    detail::require_time(t);
    for (double z : jc_q_zeros(p, t + 1e-12)) {
        if (std::abs(t - z) <= 1e-12) throw PoleError("gamma_t has a pole at a zero of q_t", z);
    }
    const double q = jc_q(t, p);
    if (q == 0.0) throw PoleError("gamma_t has a pole at a zero of q_t", t);
    return -2.0 * jc_qdot(t, p) / q;
}

/// x_t = r_x q_t, y_t = r_y q_t, z_t = (1 + r_z) q_t^2 - 1.
inline BlochState jc_state(double t, const BlochState& r0, const JcParams& p) {
    detail::require_bloch(r0);
    const double q = jc_q(t, p);
    return {r0.x * q, r0.y * q, (1.0 + r0.z) * q * q - 1.0};
}

/// d rho_t / dt for the state above.
inline HermMat jc_generator(double t, const BlochState& r0, const JcParams& p) {
    detail::require_bloch(r0);
    const double q = jc_q(t, p);
    const double qd = jc_qdot(t, p);
    return detail::traceless_qubit((1.0 + r0.z) * q * qd, cplx(0.5 * r0.x * qd, -0.5 * r0.y * qd));
}

/// (gamma/2) (2 s- rho s+ - s+ s- rho - rho s+ s-), with s- = |g><e|.
inline HermMat jc_dissipator(const HermMat& rho, double gamma) {
    if (rho.dim() != 2) throw DimensionMismatch("amplitude damping acts on a qubit");
    ComplexMat out(2);
    out(0, 0) = -gamma * rho(0, 0);
    out(1, 1) = gamma * rho(0, 0);
    out(0, 1) = -0.5 * gamma * rho(0, 1);
    out(1, 0) = -0.5 * gamma * rho(1, 0);
    return HermMat::hermitian_part(out);
}

class JcTrajectory {
public:
    JcTrajectory(JcParams params, BlochState initial)
        : params_(params), initial_(detail::require_bloch(initial)) {}

    const JcParams& params() const noexcept { return params_; }
    BlochState initial() const noexcept { return initial_; }
    BlochState state(double t) const { return t == 0.0 ? initial_ : jc_state(t, initial_, params_); }
    HermMat generator(double t) const { return jc_generator(t, initial_, params_); }
    /// 2 D_t = q^2 (2 + 2 r_z - r_x^2 - r_y^2 - q^2 (1 + r_z)^2), which keeps its
    /// relative accuracy as the state decays towards the ground state.
    double purity_deficit(double t) const {
        if (t == 0.0) return initial_.purity_deficit();
        const auto& r = initial_;
        const double q2 = jc_q(t, params_) * jc_q(t, params_);
        const double zp = 1.0 + r.z;
        return std::max(0.0, 0.5 * q2 * (2.0 * zp - r.x * r.x - r.y * r.y - q2 * zp * zp));
    }
    /// Kinks of |dq/dt| inside (0, tau).
    std::vector<double> breakpoints(double tau) const { return jc_qdot_zeros(params_, tau); }
    /// Every time in (0, tau] where the trajectory can pass through a pure
    /// state (the ground state, at the zeros of q_t).
    std::vector<double> purity_hints(double tau) const { return jc_q_zeros(params_, tau); }

private:
    JcParams params_;
    BlochState initial_;
};

// ===========================================================================
// Dephasing

/// J(w) = eta w^s / w_c^{s-1} exp(-w / w_c), temperature in units with k_B = 1.
class DephasingParams {
public:
    DephasingParams(double eta, double s, double omega_c = 1.0, double temperature = 0.0)
        : eta_(eta), s_(s), omega_c_(omega_c), temperature_(temperature) {
        if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidInput("eta must be > 0");
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("s must be > 0");
        if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw InvalidInput("omega_c must be > 0");
        if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
            throw InvalidInput("temperature must be >= 0");
        }
    }

    double eta() const noexcept { return eta_; }
    double s() const noexcept { return s_; }
    double omega_c() const noexcept { return omega_c_; }
    double temperature() const noexcept { return temperature_; }

private:
    double eta_;
    double s_;
    double omega_c_;
    double temperature_;
};

using SpectralDensity = std::function<double(double)>;

inline SpectralDensity ohmic_spectral_density(const DephasingParams& p) {
    return [eta = p.eta(), s = p.s(), wc = p.omega_c()](double w) {
        if (w <= 0.0) return 0.0;
        return eta * wc * std::pow(w / wc, s) * std::exp(-w / wc);
    };
}

/// Zero-temperature dephasing factor for the Ohmic-family density,
///   Gamma_tau = eta [1 - cos((s-1) atan x) / (1+x^2)^{(s-1)/2}] Gamma(s-1),  x = w_c tau.
/// Written as eta * (f(e)/e) * Gamma(1+e) with e = s - 1 so that the pole of
/// Gamma(s-1) at s = 1 cancels analytically; s = 1 gives (eta/2) ln(1+x^2).
inline double dephasing_gamma_factor(double tau, const DephasingParams& p) {
    detail::require_time(tau, "tau");
    const double x = p.omega_c() * tau;
    const double log_term = std::log1p(x * x);
    const double eps = p.s() - 1.0;
    if (eps == 0.0) return 0.5 * p.eta() * log_term;
    const double a = std::atan(x);
    const double damp = std::exp(-0.5 * eps * log_term);
    const double half = std::sin(0.5 * eps * a);
    // f(e) = 1 - cos(e a) (1+x^2)^{-e/2}
    const double f = -std::expm1(-0.5 * eps * log_term) + damp * 2.0 * half * half;
    return p.eta() * (f / eps) * std::tgamma(1.0 + eps);
}

/// gamma_t = d Gamma_t / dt = eta w_c (1+x^2)^{-s/2} Gamma(s) sin(s atan x), x = w_c t.
inline double dephasing_rate(double t, const DephasingParams& p) {
    detail::require_time(t);
    const double x = p.omega_c() * t;
    return p.eta() * p.omega_c() * std::pow(1.0 + x * x, -0.5 * p.s()) * std::tgamma(p.s()) *
           std::sin(p.s() * std::atan(x));
}

/// Sign changes of the zero-temperature rate in (0, tau): s atan(w_c t) = k pi.
inline std::vector<double> dephasing_rate_zeros(const DephasingParams& p, double tau) {
    std::vector<double> out;
    for (int k = 1; k * std::numbers::pi < 0.5 * std::numbers::pi * p.s(); ++k) {
        const double t = std::tan(k * std::numbers::pi / p.s()) / p.omega_c();
        if (t >= tau) break;
        out.push_back(t);
    }
    return out;
}

namespace detail {

/// Small-w probe for the removable endpoint of the thermal integrands.
inline double spectral_slope_at_zero(const SpectralDensity& j, double omega_c) {
    const double d = 1e-8 * omega_c;
    return j(d) / d;
}

/// J(w) coth(w/2T) (1 - cos w tau) / w^2 with its w -> 0 limit.
inline double dephasing_factor_integrand(double w, double tau, double temperature,
                                         const SpectralDensity& j, double omega_c) {
    if (w == 0.0) {
        if (temperature == 0.0) return 0.5 * tau * tau * j(0.0);
        return temperature * tau * tau * spectral_slope_at_zero(j, omega_c);
    }
    if (!std::isfinite(w)) return 0.0;
    const double jw = j(w);
    if (jw == 0.0) return 0.0;
    const double h = 0.5 * w * tau;
    const double sinc = h == 0.0 ? 1.0 : std::sin(h) / h;
    const double kernel = 0.5 * tau * tau * sinc * sinc;  // (1 - cos w tau) / w^2
    const double thermal = temperature == 0.0 ? 1.0 : 1.0 / std::tanh(w / (2.0 * temperature));
    return jw * thermal * kernel;
}

/// J(w) coth(w/2T) sin(w t) / w with its w -> 0 limit.
inline double dephasing_rate_integrand(double w, double t, double temperature,
                                       const SpectralDensity& j, double omega_c) {
    if (w == 0.0) {
        if (temperature == 0.0) return t * j(0.0);
        return 2.0 * temperature * t * spectral_slope_at_zero(j, omega_c);
    }
    if (!std::isfinite(w)) return 0.0;
    const double jw = j(w);
    if (jw == 0.0) return 0.0;
    const double thermal = temperature == 0.0 ? 1.0 : 1.0 / std::tanh(w / (2.0 * temperature));
    return jw * thermal * std::sin(w * t) / w;
}

/// Integral over w in [0, inf) after w = w_c u / (1 - u).
template <class G>
double integrate_half_line(G&& g, double omega_c, const QuadratureSpec& spec) {
    auto mapped = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double one_minus = 1.0 - u;
        const double w = omega_c * u / one_minus;
        const double v = g(w);
        return v == 0.0 ? 0.0 : v * omega_c / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, spec);
}

}  // namespace detail

/// Gamma_tau = int_0^inf dw J(w) coth(w / 2T) (1 - cos w tau) / w^2 by adaptive
/// quadrature. T = 0 drops the coth factor. Throws AccuracyError with the
/// best estimate when the quadrature does not converge.
inline double dephasing_gamma_factor_quadrature(double tau, const DephasingParams& p,
                                                const SpectralDensity& spectral_density,
                                                const QuadratureSpec& spec = {}) {
    detail::require_time(tau, "tau");
    if (tau == 0.0) return 0.0;
    const double temp = p.temperature();
    const double wc = p.omega_c();
    return detail::integrate_half_line(
        [&](double w) { return detail::dephasing_factor_integrand(w, tau, temp, spectral_density, wc); },
        wc, spec);
}

/// gamma_t = int_0^inf dw J(w) coth(w / 2T) sin(w t) / w, the derivative of the above.
inline double dephasing_rate_quadrature(double t, const DephasingParams& p,
                                        const SpectralDensity& spectral_density,
                                        const QuadratureSpec& spec = {}) {
    detail::require_time(t);
    if (t == 0.0) return 0.0;
    const double temp = p.temperature();
    const double wc = p.omega_c();
    return detail::integrate_half_line(
        [&](double w) { return detail::dephasing_rate_integrand(w, t, temp, spectral_density, wc); },
        wc, spec);
}

/// Gamma_t at the model temperature: analytic at T = 0, quadrature otherwise.
inline double dephasing_factor_at(double t, const DephasingParams& p, const QuadratureSpec& spec = {}) {
    if (p.temperature() == 0.0) return dephasing_gamma_factor(t, p);
    return dephasing_gamma_factor_quadrature(t, p, ohmic_spectral_density(p), spec);
}

inline double dephasing_rate_at(double t, const DephasingParams& p, const QuadratureSpec& spec = {}) {
    if (p.temperature() == 0.0) return dephasing_rate(t, p);
    return dephasing_rate_quadrature(t, p, ohmic_spectral_density(p), spec);
}

/// (r_x, r_y, r_z) -> (r_x e^{-Gamma_t}, r_y e^{-Gamma_t}, r_z).
inline BlochState dephasing_state(double t, const BlochState& r0, const DephasingParams& p,
                                  const QuadratureSpec& spec = {}) {
    detail::require_bloch(r0);
    detail::require_time(t);
    const double c = std::exp(-dephasing_factor_at(t, p, spec));
    return {r0.x * c, r0.y * c, r0.z};
}

inline HermMat dephasing_generator(double t, const BlochState& r0, const DephasingParams& p,
                                   const QuadratureSpec& spec = {}) {
    detail::require_bloch(r0);
    detail::require_time(t);
    if (r0.x == 0.0 && r0.y == 0.0) return detail::traceless_qubit(0.0, 0.0);
    const double c = std::exp(-dephasing_factor_at(t, p, spec));
    const double g = dephasing_rate_at(t, p, spec);
    return detail::traceless_qubit(0.0, cplx(-0.5 * g * c * r0.x, 0.5 * g * c * r0.y));
}

/// (gamma/2) (sz rho sz - rho).
inline HermMat dephasing_dissipator(const HermMat& rho, double gamma) {
    if (rho.dim() != 2) throw DimensionMismatch("dephasing acts on a qubit");
    ComplexMat out(2);
    out(0, 1) = -gamma * rho(0, 1);
    out(1, 0) = -gamma * rho(1, 0);
    return HermMat::hermitian_part(out);
}

class DephasingTrajectory {
public:
    DephasingTrajectory(DephasingParams params, BlochState initial, QuadratureSpec spec = {})
        : params_(params), initial_(detail::require_bloch(initial)), spec_(spec) {}

    const DephasingParams& params() const noexcept { return params_; }
    BlochState initial() const noexcept { return initial_; }
    BlochState state(double t) const {
        return t == 0.0 ? initial_ : dephasing_state(t, initial_, params_, spec_);
    }
    HermMat generator(double t) const { return dephasing_generator(t, initial_, params_, spec_); }
    double purity_deficit(double t) const { return state(t).purity_deficit(); }
    std::vector<double> breakpoints(double tau) const {
        if (params_.temperature() != 0.0) return {};
        return dephasing_rate_zeros(params_, tau);
    }
    std::vector<double> purity_hints(double) const { return {}; }

private:
    DephasingParams params_;
    BlochState initial_;
    QuadratureSpec spec_;
};

}  // namespace qsl
