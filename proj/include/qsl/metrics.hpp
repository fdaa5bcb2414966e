#pragma once

// Distances between density matrices: Uhlmann fidelity, super-fidelity and
// the two angles built from them.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qsl/errors.hpp"
#include "qsl/matcore.hpp"

namespace qsl {

/// Fidelity-like overlap in [0, 1]. Values within 1e-9 outside the interval
/// are clamped; anything further out is a bug upstream and throws.
class FidelityValue {
public:
    static constexpr double kClampSlack = 1e-9;

    explicit FidelityValue(double v) {
        if (!(v >= -kClampSlack && v <= 1.0 + kClampSlack)) {
            throw InvalidInput("fidelity " + std::to_string(v) + " outside [0, 1]");
        }
        value_ = std::clamp(v, 0.0, 1.0);
    }
    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

/// Angle in [0, pi/2].
class AngleValue {
public:
    explicit AngleValue(double radians) : radians_(std::clamp(radians, 0.0, std::numbers::pi / 2)) {}
    double radians() const noexcept { return radians_; }
    operator double() const noexcept { return radians_; }

private:
    double radians_ = 0.0;
};

inline constexpr double kDensityTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
/// 1 - tr[rho^2] below this counts as an exactly pure state.
inline constexpr double kPureDeficit = 1e-14;

inline void require_density_matrix(const HermMat& rho) {
    const cplx tr = rho.mat().trace();
    if (std::abs(tr - 1.0) > kDensityTraceTol) {
        throw InvalidState("density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    const auto e = eig_herm(rho);
    if (e.values.back() < -kPsdTol) {
        throw InvalidState("density matrix has negative eigenvalue " + std::to_string(e.values.back()));
    }
}

/// tr[rho^2] = sum |rho_ij|^2 for Hermitian rho, no validation.
inline double purity_unchecked(const ComplexMat& rho) noexcept {
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j) s += std::norm(rho(i, j));
    return s;
}

inline double purity(const HermMat& rho) {
    require_density_matrix(rho);
    return purity_unchecked(rho);
}

/// F = (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
inline FidelityValue uhlmann_fidelity(const HermMat& rho, const HermMat& sigma) {
    rho.mat().require_same_dim(sigma);
    require_density_matrix(rho);
    require_density_matrix(sigma);
    const HermMat root = sqrt_psd(rho);
    const HermMat inner = HermMat::hermitian_part(root.mat() * sigma.mat() * root.mat());
    const auto e = eig_herm(inner);
    if (e.values.back() < -kPsdTol) throw NotPsd("sqrt(rho) sigma sqrt(rho) is not PSD");
    double s = 0.0;
    for (double v : e.values) s += std::sqrt(std::max(v, 0.0));
    return FidelityValue(s * s);
}

/// tr[rho sigma] + sqrt(1 - tr rho^2) sqrt(1 - tr sigma^2).
inline FidelityValue super_fidelity(const HermMat& rho, const HermMat& sigma) {
    rho.mat().require_same_dim(sigma);
    const double overlap = trace_of_product(rho, sigma).real();
    double d_rho = std::max(0.0, 1.0 - purity_unchecked(rho));
    double d_sigma = std::max(0.0, 1.0 - purity_unchecked(sigma));
    if (d_rho < kPureDeficit) d_rho = 0.0;
    if (d_sigma < kPureDeficit) d_sigma = 0.0;
    return FidelityValue(overlap + std::sqrt(d_rho) * std::sqrt(d_sigma));
}

inline AngleValue angle_from_fidelity(FidelityValue f) noexcept {
    return AngleValue(std::acos(std::sqrt(f.value())));
}

inline AngleValue bures_angle(const HermMat& rho, const HermMat& sigma) {
    return angle_from_fidelity(uhlmann_fidelity(rho, sigma));
}

inline AngleValue modified_bures_angle(const HermMat& rho, const HermMat& sigma) {
    return angle_from_fidelity(super_fidelity(rho, sigma));
}

}  // namespace qsl
