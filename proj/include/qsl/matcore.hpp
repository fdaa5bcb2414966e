#pragma once

// Small dense complex matrices (dimension 2..8): Hermitian eigensolver,
// singular values, the operator / trace / Hilbert-Schmidt norms, PSD square
// roots, and the qubit Bloch-vector <-> density-matrix map.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/errors.hpp"

namespace qsl {

using cplx = std::complex<double>;

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 8;

// ---------------------------------------------------------------------------
// ComplexMat

class ComplexMat {
public:
    explicit ComplexMat(int dim) : dim_(dim) {
        if (dim < kMinDim || dim > kMaxDim) {
            throw InvalidInput("matrix dimension " + std::to_string(dim) + " outside [2, 8]");
        }
    }

    ComplexMat(std::initializer_list<std::initializer_list<cplx>> rows)
        : ComplexMat(static_cast<int>(rows.size())) {
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != dim_) {
                throw InvalidInput("matrix rows must all have length " + std::to_string(dim_));
            }
            int j = 0;
            for (const auto& v : row) (*this)(i, j++) = v;
            ++i;
        }
    }

    static ComplexMat identity(int dim) {
        ComplexMat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMat diagonal(std::initializer_list<double> d) {
        ComplexMat m(static_cast<int>(d.size()));
        int i = 0;
        for (double v : d) {
            m(i, i) = v;
            ++i;
        }
        return m;
    }

    int dim() const noexcept { return dim_; }

    cplx& operator()(int i, int j) noexcept { return a_[static_cast<std::size_t>(i * kMaxDim + j)]; }
    const cplx& operator()(int i, int j) const noexcept {
        return a_[static_cast<std::size_t>(i * kMaxDim + j)];
    }

    ComplexMat adjoint() const {
        ComplexMat r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    cplx trace() const noexcept {
        cplx t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs((*this)(i, j)));
        return m;
    }

    bool all_finite() const noexcept {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) {
                const cplx& v = (*this)(i, j);
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
            }
        return true;
    }

    /// Frobenius norm computed directly from the entries.
    double frobenius() const noexcept {
        double s = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) s += std::norm((*this)(i, j));
        return std::sqrt(s);
    }

    ComplexMat& operator+=(const ComplexMat& o) {
        require_same_dim(o);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) (*this)(i, j) += o(i, j);
        return *this;
    }
    ComplexMat& operator-=(const ComplexMat& o) {
        require_same_dim(o);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) (*this)(i, j) -= o(i, j);
        return *this;
    }
    ComplexMat& operator*=(cplx s) noexcept {
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) (*this)(i, j) *= s;
        return *this;
    }

    friend ComplexMat operator+(ComplexMat a, const ComplexMat& b) { return a += b; }
    friend ComplexMat operator-(ComplexMat a, const ComplexMat& b) { return a -= b; }
    friend ComplexMat operator*(ComplexMat a, cplx s) { return a *= s; }
    friend ComplexMat operator*(cplx s, ComplexMat a) { return a *= s; }

    friend ComplexMat operator*(const ComplexMat& a, const ComplexMat& b) {
        a.require_same_dim(b);
        ComplexMat r(a.dim_);
        for (int i = 0; i < a.dim_; ++i)
            for (int k = 0; k < a.dim_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx(0.0)) continue;
                for (int j = 0; j < a.dim_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    void require_same_dim(const ComplexMat& o) const {
        if (o.dim_ != dim_) {
            throw DimensionMismatch("matrix dimensions differ: " + std::to_string(dim_) + " vs " +
                                    std::to_string(o.dim_));
        }
    }

private:
    int dim_;
    std::array<cplx, kMaxDim * kMaxDim> a_{};
};

/// tr[A B] without forming the product.
inline cplx trace_of_product(const ComplexMat& a, const ComplexMat& b) {
    a.require_same_dim(b);
    cplx t = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int k = 0; k < a.dim(); ++k) t += a(i, k) * b(k, i);
    return t;
}

inline double hermiticity_defect(const ComplexMat& m) noexcept {
    double d = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = i; j < m.dim(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
    return d;
}

// ---------------------------------------------------------------------------
// HermMat

/// A ComplexMat that passed the Hermiticity check
/// max|M_ij - conj(M_ji)| <= 1e-12 (1 + max|M|).
class HermMat {
public:
    static constexpr double kHermitianTol = 1e-12;

    explicit HermMat(ComplexMat m) : m_(std::move(m)) {
        if (!m_.all_finite()) throw InvalidInput("matrix has non-finite entries");
        if (hermiticity_defect(m_) > kHermitianTol * (1.0 + m_.max_abs())) {
            throw InvalidInput("matrix is not Hermitian within tolerance");
        }
    }

    /// (M + M^dagger) / 2; for products that are Hermitian only up to rounding.
    static HermMat hermitian_part(const ComplexMat& m) {
        ComplexMat h = m + m.adjoint();
        h *= 0.5;
        return HermMat(std::move(h));
    }

    int dim() const noexcept { return m_.dim(); }
    const cplx& operator()(int i, int j) const noexcept { return m_(i, j); }
    const ComplexMat& mat() const noexcept { return m_; }
    operator const ComplexMat&() const noexcept { return m_; }

private:
    ComplexMat m_;
};

// ---------------------------------------------------------------------------
// Eigen-decomposition

struct EigenDecomposition {
    std::vector<double> values;  // descending
    ComplexMat vectors;          // column k belongs to values[k]
};

inline constexpr int kMaxJacobiSweeps = 100;

/// Cyclic complex Jacobi. Each rotation first removes the phase of the pivot
/// A(p,q) with diag(1, e^{-i phi}) and then applies a real Givens rotation.
inline EigenDecomposition eig_herm(const HermMat& m) {
    const int n = m.dim();
    ComplexMat a = m.mat() + m.mat().adjoint();
    a *= 0.5;
    for (int i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    ComplexMat v = ComplexMat::identity(n);

    const double scale = a.frobenius();
    auto off_diagonal = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return std::sqrt(2.0 * s);
    };

    bool converged = false;
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        const double off = off_diagonal();
        if (off == 0.0 || off <= 1e-15 * scale) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double g = std::abs(apq);
                if (g == 0.0 || g <= 1e-300) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * g);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * cs;
                const cplx ph = std::conj(apq / g);
                const cplx u00 = cs, u01 = sn, u10 = -sn * ph, u11 = cs * ph;

                for (int k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * u00 + akq * u10;
                    a(k, q) = akp * u01 + akq * u11;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(u00) * apk + std::conj(u10) * aqk;
                    a(q, k) = std::conj(u01) * apk + std::conj(u11) * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * u00 + vkq * u10;
                    v(k, q) = vkp * u01 + vkq * u11;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }
    if (!converged) {
        throw ConvergenceError("Jacobi eigensolver did not converge in " +
                               std::to_string(kMaxJacobiSweeps) + " sweeps");
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });

    EigenDecomposition out{std::vector<double>(static_cast<std::size_t>(n)), ComplexMat(n)};
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        out.values[static_cast<std::size_t>(k)] = a(src, src).real();
        for (int i = 0; i < n; ++i) out.vectors(i, k) = v(i, src);
    }
    return out;
}

/// Singular values, descending, as square roots of the eigenvalues of M^dagger M.
inline std::vector<double> singular_values(const ComplexMat& m) {
    if (!m.all_finite()) throw InvalidInput("matrix has non-finite entries");
    const auto e = eig_herm(HermMat::hermitian_part(m.adjoint() * m));
    std::vector<double> s(e.values.size());
    std::transform(e.values.begin(), e.values.end(), s.begin(),
                   [](double ev) { return std::sqrt(std::max(ev, 0.0)); });
    return s;
}

// ---------------------------------------------------------------------------
// Norms

enum class NormKind { op, trace, hs };

inline constexpr std::string_view to_string(NormKind k) noexcept {
    switch (k) {
        case NormKind::op: return "operator";
        case NormKind::trace: return "trace";
        case NormKind::hs: return "hilbert_schmidt";
    }
    return "?";
}

inline double norm_from_singular_values(const std::vector<double>& s, NormKind kind) {
    switch (kind) {
        case NormKind::op: return s.empty() ? 0.0 : s.front();
        case NormKind::trace: return std::accumulate(s.begin(), s.end(), 0.0);
        case NormKind::hs: {
            double sq = 0.0;
            for (double x : s) sq += x * x;
            return std::sqrt(sq);
        }
    }
    return 0.0;
}

inline double norm(const ComplexMat& m, NormKind kind) {
    return norm_from_singular_values(singular_values(m), kind);
}

// ---------------------------------------------------------------------------
// PSD square root

inline HermMat sqrt_psd(const HermMat& m) {
    const auto e = eig_herm(m);
    const int n = m.dim();
    if (e.values.back() < -1e-9) {
        throw NotPsd("matrix has eigenvalue " + std::to_string(e.values.back()) + " < -1e-9");
    }
    ComplexMat r(n);
    for (int k = 0; k < n; ++k) {
        const double root = std::sqrt(std::max(e.values[static_cast<std::size_t>(k)], 0.0));
        if (root == 0.0) continue;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r(i, j) += root * e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    return HermMat::hermitian_part(r);
}

// ---------------------------------------------------------------------------
// Qubit Bloch representation

/// Bloch vector of a qubit state: rho = (I + x sx + y sy + z sz) / 2.
/// Index 0 is the excited level, so z = +1 is diag(1, 0).
struct BlochState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double length() const noexcept { return std::sqrt(x * x + y * y + z * z); }
    /// Transverse length sqrt(x^2 + y^2), the l1-type coherence of the state.
    double coherence() const noexcept { return std::hypot(x, y); }
    /// 1 - tr[rho^2] = (1 - |r|^2) / 2.
    double purity_deficit() const noexcept { return 0.5 * (1.0 - (x * x + y * y + z * z)); }

    friend bool operator==(const BlochState&, const BlochState&) = default;
};

inline constexpr double kBlochSlack = 1e-9;

inline HermMat bloch_to_matrix(const BlochState& r) {
    if (!std::isfinite(r.x) || !std::isfinite(r.y) || !std::isfinite(r.z)) {
        throw InvalidState("Bloch vector has non-finite components");
    }
    if (r.length() > 1.0 + kBlochSlack) {
        throw InvalidState("Bloch vector length " + std::to_string(r.length()) + " exceeds 1");
    }
    ComplexMat m(2);
    m(0, 0) = 0.5 * (1.0 + r.z);
    m(1, 1) = 0.5 * (1.0 - r.z);
    m(0, 1) = cplx(0.5 * r.x, -0.5 * r.y);
    m(1, 0) = cplx(0.5 * r.x, 0.5 * r.y);
    return HermMat(std::move(m));
}

inline BlochState matrix_to_bloch(const HermMat& m) {
    if (m.dim() != 2) throw DimensionMismatch("Bloch representation needs a 2x2 matrix");
    const cplx tr = m.mat().trace();
    if (std::abs(tr - 1.0) > 1e-9) {
        throw InvalidState("density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    return BlochState{2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

}  // namespace qsl
