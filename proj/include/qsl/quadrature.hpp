#pragma once

// Adaptive Simpson quadrature over a fixed set of initial panels.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qsl/errors.hpp"

namespace qsl {

struct QuadratureSpec {
    double abs_tol = 1e-9;
    double rel_tol = 1e-8;
    int max_depth = 40;
    int initial_panels = 64;

    void validate() const {
        if (!(abs_tol > 0.0)) throw InvalidInput("quadrature abs_tol must be > 0");
        if (!(rel_tol > 0.0)) throw InvalidInput("quadrature rel_tol must be > 0");
        if (max_depth < 1) throw InvalidInput("quadrature max_depth must be >= 1");
        if (initial_panels < 8) throw InvalidInput("quadrature initial_panels must be >= 8");
    }
};

namespace detail {

struct SimpsonState {
    int max_depth;
    bool exhausted = false;
    bool non_finite = false;
};

inline bool all_finite(double a, double b, double c) {
    return std::isfinite(a) && std::isfinite(b) && std::isfinite(c);
}

template <class F>
double adaptive_simpson(F& f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, SimpsonState& st) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    if (!all_finite(flm, frm, 0.0)) {
        st.non_finite = true;
        return whole;
    }
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= st.max_depth || m <= a || b <= m) {
        st.exhausted = true;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, st) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, st);
}

template <class F>
double integrate_segment(F& f, double a, double b, const QuadratureSpec& spec, int panels,
                         double abs_tol, SimpsonState& st) {
    struct Panel {
        double a, b, fa, fm, fb, s;
    };
    std::vector<Panel> ps(static_cast<std::size_t>(panels));
    const double h = (b - a) / panels;
    double fa = f(a);
    double coarse = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double pa = a + i * h;
        const double pb = (i + 1 == panels) ? b : a + (i + 1) * h;
        const double fm = f(0.5 * (pa + pb));
        const double fb = f(pb);
        if (!all_finite(fa, fm, fb)) {
            st.non_finite = true;
            return std::nan("");
        }
        const double s = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        ps[static_cast<std::size_t>(i)] = {pa, pb, fa, fm, fb, s};
        coarse += s;
        fa = fb;
    }
    const double tol = std::max(abs_tol, spec.rel_tol * std::abs(coarse)) / panels;
    double total = 0.0;
    for (const auto& p : ps) total += adaptive_simpson(f, p.a, p.b, p.fa, p.fm, p.fb, p.s, tol, 0, st);
    return total;
}

inline void finish(const SimpsonState& st, double value) {
    if (st.non_finite) throw AccuracyError("integrand is not finite on the integration domain", value);
    if (st.exhausted) {
        throw AccuracyError("adaptive Simpson exceeded max_depth without meeting tolerance", value);
    }
}

}  // namespace detail

/// Integral of f over [a, b]. Throws AccuracyError (carrying the best
/// estimate) when some panel cannot be resolved within spec.max_depth.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a <= b)) throw InvalidInput("integration bounds must satisfy a <= b");
    if (a == b) return 0.0;
    detail::SimpsonState st{spec.max_depth};
    const double v = detail::integrate_segment(f, a, b, spec, spec.initial_panels, spec.abs_tol, st);
    detail::finish(st, v);
    return v;
}

/// Integral of f over [points.front(), points.back()], split at every interior
/// point first. Used where the integrand has known kinks. Points must be
/// ascending; duplicates are skipped.
template <class F>
double integrate(F&& f, std::span<const double> points, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (points.size() < 2) throw InvalidInput("need at least two integration points");
    if (!std::is_sorted(points.begin(), points.end())) {
        throw InvalidInput("integration points must be ascending");
    }
    const double length = points.back() - points.front();
    if (length == 0.0) return 0.0;
    detail::SimpsonState st{spec.max_depth};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double a = points[i], b = points[i + 1];
        if (b <= a) continue;
        const double frac = (b - a) / length;
        const int panels = std::max(8, static_cast<int>(std::ceil(spec.initial_panels * frac)));
        total += detail::integrate_segment(f, a, b, spec, panels, spec.abs_tol * frac, st);
    }
    detail::finish(st, total);
    return total;
}

}  // namespace qsl
