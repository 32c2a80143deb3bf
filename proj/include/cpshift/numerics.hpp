#pragma once

// Self-contained numerical toolkit: adaptive Gauss-Kronrod 15(7) quadrature on
// finite intervals, semi-infinite quadrature for exponentially damped
// integrands, Cauchy principal-value quadrature with known simple poles,
// a bracketing root finder, and Bessel J0/J1.
//
// Everything here is a pure function; integrand closures must be
// side-effect-free. Nothing mutates shared state.

#include "cpshift/core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace cpshift::numerics {

struct QuadratureConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    int max_subdivisions = 60;  // interval bisections before flagging unconverged
    double tail_cutoff = 1.0;   // semi-infinite truncation: e^{-rate x} < tail_cutoff * eps
    double pv_exclusion = 0.25; // excision half-width as a fraction of the pole gap

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol >= 0.0))
            throw ValidationError("quadrature config: tolerances");
        if (max_subdivisions < 1)
            throw ValidationError("quadrature config: max_subdivisions >= 1");
        if (!(tail_cutoff > 0.0) || tail_cutoff > 1.0)
            throw ValidationError("quadrature config: tail_cutoff in (0,1]");
        if (!(pv_exclusion > 0.0) || !(pv_exclusion < 0.5))
            throw ValidationError("quadrature config: pv_exclusion in (0,1/2)");
    }
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

struct Bracket {
    double lo = 0.0, hi = 0.0;
    double f_lo = 0.0, f_hi = 0.0;
};

struct Root {
    double x = 0.0;
    double residual = 0.0; // |f(x)|
};

namespace detail {

// Kronrod 15-point nodes on [-1,1] (positive half) and weights; the embedded
// 7-point Gauss rule supplies the error estimate.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(const std::complex<double>& v) { return std::abs(v); }

// Two simultaneously integrated real channels.
struct Pair2 {
    double a = 0.0, b = 0.0;
    Pair2 operator+(const Pair2& o) const { return {a + o.a, b + o.b}; }
    Pair2 operator-(const Pair2& o) const { return {a - o.a, b - o.b}; }
    Pair2 operator*(double s) const { return {a * s, b * s}; }
};
inline double quad_norm(const Pair2& v) { return std::max(std::abs(v.a), std::abs(v.b)); }

template <class T>
struct Panel {
    double lo, hi;
    T value{};
    double err = 0.0;
};

template <class T, class F>
Panel<T> gk15(F&& f, double lo, double hi, long& evals) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    T sum15{};
    T sum7{};
    for (int i = 0; i < 8; ++i) {
        const double x = kGK15Nodes[i];
        T v = (i == 7) ? static_cast<T>(f(c)) : static_cast<T>(f(c - h * x) + f(c + h * x));
        evals += (i == 7) ? 1 : 2;
        sum15 = sum15 + v * kGK15Weights[i];
        if (i % 2 == 1 || i == 7) sum7 = sum7 + v * kG7Weights[i / 2];
    }
    Panel<T> p{lo, hi, sum15 * h, 0.0};
    const double diff = quad_norm((sum15 - sum7) * h);
    // QUADPACK-style sharpening of the raw |K15-G7| difference.
    p.err = diff;
    if (diff > 0.0) {
        const double scale = std::pow(200.0 * diff / std::max(quad_norm(p.value), 1e-300), 1.5);
        if (scale < 1.0) p.err = diff * scale;
    }
    return p;
}

template <class T, class F>
struct AdaptiveOutcome {
    T value{};
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

// Globally adaptive bisection: repeatedly split the panel with the largest
// error estimate until the total satisfies max(abs_tol, rel_tol*|I|).
template <class T, class F>
AdaptiveOutcome<T, F> integrate_adaptive(F&& f, double lo, double hi, const QuadratureConfig& cfg) {
    AdaptiveOutcome<T, F> out;
    if (lo == hi) return out;
    std::vector<Panel<T>> panels;
    panels.push_back(gk15<T>(f, lo, hi, out.evaluations));
    for (int split = 0; split < cfg.max_subdivisions; ++split) {
        T total{};
        double err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            total = total + panels[i].value;
            err += panels[i].err;
            if (panels[i].err > panels[worst].err) worst = i;
        }
        if (err <= std::max(cfg.abs_tol, cfg.rel_tol * quad_norm(total))) {
            out.value = total;
            out.abs_error = err;
            return out;
        }
        const Panel<T> w = panels[worst];
        const double mid = 0.5 * (w.lo + w.hi);
        if (mid <= w.lo || mid >= w.hi) break; // interval at rounding limit
        panels[worst] = gk15<T>(f, w.lo, mid, out.evaluations);
        panels.push_back(gk15<T>(f, mid, w.hi, out.evaluations));
    }
    T total{};
    double err = 0.0;
    for (const auto& p : panels) {
        total = total + p.value;
        err += p.err;
    }
    out.value = total;
    out.abs_error = err;
    out.converged = err <= std::max(cfg.abs_tol, cfg.rel_tol * quad_norm(total));
    return out;
}

template <class T, class F>
AdaptiveOutcome<T, F> integrate_segments(F&& f, const std::vector<double>& cuts,
                                         const QuadratureConfig& cfg) {
    AdaptiveOutcome<T, F> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto r = integrate_adaptive<T>(f, cuts[i], cuts[i + 1], cfg);
        out.value = out.value + r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

double semi_infinite_cutoff(double damping_rate, const QuadratureConfig& cfg);

} // namespace detail

// f finite on [lo,hi] except for integrable endpoint singularities of
// (x-c)^(-1/2) type (the rule never samples endpoints).
QuadResult integrate_finite(const std::function<double(double)>& f, double lo, double hi,
                            const QuadratureConfig& cfg = {});

// |f(x)| <= C e^{-damping_rate x}: truncates where the damping factor falls
// below tail_cutoff * machine epsilon, then integrates adaptively.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double damping_rate,
                                   const QuadratureConfig& cfg = {});

// Cauchy principal value over (lo,hi) with the listed simple poles.
// Symmetric excision: away-parts plus per-pole symmetric-pair integrals
// int_{d}^{d0} [f(p+t)+f(p-t)] dt with d shrunk geometrically until the
// extrapolated limit stabilizes. Throws ClusteringError when poles crowd each
// other or the endpoints relative to pv_exclusion.
QuadResult integrate_principal_value(const std::function<double(double)>& f, double lo, double hi,
                                     const std::vector<double>& poles,
                                     const QuadratureConfig& cfg = {});

// Scans scan_points uniform cells for sign changes, then refines each bracket
// by bisection followed by secant steps. Roots come back sorted.
std::vector<Root> find_roots_bracketed(const std::function<double(double)>& f, double lo, double hi,
                                       int scan_points, const QuadratureConfig& cfg = {});

// Bessel functions of the first kind. Power series below x = 8, the standard
// asymptotic form sqrt(2/(pi x)) [P cos(x-phi) - Q sin(x-phi)] above, with the
// P, Q amplitude polynomials accurate to ~1e-14. Absolute error <= 1e-12.
double bessel_j0(double x);
double bessel_j1(double x);

} // namespace cpshift::numerics
