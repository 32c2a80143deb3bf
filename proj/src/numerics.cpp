#include "cpshift/numerics.hpp"

#include <cmath>

namespace cpshift::numerics {

namespace detail {

double semi_infinite_cutoff(double damping_rate, const QuadratureConfig& cfg) {
    const double eps = std::numeric_limits<double>::epsilon();
    return -std::log(cfg.tail_cutoff * eps) / damping_rate;
}

} // namespace detail

QuadResult integrate_finite(const std::function<double(double)>& f, double lo, double hi,
                            const QuadratureConfig& cfg) {
    cfg.validate();
    double sign = 1.0;
    if (hi < lo) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    auto r = detail::integrate_adaptive<double>(f, lo, hi, cfg);
    return {sign * r.value, r.abs_error, r.evaluations, r.converged};
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double damping_rate,
                                   const QuadratureConfig& cfg) {
    cfg.validate();
    if (!(damping_rate > 0.0))
        throw ValidationError("integrate_semi_infinite: damping_rate must be > 0");
    const double x_max = detail::semi_infinite_cutoff(damping_rate, cfg);
    // Geometric panels keep the adaptive splitter from wasting depth on the
    // huge empty tail when the mass sits near the origin.
    std::vector<double> cuts{0.0};
    double step = 1.0 / damping_rate;
    double x = 0.0;
    while (x + step < x_max) {
        x += step;
        cuts.push_back(x);
        step *= 4.0;
    }
    cuts.push_back(x_max);
    auto r = detail::integrate_segments<double>(f, cuts, cfg);
    return {r.value, r.abs_error, r.evaluations, r.converged};
}

QuadResult integrate_principal_value(const std::function<double(double)>& f, double lo, double hi,
                                     const std::vector<double>& poles,
                                     const QuadratureConfig& cfg) {
    cfg.validate();
    if (poles.empty()) return integrate_finite(f, lo, hi, cfg);
    std::vector<double> p(poles);
    std::sort(p.begin(), p.end());

    const double span = hi - lo;
    std::vector<double> delta0(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > lo) || !(p[i] < hi))
            throw ClusteringError("pole clustering: pole outside open interval");
        double gap = std::min(p[i] - lo, hi - p[i]);
        if (i > 0) gap = std::min(gap, 0.5 * (p[i] - p[i - 1]));
        if (i + 1 < p.size()) gap = std::min(gap, 0.5 * (p[i + 1] - p[i]));
        delta0[i] = cfg.pv_exclusion * gap;
        if (delta0[i] < 1e3 * std::numeric_limits<double>::epsilon() * std::max(span, 1.0))
            throw ClusteringError("pole clustering: excision width below resolution");
    }

    QuadResult out;
    // Away-parts outside every excision neighborhood.
    std::vector<double> cuts{lo};
    for (std::size_t i = 0; i < p.size(); ++i) {
        cuts.push_back(p[i] - delta0[i]);
        cuts.push_back(p[i] + delta0[i]);
    }
    cuts.push_back(hi);
    for (std::size_t i = 0; i < cuts.size(); i += 2) {
        auto r = detail::integrate_adaptive<double>(f, cuts[i], cuts[i + 1], cfg);
        out.value += r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }

    // Near-parts: the symmetric pair g(t) = f(p+t)+f(p-t) has a removable
    // singularity at t=0. Integrate [d_k, d0] with d_k shrunk geometrically;
    // g is regular, so successive increments decay by the shrink ratio and
    // the leftover tail extrapolates geometrically. The excision stops once
    // two consecutive extrapolated limits agree, which happens long before
    // the f(p+t) + f(p-t) cancellation becomes noisy.
    constexpr double kShrink = 0.25;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double pole = p[i];
        auto g = [&](double t) { return f(pole + t) + f(pole - t); };
        double outer = delta0[i];
        double sum = 0.0;
        double prev_increment = 0.0;
        double limit = 0.0, prev_limit = 0.0;
        double limit_err = std::numeric_limits<double>::infinity();
        bool settled = false;
        for (int k = 0; k < 40 && !settled; ++k) {
            const double inner = outer * kShrink;
            auto r = detail::integrate_adaptive<double>(g, inner, outer, cfg);
            out.evaluations += r.evaluations;
            out.abs_error += r.abs_error;
            out.converged = out.converged && r.converged;
            const double increment = r.value;
            sum += increment;
            if (k >= 1) {
                const double ratio = prev_increment != 0.0 ? increment / prev_increment : 0.0;
                prev_limit = limit;
                limit = (std::abs(ratio) < 0.9) ? sum + increment * ratio / (1.0 - ratio) : sum;
                if (k >= 2) {
                    limit_err = std::abs(limit - prev_limit);
                    const double scale = std::max(std::abs(out.value + limit), 1.0e-300);
                    if (limit_err <= std::max(cfg.abs_tol, cfg.rel_tol * scale)) settled = true;
                }
            }
            prev_increment = increment;
            outer = inner;
        }
        if (!settled) out.converged = false;
        out.value += settled ? limit : sum;
        if (std::isfinite(limit_err)) out.abs_error += limit_err;
    }
    return out;
}

namespace {

// Bisection to shrink, then secant steps with bisection fallback.
Root refine_root(const std::function<double(double)>& f, Bracket br, const QuadratureConfig& cfg) {
    double a = br.lo, b = br.hi, fa = br.f_lo, fb = br.f_hi;
    for (int i = 0; i < 200; ++i) {
        if (std::abs(fa) <= cfg.abs_tol) return {a, std::abs(fa)};
        if (std::abs(fb) <= cfg.abs_tol) return {b, std::abs(fb)};
        double m;
        const bool use_secant = (i % 2 == 1) && fb != fa;
        if (use_secant) {
            m = b - fb * (b - a) / (fb - fa);
            if (!(m > a && m < b)) m = 0.5 * (a + b);
        } else {
            m = 0.5 * (a + b);
        }
        if (m <= a || m >= b) break; // width at rounding limit
        const double fm = f(m);
        if ((fa < 0.0) != (fm < 0.0)) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return (std::abs(fa) < std::abs(fb)) ? Root{a, std::abs(fa)} : Root{b, std::abs(fb)};
}

} // namespace

std::vector<Root> find_roots_bracketed(const std::function<double(double)>& f, double lo, double hi,
                                       int scan_points, const QuadratureConfig& cfg) {
    cfg.validate();
    std::vector<Root> roots;
    if (scan_points < 1 || !(hi > lo)) return roots;
    const double h = (hi - lo) / scan_points;
    double x0 = lo, f0 = f(x0);
    for (int i = 1; i <= scan_points; ++i) {
        const double x1 = (i == scan_points) ? hi : lo + i * h;
        const double f1 = f(x1);
        if (f0 == 0.0) {
            roots.push_back({x0, 0.0});
        } else if ((f0 < 0.0) != (f1 < 0.0)) {
            roots.push_back(refine_root(f, {x0, x1, f0, f1}, cfg));
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) roots.push_back({x0, 0.0});
    std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.x < b.x; });
    return roots;
}

namespace {

// Asymptotic amplitude polynomials in t=(8/x)^2, highest-order first;
// J = sqrt(2/(pi x)) [P(t) cos(x-phi) - Qhat(t) (8/x) sin(x-phi)].
constexpr double kJ0P[] = {
    1.3956268100757850524e-9, -9.1079981073396513136e-9, 3.1995360274887709406e-8,
    -9.6660222553781388362e-8, 3.6027214739309888155e-7, -2.1836012467163520496e-6,
    2.738085408933918921e-5,  -1.0986328114161524795e-3, 0.99999999999999334137};
constexpr double kJ0Q[] = {
    -1.0732597687060518707e-9, 6.7548816399043490714e-9, -2.2160022019507605684e-8,
    5.9059722268226412639e-8,  -1.8010792191155003409e-7, 8.235695636051926681e-7,
    -6.9307607247219032529e-6, 1.4305114653110465643e-4, -1.5624999999994290381e-2};
constexpr double kJ1P[] = {
    -1.511264084149026354e-9, 9.8937634055784590739e-9, -3.4977216568318427446e-8,
    1.0702695064785125172e-7, -4.084150103580145695e-7, 2.5806540964175930158e-6,
    -3.5203961526582910472e-5, 1.8310546863358095643e-3, 1.0000000000000071524};
constexpr double kJ1Q[] = {
    1.1572654090886951247e-9, -7.3023477881955296178e-9, 2.4077858581436959015e-8,
    -6.4821725430812010078e-8, 2.0137149071664237382e-7, -9.5029566123603648947e-7,
    8.4709336439160845533e-6, -2.0027160545000261981e-4, 4.6874999999993888128e-2};

double polyval(const double (&c)[9], double t) {
    double v = 0.0;
    for (double ci : c) v = v * t + ci;
    return v;
}

double bessel_asymptotic(double x, const double (&P)[9], const double (&Q)[9], double phase) {
    const double t = 64.0 / (x * x); // (8/x)^2
    const double amp = std::sqrt(2.0 / (M_PI * x));
    const double chi = x - phase;
    return amp * (polyval(P, t) * std::cos(chi) - polyval(Q, t) * (8.0 / x) * std::sin(chi));
}

} // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    if (x < 8.0) {
        // sum (-(x/2)^2)^k / (k!)^2
        const double m = -0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= m / (static_cast<double>(k) * k);
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
        }
        return sum;
    }
    return bessel_asymptotic(x, kJ0P, kJ0Q, 0.25 * M_PI);
}

double bessel_j1(double x) {
    const double sign = (x < 0.0) ? -1.0 : 1.0;
    x = std::abs(x);
    if (x < 8.0) {
        // (x/2) sum (-(x/2)^2)^k / (k! (k+1)!)
        const double m = -0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 60; ++k) {
            term *= m / (static_cast<double>(k) * (k + 1));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
        }
        return sign * 0.5 * x * sum;
    }
    return sign * bessel_asymptotic(x, kJ1P, kJ1Q, 0.75 * M_PI);
}

} // namespace cpshift::numerics
