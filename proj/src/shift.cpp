#include "cpshift/shift.hpp"

#include "cpshift/fresnel.hpp"
#include "cpshift/modes.hpp"

#include <cmath>

namespace cpshift::shift {

using fresnel::EtaBranch;
using numerics::QuadratureConfig;
using numerics::detail::Pair2;

namespace {

constexpr cplx kI(0.0, 1.0);

} // namespace

GroundKernel ground_kernel(const Stack& s, double a, double b, const QuadratureConfig& cfg) {
    if (!(a > 0.0) || !(b >= 0.0)) throw ValidationError("ground_kernel: needs a > 0, b >= 0");
    GroundKernel out;
    QuadratureConfig inner = cfg;
    inner.rel_tol = 0.1 * cfg.rel_tol;
    long inner_evals = 0;
    bool inner_ok = true;

    auto inner_integral = [&](double x) -> Pair2 {
        auto f = [&](double y) -> Pair2 {
            const double rte =
                fresnel::reflection_imaginary_axis(s.n_l, s.n_s, b, x, y, Polarization::TE);
            const double rtm =
                fresnel::reflection_imaginary_axis(s.n_l, s.n_s, b, x, y, Polarization::TM);
            const double w = 1.0 / (1.0 + x * x * y * y);
            return {w * (y * y * rte - rtm), w * 2.0 * (y * y - 1.0) * rtm};
        };
        auto r = numerics::detail::integrate_adaptive<Pair2>(f, 0.0, 1.0, inner);
        inner_evals += r.evaluations;
        inner_ok = inner_ok && r.converged;
        const double damp = x * x * x * std::exp(-2.0 * a * x);
        return r.value * damp;
    };

    // x-cutoff: e^{-2ax} x^3 below machine noise.
    const double x_max = (numerics::detail::semi_infinite_cutoff(2.0 * a, cfg) * 2.0 * a + 12.0) /
                         (2.0 * a);
    std::vector<double> cuts{0.0};
    double step = 0.5 / a, x = 0.0;
    while (x + step < x_max) {
        x += step;
        cuts.push_back(x);
        step *= 4.0;
    }
    cuts.push_back(x_max);
    auto r = numerics::detail::integrate_segments<Pair2>(inner_integral, cuts, cfg);
    out.I_par = r.value.a;
    out.I_perp = r.value.b;
    out.abs_error = r.abs_error;
    out.evaluations = r.evaluations + inner_evals;
    out.converged = r.converged && inner_ok;
    return out;
}

GroundKernel excited_nonresonant_kernel(const Stack& s, double a, double b,
                                        const QuadratureConfig& cfg) {
    return ground_kernel(s, a, b, cfg);
}

namespace {

struct ComplexPair {
    cplx par, perp;
};

// Travelling contribution: T = int_0^1 e^{2 i a eta} {...} deta per channel.
ComplexPair travelling_integrals(const Stack& s, double a, double b, const QuadratureConfig& cfg,
                                 long& evals, bool& ok) {
    auto make = [&](bool par) {
        return [&, par](double eta) -> cplx {
            const cplx rte =
                fresnel::eta_reflection_reduced(s.n_l, s.n_s, b, eta, EtaBranch::Travelling,
                                                Polarization::TE);
            const cplx rtm =
                fresnel::eta_reflection_reduced(s.n_l, s.n_s, b, eta, EtaBranch::Travelling,
                                                Polarization::TM);
            const cplx g = par ? (rte - eta * eta * rtm) : 2.0 * (1.0 - eta * eta) * rtm;
            return g * std::exp(2.0 * kI * a * eta);
        };
    };
    ComplexPair out;
    auto rp = numerics::detail::integrate_adaptive<cplx>(make(true), 0.0, 1.0, cfg);
    auto rq = numerics::detail::integrate_adaptive<cplx>(make(false), 0.0, 1.0, cfg);
    out.par = rp.value;
    out.perp = rq.value;
    evals += rp.evaluations + rq.evaluations;
    ok = ok && rp.converged && rq.converged;
    return out;
}

double evanescent_integrand(const Stack& s, double a, double b, double eta, bool par,
                            double ieps = 0.0) {
    const cplx rte = fresnel::eta_reflection_reduced(s.n_l, s.n_s, b, eta, EtaBranch::Evanescent,
                                                     Polarization::TE, ieps);
    const cplx rtm = fresnel::eta_reflection_reduced(s.n_l, s.n_s, b, eta, EtaBranch::Evanescent,
                                                     Polarization::TM, ieps);
    const cplx g = par ? (rte + eta * eta * rtm) : 2.0 * (1.0 + eta * eta) * rtm;
    return std::real(g * std::exp(-2.0 * a * eta));
}

} // namespace

ResonantKernel resonant_kernel(const Stack& s, double a, double b, const QuadratureConfig& cfg,
                               PvMethod method) {
    if (!(a > 0.0) || !(b >= 0.0)) throw ValidationError("resonant_kernel: needs a > 0, b >= 0");
    ResonantKernel out;

    const ComplexPair trav = travelling_integrals(s, a, b, cfg, out.evaluations, out.converged);
    out.diag_im_par = trav.par.real();   // Re(i T) would enter decay rates
    out.diag_im_perp = trav.perp.real();

    // Evanescent path: branch points at eta_s, eta_l; guided-mode poles live
    // between them when n_l > n_s. The kernel is dimensionless, so poles are
    // found at unit frequency with the layer phase b.
    const double eta_s = std::sqrt(std::max(s.n_s * s.n_s - 1.0, 0.0));
    const double eta_l = std::sqrt(std::max(s.n_l * s.n_l - 1.0, 0.0));
    Stack unit_stack{s.n_l, s.n_s, b};
    std::vector<double> poles;
    if (s.n_l > s.n_s && b > 0.0) {
        for (Polarization pol : {Polarization::TE, Polarization::TM}) {
            for (double p : modes::find_eta_poles(unit_stack, 1.0, pol, cfg)) poles.push_back(p);
        }
        std::sort(poles.begin(), poles.end());
    }
    out.pole_list = poles;

    const double eta_max = eta_l + numerics::detail::semi_infinite_cutoff(2.0 * a, cfg);
    auto evan_channel = [&](bool par) -> numerics::QuadResult {
        auto f = [&](double eta) { return evanescent_integrand(s, a, b, eta, par); };
        numerics::QuadResult total;
        auto add = [&](const numerics::QuadResult& r) {
            total.value += r.value;
            total.abs_error += r.abs_error;
            total.evaluations += r.evaluations;
            total.converged = total.converged && r.converged;
        };
        if (eta_s > 0.0) add(numerics::integrate_finite(f, 0.0, eta_s, cfg));
        if (method == PvMethod::Excision || poles.empty()) {
            if (poles.empty()) {
                add(numerics::integrate_finite(f, eta_s, eta_l, cfg));
            } else {
                add(numerics::integrate_principal_value(f, eta_s, eta_l, poles, cfg));
            }
        } else {
            // Pole displacement: denominator shifted by +i eps, extrapolated
            // linearly from eps and eps/2. Cross-check mode.
            auto feps = [&](double eps) {
                auto g = [&](double eta) { return evanescent_integrand(s, a, b, eta, par, eps); };
                return numerics::integrate_finite(g, eta_s, eta_l, cfg);
            };
            const double eps0 = 1e-3;
            auto r1 = feps(eps0);
            auto r2 = feps(0.5 * eps0);
            numerics::QuadResult r;
            r.value = 2.0 * r2.value - r1.value;
            r.abs_error = r1.abs_error + r2.abs_error + std::abs(r2.value - r1.value);
            r.evaluations = r1.evaluations + r2.evaluations;
            r.converged = r1.converged && r2.converged;
            add(r);
        }
        add(numerics::integrate_finite(f, eta_l, eta_max, cfg));
        return total;
    };

    const auto evan_par = evan_channel(true);
    const auto evan_perp = evan_channel(false);

    out.K_par = trav.par.imag() - evan_par.value;
    out.K_perp = trav.perp.imag() - evan_perp.value;
    out.abs_error = evan_par.abs_error + evan_perp.abs_error;
    out.evaluations += evan_par.evaluations + evan_perp.evaluations;
    out.converged = out.converged && evan_par.converged && evan_perp.converged;
    return out;
}

ShiftResult nonresonant_shift(const Stack& s, const Transition& t, double Z,
                              const QuadratureConfig& cfg) {
    const auto [a, b] = reduced_units(t, {Z, s.L});
    const GroundKernel k = ground_kernel(s, a, b, cfg);
    const double e3 = t.E * t.E * t.E;
    const double pref = e3 / (8.0 * M_PI * M_PI);
    return {pref * (t.mu_par_sq * k.I_par + t.mu_perp_sq * k.I_perp),
            std::abs(pref) * (t.mu_par_sq + t.mu_perp_sq) * k.abs_error, k.evaluations,
            k.converged};
}

ShiftResult resonant_shift(const Stack& s, const Transition& t, double Z,
                           const QuadratureConfig& cfg) {
    if (!(t.E < 0.0))
        throw ValidationError("resonant_shift: applies to downward transitions (E < 0)");
    const auto [a, b] = reduced_units(t, {Z, s.L});
    const ResonantKernel k = resonant_kernel(s, a, b, cfg);
    const double mag3 = std::abs(t.E * t.E * t.E);
    const double pref = mag3 / (8.0 * M_PI);
    return {pref * (t.mu_par_sq * k.K_par + t.mu_perp_sq * k.K_perp),
            pref * (t.mu_par_sq + t.mu_perp_sq) * k.abs_error, k.evaluations, k.converged};
}

ShiftResult total_shift(const Stack& s, std::span<const Transition> transitions, double Z,
                        const QuadratureConfig& cfg) {
    ShiftAccumulator acc;
    for (const Transition& t : transitions) {
        validate_transition(t);
        acc.add(nonresonant_shift(s, t, Z, cfg));
        if (t.E < 0.0) acc.add(resonant_shift(s, t, Z, cfg));
    }
    return acc.total;
}

} // namespace cpshift::shift
