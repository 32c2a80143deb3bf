#include "cpshift/asymptotics.hpp"

#include "cpshift/greens.hpp"

#include <cmath>

namespace cpshift::asymptotics {

namespace {

// Reduced first-order integrands of the thin-layer retarded expansion.
double g_te(double n_l, double n_s, double y) {
    const double ws = std::sqrt((n_s * n_s - 1.0) * y * y + 1.0);
    return y * y * (n_l * n_l - n_s * n_s) / ((ws + 1.0) * (ws + 1.0));
}

double g_tm(double n_l, double n_s, double y) {
    const double wl2 = (n_l * n_l - 1.0) * y * y + 1.0;
    const double ws2 = (n_s * n_s - 1.0) * y * y + 1.0;
    const double ws = std::sqrt(ws2);
    const double ns2 = n_s * n_s, nl2 = n_l * n_l;
    return (ns2 * ns2 * wl2 - nl2 * nl2 * ws2) / (nl2 * (ws + ns2) * (ws + ns2));
}

} // namespace

AsymptoticEstimate halfspace_electrostatic(double n, const DipoleMoments& mu, double Z) {
    const double val = -(n * n - 1.0) / (n * n + 1.0) * (mu.par_sq + 2.0 * mu.perp_sq) /
                       (64.0 * M_PI * Z * Z * Z);
    return {val, Regime::HalfspaceElectrostatic, "exact for a bare half-space, 2|E|Z << 1"};
}

std::pair<double, double> electrostatic_layer_coefficients(double n_l, double n_s) {
    const double nl2 = n_l * n_l, ns2 = n_s * n_s;
    const double a1 = 3.0 / nl2 * (nl2 * nl2 - ns2 * ns2) / ((ns2 + 1.0) * (ns2 + 1.0));
    const double a2 = -6.0 / (nl2 * nl2) * (nl2 * nl2 - ns2 * ns2) * (ns2 + nl2 * nl2) /
                      ((ns2 + 1.0) * (ns2 + 1.0) * (ns2 + 1.0));
    return {a1, a2};
}

AsymptoticEstimate thin_layer_electrostatic(const Stack& s, const DipoleMoments& mu, double Z) {
    const auto [a1, a2] = electrostatic_layer_coefficients(s.n_l, s.n_s);
    const double r = s.L / Z;
    const double val = halfspace_electrostatic(s.n_s, mu, Z).value -
                       (mu.par_sq + 2.0 * mu.perp_sq) / (64.0 * M_PI * Z * Z * Z) *
                           (a1 * r + a2 * r * r);
    return {val, Regime::ElectrostaticThin, "Z >> L and 2|E|Z << 1; residual O((L/Z)^3)"};
}

AsymptoticEstimate thick_layer_electrostatic(const Stack& s, const DipoleMoments& mu, double Z,
                                             int terms) {
    const ShiftResult r = greens::electrostatic_shift_series(s, mu, Z, terms);
    return {r.value, Regime::ElectrostaticThick, "2|E|Z << 1; exact for any Z/L, converges as L grows"};
}

std::pair<double, double> halfspace_retarded_coefficients(double n_s) {
    if (std::abs(n_s - 1.0) < 1e-9) return {0.0, 0.0};
    const double n2 = n_s * n_s;
    const double sp = std::sqrt(n2 + 1.0);
    const double sm = std::sqrt(n2 - 1.0);
    const double log_p = std::log((sp + 1.0) / (n_s * (sp + n_s)));
    const double log_m = std::log(sm + n_s);
    const double c_par = -(2.0 / 3.0 * n2 + n_s - 8.0 / 3.0) / (n2 - 1.0) +
                         2.0 * n2 * n2 / ((n2 - 1.0) * sp) * log_p +
                         (2.0 * n2 * n2 - 2.0 * n2 - 1.0) / std::pow(n2 - 1.0, 1.5) * log_m;
    const double c_perp = (4.0 * n2 * n2 - 2.0 * n2 * n_s - 4.0 / 3.0 * n2 + 4.0 / 3.0) /
                              (n2 - 1.0) -
                          4.0 * n2 * n2 * n2 / ((n2 - 1.0) * sp) * log_p -
                          2.0 * n2 * (2.0 * n2 * n2 - 2.0 * n2 + 1.0) / std::pow(n2 - 1.0, 1.5) *
                              log_m;
    return {c_par, c_perp};
}

AsymptoticEstimate halfspace_retarded(double n_s, const Transition& t, double Z) {
    const auto [c_par, c_perp] = halfspace_retarded_coefficients(n_s);
    const double val = -3.0 / (64.0 * M_PI * M_PI * Z * Z * Z * Z) *
                       (c_par * t.mu_par_sq + c_perp * t.mu_perp_sq) / t.E;
    return {val, Regime::HalfspaceRetarded, "bare half-space, 2|E|Z >> 1"};
}

std::pair<double, double> retarded_layer_coefficients_slab(double n_l) {
    const double nl2 = n_l * n_l;
    return {(nl2 - 1.0) * (9.0 * nl2 + 5.0) / (10.0 * nl2),
            (nl2 - 1.0) * (5.0 * nl2 + 4.0) / (10.0 * nl2)};
}

std::pair<double, double> retarded_layer_coefficients(double n_l, double n_s) {
    if (std::abs(n_s - 1.0) < 1e-3) return retarded_layer_coefficients_slab(n_l);
    numerics::QuadratureConfig cfg;
    cfg.rel_tol = 1e-13;
    cfg.abs_tol = 1e-16;
    auto a_par_f = [&](double y) { return y * y * g_te(n_l, n_s, y) - g_tm(n_l, n_s, y); };
    auto a_perp_f = [&](double y) { return (y * y - 1.0) * g_tm(n_l, n_s, y); };
    const double a_par = 3.0 * numerics::integrate_finite(a_par_f, 0.0, 1.0, cfg).value;
    const double a_perp = 3.0 * numerics::integrate_finite(a_perp_f, 0.0, 1.0, cfg).value;
    return {a_par, a_perp};
}

AsymptoticEstimate thin_layer_retarded(const Stack& s, const Transition& t, double Z) {
    const auto [a_par, a_perp] = retarded_layer_coefficients(s.n_l, s.n_s);
    const double val = halfspace_retarded(s.n_s, t, Z).value -
                       (a_par * t.mu_par_sq + 2.0 * a_perp * t.mu_perp_sq) /
                           (16.0 * M_PI * M_PI * Z * Z * Z * Z * t.E) * (s.L / Z);
    return {val, Regime::RetardedThin, "2|E|Z >> 1 and Z >> lambda + n_l L"};
}

AsymptoticEstimate excited_nonretarded_resonant(const Stack& s,
                                                std::span<const Transition> transitions, double Z,
                                                const numerics::QuadratureConfig& cfg) {
    const greens::ImageKernel K = greens::ImageKernel::from(s);
    auto f = [&](double k) { return k * k * std::exp(-2.0 * k * Z) * K(k, s.L); };
    const auto r = numerics::integrate_semi_infinite(f, 2.0 * Z, cfg);
    double val = 0.0;
    for (const Transition& t : transitions) {
        if (t.E < 0.0) val += -(t.mu_par_sq + 2.0 * t.mu_perp_sq) / (8.0 * M_PI) * r.value;
    }
    return {val, Regime::ExcitedNonretarded, "downward transitions with 2|E|Z << 1"};
}

AsymptoticEstimate excited_retarded_resonant(const Stack& s,
                                             std::span<const Transition> transitions, double Z) {
    const double r_vl = (1.0 - s.n_l) / (1.0 + s.n_l);
    const double r_ls = (s.n_l - s.n_s) / (s.n_l + s.n_s);
    const double tau = s.n_l * s.L;
    double val = 0.0;
    for (const Transition& t : transitions) {
        if (!(t.E < 0.0)) continue;
        const double E = std::abs(t.E);
        const double den = 1.0 + 2.0 * r_vl * r_ls * std::cos(2.0 * E * tau) +
                           r_vl * r_vl * r_ls * r_ls;
        const double num = r_vl * (1.0 + r_ls * r_ls) * std::cos(2.0 * E * Z) +
                           r_vl * r_vl * r_ls * std::cos(2.0 * E * (Z - tau)) +
                           r_ls * std::cos(2.0 * E * (Z + tau));
        val += -E * E * t.mu_par_sq / (8.0 * M_PI * Z) * num / den;
    }
    return {val, Regime::ExcitedRetarded, "2|E|Z >> 1; accuracy degrades unless |E|L << 1"};
}

std::vector<ResonancePoint> resonance_condition(const Stack& s, double E_abs, int kappa_max) {
    if (!(E_abs > 0.0)) throw ValidationError("resonance_condition: needs |E| > 0");
    const double lambda = 2.0 * M_PI / E_abs;
    std::vector<ResonancePoint> out;
    out.reserve(kappa_max + 1);
    for (int k = 0; k <= kappa_max; ++k) {
        out.push_back({k, 0.5 * lambda * (k + 0.5) / s.n_l, 0.5 * lambda * k / s.n_l});
    }
    return out;
}

} // namespace cpshift::asymptotics
