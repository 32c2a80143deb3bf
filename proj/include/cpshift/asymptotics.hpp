#pragma once

// Closed-form limits of the exact kernels: electrostatic and retarded
// thin-layer expansions, half-space retarded coefficients, thick-layer image
// series, and the resonant estimates for excited atoms. Each estimator doubles
// as a test oracle for the exact kernels in its validity regime.

#include "cpshift/core.hpp"
#include "cpshift/numerics.hpp"

#include <span>
#include <string>
#include <vector>

namespace cpshift::asymptotics {

enum class Regime {
    ElectrostaticThin,
    ElectrostaticThick,
    RetardedThin,
    RetardedThick,
    ExcitedNonretarded,
    ExcitedRetarded,
    HalfspaceRetarded,
    HalfspaceElectrostatic,
};

struct AsymptoticEstimate {
    double value = 0.0;
    Regime regime = Regime::HalfspaceElectrostatic;
    std::string validity_note;
};

// Half-space electrostatic shift -(1/64 pi Z^3) (n^2-1)/(n^2+1) (mu_par^2 + 2 mu_perp^2).
AsymptoticEstimate halfspace_electrostatic(double n, const DipoleMoments& mu, double Z);

// Electrostatic thin layer (Z >> L):
//   halfspace(n_s) - (1/64 pi Z^3)(mu_par^2+2mu_perp^2)[a1 L/Z + a2 L^2/Z^2]
// a1 = (3/n_l^2)(n_l^4-n_s^4)/(n_s^2+1)^2,
// a2 = -(6/n_l^4)(n_l^4-n_s^4)(n_s^2+n_l^4)/(n_s^2+1)^3.
AsymptoticEstimate thin_layer_electrostatic(const Stack& s, const DipoleMoments& mu, double Z);
std::pair<double, double> electrostatic_layer_coefficients(double n_l, double n_s);

// Electrostatic thick layer: the image-series representation (delegates to
// greens::electrostatic_shift_series).
AsymptoticEstimate thick_layer_electrostatic(const Stack& s, const DipoleMoments& mu, double Z,
                                             int terms = -1);

// Retarded half-space coefficients: shift = -(3/64 pi^2 Z^4)(c_par mu_par^2 +
// c_perp mu_perp^2)/E. Returns 0 in the n_s -> 1 limit.
std::pair<double, double> halfspace_retarded_coefficients(double n_s);
AsymptoticEstimate halfspace_retarded(double n_s, const Transition& t, double Z);

// Retarded thin layer (E Z >> 1, Z >> L):
//   halfspace(n_s) - (1/16 pi^2 Z^4)[(a_par mu_par^2 + 2 a_perp mu_perp^2)/E](L/Z)
// The coefficients are the exact first-order-in-L reduction of the kernel,
//   a_par = 3 int_0^1 [y^2 gTE - gTM] dy,  a_perp = 3 int_0^1 (y^2-1) gTM dy,
//   gTE = y^2 (n_l^2-n_s^2)/(ws+1)^2,
//   gTM = (n_s^4 wl^2 - n_l^4 ws^2)/(n_l^2 (ws+n_s^2)^2),
// evaluated to near machine precision; for |n_s-1| < 1e-3 the slab closed
// forms (n_l^2-1)(9n_l^2+5)/(10n_l^2) and (n_l^2-1)(5n_l^2+4)/(10n_l^2) are
// used instead.
std::pair<double, double> retarded_layer_coefficients(double n_l, double n_s);
std::pair<double, double> retarded_layer_coefficients_slab(double n_l);
AsymptoticEstimate thin_layer_retarded(const Stack& s, const Transition& t, double Z);

// Excited non-retarded resonant estimate (|E| Z << 1):
//  -(1/8 pi) sum_{E<0} (mu_par^2 + 2 mu_perp^2) int k^2 e^{-2kZ} K(k) dk.
AsymptoticEstimate excited_nonretarded_resonant(const Stack& s,
                                                std::span<const Transition> transitions, double Z,
                                                const numerics::QuadratureConfig& cfg = {});

// Excited retarded resonant estimate (|E| Z >> 1, best for |E| L << 1):
// the three-cosine interference formula with tau = n_l L,
// r_vl = (1-n_l)/(1+n_l), r_ls = (n_l-n_s)/(n_l+n_s).
AsymptoticEstimate excited_retarded_resonant(const Stack& s,
                                             std::span<const Transition> transitions, double Z);

// Layer thicknesses of the interference extrema for lambda = 2 pi / |E|:
//   L_res(kappa) = (lambda/2)(kappa + 1/2)/n_l,  L_antires(kappa) = (lambda/2) kappa / n_l.
// The two roles swap when n_s > n_l.
struct ResonancePoint {
    int kappa = 0;
    double L_res = 0.0;
    double L_antires = 0.0;
};
std::vector<ResonancePoint> resonance_condition(const Stack& s, double E_abs, int kappa_max);

} // namespace cpshift::asymptotics
