#pragma once

// Single-interface Fresnel coefficients, layered-stack reflection and
// transmission amplitudes, wave-vector relations with explicit branch
// conventions, and the scaled evaluations used by the shift kernels.
//
// Branch conventions: for propagating components all z-wavenumbers share the
// sign of kz; evanescent components take Im >= 0 so fields decay away from
// the stack. The square-root branch is the principal one with post-selection
// where the convention requires it.
//
// Pure functions; safe for concurrent use.

#include "cpshift/core.hpp"

#include <utility>

namespace cpshift::fresnel {

// kzl^2 = (n_l^2-1) k_par^2 + n_l^2 kz^2 and kzs^2 = (n_s^2-1) k_par^2 + n_s^2 kz^2
// hold exactly for members of a valid set.
struct WaveVectorSet {
    double k_par = 0.0;
    cplx kz{}, kzl{}, kzs{};
};

// Amplitudes for one incidence side and one polarization; R and T are the
// outer reflection/transmission amplitudes, I and J the in-layer pair.
struct CoefficientSet {
    cplx R{}, I{}, J{}, T{};
};

enum class Side { Left, Right };

// (r, t) for a plane wave passing from index n_b into n_a.
// TE: r = (kzb - kza)/(kzb + kza), t = 2 kzb/(kzb + kza).
// TM: r = (kzb/nb^2 - kza/na^2)/(kzb/nb^2 + kza/na^2), t = 2 kzb/(na nb) / (same).
// Throws PoleError on a vanishing denominator.
std::pair<cplx, cplx> single_interface(double n_b, double n_a, cplx kz_b, cplx kz_a,
                                       Polarization pol);

// Layer/substrate z-wavenumbers for a given vacuum kz. Real kz yields
// sign-consistent real kzl, kzs; kz on the positive imaginary axis yields the
// right-hand side of the kzs/kzl cuts (real positive below the branch point,
// decaying Im >= 0 above). kzs_sign = -1 selects the far side of the kzs cut.
WaveVectorSet wave_vectors(const Stack& s, double k_par, cplx kz, int kzs_sign = +1,
                           int kzl_sign = +1);

// All four amplitudes of one incidence side (origin-referenced phases).
// Throws PoleError when the shared denominator 1 + r r e^{2 i kzl L} vanishes.
CoefficientSet stack_coefficients(const Stack& s, const WaveVectorSet& wv, Polarization pol,
                                  Side side);

// Rtilde = (r_vl + r_ls e^{2 i kzl L}) / (1 + r_vl r_ls e^{2 i kzl L}) = R^R e^{+i kz L}.
cplx amended_reflection(const Stack& s, const WaveVectorSet& wv, Polarization pol);

// Dimensionless core of the shift kernels: Rtilde at kzi = i x sqrt((ni^2-1) y^2 + 1)
// in units of the transition energy, with the layer phase controlled by b = |E| L.
// The result is real; the denominator cannot vanish on this axis for n >= 1.
double reflection_imaginary_axis(double n_l, double n_s, double b, double x, double y,
                                 Polarization pol);

// Stack-facing wrapper for the above (b = E_scale * L).
double scaled_reflection_imaginary_axis(const Stack& s, double E_scale, double x, double y,
                                        Polarization pol);

enum class EtaBranch { Travelling, Evanescent };

// Rtilde on the resonant-integral paths, in units of |E| with b = |E| L:
//   travelling: kzi = sqrt(ni^2 - 1 + eta^2), eta in [0,1]
//   evanescent: kzi = sqrt(ni^2 - 1 - eta^2), Im >= 0 branch, eta >= 0
// Throws PoleError on an exact dispersion zero (caller routes to PV).
// ieps adds +i*ieps to the dispersion denominator (pole-displacement mode).
cplx eta_reflection_reduced(double n_l, double n_s, double b, double eta, EtaBranch branch,
                            Polarization pol, double ieps = 0.0);

cplx eta_reflection(const Stack& s, double E_scale, double eta, EtaBranch branch, Polarization pol,
                    double ieps = 0.0);

} // namespace cpshift::fresnel
