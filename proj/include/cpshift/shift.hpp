#pragma once

// Exact energy-shift kernels: the ground-state double integral over the
// rotated (imaginary-frequency) quadrant, the excited-state non-resonant
// part, and the excited-state resonant part with principal-value handling of
// guided-mode poles.
//
// All kernels are dimensionless functions of (a, b, n_l, n_s) with
// a = |E| Z and b = |E| L; two configurations with equal reduced tuples give
// identical kernels. Assembly with the E^3 prefactors happens in the
// ShiftResult helpers.

#include "cpshift/core.hpp"
#include "cpshift/numerics.hpp"

#include <span>
#include <vector>

namespace cpshift::shift {

// I_par multiplies |mu_par|^2, I_perp multiplies |mu_perp|^2:
//   I_par  = int_0^inf dx x^3 int_0^1 dy e^{-2ax}/(1+x^2 y^2) (y^2 Rte - Rtm)
//   I_perp = int_0^inf dx x^3 int_0^1 dy e^{-2ax}/(1+x^2 y^2) 2 (y^2-1) Rtm
// at kzi = i x sqrt((ni^2-1) y^2 + 1). Assembled shift:
//   (E^3 / 8 pi^2) (|mu_par|^2 I_par + |mu_perp|^2 I_perp).
struct GroundKernel {
    double I_par = 0.0;
    double I_perp = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

GroundKernel ground_kernel(const Stack& s, double a, double b,
                           const numerics::QuadratureConfig& cfg = {});

// Same integrals with |E| in the exponent; the assembled prefactor E^3
// carries the sign for downward transitions.
GroundKernel excited_nonresonant_kernel(const Stack& s, double a, double b,
                                        const numerics::QuadratureConfig& cfg = {});

enum class PvMethod { Excision, IEpsilon };

// Resonant (oscillatory) part for a downward transition:
//   shift = (|E|^3 / 8 pi) (|mu_par|^2 K_par + |mu_perp|^2 K_perp)
// K = Im(travelling integral) - PV(evanescent integral) per channel, with
// guided-mode poles on the evanescent path located by the modes module and
// integrated as Cauchy principal values. The imaginary parts of the
// travelling integrals are diagnostics only (decay-rate physics lives there,
// deliberately not assembled).
struct ResonantKernel {
    double K_par = 0.0;
    double K_perp = 0.0;
    std::vector<double> pole_list; // eta abscissae used for PV excision
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
    double diag_im_par = 0.0;
    double diag_im_perp = 0.0;
};

ResonantKernel resonant_kernel(const Stack& s, double a, double b,
                               const numerics::QuadratureConfig& cfg = {},
                               PvMethod method = PvMethod::Excision);

// Assembled single-transition shifts.
ShiftResult nonresonant_shift(const Stack& s, const Transition& t, double Z,
                              const numerics::QuadratureConfig& cfg = {});
ShiftResult resonant_shift(const Stack& s, const Transition& t, double Z,
                           const numerics::QuadratureConfig& cfg = {});

// Sum over transitions: non-resonant for every entry plus resonant for each
// downward one (E < 0). For all-upward input this is the ground-state shift.
ShiftResult total_shift(const Stack& s, std::span<const Transition> transitions, double Z,
                        const numerics::QuadratureConfig& cfg = {});

} // namespace cpshift::shift
