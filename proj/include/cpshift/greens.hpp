#pragma once

// Electrostatic Green's function of the layered geometry, its image-series
// representation, and electrostatic energy shifts.

#include "cpshift/core.hpp"
#include "cpshift/numerics.hpp"

namespace cpshift::greens {

// alpha = (n_l^2-1)/(n_l^2+1), beta = (n_l^2-n_s^2)/(n_l^2+n_s^2);
// |alpha beta| < 1 guarantees geometric convergence of the image series.
struct ImageKernel {
    double alpha = 0.0;
    double beta = 0.0;
    double r_im = 0.0; // alpha * beta

    static ImageKernel from(const Stack& s);
    // (alpha - beta e^{-2kL}) / (1 - alpha beta e^{-2kL})
    double operator()(double k, double L) const;
};

// Reflected part of the Green's function as a kernel transform,
//   G_H(rho, s) = -(1/4pi) int_0^inf dk J0(k rho) e^{-k s} K(k),
// where s is the image separation supplied by the caller (z + z' measured
// from the reflecting surface; subtract L when positions are measured from
// the slab midplane). Requires s > 0.
numerics::QuadResult greens_reflected(const Stack& s, double rho, double sep,
                                      const numerics::QuadratureConfig& cfg = {});

enum class Axis { X = 0, Y = 1, Z = 2 };

// -grad_i grad'_j G_H for in-plane separation rho along +x and image
// separation u; the mixed second derivatives are taken analytically under the
// k-integral. Zero for the (x,y)-type combinations.
numerics::QuadResult greens_reflected_dd(const Stack& s, double rho, double u, Axis i, Axis j,
                                         const numerics::QuadratureConfig& cfg = {});

// -(1/16pi) (mu_par^2 + 2 mu_perp^2) int_0^inf dk k^2 e^{-2kZ} K(k)
ShiftResult electrostatic_shift(const Stack& s, const DipoleMoments& mu, double Z,
                                const numerics::QuadratureConfig& cfg = {});

// Image-series form: half-space n_l shift plus the geometric image sum
//   (1/16pi)(mu_par^2+2mu_perp^2) n_l^2/(n_l^4-1) sum_{v>=1} r_im^v / (Z+vL)^3.
// terms < 0 auto-truncates when the next term falls below 1e-14 of the sum.
// Throws ValidationError for n_l = 1 (series form singular; use integral form).
ShiftResult electrostatic_shift_series(const Stack& s, const DipoleMoments& mu, double Z,
                                       int terms = -1);

// (1/2) sum_i <mu_i^2> grad_i grad'_i G_H at coincident points; must agree
// with electrostatic_shift (independent differentiation route).
ShiftResult dipole_energy_from_green(const DipoleMoments& mu, double Z, const Stack& s,
                                     const numerics::QuadratureConfig& cfg = {});

} // namespace cpshift::greens
