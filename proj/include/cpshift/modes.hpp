#pragma once

// Trapped-mode spectrum of the layer waveguide, mode normalization, explicit
// mode functions, and the numerical completeness audit that checks the
// reflected mode sum against the electrostatic Green's-function kernel.
//
// Pure functions; no shared mutable state.

#include "cpshift/core.hpp"
#include "cpshift/fresnel.hpp"
#include "cpshift/numerics.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace cpshift::modes {

// One guided-mode solution kz = i q of 1 + r_vl r_ls e^{2 i kzl L} = 0.
// q lies strictly inside (k_par sqrt(1-1/n_s^2), k_par sqrt(1-1/n_l^2)).
struct TrappedRoot {
    Polarization pol = Polarization::TE;
    double k_par = 0.0;
    double q = 0.0;
    double residual = 0.0; // |dispersion(i q)|
};

// Derived data for one trapped root: in-layer kzl, substrate decay sigma,
// frequency omega, origin-referenced amplitudes, and the normalization N.
struct TrappedMode {
    TrappedRoot root;
    double kzl = 0.0;
    double sigma = 0.0;
    double omega = 0.0;
    cplx T_lv{}, V{}, T_ls{};
    double norm = 0.0; // N
};

// Complex dispersion function 1 + r_vl r_ls e^{2 i kzl L}.
cplx dispersion(const Stack& s, double k_par, cplx kz, Polarization pol);

// Signed real form of the dispersion condition at kz = i q, regularized so
// roots are simple sign changes with no spurious tangent poles:
//   TE: q cos(phi) + kzl sin(phi),        phi = arg[(kzl + kzs) e^{-i kzl L}]
//   TM: q cos(phi) + (kzl/n_l^2) sin(phi), TM phase with kzl/n_l^2, kzs/n_s^2
double dispersion_reduced(const Stack& s, double k_par, double q, Polarization pol);

// Open window of admissible q for trapped modes; empty when n_l <= n_s.
std::optional<std::pair<double, double>> trapped_window(const Stack& s, double k_par);

// Scan + refine all roots in the window. Scan density follows the expected
// phase range ~ n_l k_par L; a double-density rescan guards against cells
// holding two roots (throws Error("increase scan_points") on mismatch).
std::vector<TrappedRoot> find_trapped_modes(const Stack& s, double k_par, Polarization pol,
                                            const numerics::QuadratureConfig& cfg = {});

// Normalization N from the closed-form overlap integral of the mode density
// eps(z) |f|^2 over z (vacuum tail + layer + substrate tail). Throws
// Error("normalization breakdown") if the bracket is not positive.
double trapped_normalization(const Stack& s, const TrappedRoot& root);

TrappedMode solve_trapped_mode(const Stack& s, const TrappedRoot& root);

// Guided-mode abscissae eta* of the fixed-frequency dispersion relation along
// the resonant-integral path kz = i |E| eta, k_par = |E| sqrt(1+eta^2);
// window sqrt(n_s^2-1) < eta < sqrt(n_l^2-1). Used to seed PV integration.
std::vector<double> find_eta_poles(const Stack& s, double E_abs, Polarization pol,
                                   const numerics::QuadratureConfig& cfg = {});

struct ModeId {
    enum class Kind { LeftIncident, RightIncident, Trapped };
    Kind kind = Kind::RightIncident;
    Polarization pol = Polarization::TE;
    double k_par = 0.0; // transverse wave number, along +x
    // RightIncident: vacuum kz > 0; LeftIncident: substrate kzs > 0; Trapped: q.
    double param = 0.0;
};

// Mode function at a point, k_par along +x. Points exactly on an interface
// evaluate from the vacuum/upper side.
Eigen::Vector3cd mode_function(const Stack& s, const ModeId& id, const Eigen::Vector3d& r);

enum class Component { X = 0, Y = 1, Z = 2 };

struct AuditResult {
    double mode_sum = 0.0;
    double target = 0.0;
    double residual = 0.0; // |mode_sum - target| / max(|target|, error floor)
    bool converged = true;
};

// Numerically evaluates the reflected part of the completeness sum -- the
// k_par integral of [trapped-mode sum + evanescent kz-segment + travelling
// kz-integral] of f_i f_j^* -- and compares against -grad_i grad'_j G_H from
// the greens module. In-plane separation is taken along +x.
// Requires z, zp > L/2, z + zp - L > 0, rho >= 0, and (z != zp or rho > 0).
AuditResult completeness_audit(const Stack& s, double z, double zp, double rho, Component ci,
                               Component cj, const numerics::QuadratureConfig& cfg = {});

} // namespace cpshift::modes
