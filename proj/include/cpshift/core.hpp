#pragma once

// Core domain types for Casimir-Polder shifts near a layered dielectric:
// a substrate of refractive index n_s carrying a single layer of index n_l
// and thickness L, with the atom in vacuum at distance Z above the layer.
//
// Units: natural units hbar = c = 1 and eps0 = 1 throughout. Energies and
// inverse lengths share one unit; published shift values are in units of
// 1/eps0 relative to SI-compatible natural units.
//
// All types here are immutable value types and safe to share across threads.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace cpshift {

using cplx = std::complex<double>;

enum class Polarization { TE, TM };

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Degenerate Fresnel denominator (grazing incidence or an exact hit on a
// guided-mode dispersion zero). Carries the offending z-wavenumber so pole
// handling can be routed deliberately instead of propagating NaNs.
class PoleError : public Error {
public:
    PoleError(const std::string& what, cplx where) : Error(what), location(where) {}
    cplx location;
};

// Principal-value poles too close to each other or to an endpoint.
class ClusteringError : public Error {
public:
    explicit ClusteringError(const std::string& what) : Error(what) {}
};

// Dielectric geometry: layer index n_l on substrate index n_s, layer thickness L.
// n_l = n_s or L = 0 reduce to a bare half-space; n_s > n_l is allowed.
struct Stack {
    double n_l = 1.0;
    double n_s = 1.0;
    double L = 0.0;

    bool is_halfspace() const { return L == 0.0 || n_l == n_s; }
};

// One atomic dipole transition. E = E_j - E_i is signed: E > 0 for a
// ground-state-like upward transition, E < 0 for a downward transition of an
// excited atom. mu_par_sq = |mu_x|^2 + |mu_y|^2, mu_perp_sq = |mu_z|^2.
struct Transition {
    double E = 0.0;
    double mu_par_sq = 0.0;
    double mu_perp_sq = 0.0;
};

// Squared dipole moments only (electrostatic formulas do not see E).
struct DipoleMoments {
    double par_sq = 0.0;
    double perp_sq = 0.0;
};

// Atom position: Z = z0 - L/2 is the distance from the top surface. Carries
// the layer thickness so the reduced pair (a, b) = (|E| Z, |E| L) is formed
// in one place.
struct EvaluationPoint {
    double Z = 0.0;
    double L = 0.0;
};

struct ShiftResult {
    double value = 0.0;
    double abs_error = 0.0;
    long evaluations = 0;
    bool converged = true;
};

// Throws ValidationError naming the violated invariant.
Stack validate_stack(const Stack& s);
Transition validate_transition(const Transition& t);
EvaluationPoint validate_point(const EvaluationPoint& p);

// (a, b) = (|E| Z, |E| L); invariant under E -> -E.
std::pair<double, double> reduced_units(const Transition& t, const EvaluationPoint& p);

// Caller-side convenience for multi-level sums: accumulates value/error/counts.
struct ShiftAccumulator {
    ShiftResult total;
    void add(const ShiftResult& r) {
        total.value += r.value;
        total.abs_error += r.abs_error;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
};

} // namespace cpshift
