#include "cpshift/core.hpp"

#include <cmath>

namespace cpshift {

Stack validate_stack(const Stack& s) {
    if (!std::isfinite(s.n_l) || !std::isfinite(s.n_s) || !std::isfinite(s.L))
        throw ValidationError("stack: non-finite parameter");
    if (s.n_l < 1.0 || s.n_s < 1.0)
        throw ValidationError("stack: index < 1");
    if (s.L < 0.0)
        throw ValidationError("stack: negative L");
    return s;
}

Transition validate_transition(const Transition& t) {
    if (!std::isfinite(t.E) || !std::isfinite(t.mu_par_sq) || !std::isfinite(t.mu_perp_sq))
        throw ValidationError("transition: non-finite parameter");
    if (t.E == 0.0)
        throw ValidationError("transition: E must be nonzero");
    if (t.mu_par_sq < 0.0 || t.mu_perp_sq < 0.0)
        throw ValidationError("transition: negative squared moment");
    if (t.mu_par_sq == 0.0 && t.mu_perp_sq == 0.0)
        throw ValidationError("transition: both moments zero");
    return t;
}

EvaluationPoint validate_point(const EvaluationPoint& p) {
    if (!std::isfinite(p.Z) || !std::isfinite(p.L))
        throw ValidationError("point: non-finite parameter");
    if (p.Z <= 0.0)
        throw ValidationError("point: Z must be > 0");
    if (p.L < 0.0)
        throw ValidationError("point: negative L");
    return p;
}

std::pair<double, double> reduced_units(const Transition& t, const EvaluationPoint& p) {
    const double mag = std::abs(t.E);
    return {mag * p.Z, mag * p.L};
}

} // namespace cpshift
