#include "cpshift/greens.hpp"

#include <cmath>

namespace cpshift::greens {

using numerics::QuadratureConfig;
using numerics::QuadResult;

ImageKernel ImageKernel::from(const Stack& s) {
    ImageKernel k;
    k.alpha = (s.n_l * s.n_l - 1.0) / (s.n_l * s.n_l + 1.0);
    k.beta = (s.n_l * s.n_l - s.n_s * s.n_s) / (s.n_l * s.n_l + s.n_s * s.n_s);
    k.r_im = k.alpha * k.beta;
    return k;
}

double ImageKernel::operator()(double k, double L) const {
    const double e = std::exp(-2.0 * k * L);
    return (alpha - beta * e) / (1.0 - r_im * e);
}

QuadResult greens_reflected(const Stack& s, double rho, double sep, const QuadratureConfig& cfg) {
    if (!(sep > 0.0)) throw ValidationError("greens_reflected: image separation must be > 0");
    const ImageKernel K = ImageKernel::from(s);
    auto f = [&](double k) { return numerics::bessel_j0(k * rho) * std::exp(-k * sep) * K(k, s.L); };
    QuadResult r = numerics::integrate_semi_infinite(f, sep, cfg);
    r.value *= -1.0 / (4.0 * M_PI);
    r.abs_error *= 1.0 / (4.0 * M_PI);
    return r;
}

QuadResult greens_reflected_dd(const Stack& s, double rho, double u, Axis i, Axis j,
                               const QuadratureConfig& cfg) {
    if (!(u > 0.0)) throw ValidationError("greens_reflected_dd: image separation must be > 0");
    const ImageKernel K = ImageKernel::from(s);
    // Angular weight of the J0 transform after the two in-plane derivatives;
    // separation along +x.
    auto weight = [&](double k) -> double {
        const double x = k * rho;
        const bool ii = (i == j);
        if (i == Axis::Z && j == Axis::Z) return numerics::bessel_j0(x);
        if (ii && i == Axis::X)
            return rho > 0.0 ? numerics::bessel_j0(x) - numerics::bessel_j1(x) / x : 0.5;
        if (ii && i == Axis::Y) return rho > 0.0 ? numerics::bessel_j1(x) / x : 0.5;
        if ((i == Axis::X && j == Axis::Z)) return numerics::bessel_j1(x);
        if ((i == Axis::Z && j == Axis::X)) return -numerics::bessel_j1(x);
        return 0.0; // any combination involving one y index vanishes at phi = 0
    };
    auto f = [&](double k) { return k * k * K(k, s.L) * std::exp(-k * u) * weight(k); };
    QuadResult r = numerics::integrate_semi_infinite(f, u, cfg);
    r.value *= 1.0 / (4.0 * M_PI);
    r.abs_error *= 1.0 / (4.0 * M_PI);
    return r;
}

ShiftResult electrostatic_shift(const Stack& s, const DipoleMoments& mu, double Z,
                                const QuadratureConfig& cfg) {
    if (!(Z > 0.0)) throw ValidationError("electrostatic_shift: Z must be > 0");
    const ImageKernel K = ImageKernel::from(s);
    auto f = [&](double k) { return k * k * std::exp(-2.0 * k * Z) * K(k, s.L); };
    const QuadResult r = numerics::integrate_semi_infinite(f, 2.0 * Z, cfg);
    const double pref = -(mu.par_sq + 2.0 * mu.perp_sq) / (16.0 * M_PI);
    return {pref * r.value, std::abs(pref) * r.abs_error, r.evaluations, r.converged};
}

ShiftResult electrostatic_shift_series(const Stack& s, const DipoleMoments& mu, double Z,
                                       int terms) {
    if (!(Z > 0.0)) throw ValidationError("electrostatic_shift_series: Z must be > 0");
    const double nl2 = s.n_l * s.n_l;
    if (std::abs(nl2 * nl2 - 1.0) < 1e-14)
        throw ValidationError("electrostatic_shift_series: series form singular (n_l^4 - 1 = 0); "
                              "use integral form");
    const ImageKernel K = ImageKernel::from(s);
    const double msum = mu.par_sq + 2.0 * mu.perp_sq;
    const double halfspace = -msum / (64.0 * M_PI * Z * Z * Z) * K.alpha;
    const double pref = msum / (16.0 * M_PI) * nl2 / (nl2 * nl2 - 1.0);
    double sum = 0.0;
    double rpow = 1.0;
    long n = 0;
    const long n_max = (terms > 0) ? terms : 100000;
    for (long v = 1; v <= n_max; ++v) {
        rpow *= K.r_im;
        const double d = Z + v * s.L;
        const double term = rpow / (d * d * d);
        sum += term;
        n = v;
        if (terms < 0 && std::abs(term) < 1e-14 * std::max(std::abs(sum), 1e-300)) break;
    }
    // A-priori geometric bound on the dropped tail.
    const double tail = (std::abs(K.r_im) < 1.0 && s.L > 0.0)
                            ? std::abs(rpow * K.r_im) / std::pow(Z + (n + 1) * s.L, 3) /
                                  (1.0 - std::abs(K.r_im))
                            : 0.0;
    return {halfspace + pref * sum, std::abs(pref) * tail, n, true};
}

ShiftResult dipole_energy_from_green(const DipoleMoments& mu, double Z, const Stack& s,
                                     const QuadratureConfig& cfg) {
    if (!(Z > 0.0)) throw ValidationError("dipole_energy_from_green: Z must be > 0");
    // (1/2)[ <mu_x^2> Gxx'' + <mu_y^2> Gyy'' + <mu_z^2> Gzz'' ] at rho=0, u=2Z,
    // with grad grad' G_H = -(the dd kernels).
    const QuadResult xx = greens_reflected_dd(s, 0.0, 2.0 * Z, Axis::X, Axis::X, cfg);
    const QuadResult zz = greens_reflected_dd(s, 0.0, 2.0 * Z, Axis::Z, Axis::Z, cfg);
    const double val = 0.5 * (mu.par_sq * (-xx.value) + mu.perp_sq * (-zz.value));
    const double err = 0.5 * (mu.par_sq * xx.abs_error + mu.perp_sq * zz.abs_error);
    return {val, err, xx.evaluations + zz.evaluations, xx.converged && zz.converged};
}

} // namespace cpshift::greens
