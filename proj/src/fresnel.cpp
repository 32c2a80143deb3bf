#include "cpshift/fresnel.hpp"

#include <cmath>

namespace cpshift::fresnel {

namespace {

constexpr double kTinyDen = 1e-300;

cplx csqrt_im(double radicand) {
    // sqrt with the Im >= 0 branch for negative radicands
    return radicand >= 0.0 ? cplx(std::sqrt(radicand), 0.0) : cplx(0.0, std::sqrt(-radicand));
}

} // namespace

std::pair<cplx, cplx> single_interface(double n_b, double n_a, cplx kz_b, cplx kz_a,
                                       Polarization pol) {
    if (pol == Polarization::TE) {
        const cplx den = kz_b + kz_a;
        if (std::abs(den) < kTinyDen)
            throw PoleError("single_interface: grazing/degenerate incidence", kz_b);
        return {(kz_b - kz_a) / den, 2.0 * kz_b / den};
    }
    const cplx rb = kz_b / (n_b * n_b);
    const cplx ra = kz_a / (n_a * n_a);
    const cplx den = rb + ra;
    if (std::abs(den) < kTinyDen)
        throw PoleError("single_interface: grazing/degenerate incidence", kz_b);
    return {(rb - ra) / den, (2.0 * kz_b / (n_a * n_b)) / den};
}

WaveVectorSet wave_vectors(const Stack& s, double k_par, cplx kz, int kzs_sign, int kzl_sign) {
    WaveVectorSet wv;
    wv.k_par = k_par;
    wv.kz = kz;
    const double kp2 = k_par * k_par;
    // Negative real kz: evaluate for |kz| and restore sign consistency after.
    const bool flip = (kz.imag() == 0.0 && kz.real() < 0.0);
    const cplx kz_eval = flip ? -kz : kz;
    const cplx kzl2 = (s.n_l * s.n_l - 1.0) * kp2 + s.n_l * s.n_l * kz_eval * kz_eval;
    const cplx kzs2 = (s.n_s * s.n_s - 1.0) * kp2 + s.n_s * s.n_s * kz_eval * kz_eval;
    wv.kzl = std::sqrt(kzl2);
    wv.kzs = std::sqrt(kzs2);
    // Pure-imaginary kz above the branch point: principal sqrt of a negative
    // real gives Im < 0 on the lower edge; select the decaying branch.
    if (wv.kzl.imag() < 0.0) wv.kzl = -wv.kzl;
    if (wv.kzs.imag() < 0.0) wv.kzs = -wv.kzs;
    if (flip) {
        wv.kzl = -wv.kzl;
        wv.kzs = -wv.kzs;
    }
    wv.kzl *= static_cast<double>(kzl_sign);
    wv.kzs *= static_cast<double>(kzs_sign);
    return wv;
}

CoefficientSet stack_coefficients(const Stack& s, const WaveVectorSet& wv, Polarization pol,
                                  Side side) {
    const cplx i1(0.0, 1.0);
    const double L = s.L;
    const cplx ph = std::exp(2.0 * i1 * wv.kzl * L);
    CoefficientSet out;
    if (side == Side::Right) {
        const auto [r_vl, t_vl] = single_interface(1.0, s.n_l, wv.kz, wv.kzl, pol);
        const auto [r_ls, t_ls] = single_interface(s.n_l, s.n_s, wv.kzl, wv.kzs, pol);
        const cplx den = 1.0 + r_vl * r_ls * ph;
        if (std::abs(den) < kTinyDen)
            throw PoleError("stack_coefficients: dispersion-relation pole", wv.kz);
        out.R = (r_vl + r_ls * ph) / den * std::exp(-i1 * wv.kz * L);
        out.I = t_vl * std::exp(i1 * (wv.kzl - wv.kz) * L / 2.0) / den;
        out.J = t_vl * r_ls * std::exp((3.0 * i1 * wv.kzl - i1 * wv.kz) * L / 2.0) / den;
        out.T = t_vl * t_ls * std::exp((2.0 * i1 * wv.kzl - i1 * wv.kzs - i1 * wv.kz) * L / 2.0) / den;
        return out;
    }
    const auto [r_sl, t_sl] = single_interface(s.n_s, s.n_l, wv.kzs, wv.kzl, pol);
    const auto [r_lv, t_lv] = single_interface(s.n_l, 1.0, wv.kzl, wv.kz, pol);
    const cplx den = 1.0 + r_sl * r_lv * ph;
    if (std::abs(den) < kTinyDen)
        throw PoleError("stack_coefficients: dispersion-relation pole", wv.kz);
    out.R = (r_sl + r_lv * ph) / den * std::exp(-i1 * wv.kzs * L);
    out.I = t_sl * std::exp(i1 * (wv.kzl - wv.kzs) * L / 2.0) / den;
    out.J = t_sl * r_lv * std::exp((3.0 * i1 * wv.kzl - i1 * wv.kzs) * L / 2.0) / den;
    out.T = t_sl * t_lv * std::exp((2.0 * i1 * wv.kzl - i1 * wv.kzs - i1 * wv.kz) * L / 2.0) / den;
    return out;
}

cplx amended_reflection(const Stack& s, const WaveVectorSet& wv, Polarization pol) {
    const cplx i1(0.0, 1.0);
    const auto [r_vl, t_vl] = single_interface(1.0, s.n_l, wv.kz, wv.kzl, pol);
    const auto [r_ls, t_ls] = single_interface(s.n_l, s.n_s, wv.kzl, wv.kzs, pol);
    (void)t_vl;
    (void)t_ls;
    const cplx ph = std::exp(2.0 * i1 * wv.kzl * s.L);
    const cplx den = 1.0 + r_vl * r_ls * ph;
    if (std::abs(den) < kTinyDen)
        throw PoleError("amended_reflection: dispersion-relation pole", wv.kz);
    return (r_vl + r_ls * ph) / den;
}

double reflection_imaginary_axis(double n_l, double n_s, double b, double x, double y,
                                 Polarization pol) {
    // kzi = i x sqrt((ni^2-1) y^2 + 1); all ratios are real on this axis.
    const double w0 = 1.0;
    const double wl = std::sqrt((n_l * n_l - 1.0) * y * y + 1.0);
    const double ws = std::sqrt((n_s * n_s - 1.0) * y * y + 1.0);
    double r_vl, r_ls;
    if (pol == Polarization::TE) {
        r_vl = (w0 - wl) / (w0 + wl);
        r_ls = (wl - ws) / (wl + ws);
    } else {
        const double al = wl / (n_l * n_l);
        const double as = ws / (n_s * n_s);
        r_vl = (w0 - al) / (w0 + al);
        r_ls = (al - as) / (al + as);
    }
    const double ph = std::exp(-2.0 * x * b * wl);
    return (r_vl + r_ls * ph) / (1.0 + r_vl * r_ls * ph);
}

double scaled_reflection_imaginary_axis(const Stack& s, double E_scale, double x, double y,
                                        Polarization pol) {
    return reflection_imaginary_axis(s.n_l, s.n_s, std::abs(E_scale) * s.L, x, y, pol);
}

cplx eta_reflection_reduced(double n_l, double n_s, double b, double eta, EtaBranch branch,
                            Polarization pol, double ieps) {
    cplx kz, kzl, kzs;
    if (branch == EtaBranch::Travelling) {
        kz = std::sqrt(eta * eta);
        kzl = std::sqrt(n_l * n_l - 1.0 + eta * eta);
        kzs = std::sqrt(n_s * n_s - 1.0 + eta * eta);
    } else {
        kz = cplx(0.0, eta);
        kzl = csqrt_im(n_l * n_l - 1.0 - eta * eta);
        kzs = csqrt_im(n_s * n_s - 1.0 - eta * eta);
    }
    const auto [r_vl, t_vl] = single_interface(1.0, n_l, kz, kzl, pol);
    const auto [r_ls, t_ls] = single_interface(n_l, n_s, kzl, kzs, pol);
    (void)t_vl;
    (void)t_ls;
    const cplx ph = std::exp(cplx(0.0, 2.0) * kzl * b);
    const cplx den = 1.0 + r_vl * r_ls * ph + cplx(0.0, ieps);
    if (std::abs(den) < kTinyDen)
        throw PoleError("eta_reflection: dispersion-relation pole", cplx(eta, 0.0));
    return (r_vl + r_ls * ph) / den;
}

cplx eta_reflection(const Stack& s, double E_scale, double eta, EtaBranch branch, Polarization pol,
                    double ieps) {
    return eta_reflection_reduced(s.n_l, s.n_s, std::abs(E_scale) * s.L, eta, branch, pol, ieps);
}

} // namespace cpshift::fresnel
