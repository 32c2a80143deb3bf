#include "doctest.h"

#include "cpshift/fresnel.hpp"

#include <cmath>
#include <random>

using namespace cpshift;
using namespace cpshift::fresnel;

namespace {
const Stack kStack{2.0, 1.5, 0.7};
}

TEST_CASE("single interface basics") {
    // identical media: no interface
    auto [r0, t0] = single_interface(1.5, 1.5, cplx(0.8), cplx(0.8), Polarization::TE);
    CHECK(std::abs(r0) < 1e-15);
    CHECK(std::abs(t0 - 1.0) < 1e-15);

    // normal incidence vacuum -> n=1.5, TE: r = (1-n)/(1+n)
    auto [r1, t1] = single_interface(1.0, 1.5, cplx(1.0), cplx(1.5), Polarization::TE);
    CHECK(std::real(r1) == doctest::Approx(-0.2).epsilon(1e-15));
    CHECK(std::abs(std::imag(r1)) < 1e-15);

    // total internal reflection: kz_a imaginary, kz_b real -> |r| = 1
    auto [r2, t2] = single_interface(2.0, 1.0, cplx(0.5), cplx(0.0, 0.9), Polarization::TM);
    (void)t2;
    CHECK(std::abs(r2) == doctest::Approx(1.0).epsilon(1e-14));
    (void)t1;
}

TEST_CASE("wave_vectors branch selection") {
    // normal incidence: kzl = n_l kz
    auto wv = wave_vectors(kStack, 0.0, cplx(1.0));
    CHECK(std::real(wv.kzl) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::real(wv.kzs) == doctest::Approx(1.5).epsilon(1e-15));

    // just above the kzs branch point: kzs ~ 0+
    const double k_par = 1.0;
    const double Gs = k_par * std::sqrt(1.0 - 1.0 / (1.5 * 1.5));
    auto wv2 = wave_vectors(kStack, k_par, cplx(0.0, Gs * (1.0 + 1e-12)));
    CHECK(std::abs(wv2.kzs) < 2e-6);
    CHECK(wv2.kzs.imag() >= 0.0);

    // generic evanescent input against direct formula evaluation
    auto wv3 = wave_vectors(kStack, 1.0, cplx(0.0, 0.3));
    const cplx kzl_direct = std::sqrt(cplx((4.0 - 1.0) * 1.0 + 4.0 * (-0.09)));
    const cplx kzs_direct = std::sqrt(cplx((2.25 - 1.0) * 1.0 + 2.25 * (-0.09)));
    CHECK(std::abs(wv3.kzl - kzl_direct) < 1e-14);
    CHECK(std::abs(wv3.kzs - kzs_direct) < 1e-14);

    // sign consistency for negative real kz
    auto wvm = wave_vectors(kStack, 1.0, cplx(-0.7));
    CHECK(wvm.kzl.real() < 0.0);
    CHECK(wvm.kzs.real() < 0.0);
}

TEST_CASE("stack coefficients reduce to single interfaces") {
    // L = 0: R^R equals the direct vacuum-substrate reflection
    Stack flat{2.0, 1.5, 0.0};
    for (auto pol : {Polarization::TE, Polarization::TM}) {
        auto wv = wave_vectors(flat, 0.8, cplx(1.1));
        auto c = stack_coefficients(flat, wv, pol, Side::Right);
        auto [r, t] = single_interface(1.0, 1.5, wv.kz, wv.kzs, pol);
        (void)t;
        CHECK(std::abs(c.R - r) < 1e-13);
    }
    // n_l = n_s: homogeneous medium below z = L/2, extra phase e^{-i kz L}
    Stack homo{1.5, 1.5, 0.6};
    for (auto pol : {Polarization::TE, Polarization::TM}) {
        auto wv = wave_vectors(homo, 0.8, cplx(1.1));
        auto c = stack_coefficients(homo, wv, pol, Side::Right);
        auto [r, t] = single_interface(1.0, 1.5, wv.kz, wv.kzl, pol);
        (void)t;
        CHECK(std::abs(c.R - r * std::exp(cplx(0.0, -1.1 * 0.6))) < 1e-13);
    }
}

TEST_CASE("flux identity for propagating modes") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uk(0.05, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const double k_par = uk(rng), kz = uk(rng);
        auto wv = wave_vectors(kStack, k_par, cplx(kz));
        for (auto pol : {Polarization::TE, Polarization::TM}) {
            auto right = stack_coefficients(kStack, wv, pol, Side::Right);
            auto left = stack_coefficients(kStack, wv, pol, Side::Left);
            const double flux =
                (kz / wv.kzs.real()) * std::norm(left.T) + std::norm(right.R);
            CHECK(std::abs(flux - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("around-the-cut identity on the evanescent segment") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uk(0.2, 2.5);
    std::uniform_real_distribution<double> uf(0.05, 0.95);
    for (int i = 0; i < 100; ++i) {
        const double k_par = uk(rng);
        const double Gs = k_par * std::sqrt(1.0 - 1.0 / (kStack.n_s * kStack.n_s));
        const cplx kz(0.0, uf(rng) * Gs);
        for (auto pol : {Polarization::TE, Polarization::TM}) {
            auto wv = wave_vectors(kStack, k_par, kz);
            auto left = stack_coefficients(kStack, wv, pol, Side::Left);
            auto rp = stack_coefficients(kStack, wv, pol, Side::Right).R;
            auto wvm = wave_vectors(kStack, k_par, kz, -1);
            auto rm = stack_coefficients(kStack, wvm, pol, Side::Right).R;
            const cplx lhs = (kz / wv.kzs) * std::norm(left.T);
            CHECK(std::abs(lhs - (rp - rm)) < 1e-10);
        }
    }
}

TEST_CASE("amended reflection is even in kzl") {
    auto wv = wave_vectors(kStack, 0.9, cplx(0.0, 0.4));
    auto wv_flip = wave_vectors(kStack, 0.9, cplx(0.0, 0.4), +1, -1);
    for (auto pol : {Polarization::TE, Polarization::TM}) {
        const cplx a = amended_reflection(kStack, wv, pol);
        const cplx b = amended_reflection(kStack, wv_flip, pol);
        CHECK(std::abs(a - b) < 1e-13);
    }
}

TEST_CASE("amended reflection limits") {
    // L = 0 reduces to the direct vacuum-substrate coefficient
    Stack flat{2.0, 1.5, 0.0};
    auto wv = wave_vectors(flat, 0.5, cplx(0.9));
    for (auto pol : {Polarization::TE, Polarization::TM}) {
        auto [r, t] = single_interface(1.0, 1.5, wv.kz, wv.kzs, pol);
        (void)t;
        CHECK(std::abs(amended_reflection(flat, wv, pol) - r) < 1e-13);
    }
    // evanescent kzl, L -> large: phase dies, R -> r_vl
    Stack thick{2.0, 1.5, 60.0};
    auto wve = wave_vectors(thick, 2.0, cplx(0.0, 1.9));
    CHECK(wve.kzl.imag() > 0.0);
    for (auto pol : {Polarization::TE, Polarization::TM}) {
        auto [r_vl, t_vl] = single_interface(1.0, 2.0, wve.kz, wve.kzl, pol);
        (void)t_vl;
        CHECK(std::abs(amended_reflection(thick, wve, pol) - r_vl) < 1e-13);
    }
}

TEST_CASE("scaled reflection on the imaginary axis") {
    // no dielectric: zero
    CHECK(reflection_imaginary_axis(1.0, 1.0, 0.4, 1.0, 0.5, Polarization::TE) == 0.0);
    CHECK(reflection_imaginary_axis(1.0, 1.0, 0.4, 1.0, 0.5, Polarization::TM) == 0.0);

    // y=1, x large, L>0: deep-evanescent single-interface limit (1-n_l)/(1+n_l) for TE
    const double v = reflection_imaginary_axis(2.0, 1.5, 0.5, 500.0, 1.0, Polarization::TE);
    CHECK(v == doctest::Approx((1.0 - 2.0) / (1.0 + 2.0)).epsilon(1e-12));

    // generic point equals the complex amended_reflection evaluated at the
    // same wave vectors (independent evaluation path), and is purely real
    const double x = 2.0, y = 0.3, b = 0.5;
    Stack s{2.0, 1.5, b}; // |E| = 1 so b = L
    const double wl = std::sqrt((4.0 - 1.0) * y * y + 1.0);
    const double ws = std::sqrt((2.25 - 1.0) * y * y + 1.0);
    WaveVectorSet wv;
    wv.k_par = 0.0;
    wv.kz = cplx(0.0, x);
    wv.kzl = cplx(0.0, x * wl);
    wv.kzs = cplx(0.0, x * ws);
    const cplx full = amended_reflection(s, wv, Polarization::TM);
    CHECK(std::abs(full.imag()) < 1e-13);
    CHECK(reflection_imaginary_axis(2.0, 1.5, b, x, y, Polarization::TM) ==
          doctest::Approx(full.real()).epsilon(1e-13));
}

TEST_CASE("eta reflection branches") {
    // eta = 1 travelling equals normal-incidence amended reflection at kz = |E|
    Stack s{2.0, 1.5, 0.5};
    auto wv = wave_vectors(s, 0.0, cplx(1.0));
    for (auto pol : {Polarization::TE, Polarization::TM}) {
        const cplx a = eta_reflection(s, 1.0, 1.0, EtaBranch::Travelling, pol);
        const cplx b = amended_reflection(s, wv, pol);
        CHECK(std::abs(a - b) < 1e-13);
    }
    // all-evanescent regime: eta^2 > n_l^2 - 1 makes the TE coefficient real
    const double eta = std::sqrt(s.n_l * s.n_l - 1.0) + 0.5;
    const cplx r = eta_reflection(s, 1.0, eta, EtaBranch::Evanescent, Polarization::TE);
    CHECK(std::abs(r.imag()) < 1e-14);
}

TEST_CASE("eta reflection blows up at a guided-mode pole") {
    // slab with strong confinement: poles exist in the evanescent window
    Stack s{2.0 * M_PI, 1.0, 0.75}; // |E| L = 0.75 at |E| = 1
    // bracket a pole by scanning |denominator|
    double best_eta = 0.0;
    double best = 1e300;
    for (double eta = 1e-3; eta < std::sqrt(s.n_l * s.n_l - 1.0); eta += 1e-4) {
        const cplx r = eta_reflection(s, 1.0, eta, EtaBranch::Evanescent, Polarization::TE);
        if (1.0 / std::abs(r) < best) {
            best = 1.0 / std::abs(r);
            best_eta = eta;
        }
    }
    CHECK(best < 1e-2); // |R| > 100 near the pole
    CHECK(best_eta > 0.0);
}
