#include "doctest.h"

#include "cpshift/greens.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace cpshift;
using namespace cpshift::greens;

TEST_CASE("image kernel invariants") {
    const auto k = ImageKernel::from({2.0, 1.5, 0.3});
    CHECK(std::abs(k.alpha) < 1.0);
    CHECK(std::abs(k.beta) <= 1.0);
    CHECK(std::abs(k.r_im) < 1.0);
    CHECK(k.alpha == doctest::Approx(0.6));
    CHECK(k.beta == doctest::Approx((4.0 - 2.25) / (4.0 + 2.25)));
}

TEST_CASE("greens_reflected limits") {
    // vacuum: zero
    const auto v = greens_reflected({1.0, 1.0, 0.0}, 0.3, 2.0);
    CHECK(std::abs(v.value) < 1e-15);
    // L = 0: single image charge
    const auto h = greens_reflected({2.0, 1.5, 0.0}, 0.3, 2.0);
    const double expected = -((1.5 * 1.5 - 1.0) / (1.5 * 1.5 + 1.0)) /
                            (4.0 * M_PI * std::hypot(0.3, 2.0));
    CHECK(h.value == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("greens_reflected equals the image series") {
    const Stack s{2.0, 1.5, 0.5};
    const auto g = greens_reflected(s, 0.3, 2.0);
    const double series = oracles::image_series_green(s, 0.3, 2.0, 200);
    CHECK(g.value == doctest::Approx(series).epsilon(1e-10));
}

TEST_CASE("greens_reflected decreases with separation for n_l >= n_s") {
    const Stack s{2.0, 1.5, 0.5};
    double prev = -1e300;
    for (double sep : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double val = greens_reflected(s, 0.2, sep).value;
        CHECK(std::abs(val) > 0.0);
        CHECK(val > prev); // negative and increasing toward zero
        prev = val;
    }
}

TEST_CASE("electrostatic shift: half-space closed form") {
    const DipoleMoments mu{1.0, 1.0};
    const auto r = electrostatic_shift({1.5, 1.5, 0.7}, mu, 1.3);
    const double expected = -(1.0 / (64.0 * M_PI * std::pow(1.3, 3))) *
                            ((2.25 - 1.0) / (2.25 + 1.0)) * (1.0 + 2.0);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-11));
}

TEST_CASE("electrostatic shift vanishes when the atom sees only vacuum") {
    // vacuum layer of diverging thickness over a substrate
    const DipoleMoments mu{1.0, 1.0};
    const auto r = electrostatic_shift({1.0, 2.0, 4000.0}, mu, 1.0);
    CHECK(std::abs(r.value) < 1e-9);
}

TEST_CASE("series and integral forms agree") {
    const DipoleMoments mu{1.0, 1.0};
    numerics::QuadratureConfig tight;
    tight.rel_tol = 1e-12;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> un(1.05, 3.0), uL(0.05, 3.0), uZ(0.2, 3.0);
    for (int i = 0; i < 20; ++i) {
        const Stack s{un(rng), un(rng), uL(rng)};
        const double Z = uZ(rng);
        const auto integral = electrostatic_shift(s, mu, Z, tight);
        const auto series = electrostatic_shift_series(s, mu, Z);
        CHECK(std::abs(integral.value - series.value) <=
              1e-10 * std::abs(series.value) + 1e-15);
    }
    // cross-oracle case: thick layer, short distance
    const auto a = electrostatic_shift({2.0, 1.5, 3.0}, mu, 0.1, tight);
    const auto b = electrostatic_shift_series({2.0, 1.5, 3.0}, mu, 0.1);
    CHECK(std::abs(a.value - b.value) <= 1e-10 * std::abs(b.value));
}

TEST_CASE("series form is singular at n_l = 1") {
    CHECK_THROWS_AS(electrostatic_shift_series({1.0, 2.0, 0.5}, {1.0, 1.0}, 1.0),
                    ValidationError);
}

TEST_CASE("series reduces to the half-space value when n_l = n_s") {
    const DipoleMoments mu{0.7, 0.4};
    const auto r = electrostatic_shift_series({1.8, 1.8, 0.9}, mu, 1.1);
    const double expected = -(mu.par_sq + 2.0 * mu.perp_sq) / (64.0 * M_PI * std::pow(1.1, 3)) *
                            ((1.8 * 1.8 - 1.0) / (1.8 * 1.8 + 1.0));
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("thick-layer correction is distance-independent at leading order") {
    // for L >> Z the leading correction to the n_l half-space value is the
    // same for nearby distances
    const Stack s{2.0, 1.5, 40.0};
    const DipoleMoments mu{1.0, 1.0};
    auto corr = [&](double Z) {
        const double half = -(mu.par_sq + 2.0 * mu.perp_sq) / (64.0 * M_PI * Z * Z * Z) *
                            ((4.0 - 1.0) / (4.0 + 1.0));
        return electrostatic_shift(s, mu, Z).value - half;
    };
    const double c1 = corr(0.05), c2 = corr(0.1);
    CHECK(c1 == doctest::Approx(c2).epsilon(1e-2));
}

TEST_CASE("dipole energy from the Green's function matches the direct shift") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> un(1.05, 3.0), uL(0.0, 2.0), uZ(0.2, 3.0),
        um(0.1, 2.0);
    for (int i = 0; i < 20; ++i) {
        const Stack s{un(rng), un(rng), uL(rng)};
        const DipoleMoments mu{um(rng), um(rng)};
        const double Z = uZ(rng);
        const auto a = dipole_energy_from_green(mu, Z, s);
        const auto b = electrostatic_shift(s, mu, Z);
        CHECK(std::abs(a.value - b.value) <= 1e-9 * std::abs(b.value) + 1e-16);
    }
    // vacuum: zero
    CHECK(std::abs(dipole_energy_from_green({1.0, 1.0}, 1.0, {1.0, 1.0, 0.0}).value) < 1e-15);
    // L=0, n_s=2, unit moments: -(1/64 pi)(3/5) * 3
    const auto r = dipole_energy_from_green({1.0, 1.0}, 1.0, {2.0, 2.0, 0.0});
    CHECK(r.value == doctest::Approx(-(3.0 / 5.0) * 3.0 / (64.0 * M_PI)).epsilon(1e-10));
}

TEST_CASE("half-space scaling limits of the layered electrostatic shift") {
    const DipoleMoments mu{1.0, 1.0};
    const double msum = 3.0;
    // Z/L -> 0: layer index dominates
    {
        const Stack s{2.0, 1.5, 100.0};
        const double Z = 0.01;
        const double c = electrostatic_shift(s, mu, Z).value * Z * Z * Z;
        CHECK(c == doctest::Approx(-msum / (64.0 * M_PI) * (3.0 / 5.0)).epsilon(1e-3));
    }
    // Z/L -> inf: substrate index dominates
    {
        const Stack s{2.0, 1.5, 1e-4};
        const double Z = 10.0;
        const double c = electrostatic_shift(s, mu, Z).value * Z * Z * Z;
        CHECK(c == doctest::Approx(-msum / (64.0 * M_PI) * (1.25 / 3.25)).epsilon(1e-3));
    }
}
