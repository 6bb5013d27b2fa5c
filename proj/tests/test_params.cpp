#include <doctest.h>

#include "gslaser/params.hpp"
#include "gslaser/rng.hpp"

#include <cmath>
#include <string>

using namespace gslaser;

TEST_CASE("derive: default parameter set") {
    const LaserParams p;
    const DerivedParams d = derive(p);

    // Thresholds should round to 10.4 / 9.6 mA (half-unit in the third
    // significant figure).
    CHECK(std::abs(d.I_th - 10.4e-3) < 0.05e-3);
    CHECK(std::abs(d.I_tr - 9.6e-3) < 0.05e-3);

    // Hand-evaluated values (calculator, CODATA constants).
    CHECK(d.I_th == doctest::Approx(1.0414148121e-02).epsilon(1e-9));
    CHECK(d.I_tr == doctest::Approx(9.6130598040e-03).epsilon(1e-9));
    CHECK(d.hbar_omega0 == doctest::Approx(1.2824626246e-19).epsilon(1e-9));
    CHECK(d.c_P == doctest::Approx(1.6030782808e-07).epsilon(1e-9));
    CHECK(d.chi_Q == doctest::Approx(3.2061565615e-06).epsilon(1e-9));
}

TEST_CASE("derive: chi = 0 gives chi_Q = 0") {
    LaserParams p;
    p.chi = 0.0;
    CHECK(derive(p).chi_Q == 0.0);
}

TEST_CASE("derive: deterministic") {
    const LaserParams p;
    const DerivedParams a = derive(p);
    const DerivedParams b = derive(p);
    CHECK(a.I_th == b.I_th);
    CHECK(a.I_tr == b.I_tr);
    CHECK(a.hbar_omega0 == b.hbar_omega0);
    CHECK(a.c_P == b.c_P);
    CHECK(a.chi_Q == b.chi_Q);
}

TEST_CASE("derive: invariant violations name the field") {
    LaserParams p;

    SUBCASE("N_th <= N_tr") {
        p.N_th = p.N_tr;
        CHECK_THROWS_WITH_AS(derive(p), doctest::Contains("N_th"), ConfigError);
    }
    SUBCASE("nonpositive tau_ph") {
        p.tau_ph = 0.0;
        CHECK_THROWS_WITH_AS(derive(p), doctest::Contains("tau_ph"), ConfigError);
    }
    SUBCASE("eps out of range") {
        p.eps = 1.5;
        CHECK_THROWS_WITH_AS(derive(p), doctest::Contains("eps"), ConfigError);
    }
    SUBCASE("Gamma out of range") {
        p.Gamma = 0.0;
        CHECK_THROWS_WITH_AS(derive(p), doctest::Contains("Gamma"), ConfigError);
    }
    SUBCASE("C_sp out of range") {
        p.C_sp = -1e-6;
        CHECK_THROWS_WITH_AS(derive(p), doctest::Contains("C_sp"), ConfigError);
    }
    SUBCASE("negative chi") {
        p.chi = -1.0;
        CHECK_THROWS_WITH_AS(derive(p), doctest::Contains("chi"), ConfigError);
    }
}

TEST_CASE("pump_current: square wave phases") {
    const PumpWaveform w{5e-3, 12e-3, 2.5e9, 0.5};
    const double T_p = w.period();
    CHECK(pump_current(w, 0.0) == 17e-3);
    CHECK(pump_current(w, 0.75 * T_p) == 5e-3);
    CHECK(pump_current(w, 3.25 * T_p) == 17e-3);
}

TEST_CASE("pump_current: exact T_p periodicity") {
    const PumpWaveform w{2e-3, 10e-3, 5e9, 0.3};
    const double T_p = w.period();
    GaussianStream rng(2024, 0);
    for (int trial = 0; trial < 200; ++trial) {
        // Stay away from the switching edges; equality there is a measure-zero
        // floating-point coin flip, not a property.
        double u = rng.uniform();
        if (std::abs(u - w.duty) < 0.01 || u > 0.99 || u < 0.01) {
            continue;
        }
        const double t = u * T_p;
        const int k = static_cast<int>(rng.uniform() * 8);
        CHECK(pump_current(w, t) == pump_current(w, t + k * T_p));
    }
}

TEST_CASE("photons_to_watts") {
    const DerivedParams d = derive(LaserParams{});
    CHECK(photons_to_watts(0.0, d) == 0.0);
    CHECK(photons_to_watts(8.99e3, d) == doctest::Approx(1.4411673744e-03).epsilon(1e-9));
    CHECK(photons_to_watts(1.0 / d.c_P, d) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(photons_to_watts(-1.0, d), NumericalError);

    // linearity
    GaussianStream rng(7, 0);
    for (int i = 0; i < 100; ++i) {
        const double q = rng.uniform() * 1e5;
        const double a = rng.uniform() * 10.0;
        CHECK(photons_to_watts(a * q, d) ==
              doctest::Approx(a * photons_to_watts(q, d)).epsilon(1e-12));
    }
}
