#include "doctest.h"

#include "levsim/model.hpp"
#include "levsim/presets.hpp"

#include <cmath>
#include <stdexcept>

using namespace levsim;

TEST_SUITE("model") {

TEST_CASE("derived coefficients at the overdamped preset [model][coefficients]") {
    const SystemParams p = presets::get("fig6");
    const auto d = derive_coefficients(p);

    CHECK(d.D_p == doctest::Approx(1.0e4).epsilon(1e-12));
    CHECK(d.D_q * 6.0 * p.N_0 == doctest::Approx(p.gamma_g).epsilon(1e-12));
    CHECK(d.D_q == doctest::Approx(8.333333333333333e-14).epsilon(1e-12));
    CHECK(d.A_total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.S() == doctest::Approx(1.0001e4).epsilon(1e-12));
    CHECK(d.J == doctest::Approx(32.0 / 27.0).epsilon(1e-12));

    // Fluctuation-dissipation tie between the two gas noise channels.
    CHECK(d.D_p * d.D_q * 3.0 / (p.gamma_g * p.gamma_g) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coefficients scale linearly with the rates [model][scaling]") {
    const SystemParams base = presets::get("fig6");
    const double s = 3.7;
    SystemParams scaled = base;
    scaled.omega_z *= s;
    scaled.gamma_g *= s;
    scaled.gamma_f *= s;
    scaled.Gamma_f *= s;
    scaled.A_t *= s;
    scaled.A_p *= s;

    const auto d0 = derive_coefficients(base);
    const auto d1 = derive_coefficients(scaled);
    CHECK(d1.D_p / d0.D_p == doctest::Approx(s).epsilon(1e-12));
    CHECK(d1.D_q / d0.D_q == doctest::Approx(s).epsilon(1e-12));
    CHECK(d1.J / d0.J == doctest::Approx(s).epsilon(1e-12));
    CHECK(d1.S() / d0.S() == doctest::Approx(s).epsilon(1e-12));

    // Dimensionless diagnostics are invariant under a common rescaling of
    // all rates when evaluated at the same state.
    const double x2 = 64.0;
    const auto r0 = classify_regime(base, x2);
    const auto r1 = classify_regime(scaled, x2);
    CHECK(r1.gamma_eff == doctest::Approx(r0.gamma_eff).epsilon(1e-12));
    const double n = 1.0e3;
    CHECK(modulation(scaled, n).M ==
          doctest::Approx(modulation(base, n).M).epsilon(1e-12));
}

TEST_CASE("parameter validation rejects unphysical input [model][validate]") {
    SystemParams p = presets::get("fig6");
    CHECK_NOTHROW(validate(p));

    SystemParams bad = p;
    bad.omega_z = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = p;
    bad.gamma_g = -1.0e-5;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = p;
    bad.N_0 = 0.4;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    // The feedback pair must come from a physical modulation: gamma_f >= 9 Gamma_f.
    bad = p;
    bad.Gamma_f = bad.gamma_f / 8.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);

    bad = p;
    bad.A_t = std::nan("");
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("regime classification thresholds [model][regime]") {
    // Overdamped preset: gamma_eff = (2 gamma_g + 24 gamma_f x2) / omega_z.
    const SystemParams over = presets::get("fig6");
    const double x2_over = 64.955132;
    const auto r_over = classify_regime(over, x2_over);
    CHECK(r_over.gamma_eff ==
          doctest::Approx((2.0 * over.gamma_g + 24.0 * over.gamma_f * x2_over) /
                          over.omega_z)
              .epsilon(1e-12));
    CHECK(r_over.gamma_eff > 1.0);
    CHECK(r_over.regime == Regime::Overdamped);

    const SystemParams low = presets::get("fig4");
    const auto r_low = classify_regime(low, 0.0);
    CHECK(r_low.regime == Regime::LowDamping);

    // Boundary cases around the published thresholds.
    SystemParams p = presets::get("fig6");
    p.gamma_f = 0.0;
    p.Gamma_f = 0.0;
    p.gamma_g = 0.2;  // gamma_eff = 0.4/40 = 1e-2 exactly: not "low" any more
    CHECK(classify_regime(p, 1.0).regime == Regime::Intermediate);
    p.gamma_g = 0.199;
    CHECK(classify_regime(p, 1.0).regime == Regime::LowDamping);
    p.gamma_g = 20.0;  // gamma_eff = 1: overdamped starts at 1
    CHECK(classify_regime(p, 1.0).regime == Regime::Overdamped);

    CHECK(regime_name(Regime::LowDamping) == std::string("LowDamping"));
    CHECK(regime_name(Regime::Intermediate) == std::string("Intermediate"));
    CHECK(regime_name(Regime::Overdamped) == std::string("Overdamped"));
}

TEST_CASE("modulation depth and its validity flag [model][modulation]") {
    const SystemParams p = presets::get("fig6");
    // M = gamma_f * n / omega_z.
    const auto m1 = modulation(p, 65.0);
    CHECK(m1.M == doctest::Approx(p.gamma_f * 65.0 / p.omega_z).epsilon(1e-12));
    CHECK_FALSE(m1.over_limit);

    const auto m2 = modulation(p, 1.0e4);
    CHECK(m2.over_limit);
}

TEST_CASE("feedback rates from the microphysical triple [model][feedback]") {
    const double chi = 2.0, Phi = 3.0, G = 1.0 / 18.0;
    const FeedbackPair fb = feedback_from_chi_phi_g(chi, Phi, G);
    CHECK(fb.gamma_f == doctest::Approx(chi * chi * Phi * G).epsilon(1e-15));
    CHECK(fb.Gamma_f == doctest::Approx(chi * chi * Phi * G * G).epsilon(1e-15));
    CHECK(fb.gamma_f == doctest::Approx(18.0 * fb.Gamma_f).epsilon(1e-15));

    SystemParams p = presets::get("fig6");
    p.gamma_f = fb.gamma_f;
    p.Gamma_f = fb.Gamma_f;
    CHECK_NOTHROW(validate(p));

    // G > 1/9 produces an unphysical pair that validation must reject.
    const FeedbackPair hot = feedback_from_chi_phi_g(chi, Phi, 0.25);
    p.gamma_f = hot.gamma_f;
    p.Gamma_f = hot.Gamma_f;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("presets are self-consistent [model][presets]") {
    for (const auto& name : presets::names()) {
        const SystemParams p = presets::get(name);
        CHECK_NOTHROW(validate(p));
        CHECK(p.omega_z == doctest::Approx(40.0));
    }
    CHECK_THROWS_AS(presets::get("no-such-preset"), std::invalid_argument);

    const SystemParams desk = presets::get("fig2-desk");
    CHECK(desk.N_0 == doctest::Approx(1.0e3));
    CHECK(desk.gamma_f == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(desk.gamma_f == doctest::Approx(18.0 * desk.Gamma_f).epsilon(1e-15));

    const SystemParams hn = presets::get("high-n-bistable");
    CHECK(hn.gamma_g == doctest::Approx(0.5));
    CHECK(hn.N_0 == doctest::Approx(1.0e8));
}

}  // TEST_SUITE
