#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "uwb/power_link.hpp"

using namespace uwb;

TEST_CASE("fitted preset reproduces the measured efficiencies") {
    PowerLinkParams p;  // shipped fit
    CHECK(link_efficiency(p, 4e-3) == doctest::Approx(28.0).epsilon(0.069));   // +-2 pp
    CHECK(link_efficiency(p, 10e-3) == doctest::Approx(40.0).epsilon(0.048));  // +-2 pp
}

TEST_CASE("efficiency limits and monotonicity") {
    PowerLinkParams p;
    // vanishing coupling kills the link
    PowerLinkParams weak = p;
    weak.k = 1e-9;
    CHECK(link_efficiency(weak, 4e-3) < 1e-8);

    // increasing k, q_tx, q_rx all raise efficiency; bounded in (0,100)
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> kd(0.01, 0.5);
    for (int i = 0; i < 200; ++i) {
        PowerLinkParams a = p;
        a.k = kd(rng);
        PowerLinkParams b = a;
        b.k = a.k * 1.3;
        if (b.k < 1.0) CHECK(link_efficiency(b, 5e-3) > link_efficiency(a, 5e-3));
        PowerLinkParams c = a;
        c.q_tx *= 1.5;
        CHECK(link_efficiency(c, 5e-3) > link_efficiency(a, 5e-3));
        PowerLinkParams d = a;
        d.q_rx *= 1.5;
        CHECK(link_efficiency(d, 5e-3) > link_efficiency(a, 5e-3));
        const double e = link_efficiency(a, 5e-3);
        CHECK(e > 0.0);
        CHECK(e < 100.0);
    }
    CHECK_THROWS(link_efficiency(p, 0.0));
}

TEST_CASE("rectifier output and ripple") {
    PowerLinkParams p;
    auto r = rectifier_output(10.0, p, 4e-3);
    CHECK(r.v_dc == doctest::Approx(9.6).epsilon(1e-12));
    CHECK(r.ripple == doctest::Approx(133.3e-6).epsilon(0.01));

    // doubling the filter capacitance halves the ripple exactly
    PowerLinkParams p2 = p;
    p2.c_filter = 2.0 * p.c_filter;
    CHECK(rectifier_output(10.0, p2, 4e-3).ripple == doctest::Approx(0.5 * r.ripple).epsilon(1e-12));

    // ripple frequency doubling: halving f_link doubles ripple
    PowerLinkParams ph = p;
    ph.f_link = 0.5 * p.f_link;
    CHECK(rectifier_output(10.0, ph, 4e-3).ripple == doctest::Approx(2.0 * r.ripple).epsilon(1e-12));

    CHECK_THROWS(rectifier_output(0.3, p, 4e-3));  // below the diode drop
}

TEST_CASE("detune regulation equilibrium and loop sign") {
    PowerLinkParams p;
    auto s = make_regulator_state(p);

    // at the target, the state stays put
    RegulatorState eq = s;
    eq.v_rect = p.v_target;
    auto eq2 = detune_step(eq, p, 1e-6);
    CHECK(eq2.c_tune == doctest::Approx(eq.c_tune).epsilon(1e-12));

    // with excess voltage the tuning cap walks down monotonically
    RegulatorState hot = s;
    hot.v_rect = 2.0 * p.v_target;
    double prev_c = hot.c_tune;
    for (int i = 0; i < 5; ++i) {
        hot = detune_step(hot, p, 1e-6);
        hot.v_rect = 2.0 * p.v_target;  // hold the disturbance
        CHECK(hot.c_tune < prev_c);
        prev_c = hot.c_tune;
    }
}

TEST_CASE("closed loop settles after a 50% source step") {
    PowerLinkParams p;
    const double dt = 1e-6;

    // settle at the nominal source first
    auto s = make_regulator_state(p);
    for (int i = 0; i < 400000; ++i) s = detune_step(s, p, dt);
    CHECK(s.v_rect == doctest::Approx(p.v_target).epsilon(0.02));

    // +50% source step
    PowerLinkParams boosted = p;
    boosted.v_source = 1.5 * p.v_source;
    bool overshoot = false;
    // independent first-order settling oracle: time constant from the
    // loop linearization at the operating point
    double max_v = 0.0;
    auto s2 = s;
    for (int i = 0; i < 400000; ++i) {
        s2 = detune_step(s2, boosted, dt);
        max_v = std::max(max_v, s2.v_rect);
        if (s2.v_rect > p.limiter_ratio * p.v_target + 1e-9) overshoot = true;
    }
    CHECK_FALSE(overshoot);
    CHECK(s2.v_rect == doctest::Approx(p.v_target).epsilon(0.02));
}

TEST_CASE("error magnitude is non-increasing once the limiter is off") {
    PowerLinkParams p;
    auto s = make_regulator_state(p);
    // perturb mildly and watch the Lyapunov surrogate
    for (int i = 0; i < 200000; ++i) s = detune_step(s, p, 1e-6);
    PowerLinkParams boosted = p;
    boosted.v_source = 1.2 * p.v_source;
    double prev_err = 1e9;
    auto s2 = s;
    for (int i = 0; i < 300000; ++i) {
        s2 = detune_step(s2, boosted, 1e-6);
        if (!s2.limiter_active) {
            const double err = std::fabs(s2.v_rect - boosted.v_target);
            CHECK(err <= prev_err + 1e-9);
            prev_err = err;
        }
    }
}

TEST_CASE("vco-free calculators") {
    CHECK(vco_free_required_q(915e6 / 5.0, 915e6, 20.0) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(vco_free_required_q(915e6, 915e6, 20.0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(vco_free_required_q(13.67e6, 915e6, 20.0) == doctest::Approx(1339.0).epsilon(0.0008));

    CHECK(vco_free_max_rate(13.67e6) == doctest::Approx(27.34e6).epsilon(1e-12));
    CHECK(vco_free_max_rate(13.67e6) > 20e6);
    CHECK(vco_free_max_rate(13.67e6) < 30e6);
    CHECK(vco_free_max_rate(10e6) == doctest::Approx(20e6).epsilon(1e-12));
    CHECK(vco_free_max_rate(1.5e6) == doctest::Approx(3e6).epsilon(1e-12));

    CHECK_THROWS(vco_free_required_q(0.0, 915e6, 20.0));
    CHECK_THROWS(vco_free_max_rate(-1.0));
}
