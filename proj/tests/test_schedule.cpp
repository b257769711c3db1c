#include <doctest.h>

#include <cmath>
#include <vector>

#include "slglue/errors.hpp"
#include "slglue/schedule.hpp"

using namespace slglue;

TEST_CASE("closed form anchors, monotonicity and derivative identities") {
    NeckSchedule s;
    s.m = 3;
    s.c = 0.8;
    s.eps0 = 0.07;
    CHECK(closed_form(s, 0.0) == doctest::Approx(s.eps0).epsilon(1e-15));
    CHECK(closed_form(s, 5.0) < closed_form(s, 1.0));

    const double h = 1e-6;
    for (double t : {0.5, 3.0, 40.0}) {
        const double fd =
            (closed_form(s, t + h) - closed_form(s, t - h)) / (2.0 * h);
        CHECK(closed_form_derivative(s, t) == doctest::Approx(fd).epsilon(1e-7));
        // d(eps^2)/dt = 2 eps eps'
        CHECK(closed_form_deps2(s, t) ==
              doctest::Approx(2.0 * closed_form(s, t) *
                              closed_form_derivative(s, t))
                  .epsilon(1e-14));
        CHECK(closed_form_deps2(s, t) ==
              doctest::Approx(-s.c * std::pow(closed_form(s, t), 3)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(closed_form(s, -0.1), ConfigError);
}

TEST_CASE("matched normalization makes the closed form a pure power law") {
    NeckSchedule s;
    s.m = 4;
    s.c = 2.5;
    s.Lambda = 1.3;
    s.eps0 = matched_eps0(s.m, s.c, s.Lambda);
    for (double t : {s.Lambda, 3.0, 12.0}) {
        const double pure =
            std::pow(0.5 * s.c * (s.m - 2.0) * t, -1.0 / (s.m - 2.0));
        CHECK(closed_form(s, t - s.Lambda) == doctest::Approx(pure).epsilon(1e-13));
        CHECK(integrate_schedule(s, t) == doctest::Approx(pure).epsilon(1e-12));
    }
}

TEST_CASE("perturbed bracket form and its slope") {
    NeckSchedule s;
    s.m = 3;
    s.c = 1.0;
    s.Lambda = 1.0;
    s.h = [](double) { return 0.1; };
    for (double t : {1.5, 4.0}) {
        const double bracket = 0.5 * s.c * t + 0.1 * (t - s.Lambda);
        CHECK(integrate_schedule(s, t) ==
              doctest::Approx(1.0 / bracket).epsilon(1e-11));
        const double h = 1e-6;
        const double e_p = integrate_schedule(s, t + h);
        const double e_m = integrate_schedule(s, t - h);
        const double fd = (e_p * e_p - e_m * e_m) / (2.0 * h);
        CHECK(schedule_deps2(s, t) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK_THROWS_AS(integrate_schedule(s, 0.5), ConfigError);

    NeckSchedule sink = s;
    sink.h = [](double) { return -10.0; };
    CHECK_THROWS_AS(integrate_schedule(sink, 3.0), ConfigError);
}

TEST_CASE("numeric path follows the closed form") {
    NeckSchedule s;
    s.m = 3;
    s.c = 1.4;
    s.Lambda = 1.0;
    s.eps0 = matched_eps0(s.m, s.c, s.Lambda);
    const OdePath path = solve_balancing_ode(s, s.Lambda, 20.0, 1e-11);
    for (double t : {1.0, 2.7, 9.0, 20.0}) {
        const double num = std::sqrt(path.eval(t)[0]);
        CHECK(num == doctest::Approx(closed_form(s, t)).epsilon(1e-9));
    }
}

TEST_CASE("growth validator accepts the closed-form schedule") {
    NeckSchedule s;
    s.m = 3;
    s.c = 1.0;
    s.Lambda = 1.0;
    s.eps0 = matched_eps0(s.m, s.c, s.Lambda);
    const AssumptionReport rep = validate_assumption(
        [&](double t) { return closed_form(s, t); },
        [&](double t) { return closed_form_derivative(s, t); }, s.m, s.Lambda,
        100.0, 0.01);
    CHECK(rep.finite);
    CHECK(rep.upper.sup > 0.0);
    CHECK(rep.lower.sup > 0.0);
    CHECK(rep.deriv.sup > 0.0);
    CHECK(rep.holder.sup >= 0.0);
    CHECK(rep.upper.sup >= rep.upper.at_start * (1.0 - 1e-12));
}

TEST_CASE("log-log slope fit recovers exact power laws") {
    std::vector<double> t, v;
    for (int i = 0; i < 12; ++i) {
        const double ti = std::pow(1.5, i);
        t.push_back(ti);
        v.push_back(3.0 * std::pow(ti, 1.5));
    }
    CHECK(blowup_rate(t, v) == doctest::Approx(1.5).epsilon(1e-12));
    std::vector<double> short_t = {1.0};
    CHECK_THROWS_AS(blowup_rate(short_t, {2.0}), ConfigError);
}

TEST_CASE("schedule validation") {
    NeckSchedule s;
    s.m = 2;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.m = 3;
    s.c = -1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    CHECK_THROWS_AS(matched_eps0(3, 0.0, 1.0), ConfigError);
}
