#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "extann/gauge.hpp"

using namespace extann;

TEST_CASE("gauge families") {
    const auto id = DistortionGauge::identity();
    CHECK(id.phi(3.0) == 3.0);
    CHECK(id.dphi(3.0) == 1.0);
    CHECK(id.derivative_bounded());
    CHECK(id.dphi_limit() == 1.0);

    const auto pw = DistortionGauge::power(2.0);
    CHECK(pw.phi(3.0) == doctest::Approx(9.0));
    CHECK(pw.dphi(3.0) == doctest::Approx(6.0));
    CHECK(pw.ddphi(3.0) == doctest::Approx(2.0));
    CHECK_FALSE(pw.derivative_bounded());
    CHECK_THROWS_AS(DistortionGauge::power(1.0), std::invalid_argument);

    const auto ll = DistortionGauge::linear_log();
    CHECK(ll.phi(2.0) == doctest::Approx(2.0 - std::log(2.0)));
    CHECK(ll.dphi(2.0) == doctest::Approx(0.5));
    CHECK(ll.derivative_bounded());
    CHECK(ll.dphi_limit() == 1.0);

    const auto sp = DistortionGauge::shifted_power(3.0);
    CHECK(sp.phi(2.0) == doctest::Approx(2.0 + std::pow(2.0, -2.0) / 2.0));
    CHECK(sp.dphi(2.0) == doctest::Approx(1.0 - 0.125));
    CHECK(sp.derivative_bounded());
    CHECK_THROWS_AS(DistortionGauge::shifted_power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistortionGauge::shifted_power(0.0), std::invalid_argument);
}

TEST_CASE("gauge convexity spot checks") {
    for (const auto& g : {DistortionGauge::identity(), DistortionGauge::power(1.7),
                          DistortionGauge::linear_log(), DistortionGauge::shifted_power(0.5),
                          DistortionGauge::shifted_power(2.5)}) {
        for (double t = 1.0; t < 20.0; t *= 1.7) {
            CHECK(g.ddphi(t) >= 0.0);
            if (t > 1.0) CHECK(g.dphi(t) > 0.0);
            // finite-difference check of dphi
            const double h = 1e-6 * t;
            const double fd = (g.phi(t + h) - g.phi(t - h)) / (2.0 * h);
            CHECK(g.dphi(t) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("weight functions") {
    const auto c = WeightFunction::constant(2.5, 1.0);
    CHECK(c(0.3) == 2.5);
    CHECK(c.min_value() == 2.5);
    CHECK_THROWS_AS(WeightFunction::constant(0.0, 1.0), std::invalid_argument);

    const auto n = WeightFunction::nitsche(0.5);
    CHECK(n(0.25) == doctest::Approx(std::exp(M_PI)));
    CHECK(n.min_value() == doctest::Approx(1.0));
    CHECK(n.argmin() == doctest::Approx(0.0));

    const auto w = WeightFunction::power_well(1.5, 1.0);
    CHECK(w.argmin() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(w.min_value() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w(0.9) == doctest::Approx(1.0 + std::pow(0.4, 3.0)));
}

TEST_CASE("table weight") {
    const auto w = WeightFunction::from_table({{0.0, 2.0}, {0.5, 1.0}, {1.0, 3.0}}, 1.0);
    CHECK(w(0.0) == doctest::Approx(2.0));
    CHECK(w(0.25) == doctest::Approx(1.5));
    CHECK(w(0.75) == doctest::Approx(2.0));
    CHECK(w(2.0) == doctest::Approx(3.0));  // clamped
    CHECK(w.argmin() == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(w.min_value() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(WeightFunction::from_table({{0.0, 1.0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WeightFunction::from_table({{0.0, 1.0}, {1.0, -2.0}}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("custom weight minimum located") {
    const auto w = WeightFunction::custom(
        [](double x) { return 2.0 + std::cos(2.0 * M_PI * x); }, 1.0);
    CHECK(w.argmin() == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(w.min_value() == doctest::Approx(1.0).epsilon(1e-10));
}
