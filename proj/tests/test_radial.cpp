#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "extann/errors.hpp"
#include "extann/radial.hpp"

using namespace extann;

TEST_CASE("harmonic coefficients A(1,2)->A(1,3)") {
    const RadialProfile p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    CHECK(p.coef_a() == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(p.coef_b() == doctest::Approx(-2.0 / 3.0).epsilon(1e-14));
    CHECK(p.value(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.value(2.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(p.strictly_increasing());
}

TEST_CASE("harmonic identity case") {
    const RadialProfile p = harmonic_radial(Annulus(1, 2), Annulus(1, 2));
    CHECK(p.coef_a() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.coef_b() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("bound saturation gives H'(r)=0") {
    const RadialProfile p = harmonic_radial(Annulus(1, 2), Annulus(2, 2.5));
    CHECK(p.derivative(1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.derivative(1.0) >= -1e-12);
}

TEST_CASE("harmonic refuses beyond-Nitsche pairs") {
    CHECK_THROWS_AS(harmonic_radial(Annulus(1, 2), Annulus(1, 1.2)), RegimeError);
    CHECK_THROWS_AS(beyond_nitsche_profile(Annulus(1, 2), Annulus(1, 3)), RegimeError);
}

TEST_CASE("characteristic constant") {
    const auto cc = characteristic_constant(harmonic_radial(Annulus(1, 2), Annulus(1, 3)));
    CHECK(cc.c == doctest::Approx(-40.0 / 9.0).epsilon(1e-13));  // 1 - (7/3)^2
    CHECK(cc.max_deviation <= 1e-9);

    const auto id = characteristic_constant(harmonic_radial(Annulus(1, 2), Annulus(1, 2)));
    CHECK(id.c == doctest::Approx(0.0).epsilon(1e-14));

    // sign of c tracks the regime
    CHECK(characteristic_constant(harmonic_radial(Annulus(1, 3), Annulus(1, 2))).c > 0.0);

    CHECK_THROWS_AS(
        characteristic_constant(RadialProfile::make_power_stretch(2.0, 1.0, 2.0)),
        DomainError);
}

TEST_CASE("elasticity") {
    const RadialProfile p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    CHECK(elasticity(p, 1.0) == doctest::Approx(7.0 / 3.0).epsilon(1e-13));
    const RadialProfile id = harmonic_radial(Annulus(1, 2), Annulus(1, 2));
    CHECK(elasticity(id, 1.37) == doctest::Approx(1.0).epsilon(1e-13));
    const RadialProfile ps = RadialProfile::make_power_stretch(2.0, 1.0, 4.0);
    CHECK(elasticity(ps, 3.1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(elasticity(p, 5.0), DomainError);
}

TEST_CASE("beyond-Nitsche profile A(1,4)->A(1,1.25)") {
    const RadialProfile p = beyond_nitsche_profile(Annulus(1, 4), Annulus(1, 1.25));
    CHECK(p.rho() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(p.value(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.value(1.7) == doctest::Approx(1.0).epsilon(1e-14));  // plateau
    CHECK(p.value(4.0) == doctest::Approx(1.25).epsilon(1e-13));
    // C^1 matching at rho: both one-sided derivatives vanish
    CHECK(std::abs(p.derivative(2.0)) <= 1e-12);
    CHECK(characteristic_constant(p).c == doctest::Approx(1.0).epsilon(1e-12));  // r*^2
}

TEST_CASE("beyond-Nitsche rho limit") {
    // R*/r* -> 1+ pushes rho toward R
    const RadialProfile p = beyond_nitsche_profile(Annulus(1, 4), Annulus(1, 1.0001));
    CHECK(p.rho() > 3.9);
    CHECK(p.rho() < 4.0);
}

TEST_CASE("inverse profile") {
    const RadialProfile p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const InverseProfile ip = inverse_profile(p);
    CHECK(ip.value(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ip.value(3.0) == doctest::Approx(2.0).epsilon(1e-12));
    // closed form F(tau) = (tau + sqrt(tau^2 + 40/9)) / (10/3)
    for (double tau : {1.0, 1.5, 2.2, 3.0}) {
        const double f = (tau + std::sqrt(tau * tau + 40.0 / 9.0)) / (10.0 / 3.0);
        CHECK(ip.value(tau) == doctest::Approx(f).epsilon(1e-13));
    }
    // round trip
    for (double t = 1.0; t <= 2.0; t += 0.1)
        CHECK(ip.value(p.value(t)) == doctest::Approx(t).epsilon(1e-10));

    const RadialProfile beyond = beyond_nitsche_profile(Annulus(1, 4), Annulus(1, 1.25));
    CHECK_THROWS_AS(inverse_profile(beyond), NotInvertibleError);
}

TEST_CASE("expanding coefficients") {
    const RadialProfile p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const InverseProfile ip = inverse_profile(p);
    const double c = characteristic_constant(p).c;

    // closed form for p(1) from the displayed formula
    const double s = std::sqrt(1.0 - c);
    const double p_closed = (s + 1.0) / (s + 1.0 - c);
    CHECK(expanding_coefficients(ip, 1.0, 1.0).p ==
          doctest::Approx(p_closed).epsilon(1e-12));

    for (double t = 1.0; t <= 2.0; t += 0.25) {
        const double tau = p.value(t);
        const auto [pv, Av] = expanding_coefficients(ip, t, tau);
        CHECK(pv > 0.0);
        CHECK(pv < 1.0);
        CHECK((1.0 - pv * pv) * Av * Av ==
              doctest::Approx(-c / (t * t)).epsilon(1e-10));
        // finite-difference cross-check of p = tau F'/F
        const double h = 1e-6;
        const double fd = (ip.value(tau + h) - ip.value(tau - h)) / (2.0 * h);
        CHECK(pv == doctest::Approx(tau * fd / ip.value(tau)).epsilon(1e-7));
    }

    const InverseProfile contracting =
        inverse_profile(harmonic_radial(Annulus(1, 3), Annulus(1, 2)));
    CHECK_THROWS_AS(expanding_coefficients(contracting, 1.0, 1.0), RegimeError);
}

TEST_CASE("contracting coefficients") {
    const RadialProfile p = harmonic_radial(Annulus(1, 3), Annulus(1, 2));
    const InverseProfile ip = inverse_profile(p);
    const double c = characteristic_constant(p).c;
    REQUIRE(c > 0.0);

    for (double t = 1.0; t <= 3.0; t += 0.4) {
        const double tau = p.value(t);
        const auto [qv, Bv] = contracting_coefficients(ip, t, tau);
        CHECK(qv < 1.0);
        CHECK(qv * qv == doctest::Approx(1.0 - c / (tau * tau)).epsilon(1e-10));
        CHECK(tau * tau * (1.0 - qv * qv) == doctest::Approx(c).epsilon(1e-10));
        const double lhs = Bv * tau * (1.0 - qv * qv);
        const double H = p.value(t), Hd = p.derivative(t);
        CHECK(lhs == doctest::Approx(H * H / t - t * Hd * Hd).epsilon(1e-9));
    }

    const InverseProfile expanding =
        inverse_profile(harmonic_radial(Annulus(1, 2), Annulus(1, 3)));
    CHECK_THROWS_AS(contracting_coefficients(expanding, 1.0, 1.0), RegimeError);
}

TEST_CASE("radial Dirichlet energy") {
    // identity on A(1,2): |Dh|^2 = 2, area 3 pi
    const auto id = radial_dirichlet_energy(harmonic_radial(Annulus(1, 2), Annulus(1, 2)));
    CHECK(id.quadrature == doctest::Approx(6.0 * M_PI).epsilon(1e-12));
    CHECK(id.closed_form == doctest::Approx(6.0 * M_PI).epsilon(1e-12));

    const auto ps = radial_dirichlet_energy(RadialProfile::make_power_stretch(1.0, 1.0, 2.0));
    CHECK(ps.closed_form == doctest::Approx(6.0 * M_PI).epsilon(1e-12));

    for (auto [dom, tgt] : {std::pair{Annulus(1, 2), Annulus(1, 3)},
                            std::pair{Annulus(1, 3), Annulus(1, 2)},
                            std::pair{Annulus(1, 2), Annulus(2, 2.5)}}) {
        const auto e = radial_dirichlet_energy(harmonic_radial(dom, tgt));
        CHECK(e.quadrature == doctest::Approx(e.closed_form).epsilon(1e-10));
    }

    const auto beyond =
        radial_dirichlet_energy(beyond_nitsche_profile(Annulus(1, 4), Annulus(1, 1.25)));
    CHECK(beyond.quadrature == doctest::Approx(beyond.closed_form).epsilon(1e-10));
}

TEST_CASE("pinned regression: A(1,2)->A(1,3) energy") {
    // independent antiderivative: 2 pi [a^2 (R^2 - r^2) + b^2 (1/r^2 - 1/R^2)]
    const double a = 5.0 / 3.0, b = -2.0 / 3.0;
    const double expected = 2.0 * M_PI * (a * a * 3.0 + b * b * 0.75);
    const auto e = radial_dirichlet_energy(harmonic_radial(Annulus(1, 2), Annulus(1, 3)));
    CHECK(e.closed_form == doctest::Approx(expected).epsilon(1e-13));
    CHECK(e.quadrature == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("power stretch extremal") {
    const auto eq = power_stretch_extremal(Annulus(1, 2), Annulus(3, 6));
    CHECK(eq.profile.alpha() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eq.k_linear == doctest::Approx(1.0));
    CHECK(eq.k_distortion == doctest::Approx(1.0));

    const auto dbl = power_stretch_extremal(Annulus(1, 2), Annulus(1, 4));
    CHECK(dbl.profile.alpha() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(dbl.k_linear == doctest::Approx(2.0));
    CHECK(dbl.k_distortion == doctest::Approx(1.25));

    const auto half = power_stretch_extremal(Annulus(1, 4), Annulus(1, 2));
    CHECK(half.k_linear == doctest::Approx(dbl.k_linear).epsilon(1e-13));
}

TEST_CASE("profile invariants across constructed pairs") {
    const std::pair<Annulus, Annulus> pairs[] = {
        {Annulus(1, 2), Annulus(1, 3)},   {Annulus(1, 3), Annulus(1, 2)},
        {Annulus(1, 2), Annulus(1, 2)},   {Annulus(1, 2), Annulus(2, 2.5)},
        {Annulus(2, 10), Annulus(1, 9)},
    };
    for (const auto& [dom, tgt] : pairs) {
        const RadialProfile p = harmonic_radial(dom, tgt);
        const Annulus nd = dom.normalized(), nt = tgt.normalized();
        CHECK(std::abs(p.value(nd.r_inner()) - nt.r_inner()) <= 1e-12 * nt.r_outer());
        CHECK(std::abs(p.value(nd.r_outer()) - nt.r_outer()) <= 1e-12 * nt.r_outer());
        for (int k = 0; k <= 100; ++k) {
            const double t = nd.r_inner() + (nd.r_outer() - nd.r_inner()) * k / 100.0;
            CHECK(p.derivative(t) >= -1e-12);
        }
    }
}
