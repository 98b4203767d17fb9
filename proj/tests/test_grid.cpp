#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "extann/errors.hpp"
#include "extann/grid.hpp"

using namespace extann;

namespace {

PolarGridMap identity_map(int n_t, int n_theta, double R = 2.0) {
    return sample_radial(harmonic_radial(Annulus(1, R), Annulus(1, R)), Annulus(1, R),
                         n_t, n_theta);
}

}  // namespace

TEST_CASE("sample_radial boundary and values") {
    const auto m = identity_map(33, 32);
    for (int j = 0; j < m.n_theta; ++j) {
        CHECK(std::abs(m.at(0, j)) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::abs(m.at(m.n_t - 1, j)) == doctest::Approx(2.0).epsilon(1e-13));
    }
    const cplx v = m.at(5, 7);
    const cplx expect = std::polar(m.t(5), m.theta(7));
    CHECK(std::abs(v - expect) <= 1e-13);
    CHECK(check_admissible(m).admissible());
}

TEST_CASE("polar derivatives on the identity map") {
    const auto m = identity_map(129, 64);
    for (int i : {0, 1, 64, 127, 128})
        for (int j : {0, 17, 63}) {
            const auto d = polar_derivatives(m, i, j);
            const cplx e = std::polar(1.0, m.theta(j));
            CHECK(std::abs(d.h_N - e) <= 2e-4);
            CHECK(std::abs(d.h_T - cplx(0, 1) * e) <= 2e-4);
        }
}

TEST_CASE("derivatives match the closed-form profile") {
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const auto m = sample_radial(p, Annulus(1, 3), 257, 64);
    for (int i : {1, 80, 200, 255})
        for (int j : {3, 40}) {
            const auto d = polar_derivatives(m, i, j);
            const double t = m.t(i);
            CHECK(std::abs(d.h_N) == doctest::Approx(p.derivative(t)).epsilon(1e-5));
            CHECK(std::abs(d.h_T) == doctest::Approx(p.value(t) / t).epsilon(1e-5));
        }
}

TEST_CASE("rotation equivariance of derivatives and invariance of energy") {
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const auto m = sample_radial(p, Annulus(1, 3), 65, 64);
    PolarGridMap rot = m;
    const cplx phase = std::polar(1.0, 0.7);
    for (auto& v : rot.values) v *= phase;
    const auto d0 = polar_derivatives(m, 20, 5);
    const auto d1 = polar_derivatives(rot, 20, 5);
    CHECK(std::abs(d1.h_N - phase * d0.h_N) <= 1e-13);
    CHECK(std::abs(d1.h_T - phase * d0.h_T) <= 1e-13);
    CHECK(dirichlet_energy(rot) ==
          doctest::Approx(dirichlet_energy(m)).epsilon(1e-10));
}

TEST_CASE("distortion values") {
    const auto id = identity_map(65, 64);
    CHECK(distortion_at(id, 30, 10) == doctest::Approx(1.0).epsilon(1e-8));

    const auto ps = sample_radial(RadialProfile::make_power_stretch(2.0, 1.0, 2.0),
                                  Annulus(1, 4), 257, 256);
    CHECK(distortion_at(ps, 128, 17) == doctest::Approx(1.25).epsilon(1e-4));
    CHECK(distortion_at(ps, 3, 0) == doctest::Approx(1.25).epsilon(1e-4));
}

TEST_CASE("distortion equals the singular-value form") {
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const auto m = sample_radial(p, Annulus(1, 3), 65, 64);
    for (int i : {1, 20, 40, 63})
        for (int j : {0, 9, 33}) {
            const auto d = polar_derivatives(m, i, j);
            // singular values of the real 2x2 derivative with columns h_N, h_T
            const double n2 = std::norm(d.h_N) + std::norm(d.h_T);
            const double det = std::imag(std::conj(d.h_N) * d.h_T);
            const double disc = std::sqrt(std::max(0.0, n2 * n2 - 4.0 * det * det));
            const double smax = std::sqrt((n2 + disc) / 2.0);
            const double smin = std::sqrt((n2 - disc) / 2.0);
            const double K = smax / smin;
            CHECK(distortion_at(m, i, j) ==
                  doctest::Approx(0.5 * (K + 1.0 / K)).epsilon(1e-8));
            CHECK(distortion_at(m, i, j) >= 1.0 - 1e-12);
        }
}

TEST_CASE("dirichlet energy of the identity") {
    const auto m = identity_map(257, 256);
    CHECK(dirichlet_energy(m) == doctest::Approx(6.0 * M_PI).epsilon(1e-5));
}

TEST_CASE("grid convergence order >= 1.8") {
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const double exact = radial_dirichlet_energy(p).closed_form;
    const double e64 =
        dirichlet_energy(sample_radial(p, Annulus(1, 3), 65, 64));
    const double e256 =
        dirichlet_energy(sample_radial(p, Annulus(1, 3), 257, 256));
    const double order = std::log(std::abs(e64 - exact) / std::abs(e256 - exact)) /
                         std::log(4.0);
    CHECK(order >= 1.8);
}

TEST_CASE("phi distortion energy") {
    // identity, phi(t)=t, weight 1: K == 1, integral = area of the domain
    const auto id = identity_map(129, 128);
    const double area = phi_distortion_energy(
        id, [](double t) { return t; }, [](const cplx&) { return 1.0; });
    CHECK(area == doctest::Approx(3.0 * M_PI).epsilon(1e-6));

    // power stretch alpha=2 on A(1,2), phi(t)=t^2: 1.5625 * domain area
    const auto ps = sample_radial(RadialProfile::make_power_stretch(2.0, 1.0, 2.0),
                                  Annulus(1, 4), 257, 256);
    const double e = phi_distortion_energy(
        ps, [](double t) { return t * t; }, [](const cplx&) { return 1.0; });
    CHECK(e == doctest::Approx(1.5625 * 3.0 * M_PI).epsilon(1e-4));
}

TEST_CASE("inverse-distortion identity") {
    // Dirichlet energy of h equals the K+1/K integral of h^{-1} over the target
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const auto ip = inverse_profile(p);
    const int n = 257, nth = 256;
    PolarGridMap inv(Annulus(1, 3), Annulus(1, 2), n, nth);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < nth; ++j)
            inv.at(i, j) = std::polar(ip.value(inv.t(i)), inv.theta(j));
    const double lhs = phi_distortion_energy(
        inv, [](double t) { return t; }, [](const cplx&) { return 1.0; },
        DistortionConvention::TraceOverJac);
    const double rhs = radial_dirichlet_energy(p).closed_form;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
}

TEST_CASE("free Lagrangians on radial map and perturbations") {
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const auto m = sample_radial(p, Annulus(1, 3), 129, 128);
    const FreeLagrangianSpec f2{FreeLagrangianKind::F2, [](double) { return 1.0; }};
    const FreeLagrangianSpec f3{FreeLagrangianKind::F3, [](double s) { return 1.0 / s; }};
    const FreeLagrangianSpec f4{FreeLagrangianKind::F4, [](double t) { return 1.0 / t; }};

    const auto r2 = free_lagrangian(m, f2);
    CHECK(r2.predicted == doctest::Approx(M_PI * 8.0).epsilon(1e-10));  // target area
    CHECK(r2.value == doctest::Approx(r2.predicted).epsilon(1e-4));

    const auto r3 = free_lagrangian(m, f3);
    CHECK(r3.predicted == doctest::Approx(2.0 * M_PI * std::log(3.0)).epsilon(1e-10));
    CHECK(r3.value == doctest::Approx(r3.predicted).epsilon(1e-4));

    const auto r4 = free_lagrangian(m, f4);
    CHECK(r4.predicted == doctest::Approx(2.0 * M_PI * std::log(2.0)).epsilon(1e-10));
    CHECK(r4.value == doctest::Approx(r4.predicted).epsilon(1e-4));

    for (uint64_t seed = 1; seed <= 20; ++seed) {
        const auto pm = perturb_map(m, 0.01, seed);
        CHECK(free_lagrangian(pm, f3).value == doctest::Approx(r3.predicted).epsilon(1e-4));
        CHECK(free_lagrangian(pm, f4).value == doctest::Approx(r4.predicted).epsilon(1e-4));
    }
}

TEST_CASE("perturbation contract") {
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const auto m = sample_radial(p, Annulus(1, 3), 65, 64);

    const auto zero = perturb_map(m, 0.0, 42);
    for (size_t k = 0; k < m.values.size(); ++k) CHECK(zero.values[k] == m.values[k]);

    const auto a = perturb_map(m, 0.02, 42);
    const auto b = perturb_map(m, 0.02, 42);
    for (size_t k = 0; k < m.values.size(); ++k) CHECK(a.values[k] == b.values[k]);

    const auto c = perturb_map(m, 0.02, 43);
    bool differs = false;
    for (size_t k = 0; k < m.values.size() && !differs; ++k)
        differs = a.values[k] != c.values[k];
    CHECK(differs);

    // boundary rows untouched, energy strictly larger than the minimizer's
    for (int j = 0; j < m.n_theta; ++j) {
        CHECK(a.at(0, j) == m.at(0, j));
        CHECK(a.at(m.n_t - 1, j) == m.at(m.n_t - 1, j));
    }
    CHECK(check_admissible(a).admissible());
    CHECK(dirichlet_energy(a) > dirichlet_energy(m));
}

TEST_CASE("rect perturbation respects edges") {
    std::vector<double> u(33);
    for (int i = 0; i < 33; ++i) u[i] = 2.0 * i / 32.0;
    const auto f = sample_shear(u, 1.0, 2.0, 33);
    const auto g = perturb_map(f, 0.05, 9);
    CHECK(check_admissible(g).admissible());
    bool differs = false;
    for (size_t k = 0; k < f.values.size() && !differs; ++k)
        differs = f.values[k] != g.values[k];
    CHECK(differs);
}

TEST_CASE("minimality certificate on the conformal identity") {
    const auto m = identity_map(65, 64);
    EnergyFunctional fn;
    const auto rep = minimality_certificate(m, fn, 25, 11);
    CHECK(rep.pass);
    CHECK(rep.trials_run > 0);
    CHECK(rep.min_gap >= -rep.budget);
}

TEST_CASE("certificate negative control") {
    // power stretch is the wrong candidate for an expanding Dirichlet pair
    const auto wrong = power_stretch_extremal(Annulus(1, 2), Annulus(1, 3)).profile;
    const auto m = sample_radial(wrong, Annulus(1, 3), 65, 64);
    const double e_wrong = dirichlet_energy(m);
    const double e_right = radial_dirichlet_energy(
        harmonic_radial(Annulus(1, 2), Annulus(1, 3))).closed_form;
    CHECK(e_wrong > e_right * 1.001);
}

TEST_CASE("conformal lower bound") {
    const auto id = identity_map(65, 64);
    const double bound = 2.0 * Annulus(1, 2).area();
    CHECK(dirichlet_energy(id) >= bound - 1e-6 * bound);
    for (uint64_t s = 1; s <= 10; ++s)
        CHECK(dirichlet_energy(perturb_map(id, 0.03, s)) >= bound - 1e-6 * bound);
}

TEST_CASE("plateau maps are monotone limits, not admissible") {
    const auto p = beyond_nitsche_profile(Annulus(1, 4), Annulus(1, 1.25));
    const auto m = sample_radial(p, Annulus(1, 1.25), 65, 64);
    const auto rep = check_admissible(m);
    CHECK(rep.boundary_ok);
    CHECK_FALSE(rep.jacobian_positive);
    CHECK_THROWS_AS(distortion_at(m, rep.degenerate_i, rep.degenerate_j), DegenerateCell);
    // energy integrals still work; K integrals skip degenerate cells on request
    CHECK(dirichlet_energy(m) > 0.0);
    const double e = phi_distortion_energy(
        m, [](double t) { return t; }, [](const cplx&) { return 1.0; },
        DistortionConvention::Symmetrized, /*skip_degenerate=*/true);
    CHECK(e > 0.0);
}

TEST_CASE("csv round trip") {
    const auto p = harmonic_radial(Annulus(1, 2), Annulus(1, 3));
    const auto m = sample_radial(p, Annulus(1, 3), 9, 8);
    std::stringstream ss;
    write_grid_csv(ss, m);
    const auto loaded = read_grid_csv(ss);
    REQUIRE(loaded.polar.has_value());
    CHECK(loaded.polar->n_t == 9);
    CHECK(loaded.polar->n_theta == 8);
    for (size_t k = 0; k < m.values.size(); ++k)
        CHECK(loaded.polar->values[k] == m.values[k]);

    std::vector<double> u{0.0, 0.5, 1.2, 2.0};
    const auto f = sample_shear(u, 1.0, 2.0, 5);
    std::stringstream sr;
    write_grid_csv(sr, f);
    const auto lr = read_grid_csv(sr);
    REQUIRE(lr.rect.has_value());
    for (size_t k = 0; k < f.values.size(); ++k)
        CHECK(lr.rect->values[k] == f.values[k]);
}

TEST_CASE("coarsen parity rules") {
    CHECK_NOTHROW(coarsen(identity_map(65, 64)));
    CHECK_THROWS_AS(coarsen(identity_map(64, 64)), GridTooSmall);
    const auto c = coarsen(identity_map(65, 64));
    CHECK(c.n_t == 33);
    CHECK(c.n_theta == 32);
}
