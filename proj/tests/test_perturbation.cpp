#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "schwlab/curvature.hpp"
#include "schwlab/errors.hpp"
#include "schwlab/perturbation.hpp"
#include "schwlab/ricci_integral.hpp"

using namespace schwlab;

TEST_CASE("piecewise bump values")
{
    const double m = 1.0;
    CHECK(example44_E(m, 6.0 * m) == doctest::Approx(m * m / 256.0).epsilon(1e-15));
    CHECK(example44_E(m, 3.0 * m) == 0.0);
    CHECK(example44_E(m, 4.0 * m) == doctest::Approx(-m * m / 256.0).epsilon(1e-15));
    CHECK(example44_E(m, 5.0 * m) == 0.0);
    CHECK(example44_E(m, 2.5 * m) == 0.0);
    CHECK(example44_E(m, 100.0 * m) == doctest::Approx(m * m / 256.0).epsilon(1e-15));
}

TEST_CASE("mollified bump: equality away from breakpoints, C^1 regularity")
{
    const double m = 2.0;
    const double w = m / 100.0;
    // identical to the piecewise function outside the smoothing neighborhoods
    for (double u : {2.0 * m, 2.9 * m, 3.5 * m, 4.5 * m, 5.5 * m, 7.0 * m, 50.0 * m}) {
        CHECK(example44_E_smoothed(m, w, u) == example44_E(m, u));
    }
    // derivative matches a centered difference across the whole range
    for (int i = 0; i <= 2000; ++i) {
        const double u = 2.0 * m + (6.0 * m) * i / 2000.0;
        const double h = 1e-6 * m;
        const double fd =
            (example44_E_smoothed(m, w, u + h) - example44_E_smoothed(m, w, u - h)) / (2.0 * h);
        CHECK(std::abs(example44_E_smoothed_derivative(m, w, u) - fd) < 1e-8 * m);
    }
    // derivative is continuous through the smoothing windows (no jump residue)
    for (double b : {3.0 * m, 4.0 * m, 6.0 * m}) {
        const double inner = example44_E_smoothed_derivative(m, w, b - w);
        const double outer = example44_E_smoothed_derivative(m, w, b - w * (1.0 - 1e-9));
        CHECK(std::abs(inner - outer) < 1e-9 * m);
    }
}

TEST_CASE("mixed-sign profile function")
{
    const double m = 1.0;
    const auto pf = example44_profile(m, m / 100.0);
    CHECK(pf.C_f == 2.0 * m);
    CHECK(pf.f(2.0 * m) == 0.0);
    for (int i = 1; i <= 200; ++i) {
        const double u = 2.0 * m * std::pow(100.0, i / 200.0);
        CHECK(pf.f(u) > 0.0);
    }
    CHECK_THROWS_AS(example44_profile(m, 0.3 * m), std::invalid_argument);
    CHECK_THROWS_AS(example44_profile(m, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(example44_profile(-1.0, 0.001), std::invalid_argument);
}

TEST_CASE("integrability screen")
{
    const double m = 1.0;
    CHECK(check_integrability(schwarzschild_profile_function({3, m, 1})).integrable);
    CHECK(check_integrability(example44_profile(m, m / 100.0)).integrable);

    // f vanishing linearly at C makes 1/(u f) non-integrable
    ProfileFunction linear;
    linear.C_f = 2.0;
    linear.f = [](double u) { return (u - 2.0) / u; };
    linear.df = [](double u) { return 2.0 / (u * u); };
    CHECK_FALSE(check_integrability(linear).integrable);
    CHECK_THROWS_AS(build_metric_from_f(linear, 0.5, 3), profile_error);

    ProfileFunction quadratic;
    quadratic.C_f = 2.0;
    quadratic.f = [](double u) { return (u - 2.0) * (u - 2.0); };
    quadratic.df = [](double u) { return 2.0 * (u - 2.0); };
    CHECK_FALSE(check_integrability(quadratic).integrable);
}

TEST_CASE("metric construction recovers the exact profile it came from")
{
    for (SchwarzschildParams p : {SchwarzschildParams{3, 2.0, 1}, SchwarzschildParams{5, 1.0, 1}}) {
        const auto exact = schwarzschild_profile(p);
        const auto built = build_metric_from_f(schwarzschild_profile_function(p),
                                               p.horizon_radius(), p.n);
        CHECK(built.horizon_radius() == p.horizon_radius());
        CHECK(built.areal_horizon() == doctest::Approx(p.areal_horizon()).epsilon(1e-15));
        double max_err = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double r = p.horizon_radius() * std::pow(100.0, i / 200.0);
            max_err = std::max(max_err, std::abs(built.phi(r) - exact.phi(r)));
        }
        CHECK(max_err < 1e-8);
    }
}

TEST_CASE("built metric satisfies the structural conditions")
{
    const double m = 1.0;
    const auto built = build_metric_from_f(example44_profile(m, m / 100.0), 0.5 * m, 3);
    const auto val = validate_profile(built);
    CHECK(val.max_condition_a_residual < 1e-9);
    CHECK(val.min_condition_b_value > 0.0);
    CHECK(val.max_dphi_fd_error < 1e-6);
    CHECK(val.max_d2phi_fd_error < 1e-5);

    // du/dr = e^phi f, checked by centered differences of the forward map
    for (double r : {0.52 * m, 0.8 * m, 2.0 * m, 20.0 * m}) {
        const double h = 1e-6 * r;
        const double fd = (built.u_of_r(r + h) - built.u_of_r(r - h)) / (2.0 * h);
        const double expected =
            std::exp(built.phi(r)) * built.f_of_u(built.u_of_r(r));
        CHECK(std::abs(fd - expected) < 1e-6 * std::abs(expected));
    }

    // profile roundtrip: the built metric's f equals the seed f
    const auto pf = example44_profile(m, m / 100.0);
    for (int i = 0; i <= 100; ++i) {
        const double u = 2.0 * m * std::pow(1e3, i / 100.0);
        CHECK(std::abs(built.f_of_u(u) - pf.f(u)) < 1e-8);
    }
}

TEST_CASE("perturbation margins: exact profile passes with zero budget")
{
    SchwarzschildParams p{3, 1.0, 1};
    const auto prof = schwarzschild_profile(p);
    PerturbationBudget zero{0.0, 0.0, p.n, p.m};
    Theorem42Grid grid;
    grid.u0_samples = {2.5, 5.0, 20.0};
    const auto rep = check_theorem42(prof, p, zero, grid);
    CHECK(rep.passed);
    CHECK(rep.cond41_margin_deriv == 0.0); // both sides are the same closed form
    CHECK(rep.cond41_margin_B == 0.0);
    for (const auto& [u0, value] : rep.R_samples) {
        (void)u0;
        CHECK(value < 0.0);
    }
}

TEST_CASE("perturbation margins: mixed-sign example with the canonical budget")
{
    const double m = 1.0;
    SchwarzschildParams ref{3, m, 1};
    const auto built = build_metric_from_f(example44_profile(m, m / 100.0), 0.5 * m, 3);
    PerturbationBudget budget{m * m / 16.0, m * m / 16.0, 3, m};
    CHECK(budget.cond42_lhs() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(budget.cond42_rhs() == doctest::Approx(1.0).epsilon(1e-15));

    Theorem42Grid grid;
    for (double mult : {1.01, 1.5, 2.0, 3.0, 5.0, 10.0, 25.0})
        grid.u0_samples.push_back(mult * 2.0 * m);
    const auto rep = check_theorem42(built, ref, budget, grid);
    CHECK(rep.passed);
    CHECK(rep.cond41_margin_deriv >= 0.0);
    CHECK(rep.cond41_margin_B >= 0.0);
    // soundness: a passing report must come with strictly negative R samples
    for (const auto& [u0, value] : rep.R_samples) {
        (void)u0;
        CHECK(value < 0.0);
    }
}

TEST_CASE("perturbation margins: oversized budget fails the quadratic condition")
{
    SchwarzschildParams p{3, 1.0, 1};
    const auto prof = schwarzschild_profile(p);
    PerturbationBudget big{p.m * p.m, 0.0, p.n, p.m}; // 5a = 5m^2 >= m^2
    Theorem42Grid grid;
    const auto rep = check_theorem42(prof, p, big, grid);
    CHECK_FALSE(rep.passed);
    CHECK(rep.cond42_lhs >= rep.cond42_rhs);
}

TEST_CASE("perturbation hypothesis: reference horizon above the profile's")
{
    SchwarzschildParams small{3, 1.0, 1}; // C_phi = 2
    const auto prof = schwarzschild_profile(small);
    SchwarzschildParams big_ref{3, 2.0, 1}; // (2m)^{1/(n-2)} = 4 > 2
    PerturbationBudget budget{0.0, 0.0, 3, 2.0};
    Theorem42Grid grid;
    CHECK_THROWS_AS(check_theorem42(prof, big_ref, budget, grid), std::domain_error);
}

TEST_CASE("scalar sign scan: flat profile all zero, mixed-sign example shows both signs")
{
    SchwarzschildParams p{3, 1.0, 1};
    const auto exact = schwarzschild_profile(p);
    for (const auto& s : scalar_sign_scan(exact, 2.0, 2000.0, 256))
        CHECK(s.sign == 0);

    const double m = 1.0;
    const auto built = build_metric_from_f(example44_profile(m, m / 100.0), 0.5 * m, 3);
    // negative samples appear inside (3m, 4m): the sign flips within the
    // smoothing window just below 4m, where the bump slope turns positive
    int negatives = 0;
    for (const auto& s : scalar_sign_scan(built, 3.0 * m, 4.0 * m, 4096))
        if (s.sign < 0)
            ++negatives;
    CHECK(negatives >= 1);
    CHECK(scalar_curvature_u_form(built, 4.5 * m) < 0.0);
    CHECK(scalar_curvature_u_form(built, 3.2 * m) > 0.0);
    // positive far out
    for (const auto& s : scalar_sign_scan(built, 20.0 * m, 60.0 * m, 128))
        CHECK(s.value > 0.0);

    // diagnostic cross-check of the u-form through the r-route trace formula
    for (double u : {3.5 * m, 4.5 * m, 10.0 * m}) {
        const double r = built.r_of_u(u);
        const double via_r = scalar_curvature_diagnostic(built, r);
        const double via_u = scalar_curvature_u_form(built, u);
        CHECK(std::abs(via_r - via_u) < 1e-8 * std::max(std::abs(via_u), 1e-6));
    }
}

TEST_CASE("generalized profiles keep the integral negative")
{
    for (SchwarzschildParams p : {SchwarzschildParams{5, 1.0, 2}, SchwarzschildParams{5, 2.0, 2},
                                  SchwarzschildParams{7, 1.0, 3}, SchwarzschildParams{7, 2.0, 3}}) {
        const auto prof = schwarzschild_profile(p);
        const double C = p.areal_horizon();
        for (int i = 0; i <= 12; ++i) {
            const double u0 = 1.05 * C * std::pow(100.0, i / 12.0);
            CHECK(R_functional(prof, u0, 1e-10).value < 0.0);
        }
        // cross-check one point against the geodesic route
        const double u0 = 1.5 * C;
        const double direct =
            ricci_integral_direct(p, prof.r_of_u(u0), std::numeric_limits<double>::infinity(),
                                  1e-9)
                .value;
        const double rfun = R_functional(prof, u0, 1e-10).value;
        CHECK(std::abs(direct - rfun) < 1e-3 * std::abs(rfun));
    }
}

TEST_CASE("tabulated profiles roundtrip through the text format")
{
    SchwarzschildParams p{3, 2.0, 1};
    const auto pf = schwarzschild_profile_function(p);
    const double C = pf.C_f;

    const std::string path = "schwlab_test_profile.txt";
    {
        std::ofstream f(path);
        f << "# u f(u)\n";
        f.precision(17);
        // quadratically graded toward the horizon, where f has the sqrt knee
        const int rows = 4000;
        const double w_max = std::sqrt(1e4 * C - C);
        for (int i = 0; i <= rows; ++i) {
            const double t = static_cast<double>(i) / rows;
            const double w = w_max * t * t;
            const double u = C + w * w;
            f << u << " " << pf.f(u) << "\n";
        }
    }
    const auto loaded = load_profile_table(path);
    CHECK(loaded.C_f == doctest::Approx(C).epsilon(1e-15));
    CHECK(loaded.max_u == doctest::Approx(1e4 * C).epsilon(1e-6));
    for (int i = 1; i <= 60; ++i) {
        const double u = C * std::pow(1e3, i / 60.0);
        CHECK(std::abs(loaded.f(u) - pf.f(u)) < 1e-8);
        CHECK(std::abs(loaded.df(u) - pf.df(u)) < 1e-5 * std::max(1.0, std::abs(pf.df(u))));
    }
    CHECK_THROWS_AS(loaded.f(2e4 * C), std::domain_error);

    const auto built = build_metric_from_f(loaded, p.horizon_radius(), 3);
    const auto exact = schwarzschild_profile(p);
    for (int i = 0; i <= 40; ++i) {
        const double r = p.horizon_radius() * std::pow(50.0, i / 40.0);
        CHECK(std::abs(built.phi(r) - exact.phi(r)) < 1e-7);
    }
    std::remove(path.c_str());

    // malformed tables are rejected
    CHECK_THROWS(profile_function_from_table({2.0, 3.0, 4.0}, {0.0, 0.5, 0.7}));
    CHECK_THROWS_AS(profile_function_from_table({2.0, 3.0, 2.5, 4.0}, {0.0, 0.5, 0.6, 0.7}),
                    std::invalid_argument);
    CHECK_THROWS_AS(profile_function_from_table({2.0, 3.0, 3.5, 4.0}, {0.5, 0.6, 0.7, 0.8}),
                    profile_error);
}
