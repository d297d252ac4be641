#include <doctest.h>

#include <cmath>

#include "lrp/cumulant.hpp"
#include "oracles.hpp"

using namespace lrp;

TEST_CASE("cumulants from moments") {
    const CumulantVector gauss = cumulants_from_moments({1.0, 3.0, 15.0});
    CHECK(gauss.K2 == 1.0);
    CHECK(gauss.K4 == 0.0);
    CHECK(gauss.K6 == 0.0);

    const CumulantVector rad = cumulants_from_moments({1.0, 1.0, 1.0});
    CHECK(rad.K2 == 1.0);
    CHECK(rad.K4 == -2.0);
    CHECK(rad.K6 == 16.0);

    // uniform(−√3, √3) against the log-MGF series oracle
    const MomentVector unif{1.0, 9.0 / 5.0, 27.0 / 7.0};
    const CumulantVector mine = cumulants_from_moments(unif);
    const oracle::SeriesCumulants reference = oracle::logmgf_cumulants(1.0, 9.0 / 5.0, 27.0 / 7.0);
    CHECK(mine.K2 == doctest::Approx(reference.K2).epsilon(1e-14));
    CHECK(mine.K4 == doctest::Approx(reference.K4).epsilon(1e-14));
    CHECK(mine.K6 == doctest::Approx(reference.K6).epsilon(1e-14));
    CHECK(mine.K4 == doctest::Approx(-6.0 / 5.0).epsilon(1e-14));
    CHECK(mine.K6 == doctest::Approx(48.0 / 7.0).epsilon(1e-13));
}

TEST_CASE("moment vector invariants") {
    CHECK_THROWS_AS(cumulants_from_moments({-1.0, 3.0, 15.0}), CumulantError);
    CHECK_THROWS_AS(cumulants_from_moments({0.0, 3.0, 15.0}), CumulantError);
    CHECK_THROWS_AS(cumulants_from_moments({1.0, 0.5, 15.0}), CumulantError);   // mu4 < mu2²
    CHECK_THROWS_AS(cumulants_from_moments({1.0, 3.0, 2.0}), CumulantError);    // mu6 < mu4·mu2
}

TEST_CASE("law moments") {
    CHECK(law_abs_moment(SymmetricLaw::gaussian, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(law_abs_moment(SymmetricLaw::gaussian, 3) ==
          doctest::Approx(2.0 * std::sqrt(2.0 / M_PI)).epsilon(1e-14));
    CHECK(law_abs_moment(SymmetricLaw::gaussian, 4) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(law_abs_moment(SymmetricLaw::rademacher, 7) == 1.0);
    CHECK(law_abs_moment(SymmetricLaw::uniform, 4) == doctest::Approx(9.0 / 5.0).epsilon(1e-14));
    CHECK(law_abs_moment(SymmetricLaw::uniform, 3) ==
          doctest::Approx(std::pow(3.0, 1.5) / 4.0).epsilon(1e-14));
}

TEST_CASE("spec'd expansion examples") {
    const TestFunction cube = TestFunction::polynomial({0.0, 0.0, 0.0, 1.0});

    SUBCASE("gaussian, F = x^3, q = 1: Stein identity is exact") {
        const ExpansionCheck check = expansion_check(SymmetricLaw::gaussian, cube, 1);
        CHECK(check.lhs.real() == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(check.rhs.real() == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(check.gap < 1e-9);
    }
    SUBCASE("rademacher, F = x^3, q = 3: exact via K4") {
        const ExpansionCheck check = expansion_check(SymmetricLaw::rademacher, cube, 3);
        CHECK(check.lhs.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(check.rhs.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(check.gap < 1e-13);
    }
    SUBCASE("rademacher, F = x^3, q = 1: gap 2 within bound 6") {
        const ExpansionCheck check = expansion_check(SymmetricLaw::rademacher, cube, 1);
        CHECK(check.lhs.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(check.rhs.real() == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(check.gap == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(check.bound == doctest::Approx(6.0).epsilon(1e-13));
        CHECK(check.within_bound);
    }
}

TEST_CASE("gaussian q=1 exactness across the function library") {
    for (const TestFunction& f : standard_test_functions()) {
        const ExpansionCheck check = expansion_check(SymmetricLaw::gaussian, f, 1);
        INFO("F = ", f.name());
        CHECK(check.gap < 1e-9);
    }
}

TEST_CASE("polynomial exactness at q >= degree") {
    const std::vector<TestFunction> polys{
        TestFunction::polynomial({0.0, 1.0}),
        TestFunction::polynomial({1.0, 0.0, 2.0}),
        TestFunction::polynomial({0.0, 0.0, 0.0, 1.0}),
        TestFunction::polynomial({1.0, -2.0, 0.0, 0.0, 1.0}),
        TestFunction::polynomial({0.0, 3.0, 0.0, -1.0, 0.0, 0.5}),
    };
    for (SymmetricLaw law :
         {SymmetricLaw::gaussian, SymmetricLaw::rademacher, SymmetricLaw::uniform}) {
        for (const TestFunction& f : polys) {
            const ExpansionCheck check = expansion_check(law, f, 5);
            INFO(to_string(law), " F = ", f.name());
            CHECK(check.gap < 1e-9);
        }
    }
}

TEST_CASE("bound respected across the full (law, F, q) table") {
    for (SymmetricLaw law :
         {SymmetricLaw::gaussian, SymmetricLaw::rademacher, SymmetricLaw::uniform}) {
        for (const TestFunction& f : standard_test_functions()) {
            for (int q : {1, 3, 5}) {
                const ExpansionCheck check = expansion_check(law, f, q);
                INFO(to_string(law), " F = ", f.name(), " q = ", q);
                CHECK(check.within_bound);
            }
        }
    }
}

TEST_CASE("ensemble entry cumulant scaling") {
    // H(p,i) = a·d/√b has moments μ₂ = v²ψ(1+δ)/b, μ₄ = V₄ψ(1+δ)²/b²,
    // μ₆ = V₆ψ(1+δ)³/b³; its cumulants must reproduce the scaled forms
    // K₂ = (v²/b)ψ(1+δ) and K₄ = (V₄ψ − 3v⁴ψ²)(1+δ)²/b².
    const double v2 = 1.0, V4 = 3.0, V6 = 15.0;  // gaussian entries, v = 1
    for (double psi : {1.0, 0.7, 0.23}) {
        for (double delta : {0.0, 1.0}) {
            for (double b : {5.0, 80.0}) {
                const double f = 1.0 + delta;
                const MomentVector m{v2 * psi * f / b, V4 * psi * f * f / (b * b),
                                     V6 * psi * f * f * f / (b * b * b)};
                const CumulantVector k = cumulants_from_moments(m);
                CHECK(k.K2 == doctest::Approx(v2 / b * psi * f).epsilon(1e-12));
                const double expected_k4 =
                    (V4 * psi - 3.0 * v2 * v2 * psi * psi) * f * f / (b * b);
                CHECK(k.K4 == doctest::Approx(expected_k4).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("test function derivative bookkeeping") {
    const TestFunction poly = TestFunction::polynomial({1.0, -2.0, 0.0, 0.0, 1.0});  // x⁴−2x+1
    CHECK(poly.derivative(2.0, 0).real() == doctest::Approx(13.0));
    CHECK(poly.derivative(2.0, 1).real() == doctest::Approx(30.0));   // 4x³−2
    CHECK(poly.derivative(2.0, 4).real() == doctest::Approx(24.0));   // 4!
    CHECK(poly.derivative(2.0, 5).real() == 0.0);
    CHECK(poly.sup_abs_derivative(1, 1.0) == doctest::Approx(6.0));   // 4·1³+2

    const TestFunction sine = TestFunction::sine();
    CHECK(sine.derivative(0.3, 1).real() == doctest::Approx(std::cos(0.3)));
    CHECK(sine.derivative(0.3, 2).real() == doctest::Approx(-std::sin(0.3)));
    CHECK(sine.sup_abs_derivative(2, 1.0) == doctest::Approx(std::sin(1.0)));
    CHECK(sine.sup_abs_derivative(1, 1.0) == 1.0);

    const TestFunction cis = TestFunction::cis();
    const auto d3 = cis.derivative(0.5, 3);
    CHECK(std::abs(d3 - std::complex<double>(std::sin(0.5), -std::cos(0.5))) < 1e-14);
    CHECK(cis.sup_abs_derivative(6, 100.0) == 1.0);

    CHECK_THROWS_AS(expansion_check(SymmetricLaw::gaussian, cis, 2), CumulantError);
    CHECK_THROWS_AS(TestFunction::polynomial({}), CumulantError);
}
