#include <doctest.h>

#include <cmath>
#include <complex>

#include "lrp/montecarlo.hpp"

using namespace lrp;
using Complex = std::complex<double>;

namespace {

EnsembleSpec desk_spec(int n = 100, double b = 20.0) {
    EnsembleSpec spec;
    spec.n = n;
    spec.b = b;
    spec.dist = {EntryKind::gaussian, 1.0};
    spec.profile = Profile::gaussian();
    return spec;
}

}  // namespace

TEST_CASE("mean resolvent trace approaches w") {
    const EnsembleSpec spec = desk_spec();
    const McReport report = estimate_resolvent_stats(spec, {{0.0, 4.0}}, 100, 7);
    const StatRow& mean = report.find("mean_g", {0.0, 4.0});
    const Complex w = solve_w(1.0, {0.0, 4.0});
    CHECK(std::abs(mean.value - w) < 0.03);  // O(1/b) + CLT at b=20
    CHECK(mean.stderr_value > 0.0);
    CHECK(report.R == 100);
}

TEST_CASE("stderr scales like R^{-1/2}") {
    const EnsembleSpec spec = desk_spec(60, 12.0);
    const McReport r1 = estimate_resolvent_stats(spec, {{0.0, 4.0}}, 100, 11);
    const McReport r2 = estimate_resolvent_stats(spec, {{0.0, 4.0}}, 200, 11);
    const double ratio = r2.find("mean_g", {0.0, 4.0}).stderr_value /
                         r1.find("mean_g", {0.0, 4.0}).stderr_value;
    // doubling R shrinks stderr by ≈ 1/√2, allow 30% stochastic play
    CHECK(ratio > (1.0 / std::sqrt(2.0)) * 0.7);
    CHECK(ratio < (1.0 / std::sqrt(2.0)) * 1.3);
}

TEST_CASE("bitwise reproducibility across worker counts") {
    const EnsembleSpec spec = desk_spec(50, 10.0);
    const std::vector<Complex> zs{{0.0, 4.0}, {0.5, -5.0}};
    const McReport a = estimate_resolvent_stats(spec, zs, 24, 3, {1});
    const McReport b = estimate_resolvent_stats(spec, zs, 24, 3, {3});
    const McReport c = estimate_resolvent_stats(spec, zs, 24, 3, {8});
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].value == b.rows[i].value);
        CHECK(a.rows[i].stderr_value == b.rows[i].stderr_value);
        CHECK(a.rows[i].value == c.rows[i].value);
        CHECK(a.rows[i].stderr_value == c.rows[i].stderr_value);
    }
}

TEST_CASE("covariance estimator properties") {
    const EnsembleSpec spec = desk_spec(60, 12.0);
    const std::vector<Complex> zs{{0.0, 4.0}, {0.0, -4.0}};
    const McReport report = estimate_resolvent_stats(spec, zs, 120, 5);

    // conjugate pair: covariance is |g|²-like, so real up to noise
    const StatRow& cov = report.find("cov_g", zs[0], zs[1], true);
    CHECK(std::abs(cov.value.imag()) <= 3.0 * cov.stderr_value);
    CHECK(cov.stderr_value > 0.0);

    // duplicated z: pair covariance equals the plain variance bitwise
    const McReport dup = estimate_resolvent_stats(spec, {zs[0], zs[0]}, 60, 5);
    const StatRow& var_row = dup.find("var_g", zs[0]);
    const StatRow& cov_row = dup.find("cov_g", zs[0], zs[0], true);
    CHECK(var_row.value == cov_row.value);
    CHECK(var_row.stderr_value == cov_row.stderr_value);

    // var_g_conj is the real Var{g} of the variance bound
    const StatRow& vc = report.find("var_g_conj", zs[0]);
    CHECK(vc.value.real() > 0.0);
    CHECK(std::abs(vc.value.imag()) < 1e-18);

    // exact symmetry under the (z1, z2) swap
    const McReport swapped = estimate_resolvent_stats(spec, {zs[1], zs[0]}, 120, 5);
    const StatRow& cov_swapped = swapped.find("cov_g", zs[1], zs[0], true);
    CHECK(cov.value == cov_swapped.value);
    CHECK(cov.stderr_value == cov_swapped.stderr_value);
}

TEST_CASE("estimator preconditions") {
    const EnsembleSpec spec = desk_spec(30, 8.0);
    CHECK_THROWS_AS(estimate_resolvent_stats(spec, {{0.0, 4.0}}, 1, 1), McError);
    CHECK_THROWS_AS(estimate_resolvent_stats(spec, {}, 10, 1), McError);
    CHECK_THROWS_AS(estimate_resolvent_stats(spec, {{1.0, 0.0}}, 10, 1), McError);

    // jackknife well-defined at the R = 2 edge: finite, nonnegative stderr
    const McReport tiny = estimate_resolvent_stats(spec, {{0.0, 4.0}, {0.0, -4.0}}, 2, 1);
    for (const StatRow& row : tiny.rows) {
        CHECK(std::isfinite(row.stderr_value));
        CHECK(row.stderr_value >= 0.0);
        CHECK(std::isfinite(row.value.real()));
    }
}

TEST_CASE("density experiment") {
    const EnsembleSpec spec = desk_spec(100, 25.0);
    const DensityReport report = density_experiment(spec, 20, 41, 9);

    // pooled mass accounting is exact
    std::uint64_t total = report.underflow + report.overflow;
    for (std::uint64_t c : report.counts) total += c;
    CHECK(total == 20u * static_cast<std::uint64_t>(spec.N()));

    double mass = report.mass_outside;
    for (std::size_t k = 0; k < report.counts.size(); ++k)
        mass += report.density[k] * (report.edges[k + 1] - report.edges[k]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(report.edges.front() == doctest::Approx(-3.0));
    CHECK(report.edges.back() == doctest::Approx(3.0));
    CHECK(report.l1_distance < 0.15);  // desk-scale finite-size envelope
    CHECK(report.mass_outside < 0.02);

    // deterministic across worker counts
    const DensityReport again = density_experiment(spec, 20, 41, 9, {4});
    CHECK(again.counts == report.counts);
}

TEST_CASE("variance scaling ladder") {
    std::vector<EnsembleSpec> ladder{desk_spec(50, 10.0), desk_spec(100, 20.0),
                                     desk_spec(200, 40.0)};
    const auto rungs = variance_scaling_experiment(ladder, {0.0, 4.0}, 150, 21);
    REQUIRE(rungs.size() == 3);
    for (const ScalingRung& rung : rungs) {
        CHECK(rung.nb_var > 0.0);
        CHECK(rung.stderr_value > 0.0);
        CHECK(std::isfinite(rung.nb_var));
    }
    // same distribution: two seeds agree within 3 joint stderr on a rung
    const auto rungs_b = variance_scaling_experiment(ladder, {0.0, 4.0}, 150, 22);
    const double joint = std::hypot(rungs[1].stderr_value, rungs_b[1].stderr_value);
    CHECK(std::abs(rungs[1].nb_var - rungs_b[1].nb_var) <= 3.0 * joint);

    // deeper in Lambda_eta the variance shrinks
    const auto rungs_deep = variance_scaling_experiment(ladder, {0.0, 10.0}, 150, 21);
    for (std::size_t k = 0; k < rungs.size(); ++k)
        CHECK(rungs_deep[k].nb_var < rungs[k].nb_var);

    CHECK_THROWS_AS(
        variance_scaling_experiment({desk_spec(), desk_spec()}, {0.0, 4.0}, 50, 1), McError);
    CHECK_THROWS_AS(variance_scaling_experiment(ladder, {0.0, 2.0}, 50, 1), McError);
}

TEST_CASE("correlation vs theory at desk scale") {
    const EnsembleSpec spec = desk_spec(100, 20.0);
    const CorrelationComparison cmp =
        correlation_vs_theory(spec, {0.0, 4.0}, {0.0, -4.0}, 400, 31);
    // generous desk-scale envelope; the acceptance suite runs the spec sizes
    CHECK(std::abs(cmp.difference) <= std::max(4.0 * cmp.nb_cov_stderr,
                                               0.25 * std::abs(cmp.t_theory)));
    CHECK(cmp.nb_cov_stderr > 0.0);
    CHECK(std::abs(cmp.t_theory.imag()) < 1e-12);

    // the Δ-induced shift: rademacher entries lower V₄, hence lower T
    EnsembleSpec rad = spec;
    rad.dist.kind = EntryKind::rademacher;
    const TheoryContext ctx_gauss = TheoryContext::from(spec.dist, spec.profile);
    const TheoryContext ctx_rad = TheoryContext::from(rad.dist, rad.profile);
    const double t_gauss = compute_T(ctx_gauss, {0.0, 4.0}, {0.0, -4.0}).value.real();
    const double t_rad = compute_T(ctx_rad, {0.0, 4.0}, {0.0, -4.0}).value.real();
    CHECK(compute_delta(ctx_rad).delta < compute_delta(ctx_gauss).delta);
    CHECK(t_rad < t_gauss);

    CHECK_THROWS_AS(correlation_vs_theory(spec, {0.0, 2.0}, {0.0, -4.0}, 10, 1), McError);
}

TEST_CASE("worker resolution") {
    CHECK(resolve_worker_count({3}, 100) == 3);
    CHECK(resolve_worker_count({16}, 4) == 4);  // capped by task count
    CHECK(resolve_worker_count({0}, 0) >= 1);
}
