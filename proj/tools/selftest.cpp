// Fast invariant suite behind `lrp selftest`: spot checks of every module
// that complete in a few seconds and return nonzero on any failure.

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>

#include "common.hpp"
#include "lrp/csv.hpp"
#include "lrp/cumulant.hpp"
#include "lrp/ensemble.hpp"
#include "lrp/profile.hpp"
#include "lrp/spectra.hpp"
#include "lrp/theory.hpp"

namespace lrp::cli {
namespace {

struct Harness {
    bool verbose = true;
    int failures = 0;
    int checks = 0;

    void check(bool ok, const char* what) {
        ++checks;
        if (!ok) ++failures;
        if (verbose || !ok) std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what);
    }
};

}  // namespace

int run_selftest(bool verbose) {
    Harness h{verbose};
    try {
        // profiles
        const Profile gauss = Profile::gaussian();
        h.check(std::abs(gauss.psi_tilde(0.0) - 1.0) < 1e-12, "gaussian psi_tilde(0) == 1");
        h.check(std::abs(gauss.moments().int_psi_sq - 1.0 / std::sqrt(2.0)) < 1e-12,
                "gaussian int psi^2 == 2^{-1/2}");
        const Profile expo = Profile::exponential();
        h.check(std::abs(expo.psi_tilde(1.0) - 0.5) < 1e-12, "exponential psi_tilde(1) == 1/2");
        const Profile ind = Profile::indicator();
        h.check(ind.psi(0.6) == 0.0 && ind.psi(0.4) == 1.0, "indicator support");
        h.check(!ind.continuous(), "indicator flagged discontinuous");

        // solve_w branch + residual over random z
        std::mt19937_64 rng(20240801);
        std::uniform_real_distribution<double> unif(-10.0, 10.0);
        bool residual_ok = true, branch_ok = true;
        for (int k = 0; k < 1000; ++k) {
            const double v = (k % 3 == 0) ? 0.5 : (k % 3 == 1 ? 1.0 : 2.0);
            std::complex<double> z{unif(rng), 0.0};
            while (z.imag() == 0.0) z.imag(unif(rng));
            const auto w = solve_w(v, z);
            const auto residual = v * v * w * w + z * w + 1.0;
            residual_ok = residual_ok && std::abs(residual) < 1e-12;
            branch_ok = branch_ok && (w.imag() * z.imag() > 0.0);
        }
        h.check(residual_ok, "solve_w residual < 1e-12 (1000 random z)");
        h.check(branch_ok, "solve_w Herglotz branch (1000 random z)");

        // B quadrature vs closed form
        bool b_ok = true;
        for (double nu : {1.1, 1.5, 2.0, 3.0}) {
            const double quad = compute_B(nu, 1.0);
            const double closed = compute_B_closed(nu, 1.0);
            b_ok = b_ok && std::abs(quad - closed) < 1e-8 * std::abs(closed);
        }
        h.check(b_ok, "compute_B vs closed Beta forms (nu in {1.1,1.5,2,3})");

        // cumulant spot checks
        const auto k_gauss = cumulants_from_moments({1.0, 3.0, 15.0});
        h.check(k_gauss.K4 == 0.0 && k_gauss.K6 == 0.0, "gaussian cumulants vanish beyond K2");
        const auto check_q1 =
            expansion_check(SymmetricLaw::gaussian, TestFunction::polynomial({0, 0, 0, 1}), 1);
        h.check(check_q1.gap < 1e-9, "gaussian Stein identity exact at q=1");
        const auto rad_q3 =
            expansion_check(SymmetricLaw::rademacher, TestFunction::polynomial({0, 0, 0, 1}), 3);
        h.check(rad_q3.gap < 1e-12, "rademacher x^3 exact at q=3");

        // resolvent validators on a random 20x20
        Eigen::MatrixXd m(20, 20);
        std::normal_distribution<double> gaussian_draw;
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j <= i; ++j) {
                m(i, j) = gaussian_draw(rng);
                m(j, i) = m(i, j);
            }
        h.check(check_resolvent_identity(m, Eigen::MatrixXd::Zero(20, 20), {0.0, 3.0}) < 1e-10,
                "resolvent identity residual < 1e-10");
        h.check(check_resolvent_derivative(m, {0.0, 3.0}, 2, 5) < 1e-6,
                "resolvent derivative formula vs finite differences");

        // sampling determinism
        EnsembleSpec spec;
        spec.n = 30;
        spec.b = 8.0;
        spec.dist = {EntryKind::gaussian, 1.0};
        spec.profile = gauss;
        const auto m1 = sample_matrix(spec, 7, 3);
        const auto m2 = sample_matrix(spec, 7, 3);
        h.check((m1.h - m2.h).cwiseAbs().maxCoeff() == 0.0, "sample_matrix deterministic");
        h.check(m1.h == m1.h.transpose().eval(), "sample_matrix exactly symmetric");

        // eigensolver + trace identity
        const SpectralSample sample = eigenvalues_symmetric(m1.h);
        double sum = 0.0, sum_sq = 0.0;
        for (double ev : sample.eigenvalues) {
            sum += ev;
            sum_sq += ev * ev;
        }
        h.check(std::abs(sum - m1.h.trace()) <
                    1e-9 * spec.N() * std::max(1.0, std::abs(m1.h.trace())),
                "trace identity sum(lambda) == tr H");
        h.check(std::abs(sum_sq - m1.h.squaredNorm()) < 1e-8 * std::max(1.0, m1.h.squaredNorm()),
                "trace identity sum(lambda^2) == sum H_ij^2");

        // CSV round-trip
        csv::Table table;
        table.header = {"x", "label"};
        table.rows.push_back({csv::format_double(0.1 + 0.2), "a,b \"quoted\""});
        table.rows.push_back({csv::format_double(-1.2345678901234567e-89), "plain"});
        const csv::Table reparsed = csv::parse(csv::to_string(table));
        h.check(reparsed.rows == table.rows && reparsed.header == table.header,
                "CSV round-trip bit-identical");
    } catch (const std::exception& e) {
        std::printf("[FAIL] selftest aborted: %s\n", e.what());
        ++h.failures;
    }

    std::printf("selftest: %d checks, %d failures\n", h.checks, h.failures);
    return h.failures == 0 ? 0 : 1;
}

}  // namespace lrp::cli
