// Acceptance suite: runs every acceptance criterion at its stated size and
// tolerance and prints one PASS/FAIL line per criterion. Exits nonzero if
// any criterion fails. The reproducibility criterion drives the CLI binary,
// whose path arrives via the LRP_CLI_BIN environment variable.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lrp/cumulant.hpp"
#include "lrp/ensemble.hpp"
#include "lrp/montecarlo.hpp"
#include "lrp/profile.hpp"
#include "lrp/spectra.hpp"
#include "lrp/theory.hpp"
#include "oracles.hpp"

using namespace lrp;
using Complex = std::complex<double>;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(const char* format, ...) {
    va_list args;
    va_start(args, format);
    char buffer[512];
    std::vsnprintf(buffer, sizeof buffer, format, args);
    va_end(args);
    return buffer;
}

EnsembleSpec gaussian_spec(int n, double b) {
    EnsembleSpec spec;
    spec.n = n;
    spec.b = b;
    spec.dist = {EntryKind::gaussian, 1.0};
    spec.profile = Profile::gaussian();
    return spec;
}

// 1. solve_w fixed point and branch over 1000 random z per v.
void criterion_1() {
    Timer timer;
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> re(-10.0, 10.0), im(1e-3, 10.0);
    double worst_residual = 0.0;
    bool branch_ok = true;
    for (double v : {0.5, 1.0, 2.0}) {
        for (int k = 0; k < 1000; ++k) {
            const Complex z{re(rng), (k % 2 ? 1.0 : -1.0) * im(rng)};
            const Complex w = solve_w(v, z);
            worst_residual = std::max(worst_residual, std::abs(v * v * w * w + z * w + 1.0));
            branch_ok = branch_ok && (w.imag() * z.imag() > 0.0);
        }
    }
    const bool pass = worst_residual < 1e-12 && branch_ok;
    report(1, pass,
           fmt("fixed point: max residual %.2e (< 1e-12), Herglotz branch %s  [%.2fs]",
               worst_residual, branch_ok ? "ok" : "violated", timer.seconds()));
}

// 2. Semicircle law at N=1001, b=150, R=50.
void criterion_2() {
    Timer timer;
    const EnsembleSpec spec = gaussian_spec(500, 150.0);
    const DensityReport density = density_experiment(spec, 50, 61, 20260810);
    const TheoryContext ctx = TheoryContext::from(spec.dist, spec.profile);
    const double rho0 = semicircle_density(ctx, 0.0);
    const bool rho_ok = std::abs(rho0 - 1.0 / M_PI) < 1e-12;
    // eigenvalue mass beyond ±(2v+0.5), from bins fully outside
    std::uint64_t outside = density.underflow + density.overflow;
    for (std::size_t k = 0; k < density.counts.size(); ++k)
        if (density.edges[k] >= 2.5 || density.edges[k + 1] <= -2.5) outside += density.counts[k];
    const double outside_mass = static_cast<double>(outside) / (50.0 * spec.N());
    const bool pass = density.l1_distance < 0.05 && rho_ok && outside_mass < 0.01;
    report(2, pass,
           fmt("semicircle: L1 = %.4f (< 0.05), rho_sc(0) = %.12f vs 1/pi (|diff| %.1e), "
               "mass beyond +-2.5 = %.2e (< 1%%)  [%.0fs]",
               density.l1_distance, rho0, std::abs(rho0 - 1.0 / M_PI), outside_mass,
               timer.seconds()));
}

// 3. Nb*Var{g(4i)} stability across the (401,40),(801,80),(1601,160) ladder.
void criterion_3() {
    Timer timer;
    const std::vector<EnsembleSpec> ladder{gaussian_spec(200, 40.0), gaussian_spec(400, 80.0),
                                           gaussian_spec(800, 160.0)};
    const auto rungs = variance_scaling_experiment(ladder, {0.0, 4.0}, 1000, 31);
    double lo = rungs[0].nb_var, hi = rungs[0].nb_var;
    std::string values;
    for (const ScalingRung& rung : rungs) {
        lo = std::min(lo, rung.nb_var);
        hi = std::max(hi, rung.nb_var);
        values += fmt("(N=%d: %.4f+-%.4f) ", rung.N, rung.nb_var, rung.stderr_value);
    }
    const double variation = (hi - lo) / lo;
    const bool pass = variation < 0.25;
    report(3, pass,
           fmt("variance bound: Nb*Var %svariation %.1f%% (< 25%%)  [%.0fs]", values.c_str(),
               100.0 * variation, timer.seconds()));
}

// 4. Leading correlation term at N=801, b=80, R=2000, gaussian then rademacher.
void criterion_4() {
    Timer timer;
    const Complex z1{0.0, 4.0}, z2{0.0, -4.0};

    EnsembleSpec spec = gaussian_spec(400, 80.0);
    const CorrelationComparison gauss = correlation_vs_theory(spec, z1, z2, 2000, 40);
    const double envelope_g =
        std::max(3.0 * gauss.nb_cov_stderr, 0.15 * std::abs(gauss.t_theory));
    const bool pass_gauss = std::abs(gauss.difference) <= envelope_g;

    spec.dist.kind = EntryKind::rademacher;
    const CorrelationComparison rad = correlation_vs_theory(spec, z1, z2, 2000, 40);
    const double envelope_r = std::max(3.0 * rad.nb_cov_stderr, 0.15 * std::abs(rad.t_theory));
    const bool pass_rad = std::abs(rad.difference) <= envelope_r;

    // Δ drops from 3(1−2^{-1/2}) to 1−3·2^{-1/2} < it, so T must drop too.
    const TheoryContext ctx_gauss{1.0, 3.0, Profile::gaussian()};
    const TheoryContext ctx_rad{1.0, 1.0, Profile::gaussian()};
    const double delta_shift = compute_delta(ctx_rad).delta - compute_delta(ctx_gauss).delta;
    const double t_shift = (rad.t_theory - gauss.t_theory).real();
    const bool sign_ok = delta_shift * t_shift > 0.0;

    const bool pass = pass_gauss && pass_rad && sign_ok;
    report(4, pass,
           fmt("leading term: gaussian |NbC-T| = %.6f (env %.6f, T = %.5f), rademacher "
               "|NbC-T| = %.6f (env %.6f), delta-shift sign %s  [%.0fs]",
               std::abs(gauss.difference), envelope_g, gauss.t_theory.real(),
               std::abs(rad.difference), envelope_r, sign_ok ? "ok" : "wrong", timer.seconds()));
}

// 5. B_nu quadrature vs closed Beta forms.
void criterion_5() {
    Timer timer;
    double worst = 0.0;
    for (double nu : {1.1, 1.5, 2.0, 3.0}) {
        const double quad = compute_B(nu, 1.0);
        const double closed = compute_B_closed(nu, 1.0);
        worst = std::max(worst, std::abs(quad - closed) / std::abs(closed));
    }
    const double b21 = compute_B(2.0, 1.0);
    const bool value_ok = std::abs(b21 - (-0.0883883)) < 1e-6;
    const bool pass = worst < 1e-8 && value_ok;
    report(5, pass,
           fmt("B_nu: max rel err %.2e (< 1e-8), B_2(1) = %.7f (target -0.0883883 +- 1e-6)  "
               "[%.2fs]",
               worst, b21, timer.seconds()));
}

// 6. Universality exponent -(2-1/nu) for gaussian, exponential, stable(1.5).
void criterion_6() {
    Timer timer;
    const std::vector<double> separations{1e-2, 3.162277660168379e-3, 1e-3,
                                          3.162277660168379e-4, 1e-4,
                                          3.162277660168379e-5, 1e-5};
    struct Case {
        const char* name;
        Profile profile;
        double expected;
    };
    const Case cases[] = {{"gaussian", Profile::gaussian(), -1.5},
                          {"exponential", Profile::exponential(), -1.5},
                          {"stable(1.5)", Profile::stable(1.5), -(2.0 - 1.0 / 1.5)}};
    bool pass = true;
    std::string detail;
    for (const Case& test_case : cases) {
        const TheoryContext ctx{1.0, 3.0, test_case.profile};
        const ExponentFit fit = fit_scaling_exponent(ctx, 0.0, separations);
        const bool ok = std::abs(fit.slope - test_case.expected) < 0.05;
        pass = pass && ok;
        detail += fmt("%s %.4f (want %.4f) ", test_case.name, fit.slope, test_case.expected);
    }
    report(6, pass, fmt("exponent: %s [%.1fs]", detail.c_str(), timer.seconds()));
}

// 7. Cumulant verifier: gaussian q=1 exactness; rademacher x^3 cases.
void criterion_7() {
    Timer timer;
    double worst_gap = 0.0;
    for (const TestFunction& f : standard_test_functions()) {
        const ExpansionCheck check = expansion_check(SymmetricLaw::gaussian, f, 1);
        worst_gap = std::max(worst_gap, check.gap);
    }
    const TestFunction cube = TestFunction::polynomial({0.0, 0.0, 0.0, 1.0});
    const ExpansionCheck rad3 = expansion_check(SymmetricLaw::rademacher, cube, 3);
    const ExpansionCheck rad1 = expansion_check(SymmetricLaw::rademacher, cube, 1);
    const bool pass = worst_gap < 1e-9 && rad3.gap < 1e-12 && rad1.within_bound &&
                      std::abs(rad1.gap - 2.0) < 1e-12 && std::abs(rad1.bound - 6.0) < 1e-12;
    report(7, pass,
           fmt("cumulant: gaussian q=1 max gap %.2e (< 1e-9), rademacher q=3 gap %.2e, q=1 "
               "gap %.3f <= bound %.3f  [%.2fs]",
               worst_gap, rad3.gap, rad1.gap, rad1.bound, timer.seconds()));
}

// 8. Resolvent identity and derivative validators at 50x50.
void criterion_8() {
    Timer timer;
    std::mt19937_64 rng(808);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd h(50, 50), h_tilde(50, 50);
    for (int i = 0; i < 50; ++i)
        for (int j = 0; j <= i; ++j) {
            h(i, j) = h(j, i) = gauss(rng);
            h_tilde(i, j) = h_tilde(j, i) = gauss(rng);
        }
    double worst_identity = 0.0, worst_derivative = 0.0;
    for (const Complex z : {Complex{0.0, 3.0}, Complex{1.0, 2.0}}) {
        worst_identity = std::max(worst_identity, check_resolvent_identity(h, h_tilde, z));
        worst_derivative = std::max(worst_derivative, check_resolvent_derivative(h, z, 3, 17));
        worst_derivative = std::max(worst_derivative, check_resolvent_derivative(h, z, 8, 8));
    }
    const bool pass = worst_identity < 1e-10 && worst_derivative < 1e-6;
    report(8, pass,
           fmt("resolvent validators: identity residual %.2e (< 1e-10), derivative deviation "
               "%.2e (< 1e-6)  [%.2fs]",
               worst_identity, worst_derivative, timer.seconds()));
}

// 9. Eigensolver vs Sturm bisection; trace identities on sampled matrices.
void criterion_9() {
    Timer timer;
    std::mt19937_64 rng(909);
    std::normal_distribution<double> gauss;
    double worst_rel = 0.0;
    for (int n : {50, 100}) {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = gauss(rng);
        const SpectralSample sample = eigenvalues_symmetric(m);
        const std::vector<double> reference = oracle::sturm_eigenvalues(m);
        const double scale =
            std::max(std::abs(reference.front()), std::abs(reference.back()));
        for (int k = 0; k < n; ++k)
            worst_rel = std::max(worst_rel,
                                 std::abs(sample.eigenvalues[k] - reference[k]) / scale);
    }

    bool trace_ok = true;
    EnsembleSpec spec;
    spec.dist = {EntryKind::uniform, 1.0};
    for (const Profile& profile : {Profile::gaussian(), Profile::stable(1.5)}) {
        spec.n = 150;
        spec.b = 25.0;
        spec.profile = profile;
        for (std::uint64_t rep = 0; rep < 3; ++rep) {
            const SampledMatrix m = sample_matrix(spec, 99, rep);
            const SpectralSample sample = eigenvalues_symmetric(m.h);
            double sum = 0.0, sum_sq = 0.0;
            for (double ev : sample.eigenvalues) {
                sum += ev;
                sum_sq += ev * ev;
            }
            trace_ok = trace_ok &&
                       std::abs(sum - m.h.trace()) <=
                           1e-8 * std::max(1.0, spec.N() * std::abs(m.h.trace())) &&
                       std::abs(sum_sq - m.h.squaredNorm()) <= 1e-8 * m.h.squaredNorm();
        }
    }
    const bool pass = worst_rel <= 1e-8 && trace_ok;
    report(9, pass,
           fmt("eigensolver oracle: max per-eigenvalue rel err %.2e (<= 1e-8), trace "
               "identities %s  [%.1fs]",
               worst_rel, trace_ok ? "ok" : "violated", timer.seconds()));
}

// 10. Bit-identical CSV under different worker counts, through the CLI.
void criterion_10() {
    Timer timer;
    const char* cli = std::getenv("LRP_CLI_BIN");
    if (cli == nullptr) {
        report(10, false, "reproducibility: LRP_CLI_BIN not set");
        return;
    }
    auto run = [cli](const std::string& args) {
        const std::string command = std::string(cli) + " " + args + " > /dev/null 2>&1";
        return WEXITSTATUS(std::system(command.c_str()));
    };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    };
    bool pass = true;
    std::string detail;
    const std::string stats_args =
        "stats --n 150 --b 25 --reps 60 --z 0,4 --z 0,-4 --seed 123 --format csv";
    pass = pass && run(stats_args + " --workers 1 --out /tmp/lrp_acc_s1") == 0;
    pass = pass && run(stats_args + " --workers 4 --out /tmp/lrp_acc_s4") == 0;
    const bool stats_same = slurp("/tmp/lrp_acc_s1.csv") == slurp("/tmp/lrp_acc_s4.csv");
    detail += fmt("stats %s", stats_same ? "identical" : "DIFFER");

    const std::string density_args =
        "density --n 150 --b 25 --reps 24 --bins 41 --seed 5 --format csv";
    pass = pass && run(density_args + " --workers 1 --out /tmp/lrp_acc_d1") == 0;
    pass = pass && run(density_args + " --workers 3 --out /tmp/lrp_acc_d3") == 0;
    const bool density_same = slurp("/tmp/lrp_acc_d1.csv") == slurp("/tmp/lrp_acc_d3.csv");
    detail += fmt(", density %s", density_same ? "identical" : "DIFFER");

    const std::string corr_args =
        "correlation --n 100 --b 20 --reps 80 --z1 0,4 --z2 0,-4 --seed 9 --format csv";
    pass = pass && run(corr_args + " --workers 1 --out /tmp/lrp_acc_c1") == 0;
    pass = pass && run(corr_args + " --workers 2 --out /tmp/lrp_acc_c2") == 0;
    const bool corr_same = slurp("/tmp/lrp_acc_c1.csv") == slurp("/tmp/lrp_acc_c2.csv");
    detail += fmt(", correlation %s", corr_same ? "identical" : "DIFFER");

    pass = pass && stats_same && density_same && corr_same;
    report(10, pass, fmt("reproducibility: %s  [%.0fs]", detail.c_str(), timer.seconds()));
}

}  // namespace

int main() {
    std::printf("lrp acceptance suite (single process, %u hardware threads)\n",
                std::thread::hardware_concurrency());
    criterion_1();
    criterion_2();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_4();
    criterion_3();
    std::printf("acceptance: %s (%d failing)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                failures);
    return failures == 0 ? 0 : 1;
}
