#include "lrp/montecarlo.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "lrp/spectra.hpp"

namespace lrp {
namespace {

using Complex = std::complex<double>;

// Runs fn(realization_index) on `workers` threads over indices [0, R).
// Work distribution is dynamic; outputs must be written to per-index slots.
template <typename Fn>
void parallel_realizations(std::uint64_t R, int workers, Fn&& fn) {
    if (workers <= 1) {
        for (std::uint64_t idx = 0; idx < R; ++idx) fn(idx);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        while (true) {
            const std::uint64_t idx = next.fetch_add(1);
            if (idx >= R) return;
            try {
                fn(idx);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

// g(z) for every z of one realization; one eigensolve serves all z.
std::vector<std::vector<Complex>> map_resolvent_traces(const EnsembleSpec& spec,
                                                       const std::vector<Complex>& z_list,
                                                       std::uint64_t R, std::uint64_t seed,
                                                       int workers) {
    std::vector<std::vector<Complex>> g(R, std::vector<Complex>(z_list.size()));
    parallel_realizations(R, workers, [&](std::uint64_t idx) {
        const SampledMatrix m = sample_matrix(spec, seed, idx);
        SpectralSample sample = eigenvalues_symmetric(m.h);
        sample.seed = seed;
        sample.realization_index = idx;
        for (std::size_t k = 0; k < z_list.size(); ++k)
            g[idx][k] = resolvent_trace(sample, z_list[k]).g;
    });
    return g;
}

struct CovEstimate {
    Complex value;
    double stderr_value = 0.0;
};

// Plain-product covariance Ĉ = mean(xy) − mean(x)mean(y) with leave-one-out
// jackknife stderr, evaluated in index order. Operands are put in a
// canonical order first: floating-point contraction makes ad+bc
// order-sensitive at the last ulp, and the estimator must be exactly
// symmetric under the (z₁, z₂) swap.
CovEstimate jackknife_cov(const std::vector<Complex>& x_in, const std::vector<Complex>& y_in) {
    const std::vector<Complex>* px = &x_in;
    const std::vector<Complex>* py = &y_in;
    for (std::size_t i = 0; i < x_in.size() && i < y_in.size(); ++i) {
        const auto xb = std::bit_cast<std::array<std::uint64_t, 2>>(x_in[i]);
        const auto yb = std::bit_cast<std::array<std::uint64_t, 2>>(y_in[i]);
        if (xb == yb) continue;
        if (yb < xb) std::swap(px, py);
        break;
    }
    const std::vector<Complex>& x = *px;
    const std::vector<Complex>& y = *py;

    const std::size_t R = x.size();
    if (R < 2) throw McError("jackknife requires R >= 2");
    Complex s1{}, s2{}, s12{};
    for (std::size_t i = 0; i < R; ++i) {
        s1 += x[i];
        s2 += y[i];
        s12 += x[i] * y[i];
    }
    const double dR = static_cast<double>(R);
    CovEstimate est;
    est.value = s12 / dR - (s1 / dR) * (s2 / dR);

    const double dM = dR - 1.0;
    Complex theta_sum{};
    std::vector<Complex> theta(R);
    for (std::size_t i = 0; i < R; ++i) {
        const Complex t = (s12 - x[i] * y[i]) / dM -
                          ((s1 - x[i]) / dM) * ((s2 - y[i]) / dM);
        theta[i] = t;
        theta_sum += t;
    }
    const Complex theta_bar = theta_sum / dR;
    double ss = 0.0;
    for (std::size_t i = 0; i < R; ++i) ss += std::norm(theta[i] - theta_bar);
    est.stderr_value = std::sqrt(dM / dR * ss);
    return est;
}

CovEstimate jackknife_mean(const std::vector<Complex>& x) {
    const std::size_t R = x.size();
    if (R < 2) throw McError("jackknife requires R >= 2");
    Complex sum{};
    for (const Complex& value : x) sum += value;
    const Complex mean = sum / static_cast<double>(R);
    double ss = 0.0;
    for (const Complex& value : x) ss += std::norm(value - mean);
    return {mean, std::sqrt(ss / (static_cast<double>(R) * (R - 1.0)))};
}

std::vector<Complex> conjugated(const std::vector<Complex>& x) {
    std::vector<Complex> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::conj(x[i]);
    return out;
}

}  // namespace

int resolve_worker_count(const McOptions& options, std::uint64_t tasks) {
    int workers = options.workers;
    if (workers <= 0) {
        if (const char* env = std::getenv("LRP_WORKERS")) workers = std::atoi(env);
    }
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers <= 0) workers = 1;
    if (tasks > 0 && static_cast<std::uint64_t>(workers) > tasks)
        workers = static_cast<int>(tasks);
    return workers;
}

const StatRow& McReport::find(const std::string& statistic, std::complex<double> z1,
                              std::complex<double> z2, bool has_z2) const {
    for (const StatRow& row : rows) {
        if (row.statistic != statistic || row.has_z2 != has_z2) continue;
        if (row.z1 == z1 && (!has_z2 || row.z2 == z2)) return row;
    }
    throw McError("statistic not found: " + statistic);
}

McReport estimate_resolvent_stats(const EnsembleSpec& spec,
                                  const std::vector<std::complex<double>>& z_list,
                                  std::uint64_t R, std::uint64_t seed,
                                  const McOptions& options) {
    spec.validate();
    if (R < 2) throw McError("estimate_resolvent_stats requires R >= 2");
    if (z_list.empty()) throw McError("estimate_resolvent_stats requires a nonempty z list");
    for (const Complex& z : z_list)
        if (z.imag() == 0.0) throw McError("all z must be non-real");

    const auto t0 = std::chrono::steady_clock::now();
    const int workers = resolve_worker_count(options, R);
    const auto g = map_resolvent_traces(spec, z_list, R, seed, workers);

    McReport report;
    report.R = R;
    report.n = spec.n;
    report.b = spec.b;
    report.v = spec.dist.v;
    report.dist = to_string(spec.dist.kind);
    report.profile = spec.profile.name();
    report.seed = seed;

    std::vector<std::vector<Complex>> per_z(z_list.size(), std::vector<Complex>(R));
    for (std::uint64_t idx = 0; idx < R; ++idx)
        for (std::size_t k = 0; k < z_list.size(); ++k) per_z[k][idx] = g[idx][k];

    for (std::size_t k = 0; k < z_list.size(); ++k) {
        const auto mean = jackknife_mean(per_z[k]);
        report.rows.push_back({"mean_g", z_list[k], {}, false, mean.value, mean.stderr_value});
        const auto var_plain = jackknife_cov(per_z[k], per_z[k]);
        report.rows.push_back(
            {"var_g", z_list[k], {}, false, var_plain.value, var_plain.stderr_value});
        const auto var_conj = jackknife_cov(per_z[k], conjugated(per_z[k]));
        report.rows.push_back(
            {"var_g_conj", z_list[k], {}, false, var_conj.value, var_conj.stderr_value});
    }
    for (std::size_t k = 0; k < z_list.size(); ++k) {
        for (std::size_t l = k + 1; l < z_list.size(); ++l) {
            const auto cov = jackknife_cov(per_z[k], per_z[l]);
            report.rows.push_back(
                {"cov_g", z_list[k], z_list[l], true, cov.value, cov.stderr_value});
        }
    }
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

DensityReport density_experiment(const EnsembleSpec& spec, std::uint64_t R, int bins,
                                 std::uint64_t seed, const McOptions& options) {
    spec.validate();
    if (R < 1) throw McError("density_experiment requires R >= 1");
    if (bins < 2) throw McError("density_experiment requires bins >= 2");

    const auto t0 = std::chrono::steady_clock::now();
    const double v = spec.dist.v;
    const double lo = -2.0 * v - 1.0;
    const double hi = 2.0 * v + 1.0;
    const double width = (hi - lo) / bins;

    DensityReport report;
    report.R = R;
    report.seed = seed;
    report.edges.resize(bins + 1);
    for (int k = 0; k <= bins; ++k) report.edges[k] = lo + width * k;

    // Integer counts merge exactly in any order; per-realization histograms
    // are still reduced in index order for uniformity with the other paths.
    const int workers = resolve_worker_count(options, R);
    std::vector<std::vector<std::uint64_t>> per_real(R);
    parallel_realizations(R, workers, [&](std::uint64_t idx) {
        const SampledMatrix m = sample_matrix(spec, seed, idx);
        const SpectralSample sample = eigenvalues_symmetric(m.h);
        std::vector<std::uint64_t> counts(bins + 2, 0);
        for (double lambda : sample.eigenvalues) {
            if (lambda < lo) ++counts[0];
            else if (lambda >= hi) ++counts[bins + 1];
            else ++counts[1 + static_cast<int>((lambda - lo) / width)];
        }
        per_real[idx] = std::move(counts);
    });
    std::vector<std::uint64_t> counts(bins + 2, 0);
    for (std::uint64_t idx = 0; idx < R; ++idx)
        for (int k = 0; k < bins + 2; ++k) counts[k] += per_real[idx][k];
    report.underflow = counts[0];
    report.overflow = counts[bins + 1];
    report.counts.assign(counts.begin() + 1, counts.end() - 1);

    const double total = static_cast<double>(R) * spec.N();
    report.density.resize(bins);
    for (int k = 0; k < bins; ++k)
        report.density[k] = static_cast<double>(report.counts[k]) / (total * width);
    report.mass_outside = static_cast<double>(report.underflow + report.overflow) / total;

    // L1 distance: per-bin |empirical − semicircle| mass plus everything the
    // bin range misses on either side (the semicircle support is inside).
    const TheoryContext ctx{v, spec.dist.V4(), spec.profile};
    double l1 = 0.0;
    for (int k = 0; k < bins; ++k) {
        const double sc_mass =
            semicircle_cdf(ctx, report.edges[k + 1]) - semicircle_cdf(ctx, report.edges[k]);
        const double emp_mass = static_cast<double>(report.counts[k]) / total;
        l1 += std::abs(emp_mass - sc_mass);
    }
    l1 += report.mass_outside;
    l1 += semicircle_cdf(ctx, lo) + (1.0 - semicircle_cdf(ctx, hi));
    report.l1_distance = l1;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::vector<ScalingRung> variance_scaling_experiment(const std::vector<EnsembleSpec>& ladder,
                                                     std::complex<double> z, std::uint64_t R,
                                                     std::uint64_t seed,
                                                     const McOptions& options) {
    if (ladder.size() < 3) throw McError("variance_scaling_experiment requires >= 3 rungs");
    for (const EnsembleSpec& spec : ladder) {
        spec.validate();
        const TheoryContext ctx{spec.dist.v, spec.dist.V4(), spec.profile};
        if (!in_lambda_eta(ctx, z))
            throw McError("variance_scaling_experiment requires z in Lambda_eta (|Im z| >= 2v+1)");
    }
    std::vector<ScalingRung> rungs;
    for (const EnsembleSpec& spec : ladder) {
        const int workers = resolve_worker_count(options, R);
        const auto g = map_resolvent_traces(spec, {z}, R, seed, workers);
        std::vector<Complex> x(R);
        for (std::uint64_t idx = 0; idx < R; ++idx) x[idx] = g[idx][0];
        const auto var = jackknife_cov(x, conjugated(x));
        const double nb = static_cast<double>(spec.N()) * spec.b;
        rungs.push_back({spec.N(), spec.b, var.value.real() * nb, var.stderr_value * nb});
    }
    return rungs;
}

CorrelationComparison correlation_vs_theory(const EnsembleSpec& spec, std::complex<double> z1,
                                            std::complex<double> z2, std::uint64_t R,
                                            std::uint64_t seed, const McOptions& options) {
    spec.validate();
    const TheoryContext ctx = TheoryContext::from(spec.dist, spec.profile);
    if (!in_lambda_eta(ctx, z1) || !in_lambda_eta(ctx, z2))
        throw McError("correlation_vs_theory requires z1, z2 in Lambda_eta");

    CorrelationComparison cmp;
    cmp.stats = estimate_resolvent_stats(spec, {z1, z2}, R, seed, options);
    const StatRow& cov = cmp.stats.find("cov_g", z1, z2, true);
    const double nb = static_cast<double>(spec.N()) * spec.b;
    cmp.nb_cov = cov.value * nb;
    cmp.nb_cov_stderr = cov.stderr_value * nb;
    cmp.t_theory = compute_T(ctx, z1, z2).value;
    cmp.difference = cmp.nb_cov - cmp.t_theory;
    cmp.diff_in_stderr =
        cmp.nb_cov_stderr > 0.0 ? std::abs(cmp.difference) / cmp.nb_cov_stderr : 0.0;
    cmp.stderr_target_met = cmp.nb_cov_stderr <= 0.2 * std::abs(cmp.t_theory);
    return cmp;
}

}  // namespace lrp
