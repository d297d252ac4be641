// Monte Carlo experiments over ensemble realizations: resolvent-trace
// statistics, eigenvalue histograms vs the semicircle law, the Nb·Var{g}
// scaling ladder, and the Nb·Ĉ vs T comparison.
//
// Reproducibility contract: identical (spec, seed, R) produce bit-identical
// numbers for any worker count. Randomness is counter-based per realization
// and reductions run in realization-index order after the workers join.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrp/ensemble.hpp"
#include "lrp/theory.hpp"

namespace lrp {

struct McError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct McOptions {
    int workers = 0;  // 0 → LRP_WORKERS env var, else hardware concurrency
};

int resolve_worker_count(const McOptions& options, std::uint64_t tasks);

struct StatRow {
    std::string statistic;
    std::complex<double> z1{0.0, 0.0};
    std::complex<double> z2{0.0, 0.0};
    bool has_z2 = false;
    std::complex<double> value{0.0, 0.0};
    double stderr_value = 0.0;
};

struct McReport {
    std::vector<StatRow> rows;
    std::uint64_t R = 0;
    double wall_seconds = 0.0;  // excluded from CSV output
    // spec echo
    int n = 0;
    double b = 0.0;
    double v = 0.0;
    std::string dist;
    std::string profile;
    std::uint64_t seed = 0;

    const StatRow& find(const std::string& statistic, std::complex<double> z1,
                        std::complex<double> z2 = {0.0, 0.0}, bool has_z2 = false) const;
};

// Per z: mean_g, var_g (plain-product variance C(z,z)) and var_g_conj
// (E|g|² − |Eg|², the conjugate-pair variance the scaling bound uses). Per
// unordered pair from
// z_list: cov_g with plain complex products, no conjugation. Standard errors
// by leave-one-out jackknife over realizations.
McReport estimate_resolvent_stats(const EnsembleSpec& spec,
                                  const std::vector<std::complex<double>>& z_list,
                                  std::uint64_t R, std::uint64_t seed,
                                  const McOptions& options = {});

struct DensityReport {
    std::vector<double> edges;          // bins + 1 edges over [−2v−1, 2v+1]
    std::vector<std::uint64_t> counts;  // pooled eigenvalue counts
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;
    std::vector<double> density;  // counts / (R·N·bin width)
    double l1_distance = 0.0;     // ∫|ρ̂ − ρ_sc| including out-of-range mass
    double mass_outside = 0.0;
    std::uint64_t R = 0;
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
};

DensityReport density_experiment(const EnsembleSpec& spec, std::uint64_t R, int bins,
                                 std::uint64_t seed, const McOptions& options = {});

struct ScalingRung {
    int N = 0;
    double b = 0.0;
    double nb_var = 0.0;  // Nb·Var{g(z)} with Var = E|g|² − |Eg|²
    double stderr_value = 0.0;
};

// Ladder of specs (≥ 3), one Nb·Var rung each; z must lie in Λ_η.
std::vector<ScalingRung> variance_scaling_experiment(const std::vector<EnsembleSpec>& ladder,
                                                     std::complex<double> z, std::uint64_t R,
                                                     std::uint64_t seed,
                                                     const McOptions& options = {});

struct CorrelationComparison {
    std::complex<double> nb_cov;  // Nb·Ĉ(z₁,z₂)
    double nb_cov_stderr = 0.0;
    std::complex<double> t_theory;      // T(z₁,z₂), canonical form
    std::complex<double> difference;    // Nb·Ĉ − T
    double diff_in_stderr = 0.0;        // |difference| / stderr
    bool stderr_target_met = false;     // stderr ≤ 20% of |T|
    McReport stats;
};

CorrelationComparison correlation_vs_theory(const EnsembleSpec& spec, std::complex<double> z1,
                                            std::complex<double> z2, std::uint64_t R,
                                            std::uint64_t seed, const McOptions& options = {});

}  // namespace lrp
