#include "lrp/ensemble.hpp"

#include <cmath>

#include "lrp/rng.hpp"

namespace lrp {
namespace {

// One a-draw from the entry law. Stream discipline: the mask uniform is
// always consumed first, then the variate's uniforms.
double draw_entry(PairStream& stream, const EntryDistribution& dist) {
    switch (dist.kind) {
        case EntryKind::gaussian:
            return dist.v * stream.normal();
        case EntryKind::rademacher:
            return stream.uniform01() < 0.5 ? dist.v : -dist.v;
        case EntryKind::uniform: {
            const double root3 = 1.7320508075688772;
            return dist.v * root3 * (2.0 * stream.uniform01() - 1.0);
        }
    }
    return 0.0;
}

}  // namespace

std::string to_string(EntryKind kind) {
    switch (kind) {
        case EntryKind::gaussian: return "gaussian";
        case EntryKind::rademacher: return "rademacher";
        case EntryKind::uniform: return "uniform";
    }
    return "?";
}

EntryKind parse_entry_kind(std::string_view text) {
    for (EntryKind k : {EntryKind::gaussian, EntryKind::rademacher, EntryKind::uniform})
        if (text == to_string(k)) return k;
    throw EnsembleError("unknown entry distribution '" + std::string(text) + "'");
}

void EnsembleSpec::validate() const {
    if (n < 0) throw EnsembleError("n must be nonnegative");
    if (!(b >= 1.0)) throw EnsembleError("b must satisfy b >= 1");
    if (!(dist.v > 0.0)) throw EnsembleError("entry scale v must be positive");
}

std::vector<std::string> EnsembleSpec::regime_warnings() const {
    std::vector<std::string> warnings;
    if (b > N())
        warnings.push_back("b=" + std::to_string(b) + " exceeds N=" + std::to_string(N()));
    if (alpha_check && n > 0) {
        const double lo = std::cbrt(static_cast<double>(n));
        if (b < lo || b > static_cast<double>(n))
            warnings.push_back("b=" + std::to_string(b) + " outside the regime n^{1/3} <= b <= n (n=" +
                               std::to_string(n) + ")");
    }
    return warnings;
}

SampledMatrix sample_matrix(const EnsembleSpec& spec, std::uint64_t seed,
                            std::uint64_t realization_index) {
    spec.validate();
    const int N = spec.N();
    const double inv_sqrt_b = 1.0 / std::sqrt(spec.b);
    const double sqrt2 = std::sqrt(2.0);

    SampledMatrix out;
    out.seed = seed;
    out.realization_index = realization_index;
    out.h.setZero(N, N);

    // ψ((i−j)/b) depends only on the index distance.
    std::vector<double> connect_by_distance(N);
    for (int d = 0; d < N; ++d) connect_by_distance[d] = spec.profile.psi(d / spec.b);

    for (int r = 0; r < N; ++r) {
        for (int c = r; c < N; ++c) {
            PairStream stream(seed, realization_index, static_cast<std::uint32_t>(r),
                              static_cast<std::uint32_t>(c));
            const double mask_u = stream.uniform01();
            const double connect = connect_by_distance[c - r];
            if (mask_u >= connect) continue;
            double a = draw_entry(stream, spec.dist);
            if (r == c) a *= sqrt2;
            const double value = a * inv_sqrt_b;
            out.h(r, c) = value;
            out.h(c, r) = value;
        }
    }
    return out;
}

MomentReport empirical_moment_report(const EnsembleSpec& spec, std::uint64_t seed,
                                     std::uint64_t R) {
    spec.validate();
    if (R < 100) throw EnsembleError("empirical_moment_report requires R >= 100");
    const int N = spec.N();

    double s2 = 0, s4 = 0, s8 = 0;        // off-diagonal a powers
    double d2 = 0, d4 = 0;                // diagonal a powers
    double mask_sum = 0;
    double mask_mean_target = 0, mask_var_target = 0;
    std::uint64_t off_count = 0, diag_count = 0, mask_count = 0;

    for (std::uint64_t rep = 0; rep < R; ++rep) {
        for (int r = 0; r < N; ++r) {
            for (int c = r; c < N; ++c) {
                PairStream stream(seed, rep, static_cast<std::uint32_t>(r),
                                  static_cast<std::uint32_t>(c));
                const double mask_u = stream.uniform01();
                const double connect = spec.profile.psi(static_cast<double>(r - c) / spec.b);
                mask_sum += mask_u < connect ? 1.0 : 0.0;
                mask_mean_target += connect;
                mask_var_target += connect * (1.0 - connect);
                ++mask_count;
                const double a = draw_entry(stream, spec.dist);
                if (r == c) {
                    const double ad = a * std::sqrt(2.0);
                    d2 += ad * ad;
                    d4 += ad * ad * ad * ad;
                    ++diag_count;
                } else {
                    const double a2 = a * a;
                    s2 += a2;
                    s4 += a2 * a2;
                    s8 += a2 * a2 * a2 * a2;
                    ++off_count;
                }
            }
        }
    }

    auto zscore = [](double mean, double target, double variance_of_mean) {
        const double se = std::sqrt(std::max(variance_of_mean, 1e-300));
        return (mean - target) / se;
    };

    MomentReport report;
    report.draws = mask_count;
    report.R = R;
    const double m2 = s2 / off_count;
    const double m4 = s4 / off_count;
    const double m8 = s8 / off_count;
    const double dm2 = d2 / diag_count;
    const double dm4 = d4 / diag_count;
    const double mask_mean = mask_sum / mask_count;
    const double mask_target = mask_mean_target / mask_count;

    MomentCheck c2{"offdiag E{a^2}", m2, spec.dist.v2(),
                   zscore(m2, spec.dist.v2(), (m4 - m2 * m2) / off_count), false};
    MomentCheck c4{"offdiag E{a^4}", m4, spec.dist.V4(),
                   zscore(m4, spec.dist.V4(), (m8 - m4 * m4) / off_count), false};
    MomentCheck cd{"diag E{a^2}", dm2, 2.0 * spec.dist.v2(),
                   zscore(dm2, 2.0 * spec.dist.v2(), (dm4 - dm2 * dm2) / diag_count), false};
    MomentCheck cm{"mask density", mask_mean, mask_target,
                   zscore(mask_mean, mask_target,
                          mask_var_target / (static_cast<double>(mask_count) * mask_count)),
                   false};
    for (MomentCheck* check : {&c2, &c4, &cd, &cm}) {
        check->flagged = std::abs(check->z) > 4.0;
        report.checks.push_back(*check);
    }
    return report;
}

}  // namespace lrp
