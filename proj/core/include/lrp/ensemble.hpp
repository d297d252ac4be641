// The long-range percolation ensemble: symmetric N×N matrices with entries
// a(i,j)·d_b(i,j)/√b, where d_b is a Bernoulli mask of success probability
// ψ((i−j)/b) and a(i,j) are i.i.d. symmetric variables (diagonal scaled by
// √2 so that E{a^{2m}} = V_{2m}(1+δ_{ij})^m holds for every m).
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lrp/profile.hpp"

namespace lrp {

struct EnsembleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class EntryKind { gaussian, rademacher, uniform };

std::string to_string(EntryKind kind);
EntryKind parse_entry_kind(std::string_view text);

struct EntryDistribution {
    EntryKind kind = EntryKind::gaussian;
    double v = 1.0;  // off-diagonal standard deviation scale

    double v2() const { return v * v; }
    double V4() const {
        const double v4 = v2() * v2();
        switch (kind) {
            case EntryKind::gaussian: return 3.0 * v4;
            case EntryKind::rademacher: return v4;
            case EntryKind::uniform: return 1.8 * v4;
        }
        return 0.0;
    }
    double V6() const {
        const double v6 = v2() * v2() * v2();
        switch (kind) {
            case EntryKind::gaussian: return 15.0 * v6;
            case EntryKind::rademacher: return v6;
            case EntryKind::uniform: return 27.0 / 7.0 * v6;
        }
        return 0.0;
    }
};

struct EnsembleSpec {
    int n = 0;  // N = 2n+1, indices |i|,|j| <= n
    double b = 1.0;
    EntryDistribution dist;
    Profile profile = Profile::gaussian();
    std::optional<double> alpha_check;

    int N() const { return 2 * n + 1; }
    void validate() const;
    // Warnings, not errors: b outside [1, N], or b outside [n^{1/3}, n] when
    // alpha_check is requested.
    std::vector<std::string> regime_warnings() const;
};

struct SampledMatrix {
    Eigen::MatrixXd h;
    std::uint64_t seed = 0;
    std::uint64_t realization_index = 0;
};

// Pure in (spec, seed, realization_index); bit-identical output regardless
// of evaluation order or thread count.
SampledMatrix sample_matrix(const EnsembleSpec& spec, std::uint64_t seed,
                            std::uint64_t realization_index);

struct MomentCheck {
    std::string name;
    double empirical = 0.0;
    double target = 0.0;
    double z = 0.0;
    bool flagged = false;  // |z| > 4
};

struct MomentReport {
    std::vector<MomentCheck> checks;
    std::uint64_t draws = 0;
    std::uint64_t R = 0;
};

// Empirical moments of the raw a-draws and the mask density against their
// targets, over R realizations of the full index range.
MomentReport empirical_moment_report(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t R);

}  // namespace lrp
