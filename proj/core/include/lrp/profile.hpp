// Connectivity profiles ψ(t): the five canonical families, their Fourier
// transforms ψ̃(p), integral moments, and the small-p expansion
// ψ̃(p) = 1 − c₁|p|^ν + o(|p|^ν) that controls the universality class.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lrp {

struct ProfileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProfileKind { gaussian, exponential, indicator, stable, power_law };

std::string to_string(ProfileKind kind);

// Decay exponent ν, coefficient c₁ and a radius |p| ≤ delta on which the
// truncated expansion is a good approximation.
struct ExpansionData {
    double nu = 0.0;
    double c1 = 0.0;
    double radius = 0.0;
};

struct ProfileMoments {
    double int_psi = 0.0;
    double int_psi_sq = 0.0;
    double int_sqrt_psi = 0.0;
    double second_moment = 0.0;  // +inf when !second_moment_finite
    bool second_moment_finite = true;
};

// Immutable after construction; concurrent reads are safe.
//
// Canonical normalizations (all have ∫ψ = 1):
//   gaussian     ψ(t) = exp(−πt²)
//   exponential  ψ(t) = ½ exp(−|t|)
//   indicator    ψ(t) = 1 on (−½, ½), else 0
//   stable(ν)    ψ̃(p) = exp(−|p|^ν), ψ by numerical Fourier inversion
//   power_law(ν) ψ(t) = c/(1 + |t|^{1+ν}), c fixed by normalization
//
// The indicator family is discontinuous (continuous() == false). It is kept
// because it reproduces the band-matrix mask; callers that require the
// continuity hypothesis can check the flag.
class Profile {
public:
    static Profile gaussian();
    static Profile exponential();
    static Profile indicator();
    static Profile stable(double nu);     // ν ∈ (1, 2]
    static Profile power_law(double nu);  // ν > 1
    static Profile make(ProfileKind kind, std::optional<double> nu = std::nullopt);
    // Accepts "gaussian", "stable:nu=1.5", "power_law:nu=2.5", ...
    static Profile parse(std::string_view text);

    ProfileKind kind() const { return kind_; }
    std::optional<double> shape_nu() const;
    bool continuous() const { return kind_ != ProfileKind::indicator; }
    std::string name() const;

    // Pointwise profile value; for stable(ν) this is the tabulated linear
    // interpolant (|t| ≤ 64) continued by the tail series beyond.
    double psi(double t) const;

    // Fourier transform ψ̃(p) = ∫ψ(t)e^{ipt}dt, real and even; closed forms
    // where available, oscillatory-aware quadrature for power_law.
    double psi_tilde(double p) const;

    // 1 − ψ̃(p) without cancellation near p = 0.
    double one_minus_psi_tilde(double p) const;

    // ψ(0) of the underlying law (closed form; for stable this is the exact
    // value Γ(1+1/ν)/π, not the tabulated one).
    double psi0() const;

    const ProfileMoments& moments() const { return moments_; }
    // Throws ProfileError for profiles outside the expansion hypothesis
    // (power_law with ν = 2 sits on a log-correction boundary).
    const ExpansionData& expansion() const;

private:
    struct StableTable {
        std::vector<double> values;  // ψ at t_k = k·step, k = 0..count-1
        double step = 0.0;
        double t_max = 0.0;
        double scale = 1.0;  // applied to the tail series as well
        double nu = 0.0;
    };

    Profile() = default;

    ProfileKind kind_ = ProfileKind::gaussian;
    double nu_ = 0.0;  // shape parameter for stable/power_law
    double power_law_norm_ = 0.0;
    std::shared_ptr<const StableTable> table_;
    ProfileMoments moments_;
    std::optional<ExpansionData> expansion_;
    std::string expansion_error_;

    void validate() const;
    double psi_tilde_power_law(double p) const;
    double one_minus_psi_tilde_power_law(double p) const;
};

// Spec'd operation names, thin wrappers over the class interface.
inline Profile make_profile(ProfileKind kind, std::optional<double> nu = std::nullopt) {
    return Profile::make(kind, nu);
}
inline double psi_tilde(const Profile& profile, double p) { return profile.psi_tilde(p); }
inline ProfileMoments profile_moments(const Profile& profile) { return profile.moments(); }
inline ExpansionData expansion_data(const Profile& profile) { return profile.expansion(); }

}  // namespace lrp
