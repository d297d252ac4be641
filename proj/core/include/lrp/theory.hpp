// Closed-form predictions: the Stieltjes transform w(z) of the semicircle
// law, its boundary values τ(λ)+iρ(λ), the fourth-cumulant correction Δ, the
// leading correlation term T = Q + 2Δw₁³w₂³/((1−v²w₁²)(1−v²w₂²)), the
// density-density combination Ξ, its universal constant B_ν(c₁), and the
// |λ₁−λ₂|^{−(2−1/ν)} scaling-exponent fit.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "lrp/ensemble.hpp"
#include "lrp/profile.hpp"

namespace lrp {

struct TheoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TheoryContext {
    double v = 1.0;
    double V4 = 3.0;  // fourth moment of the off-diagonal entry law
    Profile profile = Profile::gaussian();

    double eta() const { return 2.0 * v + 1.0; }  // Λ_η threshold

    static TheoryContext from(const EntryDistribution& dist, const Profile& profile) {
        return {dist.v, dist.V4(), profile};
    }
};

inline bool in_lambda_eta(const TheoryContext& ctx, std::complex<double> z) {
    return std::abs(z.imag()) >= ctx.eta();
}

// w(λ ± i0) = τ(λ) ± iρ(λ) in the bulk |λ| < 2v.
struct BoundaryValue {
    double lambda = 0.0;
    double tau = 0.0;
    double rho = 0.0;
    int side = +1;
    std::complex<double> w() const { return {tau, side > 0 ? rho : -rho}; }
};

struct DeltaPair {
    double delta = 0.0;       // V₄∫ψ − 3v⁴∫ψ²  (percolation form)
    double delta_band = 0.0;  // (V₄ − 3v⁴)∫ψ²  (band-matrix variant)
};

// Both bookkeeping forms of T circulate: the canonical one and a rewrite
// carrying an extra v⁴ on the Δ-term. compute_T returns both and their
// distance, so the choice stays visible. At v = 1 they coincide.
struct TValue {
    std::complex<double> value;       // canonical: Q + 2Δw₁³w₂³/D
    std::complex<double> v4_variant;  // Q + 2Δv⁴w₁³w₂³/D
    double discrepancy = 0.0;         // |value − v4_variant|
};

struct ExponentFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double max_abs_residual = 0.0;
    std::vector<double> separations;
    std::vector<double> xi;  // signed values; the fit runs on log|Ξ|
};

// Herglotz root of v²w² + zw + 1 = 0 (equivalently w = 1/(−z − v²w)),
// selected by Im w · Im z > 0. Requires Im z ≠ 0.
std::complex<double> solve_w(const TheoryContext& ctx, std::complex<double> z);
std::complex<double> solve_w(double v, std::complex<double> z);

// ρ_sc(λ) = √(4v²−λ²)/(2πv²) on |λ| ≤ 2v, else 0.
double semicircle_density(const TheoryContext& ctx, double lambda);
// Its CDF (used for binned comparisons against empirical histograms).
double semicircle_cdf(const TheoryContext& ctx, double lambda);

// Requires |λ| < 2v.
BoundaryValue w_boundary(const TheoryContext& ctx, double lambda, int side);

DeltaPair compute_delta(const TheoryContext& ctx);

// Q(z₁,z₂) = v²w₁²w₂²/(π(1−v²w₁²)(1−v²w₂²)) ∫ ψ̃(p)/[1−v²w₁w₂ψ̃(p)]² dp.
// Requires |Im z| ≥ 1e−8 on the public path; the Ξ evaluation reaches closer
// to the axis through the dedicated boundary seeding internally.
std::complex<double> compute_Q(const TheoryContext& ctx, std::complex<double> z1,
                               std::complex<double> z2);

TValue compute_T(const TheoryContext& ctx, std::complex<double> z1, std::complex<double> z2);

// Prefactor-free combination −(1/4)Σ_{δ₁δ₂} δ₁δ₂ T(λ₁+iδ₁0, λ₂+iδ₂0),
// evaluated at imaginary offsets ε = |λ₁−λ₂|·{1e−3,1e−4,1e−5} and
// Richardson-extrapolated to ε → 0. Requires λ₁ ≠ λ₂, both in the bulk.
// Throws TheoryError when successive extrapolants differ by more than 1%.
double compute_xi(const TheoryContext& ctx, double lambda1, double lambda2);

// B_ν(c₁) = (1/(2πc₁^{1/ν}))[∫₀^∞ ds/(1+s^{2ν}) − 2∫₀^∞ ds/(1+s^{2ν})²],
// by adaptive quadrature; compute_B_closed gives the Beta-function form
// ∫₀^∞ dx/(1+x^a)^m via Γ(1/a)Γ(m−1/a)/(aΓ(m)).
double compute_B(double nu, double c1);
double compute_B_closed(double nu, double c1);

// Least-squares slope of log|values| vs log separations; requires equal
// lengths, ≥ 4 points spanning ≥ 2 decades and a constant sign.
ExponentFit fit_loglog(const std::vector<double>& separations,
                       const std::vector<double>& values);

// Evaluates Ξ at lambda_center ± s/2 for each separation and fits the slope.
ExponentFit fit_scaling_exponent(const TheoryContext& ctx, double lambda_center,
                                 const std::vector<double>& separations);

}  // namespace lrp
