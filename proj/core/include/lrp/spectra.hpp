// Spectra of sampled matrices: eigenvalues, the normalized counting function
// σ_n(λ), resolvent traces g(z) = N^{-1}Tr(H−z)^{-1}, and numeric validators
// for the resolvent identity and its derivative formula.
#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lrp {

struct SpectraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectralSample {
    std::vector<double> eigenvalues;  // sorted ascending, size N = 2n+1
    int n = 0;
    std::uint64_t seed = 0;
    std::uint64_t realization_index = 0;
};

struct ResolventTrace {
    std::complex<double> z;
    std::complex<double> g;
    // Set when the caller supplied the Λ_η threshold η = 2v+1.
    std::optional<bool> in_lambda_eta;
};

// Dense symmetric eigensolve (eigenvalues only, ascending). Throws
// SpectraError on non-convergence of the implicit-shift iteration.
SpectralSample eigenvalues_symmetric(const Eigen::MatrixXd& matrix);

// σ_n(λ) = N^{-1}·#{λ_j ≤ λ}, right-continuous, by binary search.
double counting_function(const SpectralSample& sample, double lambda);

// g(z) = N^{-1} Σ_k (λ_k − z)^{-1}; requires Im z ≠ 0.
ResolventTrace resolvent_trace(const SpectralSample& sample, std::complex<double> z,
                               std::optional<double> eta = std::nullopt);

// Max elementwise residual of
//   (h−z)^{-1} = (h̃−z)^{-1} − (h−z)^{-1}(h−h̃)(h̃−z)^{-1}
// evaluated via dense complex solves.
double check_resolvent_identity(const Eigen::MatrixXd& h, const Eigen::MatrixXd& h_tilde,
                                std::complex<double> z);

// Max deviation over (s,t) between the analytic derivative
//   ∂G(s,t)/∂h(j,k) = −[G(s,j)G(k,t) + G(s,k)G(j,t)]/(1+δ_{jk})
// and a central finite difference that perturbs h(j,k) and h(k,j) together
// (step 1e−6·max(1,|h(j,k)|)).
double check_resolvent_derivative(const Eigen::MatrixXd& h, std::complex<double> z, int j, int k);

}  // namespace lrp
