#include "lrp/spectra.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace lrp {

SpectralSample eigenvalues_symmetric(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols()) throw SpectraError("matrix must be square");
    if (!matrix.allFinite()) throw SpectraError("matrix has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw SpectraError("implicit-shift iteration did not converge at N=" +
                           std::to_string(matrix.rows()));
    SpectralSample sample;
    sample.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + matrix.rows());
    std::sort(sample.eigenvalues.begin(), sample.eigenvalues.end());
    sample.n = static_cast<int>((matrix.rows() - 1) / 2);
    return sample;
}

double counting_function(const SpectralSample& sample, double lambda) {
    const auto& ev = sample.eigenvalues;
    if (ev.empty()) throw SpectraError("empty spectral sample");
    const auto it = std::upper_bound(ev.begin(), ev.end(), lambda);
    return static_cast<double>(it - ev.begin()) / static_cast<double>(ev.size());
}

ResolventTrace resolvent_trace(const SpectralSample& sample, std::complex<double> z,
                               std::optional<double> eta) {
    if (z.imag() == 0.0) throw SpectraError("resolvent trace requires Im z != 0");
    if (sample.eigenvalues.empty()) throw SpectraError("empty spectral sample");
    std::complex<double> sum = 0.0;
    for (double lambda : sample.eigenvalues) sum += 1.0 / (lambda - z);
    ResolventTrace trace;
    trace.z = z;
    trace.g = sum / static_cast<double>(sample.eigenvalues.size());
    if (eta) trace.in_lambda_eta = std::abs(z.imag()) >= *eta;
    return trace;
}

double check_resolvent_identity(const Eigen::MatrixXd& h, const Eigen::MatrixXd& h_tilde,
                                std::complex<double> z) {
    if (z.imag() == 0.0) throw SpectraError("resolvent identity requires Im z != 0");
    const auto N = h.rows();
    if (h.cols() != N || h_tilde.rows() != N || h_tilde.cols() != N)
        throw SpectraError("matrices must be square and of equal size");
    using CMat = Eigen::MatrixXcd;
    const CMat id = CMat::Identity(N, N);
    const CMat g = (h.cast<std::complex<double>>() - z * id).partialPivLu().solve(id);
    const CMat g_tilde = (h_tilde.cast<std::complex<double>>() - z * id).partialPivLu().solve(id);
    const CMat residual = g - g_tilde + g * (h - h_tilde).cast<std::complex<double>>() * g_tilde;
    return residual.cwiseAbs().maxCoeff();
}

double check_resolvent_derivative(const Eigen::MatrixXd& h, std::complex<double> z, int j, int k) {
    if (z.imag() == 0.0) throw SpectraError("resolvent derivative requires Im z != 0");
    const auto N = h.rows();
    if (j < 0 || k < 0 || j >= N || k >= N) throw SpectraError("index out of range");
    using CMat = Eigen::MatrixXcd;
    const CMat id = CMat::Identity(N, N);
    auto resolvent = [&](const Eigen::MatrixXd& m) -> CMat {
        return (m.cast<std::complex<double>>() - z * id).partialPivLu().solve(id);
    };
    const CMat g = resolvent(h);
    const double delta_jk = (j == k) ? 1.0 : 0.0;
    CMat analytic(N, N);
    for (Eigen::Index s = 0; s < N; ++s)
        for (Eigen::Index t = 0; t < N; ++t)
            analytic(s, t) = -(g(s, j) * g(k, t) + g(s, k) * g(j, t)) / (1.0 + delta_jk);

    const double step = 1e-6 * std::max(1.0, std::abs(h(j, k)));
    Eigen::MatrixXd h_plus = h, h_minus = h;
    h_plus(j, k) += step;
    h_minus(j, k) -= step;
    if (j != k) {
        h_plus(k, j) += step;
        h_minus(k, j) -= step;
    }
    const CMat finite_diff = (resolvent(h_plus) - resolvent(h_minus)) / (2.0 * step);
    return (analytic - finite_diff).cwiseAbs().maxCoeff();
}

}  // namespace lrp
