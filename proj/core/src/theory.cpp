#include "lrp/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lrp/quadrature.hpp"

namespace lrp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinImZ = 1e-8;  // public compute_Q guard

using Complex = std::complex<double>;

// ∫_ℝ ψ̃(p)/(1−cψ̃(p))² dp with the first two terms of the geometric
// expansion taken exactly:
//   ∫ψ̃ = 2πψ(0),   ∫ψ̃² = 2π∫ψ²  (Plancherel),
//   remainder R(p) = c²ψ̃³(3−2cψ̃)/(1−cψ̃)²  decays like ψ̃³.
// The remainder is integrated adaptively with panel seeds at the pinch scale
// p* where |1−cψ̃| doubles; p* shrinks with |1−c| in the boundary regime.
Complex q_integrand_integral(const Profile& profile, Complex c) {
    const Complex exact = 2.0 * kPi * profile.psi0() +
                          2.0 * c * (2.0 * kPi * profile.moments().int_psi_sq);
    if (std::abs(c) == 0.0) return exact;

    auto remainder = [&profile, c](double p) -> Complex {
        const double pt = profile.psi_tilde(p);
        const Complex cp = c * pt;
        const Complex denom = 1.0 - cp;
        return cp * cp * pt * (3.0 - 2.0 * cp) / (denom * denom);
    };

    double nu = 2.0;
    double c1 = 0.5;
    double delta = 1.0;
    try {
        const ExpansionData& exp_data = profile.expansion();
        nu = exp_data.nu;
        c1 = exp_data.c1;
        delta = exp_data.radius;
    } catch (const ProfileError&) {
        // power_law ν=2 boundary case: generic seeding is good enough here.
    }

    std::vector<double> seeds{delta, 1.0, 4.0, 16.0};
    const double gap = std::abs(1.0 - c);
    if (gap < 0.9) {
        double pinch = std::pow(gap / (std::max(std::abs(c), 0.1) * c1), 1.0 / nu);
        pinch = std::clamp(pinch, 1e-12, 10.0);
        for (double f : {0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) seeds.push_back(pinch * f);
    }

    const double body_end = 64.0;
    const QuadratureOptions opts{1e-10, 1e-13, 400000};
    const Complex body = integrate<Complex>(remainder, 0.0, body_end, opts, seeds);
    const Complex tail =
        integrate_half_line<Complex>(remainder, body_end, opts, 1e-13, body_end, 40);
    return exact + 2.0 * (body + tail);
}

struct TParts {
    Complex w1, w2, q, denom;
};

TParts t_parts(const TheoryContext& ctx, Complex z1, Complex z2) {
    const double v2 = ctx.v * ctx.v;
    TParts parts;
    parts.w1 = solve_w(ctx, z1);
    parts.w2 = solve_w(ctx, z2);
    const Complex w1 = parts.w1, w2 = parts.w2;
    parts.denom = (1.0 - v2 * w1 * w1) * (1.0 - v2 * w2 * w2);
    const Complex integral = q_integrand_integral(ctx.profile, v2 * w1 * w2);
    parts.q = v2 * w1 * w1 * w2 * w2 / (kPi * parts.denom) * integral;
    return parts;
}

TValue t_from_parts(const TheoryContext& ctx, const TParts& parts) {
    const double v2 = ctx.v * ctx.v;
    const DeltaPair delta = compute_delta(ctx);
    const Complex w3 = parts.w1 * parts.w1 * parts.w1 * parts.w2 * parts.w2 * parts.w2;
    TValue t;
    t.value = parts.q + 2.0 * delta.delta * w3 / parts.denom;
    t.v4_variant = parts.q + 2.0 * delta.delta * v2 * v2 * w3 / parts.denom;
    t.discrepancy = std::abs(t.value - t.v4_variant);
    return t;
}

// Polynomial extrapolation of (eps_k, value_k) to eps = 0 (Neville tableau).
double extrapolate_to_zero(const std::vector<double>& eps, std::vector<double> value) {
    const std::size_t m = eps.size();
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = 0; i + level < m; ++i)
            value[i] = (eps[i] * value[i + 1] - eps[i + level] * value[i]) /
                       (eps[i] - eps[i + level]);
    return value[0];
}

}  // namespace

std::complex<double> solve_w(double v, std::complex<double> z) {
    if (z.imag() == 0.0) throw TheoryError("solve_w requires Im z != 0");
    const double v2 = v * v;
    const Complex disc = std::sqrt(z * z - 4.0 * v2);
    // Root pair of v²w² + zw + 1; q chosen so z and σ·disc do not cancel,
    // the second root recovered from w₊w₋ = 1/v².
    const double sign = (z.real() * disc.real() + z.imag() * disc.imag()) >= 0.0 ? 1.0 : -1.0;
    const Complex q = -0.5 * (z + sign * disc);
    const Complex root1 = q / v2;
    const Complex root2 = 1.0 / q;
    const Complex w = (root1.imag() * z.imag() > 0.0) ? root1 : root2;
    if (!(w.imag() * z.imag() > 0.0))
        throw TheoryError("solve_w: branch selection failed (degenerate input?)");
    return w;
}

std::complex<double> solve_w(const TheoryContext& ctx, std::complex<double> z) {
    return solve_w(ctx.v, z);
}

double semicircle_density(const TheoryContext& ctx, double lambda) {
    const double v2 = ctx.v * ctx.v;
    const double disc = 4.0 * v2 - lambda * lambda;
    if (disc <= 0.0) return 0.0;
    return std::sqrt(disc) / (2.0 * kPi * v2);
}

double semicircle_cdf(const TheoryContext& ctx, double lambda) {
    const double two_v = 2.0 * ctx.v;
    if (lambda <= -two_v) return 0.0;
    if (lambda >= two_v) return 1.0;
    const double v2 = ctx.v * ctx.v;
    return 0.5 + lambda * std::sqrt(4.0 * v2 - lambda * lambda) / (4.0 * kPi * v2) +
           std::asin(lambda / two_v) / kPi;
}

BoundaryValue w_boundary(const TheoryContext& ctx, double lambda, int side) {
    const double two_v = 2.0 * ctx.v;
    if (!(std::abs(lambda) < two_v))
        throw TheoryError("w_boundary requires |lambda| < 2v (bulk)");
    if (side != 1 && side != -1) throw TheoryError("side must be +1 or -1");
    const double v2 = ctx.v * ctx.v;
    BoundaryValue bv;
    bv.lambda = lambda;
    bv.tau = -lambda / (2.0 * v2);
    bv.rho = std::sqrt(4.0 * v2 - lambda * lambda) / (2.0 * v2);
    bv.side = side;
    return bv;
}

DeltaPair compute_delta(const TheoryContext& ctx) {
    const ProfileMoments& m = ctx.profile.moments();
    const double v4 = ctx.v * ctx.v * ctx.v * ctx.v;
    return {ctx.V4 * m.int_psi - 3.0 * v4 * m.int_psi_sq,
            (ctx.V4 - 3.0 * v4) * m.int_psi_sq};
}

std::complex<double> compute_Q(const TheoryContext& ctx, std::complex<double> z1,
                               std::complex<double> z2) {
    if (std::abs(z1.imag()) < kMinImZ || std::abs(z2.imag()) < kMinImZ)
        throw TheoryError("compute_Q: |Im z| < 1e-8; use compute_xi for boundary values");
    return t_parts(ctx, z1, z2).q;
}

TValue compute_T(const TheoryContext& ctx, std::complex<double> z1, std::complex<double> z2) {
    if (std::abs(z1.imag()) < kMinImZ || std::abs(z2.imag()) < kMinImZ)
        throw TheoryError("compute_T: |Im z| < 1e-8; use compute_xi for boundary values");
    return t_from_parts(ctx, t_parts(ctx, z1, z2));
}

double compute_xi(const TheoryContext& ctx, double lambda1, double lambda2) {
    const double two_v = 2.0 * ctx.v;
    if (!(std::abs(lambda1) < two_v && std::abs(lambda2) < two_v))
        throw TheoryError("compute_xi requires both lambdas in the bulk");
    if (lambda1 == lambda2) throw TheoryError("compute_xi requires lambda1 != lambda2");

    const double separation = std::abs(lambda1 - lambda2);
    std::vector<double> eps_values, xi_values;
    for (double factor : {1e-3, 1e-4, 1e-5}) {
        const double eps = separation * factor;
        // Conjugation symmetry collapses the four (δ₁,δ₂) terms to two:
        // Ξ(ε) = ½[Re T(λ₁+iε, λ₂−iε) − Re T(λ₁+iε, λ₂+iε)].
        const TValue t_pp = t_from_parts(
            ctx, t_parts(ctx, {lambda1, eps}, {lambda2, eps}));
        const TValue t_pm = t_from_parts(
            ctx, t_parts(ctx, {lambda1, eps}, {lambda2, -eps}));
        eps_values.push_back(eps);
        xi_values.push_back(0.5 * (t_pm.value.real() - t_pp.value.real()));
    }
    const double full = extrapolate_to_zero(eps_values, xi_values);
    const double partial = extrapolate_to_zero({eps_values[1], eps_values[2]},
                                               {xi_values[1], xi_values[2]});
    if (std::abs(full - partial) > 0.01 * std::abs(full))
        throw TheoryError("compute_xi: Richardson extrapolation did not converge");
    return full;
}

double compute_B(double nu, double c1) {
    if (!(nu > 1.0)) throw TheoryError("compute_B requires nu > 1");
    if (!(c1 > 0.0)) throw TheoryError("compute_B requires c1 > 0");
    const double a = 2.0 * nu;
    const QuadratureOptions opts{1e-12, 1e-15, 100000};
    auto f1 = [a](double s) { return 1.0 / (1.0 + std::pow(s, a)); };
    auto f2 = [a](double s) { const double d = 1.0 + std::pow(s, a); return 1.0 / (d * d); };
    const double i1 = integrate(f1, 0.0, 1.0, opts) + integrate_tail_inverse(f1, 1.0, opts);
    const double i2 = integrate(f2, 0.0, 1.0, opts) + integrate_tail_inverse(f2, 1.0, opts);
    return (i1 - 2.0 * i2) / (2.0 * kPi * std::pow(c1, 1.0 / nu));
}

double compute_B_closed(double nu, double c1) {
    if (!(nu > 1.0)) throw TheoryError("compute_B_closed requires nu > 1");
    if (!(c1 > 0.0)) throw TheoryError("compute_B_closed requires c1 > 0");
    const double a = 2.0 * nu;
    // ∫₀^∞ dx/(1+x^a)^m = Γ(1/a)Γ(m−1/a)/(aΓ(m))
    const double i1 = std::tgamma(1.0 / a) * std::tgamma(1.0 - 1.0 / a) / a;
    const double i2 = std::tgamma(1.0 / a) * std::tgamma(2.0 - 1.0 / a) / a;
    return (i1 - 2.0 * i2) / (2.0 * kPi * std::pow(c1, 1.0 / nu));
}

ExponentFit fit_loglog(const std::vector<double>& separations,
                       const std::vector<double>& values) {
    if (separations.size() != values.size())
        throw TheoryError("fit_loglog: length mismatch");
    if (separations.size() < 4)
        throw TheoryError("scaling fit requires at least 4 separations");
    const auto [lo, hi] = std::minmax_element(separations.begin(), separations.end());
    if (!(*lo > 0.0) || std::log10(*hi / *lo) < 2.0)
        throw TheoryError("scaling fit requires separations spanning >= 2 decades");
    const bool all_positive =
        std::all_of(values.begin(), values.end(), [](double x) { return x > 0.0; });
    const bool all_negative =
        std::all_of(values.begin(), values.end(), [](double x) { return x < 0.0; });
    if (!all_positive && !all_negative)
        throw TheoryError("scaling fit: Xi changes sign across the range, fit aborted");

    ExponentFit fit;
    fit.separations = separations;
    fit.xi = values;
    const std::size_t m = fit.xi.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(fit.separations[i]);
        const double y = std::log(std::abs(fit.xi[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    fit.slope = (m * sxy - sx * sy) / denom;
    const double intercept = (sy - fit.slope * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double resid = std::log(std::abs(fit.xi[i])) -
                             (intercept + fit.slope * std::log(fit.separations[i]));
        rss += resid * resid;
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(resid));
    }
    if (m > 2) {
        const double sigma2 = rss / static_cast<double>(m - 2);
        fit.slope_stderr = std::sqrt(sigma2 * m / denom);
    }
    return fit;
}

ExponentFit fit_scaling_exponent(const TheoryContext& ctx, double lambda_center,
                                 const std::vector<double>& separations) {
    std::vector<double> xi_values;
    xi_values.reserve(separations.size());
    for (double s : separations)
        xi_values.push_back(compute_xi(ctx, lambda_center + 0.5 * s, lambda_center - 0.5 * s));
    return fit_loglog(separations, xi_values);
}

}  // namespace lrp
