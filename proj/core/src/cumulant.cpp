#include "lrp/cumulant.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "lrp/quadrature.hpp"

namespace lrp {
namespace {

constexpr double kRoot3 = 1.7320508075688772;

using Complex = std::complex<double>;

template <typename F>
Complex law_expectation(SymmetricLaw law, F&& f) {
    switch (law) {
        case SymmetricLaw::rademacher:
            return 0.5 * (f(1.0) + f(-1.0));
        case SymmetricLaw::uniform: {
            auto g = [&f](double x) { return f(x) / (2.0 * kRoot3); };
            return integrate<Complex>(g, -kRoot3, kRoot3, {1e-12, 1e-15, 100000});
        }
        case SymmetricLaw::gaussian: {
            const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
            auto g = [&f, norm](double x) { return f(x) * norm * std::exp(-0.5 * x * x); };
            return integrate<Complex>(g, -14.0, 14.0, {1e-12, 1e-14, 100000},
                                      {-8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0});
        }
    }
    throw CumulantError("unknown law");
}

}  // namespace

void MomentVector::validate() const {
    if (!(mu2 > 0.0)) throw CumulantError("MomentVector: mu2 must be positive");
    if (mu4 < mu2 * mu2) throw CumulantError("MomentVector: mu4 < mu2^2 violates Cauchy-Schwarz");
    if (mu6 < mu4 * mu2) throw CumulantError("MomentVector: mu6 < mu4*mu2 violates Cauchy-Schwarz");
}

CumulantVector cumulants_from_moments(const MomentVector& m) {
    m.validate();
    return {m.mu2, m.mu4 - 3.0 * m.mu2 * m.mu2,
            m.mu6 - 15.0 * m.mu4 * m.mu2 + 30.0 * m.mu2 * m.mu2 * m.mu2};
}

std::string to_string(SymmetricLaw law) {
    switch (law) {
        case SymmetricLaw::gaussian: return "gaussian";
        case SymmetricLaw::rademacher: return "rademacher";
        case SymmetricLaw::uniform: return "uniform";
    }
    return "?";
}

SymmetricLaw parse_symmetric_law(std::string_view text) {
    for (SymmetricLaw law :
         {SymmetricLaw::gaussian, SymmetricLaw::rademacher, SymmetricLaw::uniform})
        if (text == to_string(law)) return law;
    throw CumulantError("unknown law '" + std::string(text) + "'");
}

MomentVector law_moments(SymmetricLaw law) {
    switch (law) {
        case SymmetricLaw::gaussian: return {1.0, 3.0, 15.0};
        case SymmetricLaw::rademacher: return {1.0, 1.0, 1.0};
        case SymmetricLaw::uniform: return {1.0, 9.0 / 5.0, 27.0 / 7.0};
    }
    throw CumulantError("unknown law");
}

double law_abs_moment(SymmetricLaw law, int order) {
    if (order < 0 || order > 8) throw CumulantError("law_abs_moment supports orders 0..8");
    switch (law) {
        case SymmetricLaw::rademacher:
            return 1.0;
        case SymmetricLaw::uniform:
            return std::pow(kRoot3, order) / (order + 1.0);
        case SymmetricLaw::gaussian:
            // E|X|^m = 2^{m/2} Γ((m+1)/2)/√π
            return std::pow(2.0, 0.5 * order) * std::tgamma(0.5 * (order + 1)) /
                   std::sqrt(std::numbers::pi);
    }
    throw CumulantError("unknown law");
}

double law_support_bound(SymmetricLaw law) {
    switch (law) {
        case SymmetricLaw::gaussian: return std::numeric_limits<double>::infinity();
        case SymmetricLaw::rademacher: return 1.0;  // remainder points satisfy |x| <= |X| = 1
        case SymmetricLaw::uniform: return kRoot3;
    }
    throw CumulantError("unknown law");
}

TestFunction TestFunction::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty() || coeffs.size() > 9)
        throw CumulantError("polynomial test function supports degree 0..8");
    TestFunction f;
    f.kind_ = Kind::polynomial;
    f.coeffs_ = std::move(coeffs);
    f.name_ = "poly[";
    for (std::size_t k = 0; k < f.coeffs_.size(); ++k) {
        if (k) f.name_ += ',';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", f.coeffs_[k]);
        f.name_ += buf;
    }
    f.name_ += ']';
    return f;
}

TestFunction TestFunction::sine() {
    TestFunction f;
    f.kind_ = Kind::sine;
    f.name_ = "sin";
    return f;
}

TestFunction TestFunction::cis() {
    TestFunction f;
    f.kind_ = Kind::cis;
    f.name_ = "exp(ix)";
    return f;
}

std::complex<double> TestFunction::derivative(double x, int order) const {
    switch (kind_) {
        case Kind::polynomial: {
            // r-th derivative: Σ_k c_k · k!/(k−r)! · x^{k−r}
            double value = 0.0;
            double xpow = 1.0;
            for (std::size_t k = static_cast<std::size_t>(order); k < coeffs_.size(); ++k) {
                double factor = 1.0;
                for (int j = 0; j < order; ++j) factor *= static_cast<double>(k - j);
                value += coeffs_[k] * factor * xpow;
                xpow *= x;
            }
            return value;
        }
        case Kind::sine: {
            switch (order % 4) {
                case 0: return std::sin(x);
                case 1: return std::cos(x);
                case 2: return -std::sin(x);
                default: return -std::cos(x);
            }
        }
        case Kind::cis: {
            const Complex rot = std::pow(Complex(0.0, 1.0), order);
            return rot * std::exp(Complex(0.0, x));
        }
    }
    throw CumulantError("unknown test function kind");
}

double TestFunction::sup_abs_derivative(int order, double bound) const {
    switch (kind_) {
        case Kind::polynomial: {
            const int degree = static_cast<int>(coeffs_.size()) - 1;
            if (order > degree) return 0.0;
            if (std::isinf(bound)) {
                // Only the constant survives a finite sup over the real line.
                return (order == degree) ? std::abs(derivative(0.0, order).real())
                                         : std::numeric_limits<double>::infinity();
            }
            // Σ|c_k|·k!/(k−r)!·bound^{k−r}: a valid upper bound, exact for
            // monomials.
            double sup = 0.0;
            for (std::size_t k = static_cast<std::size_t>(order); k < coeffs_.size(); ++k) {
                double factor = 1.0;
                for (int j = 0; j < order; ++j) factor *= static_cast<double>(k - j);
                sup += std::abs(coeffs_[k]) * factor *
                       std::pow(bound, static_cast<double>(k) - order);
            }
            return sup;
        }
        case Kind::sine: {
            // Derivatives cycle through ±sin, ±cos; on |x| <= b the sine
            // branch is capped by sin(min(b, π/2)).
            const bool sine_branch = (order % 2 == 0);
            if (!sine_branch) return 1.0;
            if (std::isinf(bound) || bound >= std::numbers::pi / 2.0) return 1.0;
            return std::sin(bound);
        }
        case Kind::cis:
            return 1.0;
    }
    throw CumulantError("unknown test function kind");
}

std::vector<TestFunction> standard_test_functions() {
    std::vector<TestFunction> fs;
    fs.push_back(TestFunction::polynomial({0.0, 1.0}));                    // x
    fs.push_back(TestFunction::polynomial({0.0, 0.0, 1.0}));              // x²
    fs.push_back(TestFunction::polynomial({0.0, 0.0, 0.0, 1.0}));         // x³
    fs.push_back(TestFunction::polynomial({1.0, -2.0, 0.0, 0.0, 1.0}));   // x⁴−2x+1
    fs.push_back(TestFunction::polynomial({0.0, 3.0, 0.0, -1.0, 0.0, 0.5}));
    fs.push_back(TestFunction::polynomial({0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0}));  // x⁸
    fs.push_back(TestFunction::sine());
    fs.push_back(TestFunction::cis());
    return fs;
}

ExpansionCheck expansion_check(SymmetricLaw law, const TestFunction& f, int q) {
    if (q != 1 && q != 3 && q != 5)
        throw CumulantError("expansion_check supports q in {1, 3, 5}");
    const CumulantVector cum = cumulants_from_moments(law_moments(law));
    const double K[7] = {0.0, 0.0, cum.K2, 0.0, cum.K4, 0.0, cum.K6};

    ExpansionCheck check;
    check.lhs = law_expectation(law, [&f](double x) { return x * f.derivative(x, 0); });
    Complex rhs = 0.0;
    double r_factorial = 1.0;
    for (int r = 0; r <= q; ++r) {
        if (r > 0) r_factorial *= r;
        if (K[r + 1] == 0.0) continue;
        const Complex e_deriv =
            law_expectation(law, [&f, r](double x) { return f.derivative(x, r); });
        rhs += K[r + 1] / r_factorial * e_deriv;
    }
    check.rhs = rhs;
    check.gap = std::abs(check.lhs - check.rhs);
    check.bound = f.sup_abs_derivative(q + 1, law_support_bound(law)) *
                  law_abs_moment(law, q + 2);
    // Slack absorbs quadrature/rounding noise when the true remainder is 0.
    const double slack = 1e-11 * std::max(1.0, std::abs(check.lhs));
    check.within_bound = !(check.gap > check.bound + slack);
    return check;
}

}  // namespace lrp
