// Cumulant/moment identities for symmetric laws and a numeric verifier of
// the expansion E{X·F(X)} = Σ_{r≤q} K_{r+1}/r!·E{F^{(r)}(X)} + ε_q with the
// remainder bound |ε_q| ≤ C_q·sup|F^{(q+1)}|·E|X|^{q+2} (C_q taken as 1; the
// verifier reports violations instead of failing hard, since the constant is
// not pinned down).
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrp {

struct CumulantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Central moments of a symmetric law (odd moments vanish identically).
struct MomentVector {
    double mu2 = 0.0;
    double mu4 = 0.0;
    double mu6 = 0.0;
    void validate() const;
};

struct CumulantVector {
    double K2 = 0.0;
    double K4 = 0.0;
    double K6 = 0.0;
};

// K₂ = μ₂, K₄ = μ₄ − 3μ₂², K₆ = μ₆ − 15μ₄μ₂ + 30μ₂³.
CumulantVector cumulants_from_moments(const MomentVector& m);

// Unit-variance test laws for the expansion verifier.
enum class SymmetricLaw { gaussian, rademacher, uniform };

std::string to_string(SymmetricLaw law);
SymmetricLaw parse_symmetric_law(std::string_view text);

MomentVector law_moments(SymmetricLaw law);
double law_abs_moment(SymmetricLaw law, int order);  // E|X|^m, m <= 8
double law_support_bound(SymmetricLaw law);          // +inf for gaussian

// Closed-form test functions with analytic derivatives and derivative
// suprema, so the bound check needs no second numeric layer.
class TestFunction {
public:
    static TestFunction polynomial(std::vector<double> coeffs);  // Σ c_k x^k, degree <= 8
    static TestFunction sine();
    static TestFunction cis();  // e^{ix}

    const std::string& name() const { return name_; }
    std::complex<double> derivative(double x, int order) const;
    // Upper bound of sup_{|x| <= bound} |F^{(order)}(x)|; bound may be +inf.
    double sup_abs_derivative(int order, double bound) const;

private:
    enum class Kind { polynomial, sine, cis };
    Kind kind_ = Kind::polynomial;
    std::vector<double> coeffs_;
    std::string name_;
};

std::vector<TestFunction> standard_test_functions();

struct ExpansionCheck {
    std::complex<double> lhs;  // E{X F(X)}
    std::complex<double> rhs;  // Σ_{r<=q} K_{r+1}/r!·E{F^{(r)}}
    double gap = 0.0;
    double bound = 0.0;  // C_q·sup|F^{(q+1)}|·E|X|^{q+2} with C_q = 1
    bool within_bound = true;
};

// q ∈ {1, 3, 5}. Expectations are exact 2-point sums for rademacher and
// adaptive quadrature (abs tol 1e−13) otherwise.
ExpansionCheck expansion_check(SymmetricLaw law, const TestFunction& f, int q);

}  // namespace lrp
