// Adaptive Gauss-Kronrod quadrature with explicit handling of improper
// integrals: interval doubling for fast-decaying tails and the u = 1/p
// substitution for algebraically decaying ones.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <vector>

namespace lrp {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    std::size_t max_panels = 100000;
};

namespace detail {

// 15-point Kronrod / 7-point Gauss pair (QUADPACK dqk15 abscissae).
inline constexpr double kGk15Nodes[8] = {
    0.9914553711208126392069, 0.9491079123427585245262,
    0.8648644233597690727897, 0.7415311855993944398639,
    0.5860872354676911302941, 0.4058451513773971669066,
    0.2077849550078984676007, 0.0};
inline constexpr double kGk15KronrodW[8] = {
    0.0229353220105292249637, 0.0630920926299785532907,
    0.1047900103222501838399, 0.1406532597155259187452,
    0.1690047266392679028266, 0.1903505780647854099133,
    0.2044329400752988924142, 0.2094821410847278280130};
inline constexpr double kGk15GaussW[4] = {
    0.1294849661688696932706, 0.2797053914892766679015,
    0.3818300505051189449504, 0.4179591836734693877551};

template <typename T, typename F>
void gk15_panel(F& f, double a, double b, T& kronrod, double& error) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    T resk = kGk15KronrodW[7] * f(mid);
    T resg = kGk15GaussW[3] * f(mid);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGk15Nodes[i];
        const T sum = f(mid - dx) + f(mid + dx);
        resk += kGk15KronrodW[i] * sum;
        if (i % 2 == 1) resg += kGk15GaussW[i / 2] * sum;
    }
    kronrod = resk * half;
    error = std::abs((resk - resg) * half);
}

}  // namespace detail

// Adaptive GK15 over [a, b]. `breakpoints` seeds the initial panel layout
// (values outside (a, b) are ignored); the panel with the largest error
// estimate is bisected until the summed estimate meets the tolerance.
// Endpoints are never evaluated, so integrable endpoint singularities are
// admissible. T may be double or std::complex<double>.
template <typename T = double, typename F>
T integrate(F&& f, double a, double b, const QuadratureOptions& opt = {},
            const std::vector<double>& breakpoints = {}) {
    if (!(a < b)) {
        if (a == b) return T{};
        throw QuadratureError("integrate: inverted interval");
    }
    struct Panel {
        double a, b, error;
        T value;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    std::vector<double> edges;
    edges.push_back(a);
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Panel> queue;
    T total{};
    double total_err = 0.0;
    auto push_panel = [&](double lo, double hi) {
        T value;
        double err;
        detail::gk15_panel(f, lo, hi, value, err);
        total += value;
        total_err += err;
        queue.push({lo, hi, err, value});
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) push_panel(edges[i], edges[i + 1]);

    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (queue.size() >= opt.max_panels)
            throw QuadratureError("integrate: panel budget exhausted before convergence");
        Panel p = queue.top();
        queue.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(p.a < m && m < p.b))
            throw QuadratureError("integrate: panel underflow (singularity too sharp)");
        total -= p.value;
        total_err -= p.error;
        push_panel(p.a, m);
        push_panel(m, p.b);
    }
    return total;
}

// ∫_a^∞ f for integrands with fast-decaying tails: chunks of doubling width
// are appended until two consecutive chunks contribute below `tail_tol`
// relative to the accumulated value (absolute floor opt.abs_tol).
template <typename T = double, typename F>
T integrate_half_line(F&& f, double a, const QuadratureOptions& opt = {},
                      double tail_tol = 1e-12, double first_width = 1.0,
                      int max_chunks = 64) {
    T total{};
    double lo = a;
    double width = first_width;
    int quiet = 0;
    for (int k = 0; k < max_chunks; ++k) {
        const double hi = lo + width;
        T chunk = integrate<T>(f, lo, hi, opt);
        total += chunk;
        const double scale = std::max(std::abs(total), 1.0);
        if (std::abs(chunk) <= std::max(tail_tol * scale, opt.abs_tol)) {
            if (++quiet >= 2) return total;
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    throw QuadratureError("integrate_half_line: tail did not decay within chunk budget");
}

// ∫_a^∞ f (a > 0) via the substitution u = 1/p, for algebraic tails:
// ∫_a^∞ f(p) dp = ∫_0^{1/a} f(1/u) / u² du.
template <typename T = double, typename F>
T integrate_tail_inverse(F&& f, double a, const QuadratureOptions& opt = {}) {
    if (!(a > 0.0)) throw QuadratureError("integrate_tail_inverse: requires a > 0");
    auto g = [&f](double u) -> T { return f(1.0 / u) / (u * u); };
    return integrate<T>(g, 0.0, 1.0 / a, opt);
}

}  // namespace lrp
