#pragma once

// Regularized incomplete beta function and the stable tail transforms used by
// every selection P-value. Self-contained; no dependencies beyond <cmath>.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsel::special {

struct BetaParams {
    double a;  // > 0, finite
    double b;  // > 0, finite
};

inline void validate(const BetaParams& p) {
    if (!(std::isfinite(p.a) && std::isfinite(p.b)) || !(p.a > 0.0) || !(p.b > 0.0))
        throw std::domain_error("BetaParams: shapes must be finite and positive");
}

namespace detail {

// Stirling tail J(x) with lgamma(x) = (x-1/2)ln x - x + ln(2 pi)/2 + J(x).
// Accurate to ~1e-16 absolute for x >= 15.
inline double stirling_tail(double x) {
    const double r = 1.0 / x, r2 = r / (x * x);
    return r / 12.0 - r2 / 360.0 + r2 / (1260.0 * x * x) -
           r2 / (1680.0 * x * x * x * x) +
           r2 / (1188.0 * x * x * x * x * x * x);
}

}  // namespace detail

// ln B(a,b). Relative error <= 1e-13 for shapes up to 1e6. The naive
// lgamma(a)+lgamma(b)-lgamma(a+b) cancels catastrophically when one shape is
// large and the other small, so the large-shape branch forms
// lgamma(a+b)-lgamma(max) directly from the Stirling expansion.
inline double log_beta(const BetaParams& p) {
    validate(p);
    const double hi = std::max(p.a, p.b), lo = std::min(p.a, p.b);
    if (hi < 15.0)
        return std::lgamma(p.a) + std::lgamma(p.b) - std::lgamma(p.a + p.b);
    const double sum = hi + lo;
    const double dg = (hi - 0.5) * std::log1p(lo / hi) + lo * std::log(sum) - lo +
                      detail::stirling_tail(sum) - detail::stirling_tail(hi);
    return std::lgamma(lo) - dg;
}

namespace detail {

// Continued fraction for I_x(a,b), modified Lentz. Caller guarantees
// x < (a+1)/(a+b+2), where the fraction converges fastest.
inline double beta_cont_frac(double x, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a,b). Monotone nondecreasing in x,
// absolute error <= 1e-12 over the shape ranges the P-value formulas use.
inline double beta_cdf(double x, const BetaParams& p) {
    validate(p);
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("beta_cdf: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double a = p.a, b = p.b;
    const double lfront = a * std::log(x) + b * std::log1p(-x) - log_beta(p);
    const double front = std::exp(lfront);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * detail::beta_cont_frac(x, a, b) / a;
    return 1.0 - front * detail::beta_cont_frac(1.0 - x, b, a) / b;
}

// 1 - q^k computed in log space so results near 0 keep full relative
// precision. k can be tens of thousands with q extremely close to 1, where
// direct powering falls to 0 or 1.
inline double beta_tail_power(double q, double k_eff) {
    if (!(q >= 0.0 && q <= 1.0))
        throw std::domain_error("beta_tail_power: q outside [0,1]");
    if (!(k_eff > 0.0) || !std::isfinite(k_eff))
        throw std::domain_error("beta_tail_power: k_eff must be positive and finite");
    if (q == 0.0) return 1.0;
    return -std::expm1(k_eff * std::log(q));
}

// Same quantity parameterized by the complement: 1 - (1 - qc)^k. The selection
// formulas produce the complement qc directly (as an upper tail), and feeding
// it through log1p preserves relative precision when qc is tiny.
inline double beta_tail_power_from_complement(double qc, double k_eff) {
    if (!(qc >= 0.0 && qc <= 1.0))
        throw std::domain_error("beta_tail_power_from_complement: qc outside [0,1]");
    if (!(k_eff > 0.0) || !std::isfinite(k_eff))
        throw std::domain_error("beta_tail_power_from_complement: k_eff must be positive and finite");
    return -std::expm1(k_eff * std::log1p(-qc));
}

// P-value of the nu-th order statistic: the probability that the nu-th
// smallest of k_eff uniform order statistics lies below u, i.e.
// 1 - I_u(k_eff - nu + 1, nu), evaluated through the reflected CDF so small
// results are not formed by cancellation. nu = 1 reduces to 1 - u^k_eff.
inline double order_statistic_pvalue(double u, double k_eff, double nu) {
    if (!(u >= 0.0 && u <= 1.0))
        throw std::domain_error("order_statistic_pvalue: u outside [0,1]");
    if (!(nu >= 1.0) || !(k_eff >= 1.0) || nu > k_eff)
        throw std::domain_error("order_statistic_pvalue: need 1 <= nu <= k_eff");
    return beta_cdf(1.0 - u, BetaParams{nu, k_eff - nu + 1.0});
}

}  // namespace gsel::special
