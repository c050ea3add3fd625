#pragma once

// Incremental least squares: keep the response and all inactive candidate
// columns orthogonal to the active set, so scanning every candidate for the
// largest RSS reduction is O(k) and adding a covariate is O(nk).

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsel/beta.hpp"
#include "gsel/dataset.hpp"
#include "gsel/parallel.hpp"

namespace gsel::engine {

namespace detail {

// 4-way unrolled kernels; the sweep in add_covariate is the hot path and
// must run near memory bandwidth without -ffast-math.
inline double dot(const double* x, const double* y, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += x[i] * y[i];
        s1 += x[i + 1] * y[i + 1];
        s2 += x[i + 2] * y[i + 2];
        s3 += x[i + 3] * y[i + 3];
    }
    for (; i < n; ++i) s0 += x[i] * y[i];
    return (s0 + s1) + (s2 + s3);
}

inline void axpy(double a, const double* x, double* y, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        y[i] += a * x[i];
        y[i + 1] += a * x[i + 1];
        y[i + 2] += a * x[i + 2];
        y[i + 3] += a * x[i + 3];
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace detail

// Candidate columns whose residual squared norm falls below this fraction of
// their squared norm at initialization are treated as collinear with the
// active set and skipped.
inline constexpr double kCollinearTol = 1e-10;

struct ScanResult {
    std::size_t index;
    double ss_best;  // in [0, ss_r]
};

struct ResidualState {
    std::vector<std::size_t> active;  // selection order
    std::vector<double> r_y;          // response residual
    Matrix r_x;                       // residualized candidate columns
    double ss_r = 0.0;                // current residual sum of squares
    double ss0 = 0.0;                 // RSS of the empty model
    bool centered = true;

    // Cached per-candidate quantities: c[j] = <r_y, r_j>, s[j] = <r_j, r_j>,
    // s_init[j] = s[j] at initialization. They make the scan O(k).
    std::vector<double> c;
    std::vector<double> s;
    std::vector<double> s_init;
    std::vector<char> alive;  // false once selected

    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t nthreads = 1;

    bool eligible(std::size_t j) const {
        return alive[j] && s_init[j] > 0.0 && s[j] > kCollinearTol * s_init[j];
    }

  private:
    std::vector<double> scratch_;
    friend void add_covariate(ResidualState&, std::size_t);
};

// Build the initial state. Centering implements the offset: the response and
// every candidate column lose their means, and ss0 becomes the RSS of the
// intercept-only model.
inline ResidualState init_state(const Dataset& data, bool centered,
                                std::size_t nthreads = 1) {
    validate(data);
    ResidualState st;
    st.centered = centered;
    st.n = data.n();
    st.k = data.k();
    st.nthreads = nthreads;
    st.r_y = data.y;
    if (centered) {
        double mean = 0.0;
        for (double v : st.r_y) mean += v;
        mean /= static_cast<double>(st.n);
        for (double& v : st.r_y) v -= mean;
    }
    st.ss0 = detail::dot(st.r_y.data(), st.r_y.data(), st.n);
    if (st.ss0 <= 0.0)
        throw std::domain_error("init_state: response is constant (zero variance)");
    st.ss_r = st.ss0;
    st.r_x = data.x;
    st.c.assign(st.k, 0.0);
    st.s.assign(st.k, 0.0);
    st.s_init.assign(st.k, 0.0);
    st.alive.assign(st.k, 1);
    const std::size_t n = st.n;
    parallel_for(st.k, nthreads, [&](std::size_t j) {
        double* col = st.r_x.col(j);
        if (centered) {
            double mean = 0.0;
            for (std::size_t i = 0; i < n; ++i) mean += col[i];
            mean /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) col[i] -= mean;
        }
        st.c[j] = detail::dot(st.r_y.data(), col, n);
        st.s[j] = detail::dot(col, col, n);
        st.s_init[j] = st.s[j];
    });
    return st;
}

// Best single addition: for each eligible candidate j (not excluded),
// ss_j = ss_r - <r_y,r_j>^2 / <r_j,r_j>. Ties break to the lowest index.
// Returns nothing when no candidate is eligible.
inline std::optional<ScanResult> scan_candidates(
    const ResidualState& st, const std::vector<char>* excluded = nullptr) {
    double best_red = -1.0;
    std::size_t best_j = st.k;
    for (std::size_t j = 0; j < st.k; ++j) {
        if (!st.eligible(j)) continue;
        if (excluded && (*excluded)[j]) continue;
        const double red = st.c[j] * st.c[j] / st.s[j];
        if (red > best_red) {
            best_red = red;
            best_j = j;
        }
    }
    if (best_j == st.k) return std::nullopt;
    double ss_best = st.ss_r - best_red;
    if (ss_best < 0.0) ss_best = 0.0;
    if (ss_best > st.ss_r) ss_best = st.ss_r;
    return ScanResult{best_j, ss_best};
}

// Move candidate j into the active set: orthogonalize the response and every
// remaining candidate against the normalized residual column of j, and
// reduce ss_r by exactly the reduction the scan reported for j.
inline void add_covariate(ResidualState& st, std::size_t j) {
    if (j >= st.k || !st.alive[j])
        throw std::domain_error("add_covariate: column not an inactive candidate");
    if (!st.eligible(j))
        throw std::domain_error("add_covariate: column is collinear with the active set");
    const std::size_t n = st.n;
    const double sj = st.s[j];
    const double red = st.c[j] * st.c[j] / sj;
    const double inv_norm = 1.0 / std::sqrt(sj);
    const double d_y = st.c[j] * inv_norm;

    st.scratch_.resize(n);
    double* u = st.scratch_.data();
    const double* rj = st.r_x.col(j);
    for (std::size_t i = 0; i < n; ++i) u[i] = rj[i] * inv_norm;

    detail::axpy(-d_y, u, st.r_y.data(), n);
    st.alive[j] = 0;

    parallel_for(st.k, st.nthreads, [&](std::size_t m) {
        if (!st.alive[m] || st.s_init[m] <= 0.0) return;
        double* rm = st.r_x.col(m);
        const double d = detail::dot(u, rm, n);
        detail::axpy(-d, u, rm, n);
        st.c[m] -= d_y * d;
        st.s[m] -= d * d;
        if (st.s[m] < 0.0) st.s[m] = 0.0;
    });

    st.active.push_back(j);
    st.ss_r -= red;
    if (st.ss_r < 0.0) st.ss_r = 0.0;
}

// Exact F-test and Beta P-values for a single covariate with offset; the two
// are equal in exact arithmetic, and both routes here go through the same
// Beta CDF with differently formed arguments.
inline std::pair<double, double> single_covariate_pvalues(std::span<const double> y,
                                                          std::span<const double> x) {
    const std::size_t n = y.size();
    if (n < 3 || x.size() != n)
        throw std::domain_error("single_covariate_pvalues: need matching vectors, n >= 3");
    double my = 0.0, mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        my += y[i];
        mx += x[i];
    }
    my /= static_cast<double>(n);
    mx /= static_cast<double>(n);
    double syy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dy = y[i] - my, dx = x[i] - mx;
        syy += dy * dy;
        sxx += dx * dx;
        sxy += dy * dx;
    }
    if (sxx <= 0.0) throw std::domain_error("single_covariate_pvalues: covariate is constant");
    if (syy <= 0.0) throw std::domain_error("single_covariate_pvalues: response is constant");
    const double red = sxy * sxy / sxx;
    double ss_r = syy - red;
    if (ss_r < 0.0) ss_r = 0.0;
    const double m = static_cast<double>(n - 1);
    const special::BetaParams upper{0.5 * m, 0.5};
    // F route: F = m*red/ss_r, and 1 - F_{1,m}(F) = I_{m/(F+m)}(m/2, 1/2)
    //        = I_{ss_r/(red+ss_r)}(m/2, 1/2).
    const double p_f = special::beta_cdf(std::min(ss_r / (red + ss_r), 1.0), upper);
    // Beta route: B = 1 - ss_r/syy, and 1 - B_{1/2,m/2}(B) = I_{ss_r/syy}(m/2, 1/2).
    const double p_b = special::beta_cdf(std::min(ss_r / syy, 1.0), upper);
    return {p_f, p_b};
}

// Dense fit on an explicit covariate subset via modified Gram-Schmidt with a
// second orthogonalization pass. Exactly collinear subset columns contribute
// nothing (the fit is still the projection onto the span). Used for
// misclassification counts, per-group fits, and post-selection RSS values.
struct SubsetFit {
    double rss = 0.0;
    std::vector<double> fitted;
};

inline SubsetFit fit_subset(const Dataset& data, std::span<const std::size_t> subset,
                            bool intercept = true) {
    const std::size_t n = data.n();
    std::vector<std::vector<double>> q;
    q.reserve(subset.size() + 1);
    auto push_col = [&](std::vector<double> col) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& prev : q)
                detail::axpy(-detail::dot(prev.data(), col.data(), n), prev.data(),
                             col.data(), n);
        const double norm2 = detail::dot(col.data(), col.data(), n);
        if (norm2 <= 1e-28) return;  // collinear with earlier columns
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : col) v *= inv;
        q.push_back(std::move(col));
    };
    if (intercept) {
        push_col(std::vector<double>(n, 1.0));
    }
    for (std::size_t j : subset) {
        if (j >= data.k()) throw std::out_of_range("fit_subset: column index out of range");
        push_col(std::vector<double>(data.x.col(j), data.x.col(j) + n));
    }
    SubsetFit out;
    out.fitted.assign(n, 0.0);
    for (const auto& col : q)
        detail::axpy(detail::dot(col.data(), data.y.data(), n), col.data(),
                     out.fitted.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = data.y[i] - out.fitted[i];
        out.rss += r * r;
    }
    return out;
}

}  // namespace gsel::engine
