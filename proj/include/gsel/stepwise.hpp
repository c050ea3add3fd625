#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsel/beta.hpp"
#include "gsel/lsq.hpp"

namespace gsel::select {

// Configuration of the selection P-value and of the stopping rule. kmax and
// ek use 0 as "derive from the data": kmax becomes min(n - 2, k) and ek
// becomes k. nu is real-valued; nu = 1 scores a candidate against the best
// of the synthetic covariates, larger nu against the nu-th best.
struct PvalueConfig {
    double alpha = 0.05;
    std::size_t kmax = 0;
    double nu = 1.0;
    std::size_t ek = 0;
    bool centered = true;
    bool misclass = false;
};

struct SelectionStep {
    std::size_t index = 0;
    double pvalue = 1.0;
    double rss = 0.0;
    std::optional<std::size_t> misclass;
};

struct SelectionPath {
    std::vector<SelectionStep> steps;
    double ss0 = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t ek = 0;
};

struct SelectionGroup {
    std::size_t id = 0;
    std::vector<SelectionStep> steps;
};

struct SelectionGroupList {
    std::vector<SelectionGroup> groups;
    std::size_t total_covariates = 0;
};

inline void validate(const PvalueConfig& cfg) {
    if (!(cfg.alpha >= 0.0) || cfg.alpha > 1.0)
        throw std::domain_error("alpha must lie in [0, 1]");
    if (!(cfg.nu >= 1.0)) throw std::domain_error("nu must be at least 1");
    if (cfg.ek > 0 && cfg.nu > static_cast<double>(cfg.ek))
        throw std::domain_error("nu must not exceed ek");
}

// Probability that the nu-th best of ek - ell independent standard normal
// covariates reduces the residual sum of squares from ss_cur at least to
// ss_best, given that ell covariates are already in the model. The classic
// form is 1 - B_{K+1-nu,nu}(B_{1/2,(n-ell-1)/2}(1 - ss_best/ss_cur)) with
// K = ek - ell; both complements are rearranged away so that P-values near
// 0 keep their relative accuracy.
inline double step_pvalue(double ss_best, double ss_cur, std::size_t n,
                          std::size_t ell, const PvalueConfig& cfg) {
    if (cfg.ek == 0)
        throw std::domain_error("step_pvalue requires an explicit ek");
    if (!(ss_best >= 0.0) || !(ss_cur >= ss_best))
        throw std::domain_error("need 0 <= ss_best <= ss_cur");
    if (ss_cur == 0.0)
        throw std::domain_error("residual sum of squares is already zero");
    if (ell + 1 >= n)
        throw std::domain_error("model size must stay below n - 1");
    const double kk = static_cast<double>(cfg.ek) - static_cast<double>(ell);
    if (kk < cfg.nu)
        throw std::domain_error("fewer remaining covariates than nu");

    const double ratio = std::min(ss_best / ss_cur, 1.0);
    const double half_df = 0.5 * static_cast<double>(n - ell - 1);
    // Lower-tail mass of the observed RSS ratio; equals one minus the inner
    // CDF of the classic form, evaluated without forming 1 - ratio.
    const double q_upper = special::beta_cdf(ratio, {half_df, 0.5});
    if (cfg.nu == 1.0)
        return special::beta_tail_power_from_complement(q_upper, kk);
    return special::beta_cdf(q_upper, {cfg.nu, kk - cfg.nu + 1.0});
}

// Number of observations whose least-squares fitted value (intercept plus
// the given columns) rounds to the wrong label. The label set is the sorted
// distinct response values; midpoint ties go to the lower label.
inline std::size_t misclassification_count(const engine::Dataset& data,
                                           std::span<const std::size_t> subset) {
    const std::size_t n = data.n();
    std::vector<double> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::nearbyint(data.y[i]);
        if (std::fabs(data.y[i] - r) >= 1e-8)
            throw std::domain_error("response is not integer-label-valued");
        labels[i] = r;
    }
    std::vector<double> distinct = labels;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());

    const auto fit = engine::fit_subset(data, subset, true);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = distinct.front();
        double gap = std::fabs(fit.fitted[i] - best);
        for (std::size_t l = 1; l < distinct.size(); ++l) {
            const double g = std::fabs(fit.fitted[i] - distinct[l]);
            if (g < gap) {
                gap = g;
                best = distinct[l];
            }
        }
        if (best != labels[i]) ++wrong;
    }
    return wrong;
}

// Forward stepwise selection. Stops when the step P-value exceeds alpha,
// when kmax (or the n - 2 / k cap) is reached, when fewer than nu candidate
// slots remain, when no eligible column is left, or when the fit is perfect
// to within floating precision. The recorded P-value of a step is computed
// against the residual sum of squares before the inclusion; the recorded
// rss is the one after it. Columns flagged in `excluded` never enter.
inline SelectionPath stepwise(const engine::Dataset& data, PvalueConfig cfg,
                              const std::vector<char>* excluded = nullptr,
                              std::size_t nthreads = 1) {
    validate(cfg);
    const std::size_t n = data.n();
    const std::size_t k = data.k();
    if (cfg.ek == 0) cfg.ek = k;
    if (cfg.nu > static_cast<double>(cfg.ek))
        throw std::domain_error("nu must not exceed ek");

    auto st = engine::init_state(data, cfg.centered, nthreads);
    std::size_t cap = std::min(k, n - 2);
    if (cfg.kmax > 0) cap = std::min(cap, cfg.kmax);

    SelectionPath path;
    path.ss0 = st.ss0;
    path.n = n;
    path.k = k;
    path.ek = cfg.ek;

    while (path.steps.size() < cap) {
        const std::size_t ell = path.steps.size();
        if (static_cast<double>(cfg.ek - ell) < cfg.nu) break;
        if (st.ss_r <= 1e-13 * st.ss0) break;
        auto scan = engine::scan_candidates(st, excluded);
        if (!scan) break;
        const double p = step_pvalue(scan->ss_best, st.ss_r, n, ell, cfg);
        if (p > cfg.alpha) break;
        engine::add_covariate(st, scan->index);
        SelectionStep step;
        step.index = scan->index;
        step.pvalue = p;
        step.rss = st.ss_r;
        if (cfg.misclass)
            step.misclass = misclassification_count(data, st.active);
        path.steps.push_back(std::move(step));
    }
    return path;
}

// Repeated stepwise selection. Each nonempty stepwise run becomes one group;
// all of its covariates are then excluded and the procedure restarts on the
// non-excluded columns, so ek shrinks by each group's size. Stops when a
// run selects nothing, after nmax groups (0 = no limit), or once vmax
// covariates have accumulated (0 = kmax * nmax when nmax is set, otherwise
// no limit). Columns flagged in `excluded` never enter and are assumed to
// be accounted for in cfg.ek by the caller.
inline SelectionGroupList repeated_stepwise(
    const engine::Dataset& data, const PvalueConfig& cfg,
    std::size_t nmax = 0, std::size_t vmax = 0, std::size_t nthreads = 1,
    const std::vector<char>* excluded = nullptr) {
    validate(cfg);
    const std::size_t k = data.k();
    const std::size_t base_ek = cfg.ek > 0 ? cfg.ek : k;
    std::size_t vcap = vmax;
    if (vcap == 0 && nmax > 0) {
        const std::size_t km =
            cfg.kmax > 0 ? cfg.kmax
                         : std::min(k, std::max<std::size_t>(data.n(), 2) - 2);
        vcap = km * nmax;
    }

    SelectionGroupList out;
    std::vector<char> mask =
        excluded ? *excluded : std::vector<char>(k, 0);
    while (nmax == 0 || out.groups.size() < nmax) {
        if (base_ek <= out.total_covariates) break;
        PvalueConfig run_cfg = cfg;
        run_cfg.ek = base_ek - out.total_covariates;
        if (static_cast<double>(run_cfg.ek) < cfg.nu) break;
        auto path = stepwise(data, run_cfg, &mask, nthreads);
        if (path.steps.empty()) break;
        SelectionGroup g;
        g.id = out.groups.size() + 1;
        g.steps = std::move(path.steps);
        for (const auto& s : g.steps) mask[s.index] = 1;
        out.total_covariates += g.steps.size();
        out.groups.push_back(std::move(g));
        if (vcap > 0 && out.total_covariates >= vcap) break;
    }
    return out;
}

// Elementwise average of the per-group least-squares fits (intercept always
// included, even for an empty group).
inline std::vector<double> averaged_fit(const engine::Dataset& data,
                                        const SelectionGroupList& groups) {
    if (groups.groups.empty())
        throw std::domain_error("averaged_fit needs at least one group");
    const std::size_t n = data.n();
    std::vector<double> avg(n, 0.0);
    std::vector<std::size_t> subset;
    for (const auto& g : groups.groups) {
        subset.clear();
        for (const auto& s : g.steps) subset.push_back(s.index);
        const auto fit = engine::fit_subset(data, subset, true);
        for (std::size_t i = 0; i < n; ++i) avg[i] += fit.fitted[i];
    }
    const double inv = 1.0 / static_cast<double>(groups.groups.size());
    for (double& v : avg) v *= inv;
    return avg;
}

}  // namespace gsel::select
