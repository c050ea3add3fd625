#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gsel/beta.hpp"
#include "gsel/lsq.hpp"
#include "gsel/stepwise.hpp"

namespace gsel::post {

// Score sheet for one covariate of an externally chosen set: the minimal
// P-value over the qualifying subsets containing it, the other members of
// that minimizing subset as 1-based signed labels (0 = absent; a negative
// label marks an augmenting covariate that belongs to the initial choice),
// and the residual sum of squares of the minimizing subset.
struct PostSelectionResult {
    std::size_t index = 0;
    double pvalue = 1.0;
    long long companion2 = 0;
    long long companion3 = 0;
    double rss = 0.0;
    std::optional<std::size_t> misclass;
};

// P-value of member i of a subset of size s: the probability that the best
// of k - s + 1 independent standard normal covariates closes the RSS gap
// between the fits without (ss_without) and with (ss_sub) covariate i.
// Classic form 1 - B_{k-s+1,1}(B_{1/2,(n-s-1)/2}(1 - ss_sub/ss_without));
// complements are rearranged for accuracy near 0.
inline double subset_pvalue(double ss_sub, double ss_without, std::size_t n,
                            std::size_t s, std::size_t k) {
    if (s == 0 || k < s) throw std::domain_error("need 1 <= s <= k");
    if (n < s + 2) throw std::domain_error("need n >= s + 2");
    if (!(ss_sub >= 0.0) || !(ss_without >= 0.0))
        throw std::domain_error("negative residual sum of squares");
    if (ss_without == 0.0) return 1.0;  // nothing left to explain
    const double ratio = std::min(ss_sub / ss_without, 1.0);
    const double q_upper =
        special::beta_cdf(ratio, {0.5 * static_cast<double>(n - s - 1), 0.5});
    return special::beta_tail_power_from_complement(
        q_upper, static_cast<double>(k - s + 1));
}

namespace detail {

inline std::vector<std::size_t> checked_indices(const engine::Dataset& data,
                                                std::vector<std::size_t> ind) {
    if (ind.empty()) throw std::domain_error("covariate list is empty");
    std::sort(ind.begin(), ind.end());
    if (std::adjacent_find(ind.begin(), ind.end()) != ind.end())
        throw std::domain_error("covariate list has duplicates");
    if (ind.back() >= data.k())
        throw std::domain_error("covariate index out of range");
    return ind;
}

class RssCache {
  public:
    explicit RssCache(const engine::Dataset& data) : data_(data) {}

    double operator()(std::vector<std::size_t> subset) {
        std::sort(subset.begin(), subset.end());
        auto it = cache_.find(subset);
        if (it != cache_.end()) return it->second;
        const double rss = engine::fit_subset(data_, subset, true).rss;
        cache_.emplace(std::move(subset), rss);
        return rss;
    }

  private:
    const engine::Dataset& data_;
    std::map<std::vector<std::size_t>, double> cache_;
};

// Running minimum per covariate plus the subset that achieved it. Strict
// comparison keeps the first subset in enumeration order on ties.
struct Candidate {
    double pvalue = 2.0;
    std::vector<std::size_t> members;
    std::size_t augment = static_cast<std::size_t>(-1);
    double rss = 0.0;
};

// Scores every member of `subset` (already sorted); records the minimum per
// covariate if all members pass alpha1.
inline void score_subset(const engine::Dataset& data, RssCache& rss_of,
                         const std::vector<std::size_t>& subset,
                         std::size_t augment, double alpha1,
                         std::map<std::size_t, Candidate>& best) {
    const std::size_t s = subset.size();
    const double ss_sub = rss_of(subset);
    std::vector<double> pvals(s);
    for (std::size_t m = 0; m < s; ++m) {
        std::vector<std::size_t> without = subset;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(m));
        pvals[m] =
            subset_pvalue(ss_sub, rss_of(without), data.n(), s, data.k());
    }
    if (std::any_of(pvals.begin(), pvals.end(),
                    [alpha1](double p) { return p >= alpha1; }))
        return;
    for (std::size_t m = 0; m < s; ++m) {
        Candidate& c = best[subset[m]];
        if (pvals[m] < c.pvalue) {
            c.pvalue = pvals[m];
            c.members = subset;
            c.augment = augment;
            c.rss = ss_sub;
        }
    }
}

inline std::vector<PostSelectionResult> collect(
    const engine::Dataset& data, const std::map<std::size_t, Candidate>& best,
    const std::vector<std::size_t>& ind, double alpha, bool misclass) {
    std::vector<char> in_ind(data.k(), 0);
    for (std::size_t j : ind) in_ind[j] = 1;
    std::vector<PostSelectionResult> out;
    for (const auto& [i, cand] : best) {
        if (!(cand.pvalue < alpha)) continue;
        PostSelectionResult r;
        r.index = i;
        r.pvalue = cand.pvalue;
        std::vector<long long> comp;
        for (std::size_t c : cand.members) {
            if (c == i) continue;
            long long v = static_cast<long long>(c) + 1;
            if (c == cand.augment && in_ind[c]) v = -v;
            comp.push_back(v);
        }
        std::sort(comp.begin(), comp.end(), [](long long a, long long b) {
            return std::llabs(a) < std::llabs(b);
        });
        if (!comp.empty()) r.companion2 = comp[0];
        if (comp.size() > 1) r.companion3 = comp[1];
        r.rss = cand.rss;
        if (misclass)
            r.misclass = select::misclassification_count(data, cand.members);
        out.push_back(std::move(r));
    }
    return out;  // std::map iteration gives ascending covariate order
}

}  // namespace detail

// Scores the covariates of an externally selected set `ind` by enumerating
// all subsets of size one to three. A subset qualifies only if every member
// passes alpha1; each covariate reports its minimal P-value over qualifying
// subsets, and only results below alpha are returned.
inline std::vector<PostSelectionResult> pval_subsets(
    const engine::Dataset& data, const std::vector<std::size_t>& ind,
    double alpha, double alpha1, bool misclass = false) {
    engine::validate(data);
    const auto idx = detail::checked_indices(data, ind);
    detail::RssCache rss_of(data);
    std::map<std::size_t, detail::Candidate> best;
    const std::size_t m = idx.size();
    const auto none = static_cast<std::size_t>(-1);

    for (std::size_t a = 0; a < m; ++a)
        detail::score_subset(data, rss_of, {idx[a]}, none, alpha1, best);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            detail::score_subset(data, rss_of, {idx[a], idx[b]}, none, alpha1,
                                 best);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t c = b + 1; c < m; ++c)
                detail::score_subset(data, rss_of, {idx[a], idx[b], idx[c]},
                                     none, alpha1, best);

    return detail::collect(data, best, idx, alpha, misclass);
}

// Variant that augments each subset S of `ind` with |S| <= 2 by the single
// covariate, drawn from all columns, that minimizes the RSS of S + {j}.
// Members of the augmented subsets are scored with s = |S| + 1; augmenting
// covariates may lie outside `ind` and are then reported as well.
inline std::vector<PostSelectionResult> pval_subsets_augmented(
    const engine::Dataset& data, const std::vector<std::size_t>& ind,
    double alpha, double alpha1, bool misclass = false,
    std::size_t nthreads = 1) {
    engine::validate(data);
    const auto idx = detail::checked_indices(data, ind);
    detail::RssCache rss_of(data);
    std::map<std::size_t, detail::Candidate> best;
    const std::size_t m = idx.size();

    auto augment_and_score = [&](const std::vector<std::size_t>& s_set) {
        auto st = engine::init_state(data, true, nthreads);
        for (std::size_t c : s_set) engine::add_covariate(st, c);
        auto scan = engine::scan_candidates(st);
        if (!scan) return;
        std::vector<std::size_t> subset = s_set;
        subset.push_back(scan->index);
        std::sort(subset.begin(), subset.end());
        detail::score_subset(data, rss_of, subset, scan->index, alpha1, best);
    };

    augment_and_score({});
    for (std::size_t a = 0; a < m; ++a) augment_and_score({idx[a]});
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            augment_and_score({idx[a], idx[b]});

    return detail::collect(data, best, idx, alpha, misclass);
}

}  // namespace gsel::post
