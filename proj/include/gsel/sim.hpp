#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsel/graph.hpp"
#include "gsel/parallel.hpp"
#include "gsel/rng.hpp"
#include "gsel/stepwise.hpp"

namespace gsel::mc {

// Knobs of the simulation harnesses. s and amplitude only matter for the
// tutorial benchmark; kmx is both the per-run selection cap and the range
// of the frequency table.
struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t nsim = 100;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t s = 0;
    double amplitude = 0.0;
    double alpha = 0.05;
    double nu = 1.0;
    std::size_t kmx = 10;
    std::size_t nthreads = 1;
};

// Frequencies of runs selecting 0..kmx covariates, as proportions.
struct FpTable {
    std::vector<double> freq;
    double mean = 0.0;
    std::size_t nsim = 0;
};

struct TutorialResult {
    double fp_mean = 0.0;
    double fn_mean = 0.0;
    double elapsed_seconds = 0.0;
};

inline void validate(const SimConfig& cfg) {
    if (cfg.nsim < 1) throw std::domain_error("nsim must be at least 1");
    if (cfg.n < 3) throw std::domain_error("n must be at least 3");
    if (cfg.k < 1) throw std::domain_error("k must be at least 1");
    if (cfg.s > cfg.k) throw std::domain_error("s must not exceed k");
    if (!(cfg.alpha >= 0.0) || cfg.alpha > 1.0)
        throw std::domain_error("alpha must lie in [0, 1]");
    if (!(cfg.nu >= 1.0)) throw std::domain_error("nu must be at least 1");
    if (cfg.kmx < 1) throw std::domain_error("kmx must be at least 1");
}

// Pure-noise selection counts: per replication y and X are filled with
// independent standard normal draws (y first, then X column by column) and
// stepwise selection runs with the given cutoff. Everything a covariate
// "explains" here is false positive by construction.
inline FpTable simulate_false_positives(const SimConfig& cfg) {
    validate(cfg);
    select::PvalueConfig scfg;
    scfg.alpha = cfg.alpha;
    scfg.kmax = cfg.kmx;
    scfg.nu = cfg.nu;
    scfg.ek = cfg.k;
    select::validate(scfg);

    std::vector<std::size_t> counts(cfg.nsim, 0);
    parallel_for(cfg.nsim, cfg.nthreads, [&](std::size_t rep) {
        auto rng = engine_for(cfg.seed, rep);
        std::normal_distribution<double> gauss;
        engine::Dataset d;
        d.y.resize(cfg.n);
        d.x = engine::Matrix(cfg.n, cfg.k);
        for (auto& v : d.y) v = gauss(rng);
        for (auto& v : d.x.values) v = gauss(rng);
        counts[rep] = select::stepwise(d, scfg).steps.size();
    });

    FpTable table;
    table.nsim = cfg.nsim;
    table.freq.assign(cfg.kmx + 1, 0.0);
    std::vector<std::size_t> slots(cfg.kmx + 1, 0);
    for (std::size_t rep = 0; rep < cfg.nsim; ++rep)
        ++slots[std::min(counts[rep], cfg.kmx)];
    for (std::size_t c = 0; c <= cfg.kmx; ++c)
        table.freq[c] =
            static_cast<double>(slots[c]) / static_cast<double>(cfg.nsim);
    for (std::size_t c = 0; c <= cfg.kmx; ++c)
        table.mean += static_cast<double>(c) * table.freq[c];
    return table;
}

namespace detail {

// Fills X with rows drawn from N(0, S), S_ij = pull^|i-j|, via the exact
// lower-triangular factor of S: column 0 is white noise, every later
// column is pull * previous + sqrt(1 - pull^2) * fresh noise.
inline void fill_dependent_columns(engine::Matrix& x, double pull,
                                   std::mt19937_64& rng,
                                   std::normal_distribution<double>& gauss) {
    const std::size_t n = x.n;
    const double fresh = std::sqrt(1.0 - pull * pull);
    for (std::size_t i = 0; i < n; ++i) x.at(i, 0) = gauss(rng);
    for (std::size_t j = 1; j < x.k; ++j) {
        const double* prev = x.col(j - 1);
        double* cur = x.col(j);
        for (std::size_t i = 0; i < n; ++i)
            cur[i] = pull * prev[i] + fresh * gauss(rng);
    }
}

}  // namespace detail

// Benchmark harness: correlated design (neighbor correlation 0.25), s
// active columns at +-amplitude/sqrt(n), standard normal errors. The two
// variants differ only through the amplitude passed in. fp counts selected
// nulls, fn unselected actives, averaged over replications. Per-replication
// draw order: design columns, active set, signs, errors.
inline TutorialResult tutorial_sim(int variant, const SimConfig& cfg) {
    if (variant != 1 && variant != 2)
        throw std::domain_error("variant must be 1 or 2");
    validate(cfg);
    select::PvalueConfig scfg;
    scfg.alpha = cfg.alpha;
    scfg.kmax = std::min(cfg.k, cfg.n - 2);
    scfg.nu = cfg.nu;
    scfg.ek = cfg.k;
    select::validate(scfg);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::size_t> fp(cfg.nsim, 0), fn(cfg.nsim, 0);
    parallel_for(cfg.nsim, cfg.nthreads, [&](std::size_t rep) {
        auto rng = engine_for(cfg.seed, rep);
        std::normal_distribution<double> gauss;
        engine::Dataset d;
        d.x = engine::Matrix(cfg.n, cfg.k);
        detail::fill_dependent_columns(d.x, 0.25, rng, gauss);

        std::vector<std::size_t> perm(cfg.k);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = 0; i < cfg.s; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, cfg.k - 1);
            std::swap(perm[i], perm[pick(rng)]);
        }
        std::vector<char> active(cfg.k, 0);
        for (std::size_t i = 0; i < cfg.s; ++i) active[perm[i]] = 1;

        const double scale =
            cfg.amplitude / std::sqrt(static_cast<double>(cfg.n));
        std::vector<double> beta(cfg.k, 0.0);
        std::uniform_int_distribution<int> coin(0, 1);
        for (std::size_t i = 0; i < cfg.s; ++i)
            beta[perm[i]] = coin(rng) ? scale : -scale;

        d.y.assign(cfg.n, 0.0);
        for (std::size_t j = 0; j < cfg.k; ++j) {
            if (beta[j] == 0.0) continue;
            const double* col = d.x.col(j);
            for (std::size_t i = 0; i < cfg.n; ++i)
                d.y[i] += beta[j] * col[i];
        }
        for (auto& v : d.y) v += gauss(rng);

        auto path = select::stepwise(d, scfg);
        std::vector<char> selected(cfg.k, 0);
        for (const auto& s : path.steps) selected[s.index] = 1;
        std::size_t nfp = 0, nfn = 0;
        for (std::size_t j = 0; j < cfg.k; ++j) {
            if (selected[j] && !active[j]) ++nfp;
            if (!selected[j] && active[j]) ++nfn;
        }
        fp[rep] = nfp;
        fn[rep] = nfn;
    });

    TutorialResult out;
    for (std::size_t rep = 0; rep < cfg.nsim; ++rep) {
        out.fp_mean += static_cast<double>(fp[rep]);
        out.fn_mean += static_cast<double>(fn[rep]);
    }
    out.fp_mean /= static_cast<double>(cfg.nsim);
    out.fn_mean /= static_cast<double>(cfg.nsim);
    out.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return out;
}

// One draw of X with rows from N(0, Inverse(T)), T tridiagonal with unit
// diagonal and rho on the first off-diagonals, followed by neighborhood
// graph estimation with the per-node cutoff alpha/k. Returns (false
// positive edges, false negative edges) against the true neighbor pairs.
inline std::pair<std::size_t, std::size_t> bidiagonal_graph_sim(
    std::size_t n, std::size_t k, double rho, double alpha,
    std::uint64_t seed, std::size_t nthreads = 1) {
    if (n < 3 || k < 2) throw std::domain_error("need n >= 3 and k >= 2");

    // Cholesky of T: L has diagonal dia and subdiagonal sub. Fails exactly
    // when T is not positive definite (|rho| >= 0.5 in the limit).
    std::vector<double> dia(k), sub(k, 0.0);
    dia[0] = 1.0;
    for (std::size_t j = 1; j < k; ++j) {
        sub[j] = rho / dia[j - 1];
        const double rest = 1.0 - sub[j] * sub[j];
        if (rest <= 0.0)
            throw std::domain_error(
                "precision matrix is not positive definite");
        dia[j] = std::sqrt(rest);
    }

    // Rows of X solve Transpose(L) x = z: sweep columns right to left.
    auto rng = engine_for(seed, 0);
    std::normal_distribution<double> gauss;
    engine::Matrix x(n, k);
    for (auto& v : x.values) v = gauss(rng);
    {
        double* right = x.col(k - 1);
        for (std::size_t i = 0; i < n; ++i) right[i] /= dia[k - 1];
    }
    for (std::size_t jj = k - 1; jj-- > 0;) {
        double* cur = x.col(jj);
        const double* next = x.col(jj + 1);
        const double inv = 1.0 / dia[jj];
        const double off = sub[jj + 1];
        for (std::size_t i = 0; i < n; ++i)
            cur[i] = (cur[i] - off * next[i]) * inv;
    }

    graph::GraphConfig gcfg;
    gcfg.alpha = alpha;
    gcfg.nthreads = nthreads;
    auto el = graph::neighborhood_graph(x, gcfg);

    std::size_t fp = 0;
    std::size_t hits = 0;
    for (const auto& e : el.edges) {
        if (rho != 0.0 && e.j == e.i + 1)
            ++hits;
        else
            ++fp;
    }
    const std::size_t true_edges = rho != 0.0 ? k - 1 : 0;
    return {fp, true_edges - hits};
}

}  // namespace gsel::mc
