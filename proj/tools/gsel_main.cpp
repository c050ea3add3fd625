#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gsel/io.hpp"
#include "gsel/postsel.hpp"
#include "gsel/sim.hpp"

namespace {

using nlohmann::ordered_json;

// Options every subcommand shares. Worker count only affects speed; all
// results are bit-identical for any value.
struct Common {
    std::string format = "text";
    bool timing = false;
    std::size_t threads = 1;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format,
                    "text tables or line-delimited json records")
        ->check(CLI::IsMember({"text", "records"}));
    cmd->add_flag("--time", c.timing, "print elapsed seconds to stderr");
    cmd->add_option("--threads", c.threads,
                    "worker threads, 0 = hardware count");
}

struct SelectArgs {
    std::string file;
    std::string response;
    double alpha = 0.05;
    double nu = 1.0;
    std::size_t kmax = 0;
    std::size_t ek = 0;
    std::size_t nmax = 0;
    std::size_t vmax = 0;
    bool misclass = false;
    Common common;
};

void add_select_opts(CLI::App* cmd, SelectArgs& a) {
    cmd->add_option("file", a.file, "input table")->required();
    cmd->add_option("--alpha", a.alpha, "selection p-value cutoff");
    cmd->add_option("--kmax", a.kmax, "selection cap, 0 = min(n - 2, k)");
    cmd->add_option("--nu", a.nu,
                    "score against the nu-th best synthetic covariate");
    cmd->add_option("--ek", a.ek, "effective candidate count, 0 = k");
    cmd->add_flag("--misclass", a.misclass,
                  "report misclassification counts for discrete responses");
    cmd->add_option("--response", a.response,
                    "response column: 1-based number or header name "
                    "(default: last column)");
    add_common(cmd, a.common);
}

// One selected covariate per line: [group] index pvalue rss [misclass].
// Indices are 1-based over the covariate columns (the table minus the
// response column).
void print_step(const Common& c, std::size_t group,
                const gsel::select::SelectionStep& st) {
    if (c.format == "records") {
        ordered_json j;
        if (group) j["group"] = group;
        j["index"] = st.index + 1;
        j["pvalue"] = st.pvalue;
        j["rss"] = st.rss;
        if (st.misclass) j["misclass"] = *st.misclass;
        std::cout << j.dump() << '\n';
        return;
    }
    char buf[160];
    std::size_t len = 0;
    if (group)
        len = static_cast<std::size_t>(
            std::snprintf(buf, sizeof buf, "%4zu  ", group));
    std::snprintf(buf + len, sizeof buf - len, "%6zu  %12s  %14s",
                  st.index + 1, gsel::io::fmt_pvalue(st.pvalue).c_str(),
                  gsel::io::fmt_value(st.rss).c_str());
    std::cout << buf;
    if (st.misclass) std::cout << "  " << *st.misclass;
    std::cout << '\n';
}

void run_select(const SelectArgs& a, bool grouped) {
    const auto table = gsel::io::read_table(a.file);
    const auto split = gsel::io::split_response(table, a.response);

    gsel::select::PvalueConfig cfg;
    cfg.alpha = a.alpha;
    cfg.kmax = a.kmax;
    cfg.nu = a.nu;
    cfg.ek = a.ek;
    cfg.misclass = a.misclass;

    if (grouped) {
        const auto out = gsel::select::repeated_stepwise(
            split.data, cfg, a.nmax, a.vmax, a.common.threads);
        for (const auto& g : out.groups)
            for (const auto& st : g.steps) print_step(a.common, g.id, st);
    } else {
        const auto path =
            gsel::select::stepwise(split.data, cfg, nullptr, a.common.threads);
        for (const auto& st : path.steps) print_step(a.common, 0, st);
    }
}

struct PvalsArgs {
    std::string file;
    std::string response;
    std::vector<unsigned long long> ind;
    double alpha = 0.05;
    double alpha1 = 0.05;
    bool augmented = false;
    bool misclass = false;
    Common common;
};

// Converts 1-based user indices into library indices, with a range check
// that names the offending entry.
std::vector<std::size_t> to_zero_based(
    const std::vector<unsigned long long>& ind, std::size_t k) {
    std::vector<std::size_t> out;
    out.reserve(ind.size());
    for (unsigned long long v : ind) {
        if (v < 1 || v > k)
            throw std::domain_error("index " + std::to_string(v) +
                                    " out of range 1.." + std::to_string(k));
        out.push_back(static_cast<std::size_t>(v - 1));
    }
    return out;
}

void run_pvals(const PvalsArgs& a) {
    const auto table = gsel::io::read_table(a.file);
    const auto split = gsel::io::split_response(table, a.response);
    const auto idx = to_zero_based(a.ind, split.data.k());

    const auto rows =
        a.augmented
            ? gsel::post::pval_subsets_augmented(split.data, idx, a.alpha,
                                                 a.alpha1, a.misclass,
                                                 a.common.threads)
            : gsel::post::pval_subsets(split.data, idx, a.alpha, a.alpha1,
                                       a.misclass);

    for (const auto& r : rows) {
        if (a.common.format == "records") {
            ordered_json j;
            j["index"] = r.index + 1;
            j["pvalue"] = r.pvalue;
            j["companion2"] = r.companion2;
            j["companion3"] = r.companion3;
            j["rss"] = r.rss;
            if (r.misclass) j["misclass"] = *r.misclass;
            std::cout << j.dump() << '\n';
            continue;
        }
        char buf[200];
        std::snprintf(buf, sizeof buf, "%6zu  %12s  %8lld  %8lld  %14s",
                      r.index + 1, gsel::io::fmt_pvalue(r.pvalue).c_str(),
                      r.companion2, r.companion3,
                      gsel::io::fmt_value(r.rss).c_str());
        std::cout << buf;
        if (r.misclass) std::cout << "  " << *r.misclass;
        std::cout << '\n';
    }
}

struct InteractArgs {
    std::string file;
    std::string out;
    std::string decode;
    unsigned long long ord = 2;
    Common common;
};

void run_interact(const InteractArgs& a) {
    const auto table = gsel::io::read_table(a.file);
    const auto [expanded, monomials] = gsel::expand::gen_interactions(
        table.x, static_cast<std::size_t>(a.ord));

    std::ofstream mat(a.out);
    if (!mat) throw gsel::io::TableError(a.out + ": cannot write file");
    gsel::io::write_matrix(mat, expanded);

    const std::string decode_path =
        a.decode.empty() ? a.out + ".decode" : a.decode;
    std::ofstream dec(decode_path);
    if (!dec) throw gsel::io::TableError(decode_path + ": cannot write file");
    gsel::io::write_decode_table(dec, monomials);

    if (a.common.format == "records") {
        ordered_json j;
        j["base_columns"] = table.x.k;
        j["degree"] = a.ord;
        j["product_columns"] = expanded.k;
        j["matrix"] = a.out;
        j["decode"] = decode_path;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << gsel::expand::expansion_report(
                         table.x.k, static_cast<std::size_t>(a.ord))
                  << '\n';
    }
}

struct GraphArgs {
    std::string file;
    std::string out;
    std::string rule = "or";
    std::vector<unsigned long long> nodes;
    double alpha = 0.05;
    double nu = 1.0;
    std::size_t kmax = 0;
    bool repeated = false;
    bool no_bonferroni = false;
    Common common;
};

void run_graph(const GraphArgs& a) {
    const auto table = gsel::io::read_table(a.file);

    gsel::graph::GraphConfig cfg;
    cfg.alpha = a.alpha;
    cfg.nu = a.nu;
    cfg.repeated = a.repeated;
    cfg.bonferroni = !a.no_bonferroni;
    cfg.kmax = a.kmax;
    cfg.rule = a.rule == "and" ? gsel::graph::EdgeRule::And
                               : gsel::graph::EdgeRule::Or;
    cfg.nthreads = a.common.threads;

    gsel::graph::EdgeList el;
    if (a.nodes.empty()) {
        el = gsel::graph::neighborhood_graph(table.x, cfg);
    } else {
        const auto subset = to_zero_based(a.nodes, table.x.k);
        el = gsel::graph::neighborhood_graph(table.x, cfg, &subset);
    }

    for (std::size_t node : el.skipped_nodes)
        std::cerr << "warning: column " << (node + 1)
                  << " is degenerate, node skipped\n";

    std::ofstream file_out;
    std::ostream* out = &std::cout;
    if (!a.out.empty()) {
        file_out.open(a.out);
        if (!file_out)
            throw gsel::io::TableError(a.out + ": cannot write file");
        out = &file_out;
    }

    if (a.common.format == "records") {
        for (const auto& e : el.edges) {
            ordered_json j;
            j["i"] = e.i + 1;
            j["j"] = e.j + 1;
            j["p_ij"] = std::isnan(e.p_forward) ? ordered_json(nullptr)
                                                : ordered_json(e.p_forward);
            j["p_ji"] = std::isnan(e.p_backward) ? ordered_json(nullptr)
                                                 : ordered_json(e.p_backward);
            *out << j.dump() << '\n';
        }
    } else {
        gsel::io::write_edge_list(*out, el);
    }
}

struct SimFpArgs {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t kmx = 10;
    std::size_t nsim = 100;
    double alpha = 0.05;
    double nu = 1.0;
    std::uint64_t seed = 1;
    Common common;
};

void run_sim_fp(const SimFpArgs& a) {
    gsel::mc::SimConfig cfg;
    cfg.seed = a.seed;
    cfg.nsim = a.nsim;
    cfg.n = a.n;
    cfg.k = a.k;
    cfg.alpha = a.alpha;
    cfg.nu = a.nu;
    cfg.kmx = a.kmx;
    cfg.nthreads = a.common.threads;
    const auto t = gsel::mc::simulate_false_positives(cfg);

    if (a.common.format == "records") {
        ordered_json j;
        j["freq"] = t.freq;
        j["mean"] = t.mean;
        j["nsim"] = t.nsim;
        std::cout << j.dump() << '\n';
        return;
    }
    for (std::size_t c = 0; c < t.freq.size(); ++c) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%6zu  %s", c,
                      gsel::io::fmt_value(t.freq[c]).c_str());
        std::cout << buf << '\n';
    }
    std::cout << "  mean  " << gsel::io::fmt_value(t.mean) << '\n';
}

struct SimTutArgs {
    int variant = 1;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t s = 0;
    std::size_t nsim = 100;
    double amplitude = 0.0;
    double alpha = 0.05;
    double nu = 1.0;
    std::uint64_t seed = 1;
    Common common;
};

void run_sim_tutorial(const SimTutArgs& a) {
    gsel::mc::SimConfig cfg;
    cfg.seed = a.seed;
    cfg.nsim = a.nsim;
    cfg.n = a.n;
    cfg.k = a.k;
    cfg.s = a.s;
    cfg.amplitude = a.amplitude;
    cfg.alpha = a.alpha;
    cfg.nu = a.nu;
    cfg.nthreads = a.common.threads;
    const auto r = gsel::mc::tutorial_sim(a.variant, cfg);

    // Wall-clock seconds stay off stdout so identical seeds give identical
    // bytes; --time reports them on stderr.
    if (a.common.format == "records") {
        ordered_json j;
        j["fp_mean"] = r.fp_mean;
        j["fn_mean"] = r.fn_mean;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "fp  " << gsel::io::fmt_value(r.fp_mean) << '\n';
        std::cout << "fn  " << gsel::io::fmt_value(r.fn_mean) << '\n';
    }
    if (a.common.timing)
        std::fprintf(stderr, "simulation time: %.3fs\n", r.elapsed_seconds);
}

struct SimBidiagArgs {
    std::size_t n = 0;
    std::size_t k = 0;
    double rho = 0.25;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    Common common;
};

void run_sim_bidiag(const SimBidiagArgs& a) {
    const auto [fp, fn] = gsel::mc::bidiagonal_graph_sim(
        a.n, a.k, a.rho, a.alpha, a.seed, a.common.threads);
    if (a.common.format == "records") {
        ordered_json j;
        j["fp_edges"] = fp;
        j["fn_edges"] = fn;
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "fp  " << fp << '\n';
        std::cout << "fn  " << fn << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "variable selection for linear regression: covariates are kept only "
        "when they beat random gaussian competitors"};
    app.require_subcommand(1);

    SelectArgs sel, selall;
    auto* cmd_sel =
        app.add_subcommand("select", "stepwise covariate selection");
    add_select_opts(cmd_sel, sel);

    auto* cmd_selall = app.add_subcommand(
        "select-all", "repeated selection into disjoint groups");
    add_select_opts(cmd_selall, selall);
    cmd_selall->add_option("--nmax", selall.nmax,
                           "maximum number of groups, 0 = unlimited");
    cmd_selall->add_option("--vmax", selall.vmax,
                           "maximum total covariates, 0 = derived");

    PvalsArgs pv;
    auto* cmd_pv = app.add_subcommand(
        "pvals", "p-values for an externally chosen covariate set");
    cmd_pv->add_option("file", pv.file, "input table")->required();
    cmd_pv->add_option("--ind", pv.ind, "1-based covariate indices")
        ->required()
        ->delimiter(',');
    cmd_pv->add_option("--alpha", pv.alpha, "report cutoff");
    cmd_pv->add_option("--alpha1", pv.alpha1, "subset qualification cutoff");
    cmd_pv->add_flag("--augmented", pv.augmented,
                     "extend each subset by its best extra covariate");
    cmd_pv->add_flag("--misclass", pv.misclass,
                     "report misclassification counts");
    cmd_pv->add_option("--response", pv.response,
                       "response column (default: last)");
    add_common(cmd_pv, pv.common);

    InteractArgs ia;
    auto* cmd_ia = app.add_subcommand(
        "interact", "expand a table with interaction products");
    cmd_ia->add_option("file", ia.file, "input table")->required();
    cmd_ia->add_option("--ord", ia.ord, "maximum product degree")->required();
    cmd_ia->add_option("--out", ia.out, "expanded matrix path")->required();
    cmd_ia->add_option("--decode", ia.decode,
                       "decode table path (default: <out>.decode)");
    add_common(cmd_ia, ia.common);

    GraphArgs gr;
    auto* cmd_gr = app.add_subcommand(
        "graph", "dependency graph from per-column regressions");
    cmd_gr->add_option("file", gr.file, "input table")->required();
    cmd_gr->add_option("--alpha", gr.alpha,
                       "cutoff, divided by the node count unless "
                       "--no-bonferroni");
    cmd_gr->add_option("--nu", gr.nu,
                       "score against the nu-th best synthetic covariate");
    cmd_gr->add_flag("--repeated", gr.repeated,
                     "repeated selection per node");
    cmd_gr->add_flag("--no-bonferroni", gr.no_bonferroni,
                     "use --alpha as-is per node");
    cmd_gr->add_option("--nodes", gr.nodes, "1-based node subset")
        ->delimiter(',');
    cmd_gr->add_option("--edge-rule", gr.rule,
                       "or: either direction suffices; and: both required")
        ->check(CLI::IsMember({"or", "and"}));
    cmd_gr->add_option("--kmax", gr.kmax,
                       "per-node selection cap, 0 = min(n - 2, 30)");
    cmd_gr->add_option("--out", gr.out, "edge file path (default: stdout)");
    add_common(cmd_gr, gr.common);

    auto* cmd_sim =
        app.add_subcommand("simulate", "seeded simulation harnesses");
    cmd_sim->require_subcommand(1);

    SimFpArgs sfp;
    auto* cmd_fp = cmd_sim->add_subcommand(
        "fp", "selection counts under pure noise");
    cmd_fp->add_option("--n", sfp.n, "rows")->required();
    cmd_fp->add_option("--k", sfp.k, "covariates")->required();
    cmd_fp->add_option("--alpha", sfp.alpha, "cutoff");
    cmd_fp->add_option("--nu", sfp.nu, "order of the synthetic competitor");
    cmd_fp->add_option("--kmx", sfp.kmx, "selection cap and table range");
    cmd_fp->add_option("--nsim", sfp.nsim, "replications");
    cmd_fp->add_option("--seed", sfp.seed, "master seed");
    add_common(cmd_fp, sfp.common);

    SimTutArgs stu;
    auto* cmd_tu = cmd_sim->add_subcommand(
        "tutorial", "correlated-design benchmark with planted signals");
    cmd_tu->add_option("--variant", stu.variant, "benchmark variant")
        ->required()
        ->check(CLI::IsMember({"1", "2"}));
    cmd_tu->add_option("--n", stu.n, "rows")->required();
    cmd_tu->add_option("--k", stu.k, "covariates")->required();
    cmd_tu->add_option("--s", stu.s, "active covariates")->required();
    cmd_tu->add_option("--amplitude", stu.amplitude,
                       "signal amplitude, scaled by 1/sqrt(n)")
        ->required();
    cmd_tu->add_option("--alpha", stu.alpha, "cutoff");
    cmd_tu->add_option("--nu", stu.nu, "order of the synthetic competitor");
    cmd_tu->add_option("--nsim", stu.nsim, "replications");
    cmd_tu->add_option("--seed", stu.seed, "master seed");
    add_common(cmd_tu, stu.common);

    SimBidiagArgs sbd;
    auto* cmd_bd = cmd_sim->add_subcommand(
        "bidiag", "graph recovery for a tridiagonal precision matrix");
    cmd_bd->add_option("--n", sbd.n, "rows")->required();
    cmd_bd->add_option("--k", sbd.k, "columns / nodes")->required();
    cmd_bd->add_option("--rho", sbd.rho, "off-diagonal entry, |rho| < 0.5");
    cmd_bd->add_option("--alpha", sbd.alpha, "cutoff, divided by k");
    cmd_bd->add_option("--seed", sbd.seed, "master seed");
    add_common(cmd_bd, sbd.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const Common* common = nullptr;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (cmd_sel->parsed()) {
            common = &sel.common;
            run_select(sel, false);
        } else if (cmd_selall->parsed()) {
            common = &selall.common;
            run_select(selall, true);
        } else if (cmd_pv->parsed()) {
            common = &pv.common;
            run_pvals(pv);
        } else if (cmd_ia->parsed()) {
            common = &ia.common;
            run_interact(ia);
        } else if (cmd_gr->parsed()) {
            common = &gr.common;
            run_graph(gr);
        } else if (cmd_fp->parsed()) {
            common = &sfp.common;
            run_sim_fp(sfp);
        } else if (cmd_tu->parsed()) {
            common = &stu.common;
            run_sim_tutorial(stu);
        } else if (cmd_bd->parsed()) {
            common = &sbd.common;
            run_sim_bidiag(sbd);
        }
    } catch (const gsel::io::TableError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }

    if (common && common->timing) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        std::fprintf(stderr, "time: %.3fs\n", secs);
    }
    return 0;
}
