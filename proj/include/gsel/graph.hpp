#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gsel/lsq.hpp"
#include "gsel/parallel.hpp"
#include "gsel/stepwise.hpp"

namespace gsel::graph {

enum class EdgeRule { Or, And };

// kmax = 0 derives min(n - 2, 30), a bound that keeps hub nodes from
// selecting without limit while staying overridable. With bonferroni set,
// each node's regression uses the cutoff alpha / (node count); callers
// passing an already-divided absolute cutoff disable it.
struct GraphConfig {
    double alpha = 0.05;
    double nu = 1.0;
    bool repeated = false;
    bool bonferroni = true;
    std::size_t kmax = 0;
    EdgeRule rule = EdgeRule::Or;
    std::size_t nthreads = 1;
};

// Undirected edge i < j with the per-direction selection P-values:
// p_forward is the P-value of column j in i's regression, p_backward that
// of i in j's regression; NaN marks a direction that did not select.
struct Edge {
    std::size_t i = 0;
    std::size_t j = 0;
    double p_forward = std::numeric_limits<double>::quiet_NaN();
    double p_backward = std::numeric_limits<double>::quiet_NaN();
};

struct EdgeList {
    std::vector<Edge> edges;                 // sorted by (i, j)
    std::vector<std::size_t> skipped_nodes;  // degenerate (constant) columns
};

// Regresses every node column on the remaining node columns with the
// stepwise method and connects selected pairs. With a subset, both the
// nodes and the candidate regressors are restricted to it, but edges are
// reported in original column indices.
inline EdgeList neighborhood_graph(
    const engine::Matrix& x, const GraphConfig& cfg,
    const std::vector<std::size_t>* subset = nullptr) {
    engine::validate(x);
    const std::size_t n = x.n;
    const std::size_t k = x.k;
    if (n < 3) throw std::domain_error("graph needs at least 3 rows");

    std::vector<std::size_t> nodes;
    if (subset) {
        nodes = *subset;
        std::sort(nodes.begin(), nodes.end());
        if (std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end())
            throw std::domain_error("node subset has duplicates");
        if (!nodes.empty() && nodes.back() >= k)
            throw std::domain_error("node index out of range");
    } else {
        nodes.resize(k);
        std::iota(nodes.begin(), nodes.end(), std::size_t{0});
    }
    if (nodes.size() < 2)
        throw std::domain_error("graph needs at least 2 nodes");

    select::PvalueConfig scfg;
    scfg.alpha = cfg.bonferroni
                     ? cfg.alpha / static_cast<double>(nodes.size())
                     : cfg.alpha;
    scfg.kmax = cfg.kmax > 0 ? cfg.kmax : std::min(n - 2, std::size_t{30});
    scfg.nu = cfg.nu;
    scfg.ek = nodes.size() - 1;
    scfg.centered = true;
    select::validate(scfg);

    std::vector<char> non_node(k, 1);
    for (std::size_t j : nodes) non_node[j] = 0;

    struct NodeResult {
        std::vector<std::pair<std::size_t, double>> picks;
        bool skipped = false;
    };
    std::vector<NodeResult> results(nodes.size());

    parallel_for_chunks(nodes.size(), cfg.nthreads, [&](std::size_t lo,
                                                        std::size_t hi) {
        engine::Dataset d;
        d.x = x;  // one copy per worker chunk; only y changes per node
        std::vector<char> excluded(k, 0);
        for (std::size_t t = lo; t < hi; ++t) {
            const std::size_t node = nodes[t];
            d.y.assign(x.col(node), x.col(node) + n);
            excluded = non_node;
            excluded[node] = 1;
            try {
                if (cfg.repeated) {
                    auto groups =
                        select::repeated_stepwise(d, scfg, 0, 0, 1, &excluded);
                    for (const auto& g : groups.groups)
                        for (const auto& s : g.steps)
                            results[t].picks.emplace_back(s.index, s.pvalue);
                } else {
                    auto path = select::stepwise(d, scfg, &excluded);
                    for (const auto& s : path.steps)
                        results[t].picks.emplace_back(s.index, s.pvalue);
                }
            } catch (const std::domain_error&) {
                results[t].skipped = true;  // constant or degenerate column
            }
        }
    });

    std::map<std::pair<std::size_t, std::size_t>, Edge> merged;
    EdgeList out;
    for (std::size_t t = 0; t < nodes.size(); ++t) {
        if (results[t].skipped) {
            out.skipped_nodes.push_back(nodes[t]);
            continue;
        }
        const std::size_t node = nodes[t];
        for (const auto& [j, p] : results[t].picks) {
            const auto key = std::minmax(node, j);
            Edge& e = merged[key];
            e.i = key.first;
            e.j = key.second;
            if (node == key.first)
                e.p_forward = p;
            else
                e.p_backward = p;
        }
    }
    for (const auto& [key, e] : merged) {
        if (cfg.rule == EdgeRule::And &&
            (std::isnan(e.p_forward) || std::isnan(e.p_backward)))
            continue;
        out.edges.push_back(e);
    }
    return out;
}

}  // namespace gsel::graph
