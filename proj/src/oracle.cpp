#include "prgame/oracle.hpp"

#include <algorithm>
#include <chrono>

namespace prgame {

namespace {

long long strategy_count(const Graph& g, int v, Model model) {
    int dv = g.degree(v);
    long long nonnb = g.n() - dv - 1;
    switch (model) {
        case Model::deletion:
            return (1ll << dv) - 1;
        case Model::request_delete:
            return ((1ll << dv) - 1) << nonnb;
        case Model::add_delete:
            // every kept subset with no addition (nonzero) or with one addition
            return ((1ll << dv) - 1) + (1ll << dv) * nonnb;
    }
    return 0;
}

void check_budget(const Graph& g, int v, Model model, const EnumerationBudget& budget) {
    if (g.n() > budget.max_n)
        throw BudgetExceeded("graph size " + std::to_string(g.n()) + " over budget");
    long long cnt = strategy_count(g, v, model);
    if (cnt > budget.max_total_strategies)
        throw BudgetExceeded("strategy count " + std::to_string(cnt) + " over budget");
}

std::vector<int> bits_to_subset(std::uint64_t mask, const std::vector<int>& universe) {
    std::vector<int> out;
    for (std::size_t i = 0; i < universe.size(); ++i)
        if (mask >> i & 1) out.push_back(universe[i]);
    return out;
}

}  // namespace

BestResponseResult brute_force_best_response(const Graph& g, int v, Model model,
                                             const GameConfig& cfg,
                                             const EnumerationBudget& budget) {
    cfg.validate(g.n());
    check_budget(g, v, model, budget);
    auto base = stationary_pagerank(DirectedView(g), cfg);
    const auto& nb = g.neighbors(v);
    int dv = g.degree(v);
    std::vector<int> nonnb;
    for (int u = 0; u < g.n(); ++u)
        if (u != v && !g.has_edge(u, v)) nonnb.push_back(u);

    BestResponseResult res;
    res.vertex = v;
    res.current_pi = base[v];
    res.best_pi = base[v];

    auto consider = [&](double pi, Strategy&& s) {
        if (pi > res.best_pi) {
            res.best_pi = pi;
            res.improving = std::move(s);
        }
    };

    switch (model) {
        case Model::deletion:
            for (std::uint64_t mask = 1; mask < (1ull << dv); ++mask) {
                auto kept = bits_to_subset(mask, nb);
                double pi = stationary_pagerank(DirectedView(g, v, kept), cfg)[v];
                Strategy s;
                s.vertex = v;
                s.kept = kept;
                consider(pi, std::move(s));
            }
            break;
        case Model::request_delete:
            for (std::uint64_t mask = 1; mask < (1ull << dv); ++mask) {
                auto kept = bits_to_subset(mask, nb);
                for (std::uint64_t ymask = 0; ymask < (1ull << nonnb.size()); ++ymask) {
                    auto outs = bits_to_subset(ymask, nonnb);
                    double pi = stationary_pagerank(DirectedView(g, v, kept, outs), cfg)[v];
                    Strategy s;
                    s.vertex = v;
                    s.kept = kept;
                    s.outlinks = outs;
                    consider(pi, std::move(s));
                }
            }
            break;
        case Model::add_delete:
            for (std::uint64_t mask = 0; mask < (1ull << dv); ++mask) {
                auto kept = bits_to_subset(mask, nb);
                if (!kept.empty()) {
                    double pi = stationary_pagerank(DirectedView(g, v, kept), cfg)[v];
                    Strategy s;
                    s.vertex = v;
                    s.kept = kept;
                    consider(pi, std::move(s));
                }
                for (int u : nonnb) {
                    Graph gp = g.with_edge(u, v);
                    auto kept2 = kept;
                    kept2.insert(std::lower_bound(kept2.begin(), kept2.end(), u), u);
                    auto pis = stationary_pagerank(DirectedView(gp, v, kept2), cfg);
                    // the other endpoint must strictly gain or it refuses
                    if (pis[u] <= base[u] + cfg.tolerance) continue;
                    Strategy s;
                    s.vertex = v;
                    s.kept = kept;
                    s.added_edge = u;
                    consider(pis[v], std::move(s));
                }
            }
            break;
    }
    res.in_best_response = res.best_pi <= res.current_pi + cfg.tolerance;
    if (res.in_best_response) res.improving.reset();
    res.margin = res.best_pi - res.current_pi;
    return res;
}

NashReport brute_force_verify(const Graph& g, Model model, const GameConfig& cfg,
                              const EnumerationBudget& budget) {
    auto t0 = std::chrono::steady_clock::now();
    NashReport report;
    report.model = model;
    report.config = cfg;
    report.verdict = true;
    for (int v = 0; v < g.n(); ++v) {
        report.results.push_back(brute_force_best_response(g, v, model, cfg, budget));
        report.verdict = report.verdict && report.results.back().in_best_response;
    }
    report.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace prgame
