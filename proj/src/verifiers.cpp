#include "prgame/verifiers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>
#include <unordered_set>

namespace prgame {

Model model_from_string(const std::string& s) {
    if (s == "deletion") return Model::deletion;
    if (s == "request-delete" || s == "request_delete") return Model::request_delete;
    if (s == "add-delete" || s == "add_delete") return Model::add_delete;
    throw std::invalid_argument("unknown model '" + s + "'");
}

std::string to_string(Model m) {
    switch (m) {
        case Model::deletion: return "deletion";
        case Model::request_delete: return "request-delete";
        case Model::add_delete: return "add-delete";
    }
    return "?";
}

namespace {

/// neighbour-subtree (or component-branch) owner of every vertex reachable
/// from v: owner[u] = the neighbour of v whose branch contains u, -1 for v
/// itself and for unreachable vertices.
std::vector<int> branch_owner(const Graph& g, int v) {
    std::vector<int> owner(g.n(), -1);
    std::vector<char> seen(g.n(), 0);
    seen[v] = 1;
    for (int i : g.neighbors(v)) {
        if (seen[i]) continue;
        std::vector<int> stack{i};
        seen[i] = 1;
        owner[i] = i;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w : g.neighbors(u))
                if (!seen[w]) {
                    seen[w] = 1;
                    owner[w] = i;
                    stack.push_back(w);
                }
        }
    }
    return owner;
}

BestResponseResult trivial_result(const Graph& g, int v, const GameConfig& cfg) {
    BestResponseResult res;
    res.vertex = v;
    res.current_pi = stationary_pagerank(DirectedView(g), cfg)[v];
    res.best_pi = res.current_pi;
    return res;
}

std::vector<int> masks_to_kept(const SubsetCoefficients& coeffs,
                               const std::vector<std::uint32_t>& masks) {
    std::vector<int> kept;
    for (std::size_t gi = 0; gi < coeffs.groups.size(); ++gi) {
        const auto& mem = coeffs.groups[gi].members;
        for (std::size_t t = 0; t < mem.size(); ++t)
            if (masks[gi] >> t & 1) kept.push_back(mem[t]);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

double reconstruct_current(const SubsetCoefficients& coeffs, int dv) {
    double num = coeffs.numer_const, den = coeffs.denom_const;
    for (const auto& grp : coeffs.groups)
        for (std::size_t mask = 1; mask < grp.a.size(); ++mask) {
            num += grp.a[mask];
            den += grp.b[mask];
        }
    return dv * num / den;
}

}  // namespace

BestResponseResult best_response_deletion_tree(const Graph& t, int v, const GameConfig& cfg) {
    cfg.validate(t.n());
    if (!t.is_forest()) throw std::invalid_argument("deletion-tree verifier needs an acyclic graph");
    int dv = t.degree(v);
    if (dv == 0) return trivial_result(t, v, cfg);

    auto col = tree_potentials_column(t, v, cfg.alpha);
    auto owner = branch_owner(t, v);
    const auto& nb = t.neighbors(v);
    LinearFractionalProgram p;
    p.A0 = cfg.alpha * cfg.q[v];
    p.a.assign(dv, 0.0);
    p.b.assign(dv, 0.0);
    std::vector<int> slot(t.n(), -1);
    for (int i = 0; i < dv; ++i) slot[nb[i]] = i;
    for (int u = 0; u < t.n(); ++u)
        if (owner[u] >= 0) p.a[slot[owner[u]]] += cfg.alpha * cfg.q[u] * col.phi[u];
    for (int i = 0; i < dv; ++i) p.b[i] = 1.0 - (1.0 - cfg.alpha) * col.phi[nb[i]];

    double num = p.A0, den = 0.0;
    for (int i = 0; i < dv; ++i) {
        num += p.a[i];
        den += p.b[i];
    }
    double current = dv * num / den;

    auto opt = fractional_max(p);
    BestResponseResult res;
    res.vertex = v;
    res.current_pi = current;
    if (opt.value > current + cfg.tolerance) {
        res.in_best_response = false;
        res.best_pi = opt.value;
        Strategy s;
        s.vertex = v;
        for (int i = 0; i < dv; ++i)
            if (opt.x[i]) s.kept.push_back(nb[i]);
        res.improving = std::move(s);
    } else {
        res.best_pi = current;
    }
    res.margin = res.best_pi - res.current_pi;
    return res;
}

BestResponseResult best_response_deletion_general(const Graph& g, int v, const GameConfig& cfg) {
    cfg.validate(g.n());
    auto info = k_parameter(g);
    if (info.k > cfg.k_max)
        throw ScopeError("decomposition parameter k = " + std::to_string(info.k) +
                         " exceeds the configured bound " + std::to_string(cfg.k_max));
    int dv = g.degree(v);
    if (dv == 0) return trivial_result(g, v, cfg);

    auto dec = components_after_removal(g, v);
    auto coeffs = subset_coefficients(g, v, dec, cfg);
    double current = reconstruct_current(coeffs, dv);

    BestResponseResult res;
    res.vertex = v;
    res.current_pi = current;
    res.best_pi = current;
    for (int l = 1; l <= dv; ++l) {
        auto imp = improvement_test(coeffs, l, current / l, cfg.tolerance);
        if (!imp.improves) continue;
        auto ds = delta_star(coeffs, l);
        double val = l * ds.value;
        if (val > res.best_pi) {
            res.best_pi = val;
            Strategy s;
            s.vertex = v;
            s.kept = masks_to_kept(coeffs, ds.masks);
            res.improving = std::move(s);
            res.in_best_response = false;
        }
    }
    res.margin = res.best_pi - res.current_pi;
    return res;
}

RequestDeleteProgram request_delete_coefficients(const Graph& t, int v, const GameConfig& cfg,
                                                 int l2, const PotentialColumn& col) {
    int dv = t.degree(v);
    if (dv == 0) throw std::invalid_argument("vertex has no kept-edge choices");
    auto owner = branch_owner(t, v);

    RequestDeleteProgram rd;
    rd.neighbor = t.neighbors(v);
    std::vector<int> slot(t.n(), -1);
    for (int i = 0; i < dv; ++i) slot[rd.neighbor[i]] = i;

    // outlink candidates: reachable non-neighbours, best return probability first
    std::vector<int> cand;
    for (int u = 0; u < t.n(); ++u)
        if (u != v && owner[u] >= 0 && slot[u] < 0) cand.push_back(u);
    std::sort(cand.begin(), cand.end(), [&](int x, int y) {
        double ex = col.phi[x], ey = col.phi[y];
        if (ex != ey) return ex > ey;
        return x < y;
    });
    if (l2 < 0 || l2 > static_cast<int>(cand.size()))
        throw std::invalid_argument("outlink count out of range");
    rd.y_hat.assign(cand.begin(), cand.begin() + l2);

    auto& p = rd.program;
    p.A0 = cfg.alpha * cfg.q[v];
    p.B0 = static_cast<double>(l2);
    p.a.assign(dv, 0.0);
    p.b.assign(dv, 0.0);
    for (int u = 0; u < t.n(); ++u)
        if (owner[u] >= 0) p.a[slot[owner[u]]] += cfg.alpha * cfg.q[u] * col.phi[u];
    for (int i = 0; i < dv; ++i)
        p.b[i] = 1.0 - (1.0 - cfg.alpha) * col.phi[rd.neighbor[i]];
    // an outlink into a kept subtree keeps its return probability alive, which
    // shrinks that subtree's denominator share
    for (int u : rd.y_hat)
        p.b[slot[owner[u]]] -= (1.0 - cfg.alpha) * col.phi[u];
    return rd;
}

BestResponseResult best_response_request_delete_tree(const Graph& t, int v,
                                                     const GameConfig& cfg) {
    cfg.validate(t.n());
    if (!t.is_forest())
        throw std::invalid_argument("request-delete verifier needs an acyclic graph");
    int dv = t.degree(v);
    if (dv == 0) return trivial_result(t, v, cfg);

    auto col = tree_potentials_column(t, v, cfg.alpha);
    auto owner = branch_owner(t, v);
    int reachable = 0;
    for (int u = 0; u < t.n(); ++u)
        if (owner[u] >= 0) ++reachable;
    int max_l2 = reachable - dv;

    double current = 0.0;
    BestResponseResult res;
    res.vertex = v;
    double best = -1.0;
    std::vector<char> best_x;
    std::vector<int> best_yhat, neighbor_order;
    for (int l2 = 0; l2 <= max_l2; ++l2) {
        auto rd = request_delete_coefficients(t, v, cfg, l2, col);
        auto levels = all_level_optima(rd.program);
        if (l2 == 0) {
            double num = rd.program.A0, den = 0.0;
            for (int i = 0; i < dv; ++i) {
                num += rd.program.a[i];
                den += rd.program.b[i];
            }
            current = dv * num / den;
            neighbor_order = rd.neighbor;
        }
        for (int l1 = 1; l1 <= dv; ++l1) {
            double val = (l1 + l2) * levels[l1 - 1].value;
            if (val > best) {
                best = val;
                best_x = levels[l1 - 1].x;
                best_yhat = rd.y_hat;
            }
        }
    }
    res.current_pi = current;
    if (best > current + cfg.tolerance) {
        res.in_best_response = false;
        res.best_pi = best;
        Strategy s;
        s.vertex = v;
        for (int i = 0; i < dv; ++i)
            if (best_x[i]) s.kept.push_back(neighbor_order[i]);
        s.outlinks = best_yhat;
        std::sort(s.outlinks.begin(), s.outlinks.end());
        res.improving = std::move(s);
    } else {
        res.best_pi = current;
    }
    res.margin = res.best_pi - res.current_pi;
    return res;
}

LocalCoefficients local_pagerank_coefficients(const Graph& gp, const std::vector<int>& comp,
                                              int u, int v, const GameConfig& cfg) {
    if (!std::binary_search(comp.begin(), comp.end(), u))
        throw std::invalid_argument("vertex outside the component");
    int m = static_cast<int>(comp.size());
    std::vector<int> slot(gp.n(), -1);
    for (int i = 0; i < m; ++i) slot[comp[i]] = i;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs0(m), pcoef = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        int w = comp[i];
        rhs0[i] = cfg.alpha * cfg.q[w];
        if (gp.degree(w) == 0) {
            A(i, i) -= 1.0 - cfg.alpha;  // isolated: holds until the next jump
            continue;
        }
        for (int w2 : gp.neighbors(w)) {
            if (w2 == v) {
                pcoef[i] += 1.0 - cfg.alpha;  // inflow (1-alpha) * pi_v / deg(v) per edge
            } else if (slot[w2] >= 0) {
                A(i, slot[w2]) -= (1.0 - cfg.alpha) / gp.degree(w2);
            } else {
                throw std::invalid_argument("component is not sealed off by the cut vertex");
            }
        }
    }
    auto lu = A.partialPivLu();
    Eigen::VectorXd at0 = lu.solve(rhs0);
    Eigen::VectorXd at1 = lu.solve(Eigen::VectorXd(rhs0 + pcoef));
    LocalCoefficients lc;
    lc.zeta = at0[slot[u]];
    lc.eta = at1[slot[u]] - at0[slot[u]];
    return lc;
}

BestResponseResult best_response_add_delete(const Graph& g, int v, const GameConfig& cfg) {
    cfg.validate(g.n());
    auto info = k_parameter(g);
    if (info.k > cfg.k_max)
        throw ScopeError("decomposition parameter k = " + std::to_string(info.k) +
                         " exceeds the configured bound " + std::to_string(cfg.k_max));
    int dv = g.degree(v);
    auto base = stationary_pagerank(DirectedView(g), cfg);

    auto dec = components_after_removal(g, v);
    auto coeffs = subset_coefficients(g, v, dec, cfg);
    double current = dv > 0 ? reconstruct_current(coeffs, dv) : base[v];

    BestResponseResult res;
    res.vertex = v;
    res.current_pi = current;
    res.best_pi = current;

    // pure deletions first
    for (int l = 1; l <= dv; ++l) {
        auto imp = improvement_test(coeffs, l, current / l, cfg.tolerance);
        if (!imp.improves) continue;
        auto ds = delta_star(coeffs, l);
        double val = l * ds.value;
        if (val > res.best_pi) {
            res.best_pi = val;
            Strategy s;
            s.vertex = v;
            s.kept = masks_to_kept(coeffs, ds.masks);
            res.improving = std::move(s);
            res.in_best_response = false;
        }
    }

    // one mutual addition to u, with any deletions elsewhere; admissible only
    // if u itself gains
    for (int u = 0; u < g.n(); ++u) {
        if (u == v || g.has_edge(u, v)) continue;
        // the component of G - v containing u
        std::size_t j = 0;
        while (j < dec.components.size() &&
               !std::binary_search(dec.components[j].members.begin(),
                                   dec.components[j].members.end(), u))
            ++j;
        const auto& compj = dec.components[j];
        // groups for the remaining components
        SubsetCoefficients rest;
        rest.groups.reserve(coeffs.groups.size());
        for (const auto& grp : coeffs.groups)
            if (grp.members.empty() ||
                !std::binary_search(compj.attach.begin(), compj.attach.end(), grp.members[0]))
                rest.groups.push_back(grp);
        int lmax = rest.total_slots();

        Graph gplus = g.with_edge(u, v);
        RemovalComponent compj_plus;
        compj_plus.members = compj.members;
        compj_plus.attach = compj.attach;
        compj_plus.attach.insert(
            std::upper_bound(compj_plus.attach.begin(), compj_plus.attach.end(), u), u);

        std::vector<int> keep_other;  // v's neighbours outside comp j stay intact
        for (int w : g.neighbors(v))
            if (!std::binary_search(compj.members.begin(), compj.members.end(), w))
                keep_other.push_back(w);

        int kj = static_cast<int>(compj.attach.size());
        for (std::uint32_t upmask = 0; upmask < (1u << kj); ++upmask) {
            std::vector<int> kept_in_j{u};
            for (int t = 0; t < kj; ++t)
                if (upmask >> t & 1) kept_in_j.push_back(compj.attach[t]);
            std::sort(kept_in_j.begin(), kept_in_j.end());

            auto phi = subset_potentials(gplus, v, compj_plus, kept_in_j, cfg.alpha);
            double a0 = 0.0;
            for (std::size_t i = 0; i < compj.members.size(); ++i)
                a0 += cfg.q[compj.members[i]] * phi[i];
            a0 *= cfg.alpha;
            double ret = 0.0;
            for (int w : kept_in_j) {
                auto it = std::lower_bound(compj.members.begin(), compj.members.end(), w);
                ret += phi[it - compj.members.begin()];
            }
            int m = static_cast<int>(kept_in_j.size());
            double b0 = m - (1.0 - cfg.alpha) * ret;

            rest.numer_const = coeffs.numer_const + a0;
            rest.denom_const = b0;

            std::vector<int> keep_all = keep_other;
            keep_all.insert(keep_all.end(), kept_in_j.begin(), kept_in_j.end());
            Graph gp = gplus.without_edges_of(v, keep_all);
            auto lc = local_pagerank_coefficients(gp, compj.members, u, v, cfg);
            if (!(lc.eta > 0.0))
                throw NumericalFailure("nonpositive local slope for an attached vertex");
            double thr_u = (base[u] + cfg.tolerance - lc.zeta) / lc.eta;

            for (int l = 0; l <= lmax; ++l) {
                double delta2 = std::max((current + cfg.tolerance) / (l + m), thr_u);
                if (delta2 < 0.0) delta2 = 0.0;
                auto table = group_value_table(rest, delta2);
                auto sol = knapsack_argmax(table, l);
                double h = (rest.numer_const - delta2 * rest.denom_const) + sol.value;
                if (h <= 0.0) continue;
                auto ds = delta_star(rest, l);
                double val = (l + m) * ds.value;
                if (val > res.best_pi) {
                    res.best_pi = val;
                    Strategy s;
                    s.vertex = v;
                    s.kept = masks_to_kept(rest, ds.masks);
                    for (int w : kept_in_j)
                        if (w != u) s.kept.push_back(w);
                    std::sort(s.kept.begin(), s.kept.end());
                    s.added_edge = u;
                    res.improving = std::move(s);
                    res.in_best_response = false;
                }
            }
        }
    }
    res.margin = res.best_pi - res.current_pi;
    return res;
}

namespace {

/// Deterministic per-vertex fan-out: results land in id order.
template <typename F>
std::vector<BestResponseResult> for_each_vertex(const Graph& g, F&& check) {
    int n = g.n();
    std::vector<BestResponseResult> results(n);
    unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(), 8);
    if (workers <= 1 || n < 4) {
        for (int v = 0; v < n; ++v) results[v] = check(v);
        return results;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int v = next++; v < n; v = next++) results[v] = check(v);
            } catch (...) {
                errors[t] = std::current_exception();
                next = n;
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

}  // namespace

NashReport verify_nash(const Graph& g, Model model, const GameConfig& cfg) {
    cfg.validate(g.n());
    auto t0 = std::chrono::steady_clock::now();
    NashReport report;
    report.model = model;
    report.config = cfg;
    switch (model) {
        case Model::deletion:
            if (g.is_forest()) {
                report.results =
                    for_each_vertex(g, [&](int v) { return best_response_deletion_tree(g, v, cfg); });
            } else {
                auto info = k_parameter(g);
                if (info.k > cfg.k_max)
                    throw ScopeError("decomposition parameter k = " + std::to_string(info.k) +
                                     " exceeds the configured bound " + std::to_string(cfg.k_max));
                report.results = for_each_vertex(
                    g, [&](int v) { return best_response_deletion_general(g, v, cfg); });
            }
            break;
        case Model::request_delete:
            if (!g.is_forest())
                throw ScopeError("request-delete verification covers trees only");
            report.results = for_each_vertex(
                g, [&](int v) { return best_response_request_delete_tree(g, v, cfg); });
            break;
        case Model::add_delete: {
            auto info = k_parameter(g);
            if (info.k > cfg.k_max)
                throw ScopeError("decomposition parameter k = " + std::to_string(info.k) +
                                 " exceeds the configured bound " + std::to_string(cfg.k_max));
            report.results =
                for_each_vertex(g, [&](int v) { return best_response_add_delete(g, v, cfg); });
            break;
        }
    }
    report.verdict = true;
    for (const auto& r : report.results) report.verdict = report.verdict && r.in_best_response;
    report.timing_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

AlphaInsensitivity alpha_insensitive_check(const Graph& g, const std::vector<double>& alphas,
                                           double tolerance, int k_max) {
    AlphaInsensitivity out;
    out.structural = g.is_complete();
    for (double alpha : alphas) {
        GameConfig cfg = GameConfig::uniform(g.n(), alpha);
        cfg.tolerance = tolerance;
        cfg.k_max = k_max;
        out.empirical.emplace_back(alpha, verify_nash(g, Model::add_delete, cfg).verdict);
    }
    return out;
}

AdditionGain symmetric_addition_gain(const Graph& g, int u, int v, const std::vector<int>& sigma,
                                     const GameConfig& cfg) {
    cfg.validate(g.n());
    if (g.has_edge(u, v)) throw std::invalid_argument("endpoints already adjacent");
    if (!cfg.q_is_uniform()) throw std::invalid_argument("uniform q required");
    if (!check_swap_automorphism(g, sigma, u, v))
        throw std::invalid_argument("permutation is not a swap automorphism for the pair");
    auto before = stationary_pagerank(DirectedView(g), cfg);
    auto after = stationary_pagerank(DirectedView(g.with_edge(u, v)), cfg);
    return {after[u] - before[u], after[v] - before[v]};
}

Graph apply_strategy(const Graph& g, const Strategy& s) {
    if (!s.outlinks.empty())
        throw std::invalid_argument("one-way outlinks cannot be materialized undirected");
    Graph out = g.without_edges_of(s.vertex, s.kept);
    if (s.added_edge) out = out.with_edge(s.vertex, *s.added_edge);
    return out;
}

DynamicsTrace best_response_dynamics(const Graph& g0, Model model, const GameConfig& cfg,
                                     int max_steps) {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be positive");
    if (model == Model::request_delete)
        throw ScopeError("dynamics supports the deletion and add-delete models");
    DynamicsTrace trace;
    Graph g = g0;
    std::unordered_set<std::uint64_t> seen{g.canonical_hash()};
    for (int step = 0; step < max_steps; ++step) {
        auto pis = stationary_pagerank(DirectedView(g), cfg);
        std::optional<Strategy> move;
        for (int v = 0; v < g.n() && !move; ++v) {
            auto r = model == Model::deletion
                         ? (g.is_forest() ? best_response_deletion_tree(g, v, cfg)
                                          : best_response_deletion_general(g, v, cfg))
                         : best_response_add_delete(g, v, cfg);
            if (!r.in_best_response) move = r.improving;
        }
        if (!move) {
            trace.outcome = DynamicsOutcome::equilibrium;
            trace.final_graph = g;
            return trace;
        }
        Graph next = apply_strategy(g, *move);
        auto pis2 = stationary_pagerank(DirectedView(next), cfg);
        DynamicsStep rec;
        rec.mover = move->vertex;
        rec.strategy = *move;
        rec.delta_pi = pis2[move->vertex] - pis[move->vertex];
        rec.hash = next.canonical_hash();
        trace.steps.push_back(rec);
        g = std::move(next);
        if (!seen.insert(rec.hash).second) {
            trace.outcome = DynamicsOutcome::cycle;
            trace.final_graph = g;
            return trace;
        }
    }
    // one more check so a cap landing exactly on an equilibrium is reported as one
    bool settled = true;
    for (int v = 0; v < g.n() && settled; ++v) {
        auto r = model == Model::deletion
                     ? (g.is_forest() ? best_response_deletion_tree(g, v, cfg)
                                      : best_response_deletion_general(g, v, cfg))
                     : best_response_add_delete(g, v, cfg);
        settled = r.in_best_response;
    }
    trace.outcome = settled ? DynamicsOutcome::equilibrium : DynamicsOutcome::step_cap;
    trace.final_graph = g;
    return trace;
}

}  // namespace prgame
