#include "prgame/pagerank.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace prgame {

GameConfig GameConfig::uniform(int n, double alpha) {
    GameConfig cfg;
    cfg.alpha = alpha;
    cfg.q.assign(n, 1.0 / n);
    return cfg;
}

void GameConfig::validate(int n) const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    if (static_cast<int>(q.size()) != n) throw std::invalid_argument("q length mismatch");
    double sum = 0.0;
    for (double x : q) {
        if (x < 0.0) throw std::invalid_argument("q entries must be nonnegative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("q must sum to 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
}

bool GameConfig::q_is_uniform(double tol) const {
    if (q.empty()) return false;
    double u = 1.0 / static_cast<double>(q.size());
    for (double x : q)
        if (std::abs(x - u) > tol) return false;
    return true;
}

DirectedView::DirectedView(const Graph& g) {
    out_.reserve(g.n());
    for (int u = 0; u < g.n(); ++u) out_.push_back(g.neighbors(u));
}

DirectedView::DirectedView(const Graph& g, int v, const std::vector<int>& kept,
                           const std::vector<int>& outlinks) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("vertex out of range");
    std::set<int> keep(kept.begin(), kept.end());
    for (int w : kept)
        if (!g.has_edge(v, w)) throw std::invalid_argument("kept vertex is not a neighbour");
    std::set<int> extra(outlinks.begin(), outlinks.end());
    for (int u : extra) {
        if (u == v) throw std::invalid_argument("outlink to self");
        if (u < 0 || u >= g.n()) throw std::invalid_argument("outlink out of range");
        if (g.has_edge(v, u)) throw std::invalid_argument("outlink to an existing neighbour");
    }
    out_.resize(g.n());
    for (int u = 0; u < g.n(); ++u) {
        if (u == v) {
            for (int w : keep) out_[u].push_back(w);
            for (int w : extra) out_[u].push_back(w);
            std::sort(out_[u].begin(), out_[u].end());
        } else {
            for (int w : g.neighbors(u)) {
                if (w == v && !keep.count(u)) continue;  // v severed this edge
                out_[u].push_back(w);
            }
        }
    }
}

PotentialColumn potentials_column(const DirectedView& d, int v, double alpha) {
    int n = d.n();
    if (v < 0 || v >= n) throw std::invalid_argument("target out of range");
    PotentialColumn col;
    col.target = v;
    col.phi.assign(n, 0.0);
    col.phi[v] = 1.0;
    if (n == 1) return col;
    // unknowns are all vertices except the target; its known value feeds the rhs
    std::vector<int> slot(n, -1);
    int m = 0;
    for (int u = 0; u < n; ++u)
        if (u != v) slot[u] = m++;
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        int deg = d.out_degree(u);
        if (deg == 0) continue;  // phi stays 0
        double w = (1.0 - alpha) / deg;
        for (int x : d.out(u)) {
            if (x == v)
                rhs[slot[u]] += w;
            else
                A(slot[u], slot[x]) -= w;
        }
    }
    Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    for (int u = 0; u < n; ++u)
        if (u != v) col.phi[u] = sol[slot[u]];
    double res = recursion_residual(d, col, alpha);
    if (res > 1e-9)
        throw NumericalFailure("potential column residual " + std::to_string(res));
    return col;
}

double recursion_residual(const DirectedView& d, const PotentialColumn& col, double alpha) {
    double worst = std::abs(col.phi[col.target] - 1.0);
    for (int u = 0; u < d.n(); ++u) {
        if (u == col.target) continue;
        int deg = d.out_degree(u);
        if (deg == 0) {
            worst = std::max(worst, std::abs(col.phi[u]));
            continue;
        }
        double s = 0.0;
        for (int x : d.out(u)) s += col.phi[x];
        worst = std::max(worst, std::abs(col.phi[u] - (1.0 - alpha) / deg * s));
    }
    return worst;
}

PotentialColumn tree_potentials_column(const Graph& t, int v, double alpha) {
    if (!t.is_forest()) throw std::invalid_argument("graph has a cycle");
    int n = t.n();
    PotentialColumn col;
    col.target = v;
    col.phi.assign(n, 0.0);
    col.phi[v] = 1.0;
    // BFS order from v; every non-root vertex u satisfies
    //   phi[u] = (1-alpha)/deg(u) * (sum over children + phi[parent])
    // eliminated bottom-up as phi[u] = base[u] + slope[u] * phi[parent].
    std::vector<int> order, parent(n, -1);
    std::vector<char> seen(n, 0);
    order.push_back(v);
    seen[v] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        int u = order[i];
        for (int w : t.neighbors(u))
            if (!seen[w]) {
                seen[w] = 1;
                parent[w] = u;
                order.push_back(w);
            }
    }
    std::vector<double> base(n, 0.0), slope(n, 0.0), child_base(n, 0.0), child_slope(n, 0.0);
    for (std::size_t i = order.size(); i-- > 1;) {
        int u = order[i];
        double w = (1.0 - alpha) / t.degree(u);
        double denom = 1.0 - w * child_slope[u];
        base[u] = w * child_base[u] / denom;
        slope[u] = w / denom;
        child_base[parent[u]] += base[u];
        child_slope[parent[u]] += slope[u];
    }
    for (std::size_t i = 1; i < order.size(); ++i) {
        int u = order[i];
        col.phi[u] = base[u] + slope[u] * col.phi[parent[u]];
    }
    return col;
}

std::vector<double> subset_potentials(const Graph& g, int v, const RemovalComponent& comp,
                                      const std::vector<int>& sub, double alpha) {
    for (int u : sub)
        if (!std::binary_search(comp.attach.begin(), comp.attach.end(), u))
            throw std::invalid_argument("subset not contained in the attachment set");
    if (std::binary_search(comp.members.begin(), comp.members.end(), v))
        throw std::invalid_argument("target inside its own removal component");
    int m = static_cast<int>(comp.members.size());
    std::vector<double> phi(m, 0.0);
    if (sub.empty()) return phi;  // component cut off from the target entirely
    std::vector<int> slot(g.n(), -1);
    for (int i = 0; i < m; ++i) slot[comp.members[i]] = i;
    std::set<int> in_sub(sub.begin(), sub.end());
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        int u = comp.members[i];
        int internal = 0;
        for (int w : g.neighbors(u))
            if (slot[w] >= 0) ++internal;
        int deg = internal + (in_sub.count(u) ? 1 : 0);
        if (deg == 0) continue;
        double w = (1.0 - alpha) / deg;
        for (int x : g.neighbors(u))
            if (slot[x] >= 0) A(i, slot[x]) -= w;
        if (in_sub.count(u)) rhs[i] += w;  // the edge to the target itself
    }
    Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
    for (int i = 0; i < m; ++i) phi[i] = sol[i];
    return phi;
}

double pagerank_from_potentials(const DirectedView& d, int v, const GameConfig& cfg,
                                const PotentialColumn& col) {
    int deg = d.out_degree(v);
    if (deg == 0) throw std::invalid_argument("dangling target");
    double num = 0.0;
    for (int u = 0; u < d.n(); ++u) num += cfg.q[u] * col.phi[u];
    num *= cfg.alpha;
    double ret = 0.0;
    for (int x : d.out(v)) ret += col.phi[x];
    double den = 1.0 - (1.0 - cfg.alpha) / deg * ret;
    return num / den;
}

std::vector<double> stationary_pagerank(const DirectedView& d, const GameConfig& cfg) {
    int n = d.n();
    cfg.validate(n);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    for (int u = 0; u < n; ++u) {
        int deg = d.out_degree(u);
        if (deg == 0) {
            A(u, u) -= 1.0 - cfg.alpha;  // holds in place until the next jump
            continue;
        }
        double w = (1.0 - cfg.alpha) / deg;
        for (int x : d.out(u)) A(x, u) -= w;
    }
    Eigen::VectorXd rhs(n);
    for (int u = 0; u < n; ++u) rhs[u] = cfg.alpha * cfg.q[u];
    Eigen::VectorXd pi = A.partialPivLu().solve(rhs);
    double sum = pi.sum();
    if (std::abs(sum - 1.0) > 1e-10)
        throw NumericalFailure("stationary distribution sums to " + std::to_string(sum));
    return std::vector<double>(pi.data(), pi.data() + n);
}

}  // namespace prgame
