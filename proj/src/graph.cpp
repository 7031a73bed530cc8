#include "prgame/graph.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace prgame {

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                        std::vector<std::string> labels) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    Graph g;
    g.adj_.assign(n, {});
    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("label count does not match vertex count");
    {
        std::set<std::string> uniq(labels.begin(), labels.end());
        if (static_cast<int>(uniq.size()) != n)
            throw std::invalid_argument("duplicate vertex label");
    }
    g.labels_ = std::move(labels);
    std::vector<std::set<int>> adj(n);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop");
        adj[u].insert(v);
        adj[v].insert(u);
    }
    for (int i = 0; i < n; ++i) g.adj_[i].assign(adj[i].begin(), adj[i].end());
    return g;
}

std::size_t Graph::edge_count() const {
    std::size_t deg_sum = 0;
    for (const auto& a : adj_) deg_sum += a.size();
    return deg_sum / 2;
}

bool Graph::has_edge(int u, int v) const {
    const auto& a = adj_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
}

std::optional<int> Graph::vertex_by_label(std::string_view name) const {
    for (int i = 0; i < n(); ++i)
        if (labels_[i] == name) return i;
    return std::nullopt;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < n(); ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

Graph Graph::with_edge(int u, int v) const {
    auto e = edges();
    e.emplace_back(u, v);
    return from_edges(n(), e, labels_);
}

Graph Graph::without_edges_of(int v, const std::vector<int>& kept) const {
    std::set<int> keep(kept.begin(), kept.end());
    for (int w : kept)
        if (!has_edge(v, w)) throw std::invalid_argument("kept vertex is not a neighbour");
    std::vector<std::pair<int, int>> e;
    for (auto [a, b] : edges()) {
        if (a == v && !keep.count(b)) continue;
        if (b == v && !keep.count(a)) continue;
        e.emplace_back(a, b);
    }
    return from_edges(n(), e, labels_);
}

std::vector<int> Graph::component_of(int v) const {
    std::vector<char> seen(n(), 0);
    std::vector<int> stack{v}, comp;
    seen[v] = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        comp.push_back(u);
        for (int w : adj_[u])
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    std::sort(comp.begin(), comp.end());
    return comp;
}

std::vector<std::vector<int>> Graph::components() const {
    std::vector<char> seen(n(), 0);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n(); ++s) {
        if (seen[s]) continue;
        auto comp = component_of(s);
        for (int u : comp) seen[u] = 1;
        out.push_back(std::move(comp));
    }
    return out;
}

bool Graph::is_connected() const {
    if (n() == 0) return false;
    return static_cast<int>(component_of(0).size()) == n();
}

bool Graph::is_forest() const {
    std::size_t comp_count = components().size();
    return edge_count() + comp_count == static_cast<std::size_t>(n());
}

bool Graph::is_complete() const {
    return edge_count() == static_cast<std::size_t>(n()) * (n() - 1) / 2;
}

std::uint64_t Graph::canonical_hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(n()));
    for (auto [u, v] : edges()) {
        mix(static_cast<std::uint64_t>(u));
        mix(static_cast<std::uint64_t>(v));
    }
    return h;
}

bool operator==(const Graph& a, const Graph& b) {
    if (a.n() != b.n()) return false;
    std::map<std::string, int> bid;
    for (int i = 0; i < b.n(); ++i) bid[b.label(i)] = i;
    std::vector<int> map_ab(a.n());
    for (int i = 0; i < a.n(); ++i) {
        auto it = bid.find(a.label(i));
        if (it == bid.end()) return false;
        map_ab[i] = it->second;
    }
    if (a.edge_count() != b.edge_count()) return false;
    for (auto [u, v] : a.edges())
        if (!b.has_edge(map_ab[u], map_ab[v])) return false;
    return true;
}

Graph parse_graph(std::string_view text) {
    std::unordered_map<std::string, int> id;
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> singletons;
    auto intern = [&](const std::string& tok) {
        auto it = id.find(tok);
        if (it != id.end()) return it->second;
        int v = static_cast<int>(labels.size());
        id.emplace(tok, v);
        labels.push_back(tok);
        return v;
    };
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++lineno;
        std::istringstream ss{std::string(line)};
        std::vector<std::string> toks;
        std::string t;
        while (ss >> t) toks.push_back(t);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() == 1) {
            singletons.push_back(intern(toks[0]));
        } else if (toks.size() == 2) {
            if (toks[0] == toks[1]) throw ParseError("self-loop '" + toks[0] + "'", lineno);
            int a = intern(toks[0]);
            int b = intern(toks[1]);
            edges.emplace_back(a, b);
        } else {
            throw ParseError("expected one or two tokens, got " + std::to_string(toks.size()),
                             lineno);
        }
    }
    if (labels.empty()) throw ParseError("empty graph document", lineno);
    int n = static_cast<int>(labels.size());
    return Graph::from_edges(n, edges, std::move(labels));
}

bool label_less(const std::string& a, const std::string& b) {
    auto numeric = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    bool na = numeric(a), nb = numeric(b);
    if (na && nb) {
        // compare by value; equal values (leading zeros) fall back to bytes
        auto strip = [](const std::string& s) {
            std::size_t i = s.find_first_not_of('0');
            return i == std::string::npos ? std::string("0") : s.substr(i);
        };
        std::string sa = strip(a), sb = strip(b);
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        if (sa != sb) return sa < sb;
        return a < b;
    }
    if (na != nb) return na;  // numeric labels sort first
    return a < b;
}

std::vector<int> label_order(const Graph& g) {
    std::vector<int> order(g.n());
    for (int i = 0; i < g.n(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&g](int x, int y) { return label_less(g.label(x), g.label(y)); });
    return order;
}

std::string serialize_graph(const Graph& g) {
    using LabeledEdge = std::pair<std::string, std::string>;
    std::vector<LabeledEdge> rows;
    for (auto [u, v] : g.edges()) {
        std::string lu = g.label(u), lv = g.label(v);
        if (label_less(lv, lu)) std::swap(lu, lv);
        rows.emplace_back(std::move(lu), std::move(lv));
    }
    std::sort(rows.begin(), rows.end(), [](const LabeledEdge& x, const LabeledEdge& y) {
        if (x.first != y.first) return label_less(x.first, y.first);
        return label_less(x.second, y.second);
    });
    std::vector<std::string> bare;
    for (int v = 0; v < g.n(); ++v)
        if (g.degree(v) == 0) bare.push_back(g.label(v));
    std::sort(bare.begin(), bare.end(), label_less);
    std::string out;
    for (const auto& [a, b] : rows) out += a + " " + b + "\n";
    for (const auto& s : bare) out += s + "\n";
    return out;
}

RemovalDecomposition components_after_removal(const Graph& g, int v) {
    if (v < 0 || v >= g.n()) throw std::invalid_argument("vertex out of range");
    RemovalDecomposition dec;
    dec.center = v;
    std::vector<char> seen(g.n(), 0);
    seen[v] = 1;
    for (int s = 0; s < g.n(); ++s) {
        if (seen[s]) continue;
        RemovalComponent comp;
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            comp.members.push_back(u);
            for (int w : g.neighbors(u))
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        std::sort(comp.members.begin(), comp.members.end());
        for (int u : comp.members)
            if (g.has_edge(v, u)) comp.attach.push_back(u);
        dec.components.push_back(std::move(comp));
    }
    std::sort(dec.components.begin(), dec.components.end(),
              [](const RemovalComponent& a, const RemovalComponent& b) {
                  return a.members.front() < b.members.front();
              });
    return dec;
}

BiconnectedInfo k_parameter(const Graph& g) {
    if (g.n() == 0) throw std::invalid_argument("empty graph");
    BiconnectedInfo info;
    int n = g.n();
    std::vector<int> disc(n, -1), low(n, 0), parent(n, -1), child_idx(n, 0);
    std::vector<std::pair<int, int>> estack;
    int timer = 0;
    for (int root = 0; root < n; ++root) {
        if (disc[root] != -1) continue;
        std::vector<int> stack{root};
        disc[root] = low[root] = timer++;
        while (!stack.empty()) {
            int u = stack.back();
            const auto& nb = g.neighbors(u);
            if (child_idx[u] < static_cast<int>(nb.size())) {
                int w = nb[child_idx[u]++];
                if (w == parent[u]) continue;
                if (disc[w] == -1) {
                    estack.emplace_back(u, w);
                    parent[w] = u;
                    disc[w] = low[w] = timer++;
                    stack.push_back(w);
                } else if (disc[w] < disc[u]) {
                    estack.emplace_back(u, w);
                    low[u] = std::min(low[u], disc[w]);
                }
            } else {
                stack.pop_back();
                int p = parent[u];
                if (p >= 0) {
                    low[p] = std::min(low[p], low[u]);
                    if (low[u] >= disc[p]) {
                        std::vector<std::pair<int, int>> block;
                        while (!estack.empty()) {
                            auto e = estack.back();
                            estack.pop_back();
                            block.emplace_back(std::min(e.first, e.second),
                                               std::max(e.first, e.second));
                            if (e == std::make_pair(p, u)) break;
                        }
                        if (!block.empty()) info.blocks.push_back(std::move(block));
                    }
                }
            }
        }
    }
    int k = 1;
    std::vector<int> count(n, 0);
    for (const auto& block : info.blocks) {
        std::vector<int> touched;
        for (auto [u, w] : block) {
            if (count[u]++ == 0) touched.push_back(u);
            if (count[w]++ == 0) touched.push_back(w);
        }
        for (int u : touched) {
            k = std::max(k, count[u]);
            count[u] = 0;
        }
    }
    info.k = k;
    return info;
}

bool check_swap_automorphism(const Graph& g, const std::vector<int>& sigma, int u, int v) {
    int n = g.n();
    if (static_cast<int>(sigma.size()) != n) throw std::invalid_argument("sigma size mismatch");
    std::vector<char> hit(n, 0);
    for (int x : sigma) {
        if (x < 0 || x >= n || hit[x]) throw std::invalid_argument("sigma is not a permutation");
        hit[x] = 1;
    }
    if (sigma[u] != v || sigma[v] != u) return false;
    for (auto [a, b] : g.edges())
        if (!g.has_edge(sigma[a], sigma[b])) return false;
    // a bijection mapping all edges to edges preserves non-edges too
    return true;
}

Graph make_complete(int n) {
    if (n < 1) throw std::invalid_argument("size must be positive");
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Graph::from_edges(n, e);
}

Graph make_path(int n) {
    if (n < 1) throw std::invalid_argument("size must be positive");
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
    return Graph::from_edges(n, e);
}

Graph make_cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u) e.emplace_back(u, (u + 1) % n);
    return Graph::from_edges(n, e);
}

Graph make_star(int leaves) {
    if (leaves < 1) throw std::invalid_argument("star needs at least one leaf");
    std::vector<std::pair<int, int>> e;
    for (int u = 1; u <= leaves; ++u) e.emplace_back(0, u);
    return Graph::from_edges(leaves + 1, e);
}

Graph make_random_tree(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("size must be positive");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<int, int>> e;
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> pick(0, i - 1);
        e.emplace_back(pick(rng), i);
    }
    return Graph::from_edges(n, e);
}

Graph make_gnp(int n, double p, std::uint64_t seed, bool largest_component_only) {
    if (n < 1) throw std::invalid_argument("size must be positive");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("probability out of range");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<int, int>> e;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) e.emplace_back(u, v);
    Graph g = Graph::from_edges(n, e);
    if (!largest_component_only) return g;
    auto comps = g.components();
    const std::vector<int>* best = &comps.front();
    for (const auto& c : comps)
        if (c.size() > best->size()) best = &c;
    std::vector<int> newid(n, -1);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < best->size(); ++i) {
        newid[(*best)[i]] = static_cast<int>(i);
        labels.push_back(g.label((*best)[i]));
    }
    std::vector<std::pair<int, int>> e2;
    for (auto [u, v] : g.edges())
        if (newid[u] >= 0 && newid[v] >= 0) e2.emplace_back(newid[u], newid[v]);
    return Graph::from_edges(static_cast<int>(best->size()), e2, std::move(labels));
}

}  // namespace prgame
