#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prgame {

/// Input that violates the edge-list grammar (self-loop, bad token count, empty document).
struct ParseError : std::runtime_error {
    int line;
    ParseError(const std::string& msg, int line_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// A model/graph combination the verifier does not cover.
struct ScopeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A solve whose result failed its residual or normalization check.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Simple undirected graph over dense vertex ids 0..n-1 with string labels.
/// Adjacency lists are sorted; construction rejects self-loops and collapses
/// parallel edges. Immutable after construction.
class Graph {
public:
    Graph() = default;

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges,
                            std::vector<std::string> labels = {});

    int n() const { return static_cast<int>(adj_.size()); }
    std::size_t edge_count() const;
    const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
    int degree(int v) const { return static_cast<int>(adj_.at(v).size()); }
    bool has_edge(int u, int v) const;

    const std::string& label(int v) const { return labels_.at(v); }
    const std::vector<std::string>& labels() const { return labels_; }
    std::optional<int> vertex_by_label(std::string_view name) const;

    /// All edges as (u, v) pairs with u < v, sorted.
    std::vector<std::pair<int, int>> edges() const;

    Graph with_edge(int u, int v) const;
    /// Remove every edge of v except those to `kept` (undirected deletion).
    Graph without_edges_of(int v, const std::vector<int>& kept) const;

    bool is_connected() const;
    bool is_forest() const;
    bool is_tree() const { return is_connected() && is_forest(); }
    bool is_complete() const;

    /// Vertices reachable from v (including v), sorted.
    std::vector<int> component_of(int v) const;
    /// All connected components, each sorted, ordered by smallest member.
    std::vector<std::vector<int>> components() const;

    /// Order-independent hash of (n, edge set); labels are ignored.
    std::uint64_t canonical_hash() const;

private:
    std::vector<std::vector<int>> adj_;
    std::vector<std::string> labels_;
};

/// Same labelled graph: equal label sets and equal edge sets under label identity.
bool operator==(const Graph& a, const Graph& b);
inline bool operator!=(const Graph& a, const Graph& b) { return !(a == b); }

/// Parse an edge-list document: one "u v" per line, '#' comment lines, blank
/// lines ignored; a bare single token declares an isolated vertex. Vertex ids
/// are assigned by first appearance.
Graph parse_graph(std::string_view text);

/// Inverse of parse_graph: "u v" lines with u before v in label order, edges
/// sorted, isolated vertices as bare labels at the end.
std::string serialize_graph(const Graph& g);

/// Compare labels numerically when both are all digits, else bytewise.
bool label_less(const std::string& a, const std::string& b);
/// Vertex ids sorted by label_less.
std::vector<int> label_order(const Graph& g);

struct RemovalComponent {
    std::vector<int> members;  ///< C_i: a connected component of G - v, sorted
    std::vector<int> attach;   ///< U_i = C_i ∩ Γ(v), sorted
};

struct RemovalDecomposition {
    int center = -1;
    std::vector<RemovalComponent> components;  ///< ordered by smallest member
};

RemovalDecomposition components_after_removal(const Graph& g, int v);

struct BiconnectedInfo {
    std::vector<std::vector<std::pair<int, int>>> blocks;  ///< edge sets, each edge u < v
    int k = 1;  ///< 1 for forests, else max vertex degree within any block
};

BiconnectedInfo k_parameter(const Graph& g);

/// True iff sigma is adjacency-preserving and swaps u and v. Throws if sigma
/// is not a permutation of the vertices.
bool check_swap_automorphism(const Graph& g, const std::vector<int>& sigma, int u, int v);

Graph make_complete(int n);
Graph make_path(int n);
Graph make_cycle(int n);
/// Star with `leaves` leaves; the center is vertex 0.
Graph make_star(int leaves);
/// Uniform random attachment tree; deterministic for a fixed seed.
Graph make_random_tree(int n, std::uint64_t seed);
/// Erdős–Rényi G(n,p); with largest_component_only, restrict to the largest
/// component (ties by smallest member), relabelling to dense ids but keeping
/// the original labels.
Graph make_gnp(int n, double p, std::uint64_t seed, bool largest_component_only = false);

}  // namespace prgame
