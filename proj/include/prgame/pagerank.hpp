#pragma once

#include "prgame/graph.hpp"

namespace prgame {

struct GameConfig {
    double alpha = 0.15;     ///< jump probability, strictly inside (0,1)
    std::vector<double> q;   ///< jump distribution over vertices
    double tolerance = 1e-9; ///< improvement margin and comparison tolerance
    int k_max = 12;          ///< refuse exponential decompositions beyond this

    static GameConfig uniform(int n, double alpha = 0.15);
    void validate(int n) const;
    bool q_is_uniform(double tol = 1e-12) const;
};

/// The directed walk graph: arcs both ways for every surviving undirected
/// edge, plus one-way outlinks for the (single) strategist vertex.
/// Out-adjacency is materialized on construction; immutable afterwards.
class DirectedView {
public:
    explicit DirectedView(const Graph& g);
    /// Apply a strategy of vertex v: keep only `kept` of its undirected edges
    /// (both arc directions of the others are removed) and add one-way arcs
    /// v -> u for each u in `outlinks`.
    DirectedView(const Graph& g, int v, const std::vector<int>& kept,
                 const std::vector<int>& outlinks = {});

    int n() const { return static_cast<int>(out_.size()); }
    const std::vector<int>& out(int u) const { return out_.at(u); }
    int out_degree(int u) const { return static_cast<int>(out_.at(u).size()); }

private:
    std::vector<std::vector<int>> out_;
};

/// Column of first-visit probabilities toward one target: phi[u] is the
/// probability that a walk from u reaches the target before its first jump.
struct PotentialColumn {
    int target = -1;
    std::vector<double> phi;
};

/// Dense solve of the one-step recursion
///   phi[target] = 1,
///   phi[u] = (1-alpha)/|out(u)| * sum over out-neighbours,  phi[u] = 0 if u dangles.
/// Throws NumericalFailure if the residual exceeds 1e-9.
PotentialColumn potentials_column(const DirectedView& d, int v, double alpha);

/// Same values as potentials_column on a bidirected forest, O(n) by one
/// post-order elimination and back-substitution rooted at v. Throws if the
/// graph has a cycle. Vertices outside v's component get 0.
PotentialColumn tree_potentials_column(const Graph& t, int v, double alpha);

/// Return probabilities toward v over one component of G - v when v keeps
/// exactly the edges to `sub` inside that component. Result is aligned with
/// comp.members. Throws if sub is not contained in comp.attach.
std::vector<double> subset_potentials(const Graph& g, int v, const RemovalComponent& comp,
                                      const std::vector<int>& sub, double alpha);

/// Max absolute defect of the one-step recursion over all rows.
double recursion_residual(const DirectedView& d, const PotentialColumn& col, double alpha);

/// Stationary mass of the target from its potential column:
///   alpha * sum_u q_u phi_u / (1 - (1-alpha)/|out(v)| * sum of phi over out(v)).
/// Throws invalid_argument("dangling target") if v has no outgoing arcs.
double pagerank_from_potentials(const DirectedView& d, int v, const GameConfig& cfg,
                                const PotentialColumn& col);

/// Direct solve of pi = alpha q + (1-alpha) P^T pi. A dangling vertex holds
/// its position on walk steps and leaves only via the jump, which is the one
/// convention consistent with the potential-based formula above. The result
/// sums to 1 within 1e-10 (else NumericalFailure).
std::vector<double> stationary_pagerank(const DirectedView& d, const GameConfig& cfg);

}  // namespace prgame
