#pragma once

#include "prgame/graph.hpp"
#include "prgame/pagerank.hpp"
#include "prgame/parametric.hpp"

#include <optional>

namespace prgame {

enum class Model { deletion, request_delete, add_delete };

Model model_from_string(const std::string& s);
std::string to_string(Model m);

struct Strategy {
    int vertex = -1;
    std::vector<int> kept;              ///< retained neighbours
    std::vector<int> outlinks;          ///< one-way links (request-delete only)
    std::optional<int> added_edge;      ///< mutual addition (add-delete only)
};

struct BestResponseResult {
    int vertex = -1;
    bool in_best_response = true;
    double current_pi = 0.0;
    double best_pi = 0.0;
    double margin = 0.0;  ///< best_pi - current_pi
    std::optional<Strategy> improving;
};

struct NashReport {
    Model model = Model::deletion;
    GameConfig config;
    std::vector<BestResponseResult> results;
    bool verdict = true;
    double timing_ms = 0.0;
};

/// Deletion model on forests: linear-time potentials and a quadratic layer
/// walk per vertex.
BestResponseResult best_response_deletion_tree(const Graph& t, int v, const GameConfig& cfg);

/// Deletion model on arbitrary graphs; work grows like 2^k per component, so
/// decompositions beyond cfg.k_max are refused (ScopeError).
BestResponseResult best_response_deletion_general(const Graph& g, int v, const GameConfig& cfg);

struct RequestDeleteProgram {
    LinearFractionalProgram program;  ///< index i = neighbour order below
    std::vector<int> neighbor;        ///< program index -> neighbour id
    std::vector<int> y_hat;           ///< the l2 outlink targets, greedy by potential
};

/// For a fixed outlink count l2, the fractional program over kept-edge sets:
/// outlinks go to the l2 non-neighbours of largest return probability (ties
/// by id), the l2 count becomes a denominator offset, and each neighbour's
/// coefficient absorbs the outlinks of its own subtree.
RequestDeleteProgram request_delete_coefficients(const Graph& t, int v, const GameConfig& cfg,
                                                 int l2, const PotentialColumn& col);

BestResponseResult best_response_request_delete_tree(const Graph& t, int v, const GameConfig& cfg);

struct LocalCoefficients {
    double zeta = 0.0;
    double eta = 0.0;
};

/// Affine response of pi_u to the mass flowing through the cut vertex v:
/// pi_u = zeta + eta * (pi_v / out-degree of v), for u in comp, where comp is
/// one component of gp - v. Throws if u is outside comp.
LocalCoefficients local_pagerank_coefficients(const Graph& gp, const std::vector<int>& comp,
                                              int u, int v, const GameConfig& cfg);

/// Add-delete model: pure deletions plus one mutual edge addition, the
/// addition admissible only if the other endpoint strictly gains.
BestResponseResult best_response_add_delete(const Graph& g, int v, const GameConfig& cfg);

NashReport verify_nash(const Graph& g, Model model, const GameConfig& cfg);

struct AlphaInsensitivity {
    bool structural = false;  ///< complete graph
    std::vector<std::pair<double, bool>> empirical;
};

AlphaInsensitivity alpha_insensitive_check(const Graph& g, const std::vector<double>& alphas,
                                           double tolerance = 1e-9, int k_max = 12);

struct AdditionGain {
    double delta_u = 0.0;
    double delta_v = 0.0;
};

/// Stationary-mass gain of both endpoints from adding (u,v), for a graph with
/// a swap automorphism between them and uniform q. Throws when the
/// automorphism check fails or q is not uniform.
AdditionGain symmetric_addition_gain(const Graph& g, int u, int v, const std::vector<int>& sigma,
                                     const GameConfig& cfg);

/// Materialize an undirected-model strategy (deletions, optional addition).
Graph apply_strategy(const Graph& g, const Strategy& s);

struct DynamicsStep {
    int mover = -1;
    Strategy strategy;
    double delta_pi = 0.0;
    std::uint64_t hash = 0;  ///< hash of the graph after the move
};

enum class DynamicsOutcome { equilibrium, step_cap, cycle };

struct DynamicsTrace {
    std::vector<DynamicsStep> steps;
    Graph final_graph;
    DynamicsOutcome outcome = DynamicsOutcome::equilibrium;
};

/// Repeatedly let the lowest-id vertex not in best response play its
/// improving strategy. Deletion and add-delete only.
DynamicsTrace best_response_dynamics(const Graph& g0, Model model, const GameConfig& cfg,
                                     int max_steps);

}  // namespace prgame
