#pragma once

#include "prgame/graph.hpp"
#include "prgame/pagerank.hpp"

#include <cstdint>

namespace prgame {

/// maximize (1'x)(A0 + a'x)/(B0 + b'x) over nonzero 0/1 vectors x.
/// The denominator must be positive for every nonzero x.
struct LinearFractionalProgram {
    double A0 = 0.0;
    double B0 = 0.0;
    std::vector<double> a;
    std::vector<double> b;
    int dim() const { return static_cast<int>(a.size()); }
};

struct LevelOptimum {
    std::vector<char> x;  ///< chosen support, size dim
    double value = 0.0;   ///< max of (A0 + a'x)/(B0 + b'x) at this cardinality
};

/// Ratio optima for every cardinality l = 1..dim in one sweep of the
/// arrangement of lines c_i = a_i - b_i * delta: the l-th level of the
/// arrangement traces the weight-l maximizer as delta grows, and the level's
/// value turns negative exactly past the optimum.
std::vector<LevelOptimum> all_level_optima(const LinearFractionalProgram& p);

/// The single-cardinality result of the sweep above.
LevelOptimum layer_walk_max(const LinearFractionalProgram& p, int l);

struct FractionalOptimum {
    std::vector<char> x;
    double value = 0.0;  ///< (1'x) * ratio
    int weight = 0;
};

/// Global optimum over all cardinalities; ties go to the smaller weight.
FractionalOptimum fractional_max(const LinearFractionalProgram& p);

/// Multilinear expansion coefficients of the objective around one vertex:
/// per component, a value a[mask] and b[mask] for every nonempty subset of
/// the attachment vertices, such that for any kept-set x
///   numerator   = numer_const + sum over groups/masks covered by x of a[mask]
///   denominator = denom_const + ... of b[mask]
/// reproduce alpha * sum_u q_u phi(x) and (1'x) * Eq-denominator exactly.
struct CoefficientGroup {
    std::vector<int> members;  ///< attachment vertices, sorted; bit i = members[i]
    std::vector<double> a;     ///< size 2^k, index 0 unused (0)
    std::vector<double> b;
};

struct SubsetCoefficients {
    double numer_const = 0.0;
    double denom_const = 0.0;
    std::vector<CoefficientGroup> groups;
    int total_slots() const;
};

SubsetCoefficients subset_coefficients(const Graph& g, int v, const RemovalDecomposition& dec,
                                       const GameConfig& cfg);

/// Per group and per pick-count t, the best achievable sum of c over all
/// sub-subsets of a size-t selection, where c[mask] = a[mask] - b[mask]*delta.
struct GroupValueTable {
    struct Row {
        std::vector<double> e;          ///< index t = 0..k; e[0] = 0
        std::vector<std::uint32_t> witness;
    };
    std::vector<Row> rows;
};

GroupValueTable group_value_table(const SubsetCoefficients& c, double delta);

struct KnapsackSolution {
    double value = 0.0;
    std::vector<std::uint32_t> masks;  ///< chosen subset per group
};

/// Pick one subset per group with total size l maximizing the table value.
/// Throws invalid_argument when l is infeasible.
KnapsackSolution knapsack_argmax(const GroupValueTable& t, int l);

struct ImprovementResult {
    bool improves = false;
    double h = 0.0;                    ///< best linearized value at delta_prime
    std::vector<std::uint32_t> masks;  ///< witness when improves
};

/// Sign test at delta_prime: positive h means some weight-l kept-set beats
/// the ratio delta_prime.
ImprovementResult improvement_test(const SubsetCoefficients& c, int l, double delta_prime,
                                   double tol = 1e-9);

struct DeltaStar {
    double value = 0.0;
    std::vector<std::uint32_t> masks;
};

/// Exact weight-l ratio optimum: bisect the root of the decreasing piecewise
/// linear h, then return the ratio of the last positive segment's support.
DeltaStar delta_star(const SubsetCoefficients& c, int l);

}  // namespace prgame
