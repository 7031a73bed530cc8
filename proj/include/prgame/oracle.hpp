#pragma once

#include "prgame/verifiers.hpp"

namespace prgame {

/// Enumeration past this budget aborts instead of running unbounded.
struct EnumerationBudget {
    int max_n = 10;
    long long max_total_strategies = 1ll << 20;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ground truth by exhaustive strategy enumeration, every candidate evaluated
/// with the direct stationary solver on the modified graph. No shortcuts.
BestResponseResult brute_force_best_response(const Graph& g, int v, Model model,
                                             const GameConfig& cfg,
                                             const EnumerationBudget& budget = {});

NashReport brute_force_verify(const Graph& g, Model model, const GameConfig& cfg,
                              const EnumerationBudget& budget = {});

}  // namespace prgame
