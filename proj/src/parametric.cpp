#include "prgame/parametric.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace prgame {

namespace {

void validate_program(const LinearFractionalProgram& p) {
    int d = p.dim();
    if (d < 1) throw std::invalid_argument("empty program");
    if (static_cast<int>(p.b.size()) != d) throw std::invalid_argument("a/b size mismatch");
    // worst nonzero-x denominator: all negative coefficients, or the single
    // smallest one when none are negative
    double neg = 0.0, least = std::numeric_limits<double>::infinity();
    for (double x : p.b) {
        if (x < 0.0) neg += x;
        least = std::min(least, x);
    }
    double worst = p.B0 + (neg < 0.0 ? neg : least);
    if (!(worst > 0.0))
        throw std::invalid_argument("denominator not positive over all nonzero supports");
}

struct SweepEvent {
    double delta;
    int i, j;
};

}  // namespace

std::vector<LevelOptimum> all_level_optima(const LinearFractionalProgram& p) {
    validate_program(p);
    const int d = p.dim();
    const auto& a = p.a;
    const auto& b = p.b;

    // order at delta -> 0+: by a desc, then flatter line (smaller b) first
    std::vector<int> line_at(d + 1);  // position (1-based) -> line
    {
        std::vector<int> idx(d);
        for (int i = 0; i < d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](int x, int y) {
            if (a[x] != a[y]) return a[x] > a[y];
            if (b[x] != b[y]) return b[x] < b[y];
            return x < y;
        });
        for (int pos = 1; pos <= d; ++pos) line_at[pos] = idx[pos - 1];
    }
    std::vector<int> pos(d);
    for (int q = 1; q <= d; ++q) pos[line_at[q]] = q;

    std::vector<double> prefA(d + 1, 0.0), prefB(d + 1, 0.0);
    for (int q = 1; q <= d; ++q) {
        prefA[q] = prefA[q - 1] + a[line_at[q]];
        prefB[q] = prefB[q - 1] + b[line_at[q]];
    }

    std::vector<SweepEvent> events;
    events.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            if (b[i] == b[j]) continue;  // parallel or coincident: never swap
            double delta = (a[i] - a[j]) / (b[i] - b[j]);
            if (delta > 0.0 && std::isfinite(delta)) events.push_back({delta, i, j});
        }
    std::sort(events.begin(), events.end(), [](const SweepEvent& x, const SweepEvent& y) {
        if (x.delta != y.delta) return x.delta < y.delta;
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    });

    std::vector<char> stopped(d + 1, 0);
    std::vector<LevelOptimum> result(d + 1);
    auto snapshot = [&](int l) {
        LevelOptimum opt;
        opt.x.assign(d, 0);
        double sa = p.A0, sb = p.B0;
        for (int q = 1; q <= l; ++q) {
            int ln = line_at[q];
            opt.x[ln] = 1;
            sa += a[ln];
            sb += b[ln];
        }
        opt.value = sa / sb;
        return opt;
    };

    std::size_t k = 0;
    while (k < events.size()) {
        std::size_t k2 = k;
        double delta = events[k].delta;
        while (k2 < events.size() && events[k2].delta == delta) ++k2;
        // affected position intervals: hull of each event pair, merged
        std::vector<std::pair<int, int>> spans;
        for (std::size_t t = k; t < k2; ++t) {
            int plo = std::min(pos[events[t].i], pos[events[t].j]);
            int phi = std::max(pos[events[t].i], pos[events[t].j]);
            spans.emplace_back(plo, phi);
        }
        std::sort(spans.begin(), spans.end());
        std::vector<std::pair<int, int>> runs;
        for (auto [lo, hi] : spans) {
            if (!runs.empty() && lo <= runs.back().second)
                runs.back().second = std::max(runs.back().second, hi);
            else
                runs.emplace_back(lo, hi);
        }
        // midpoint to the next distinct event resolves the order past delta
        double next_delta = (k2 < events.size()) ? events[k2].delta : delta + 1.0;
        double mid = 0.5 * (delta + next_delta);
        for (auto [lo, hi] : runs) {
            // a level whose boundary sits inside the run is about to change;
            // if its running value already dipped below zero, its optimum is
            // the segment it is currently on
            for (int l = lo; l < hi; ++l) {
                if (stopped[l]) continue;
                double val = (p.A0 + prefA[l]) - (p.B0 + prefB[l]) * delta;
                if (val < 0.0) {
                    stopped[l] = 1;
                    result[l] = snapshot(l);
                }
            }
            std::vector<int> block(line_at.begin() + lo, line_at.begin() + hi + 1);
            std::sort(block.begin(), block.end(), [&](int x, int y) {
                double cx = a[x] - b[x] * mid, cy = a[y] - b[y] * mid;
                if (cx != cy) return cx > cy;
                return x < y;
            });
            for (int q = lo; q <= hi; ++q) {
                line_at[q] = block[q - lo];
                pos[line_at[q]] = q;
                prefA[q] = prefA[q - 1] + a[line_at[q]];
                prefB[q] = prefB[q - 1] + b[line_at[q]];
            }
        }
        k = k2;
    }
    for (int l = 1; l <= d; ++l)
        if (!stopped[l]) result[l] = snapshot(l);
    result.erase(result.begin());  // drop the unused slot 0
    return result;
}

LevelOptimum layer_walk_max(const LinearFractionalProgram& p, int l) {
    if (l < 1 || l > p.dim()) throw std::invalid_argument("cardinality out of range");
    return all_level_optima(p)[l - 1];
}

FractionalOptimum fractional_max(const LinearFractionalProgram& p) {
    auto levels = all_level_optima(p);
    FractionalOptimum best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int l = 1; l <= p.dim(); ++l) {
        double val = l * levels[l - 1].value;
        if (val > best.value) {
            best.value = val;
            best.x = levels[l - 1].x;
            best.weight = l;
        }
    }
    return best;
}

int SubsetCoefficients::total_slots() const {
    int s = 0;
    for (const auto& g : groups) s += static_cast<int>(g.members.size());
    return s;
}

SubsetCoefficients subset_coefficients(const Graph& g, int v, const RemovalDecomposition& dec,
                                       const GameConfig& cfg) {
    if (dec.center != v) throw std::invalid_argument("decomposition center mismatch");
    const double alpha = cfg.alpha;
    SubsetCoefficients out;
    out.numer_const = alpha * cfg.q[v];
    for (const auto& comp : dec.components) {
        int k = static_cast<int>(comp.attach.size());
        if (k == 0) continue;  // no edges into this component, nothing to decide
        int m = static_cast<int>(comp.members.size());
        std::size_t nmask = std::size_t{1} << k;
        // phi[mask][i]: return probability of members[i] when the kept set is `mask`
        std::vector<std::vector<double>> phi(nmask);
        phi[0].assign(m, 0.0);
        for (std::size_t mask = 1; mask < nmask; ++mask) {
            std::vector<int> sub;
            for (int t = 0; t < k; ++t)
                if (mask >> t & 1) sub.push_back(comp.attach[t]);
            phi[mask] = subset_potentials(g, v, comp, sub, alpha);
        }
        CoefficientGroup grp;
        grp.members = comp.attach;
        grp.a.assign(nmask, 0.0);
        grp.b.assign(nmask, 0.0);
        // numerator: alternating-sign subset sums of the q-weighted mass
        std::vector<double> F(nmask, 0.0);
        for (std::size_t mask = 0; mask < nmask; ++mask) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += cfg.q[comp.members[i]] * phi[mask][i];
            F[mask] = alpha * s;
        }
        for (int t = 0; t < k; ++t)
            for (std::size_t mask = 0; mask < nmask; ++mask)
                if (mask >> t & 1) F[mask] -= F[mask ^ (std::size_t{1} << t)];
        for (std::size_t mask = 1; mask < nmask; ++mask) grp.a[mask] = F[mask];
        // denominator: per attachment vertex, the transform of its own
        // return probability restricted to kept sets that include it
        std::vector<int> attach_slot(k);
        for (int t = 0; t < k; ++t) {
            attach_slot[t] = static_cast<int>(
                std::lower_bound(comp.members.begin(), comp.members.end(), comp.attach[t]) -
                comp.members.begin());
        }
        for (int t = 0; t < k; ++t) {
            std::vector<double> H(nmask, 0.0);
            for (std::size_t mask = 0; mask < nmask; ++mask)
                if (mask >> t & 1) H[mask] = phi[mask][attach_slot[t]];
            for (int s = 0; s < k; ++s)
                for (std::size_t mask = 0; mask < nmask; ++mask)
                    if (mask >> s & 1) H[mask] -= H[mask ^ (std::size_t{1} << s)];
            for (std::size_t mask = 1; mask < nmask; ++mask) {
                if (!(mask >> t & 1)) continue;
                if (std::popcount(mask) == 1)
                    grp.b[mask] = 1.0 - (1.0 - alpha) * H[mask];
                else
                    grp.b[mask] -= (1.0 - alpha) * H[mask];
            }
        }
        out.groups.push_back(std::move(grp));
    }
    return out;
}

GroupValueTable group_value_table(const SubsetCoefficients& c, double delta) {
    GroupValueTable table;
    table.rows.reserve(c.groups.size());
    for (const auto& grp : c.groups) {
        int k = static_cast<int>(grp.members.size());
        std::size_t nmask = std::size_t{1} << k;
        std::vector<double> F(nmask, 0.0);
        for (std::size_t mask = 1; mask < nmask; ++mask) F[mask] = grp.a[mask] - grp.b[mask] * delta;
        for (int t = 0; t < k; ++t)
            for (std::size_t mask = 0; mask < nmask; ++mask)
                if (mask >> t & 1) F[mask] += F[mask ^ (std::size_t{1} << t)];
        GroupValueTable::Row row;
        row.e.assign(k + 1, -std::numeric_limits<double>::infinity());
        row.witness.assign(k + 1, 0);
        row.e[0] = 0.0;
        for (std::size_t mask = 1; mask < nmask; ++mask) {
            int t = std::popcount(mask);
            if (F[mask] > row.e[t]) {
                row.e[t] = F[mask];
                row.witness[t] = static_cast<std::uint32_t>(mask);
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

KnapsackSolution knapsack_argmax(const GroupValueTable& t, int l) {
    int d = static_cast<int>(t.rows.size());
    int cap = 0;
    for (const auto& row : t.rows) cap += static_cast<int>(row.e.size()) - 1;
    if (l < 0 || l > cap) throw std::invalid_argument("infeasible total weight");
    const double NEG = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> w(d + 1, std::vector<double>(l + 1, NEG));
    std::vector<std::vector<int>> choice(d + 1, std::vector<int>(l + 1, 0));
    w[0][0] = 0.0;
    for (int i = 1; i <= d; ++i) {
        const auto& e = t.rows[i - 1].e;
        int kmax = static_cast<int>(e.size()) - 1;
        for (int tt = 0; tt <= l; ++tt) {
            for (int s = 0; s <= std::min(kmax, tt); ++s) {
                if (w[i - 1][tt - s] == NEG) continue;
                double cand = w[i - 1][tt - s] + e[s];
                if (cand > w[i][tt]) {
                    w[i][tt] = cand;
                    choice[i][tt] = s;
                }
            }
        }
    }
    if (w[d][l] == NEG) throw std::invalid_argument("infeasible total weight");
    KnapsackSolution sol;
    sol.value = w[d][l];
    sol.masks.assign(d, 0);
    int tt = l;
    for (int i = d; i >= 1; --i) {
        int s = choice[i][tt];
        sol.masks[i - 1] = t.rows[i - 1].witness[s];
        tt -= s;
    }
    return sol;
}

ImprovementResult improvement_test(const SubsetCoefficients& c, int l, double delta_prime,
                                   double tol) {
    auto table = group_value_table(c, delta_prime);
    auto sol = knapsack_argmax(table, l);
    ImprovementResult res;
    res.h = (c.numer_const - delta_prime * c.denom_const) + sol.value;
    res.improves = res.h > tol;
    if (res.improves) res.masks = sol.masks;
    return res;
}

namespace {

double support_ratio(const SubsetCoefficients& c, const std::vector<std::uint32_t>& masks) {
    double num = c.numer_const, den = c.denom_const;
    for (std::size_t i = 0; i < c.groups.size(); ++i) {
        std::uint32_t m = masks[i];
        // sum coefficients over all nonempty submasks of the chosen subset
        for (std::uint32_t sub = m; sub; sub = (sub - 1) & m) {
            num += c.groups[i].a[sub];
            den += c.groups[i].b[sub];
        }
    }
    return num / den;
}

double h_at(const SubsetCoefficients& c, int l, double delta,
            std::vector<std::uint32_t>* masks_out) {
    auto sol = knapsack_argmax(group_value_table(c, delta), l);
    if (masks_out) *masks_out = sol.masks;
    return (c.numer_const - delta * c.denom_const) + sol.value;
}

}  // namespace

DeltaStar delta_star(const SubsetCoefficients& c, int l) {
    double lo = 0.0, hi = 1.0;
    for (int guard = 0; h_at(c, l, hi, nullptr) >= 0.0; ++guard) {
        hi *= 2.0;
        if (guard > 100) throw NumericalFailure("unbounded ratio in delta search");
    }
    std::vector<std::uint32_t> best_masks;
    bool have = false;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        std::vector<std::uint32_t> masks;
        if (h_at(c, l, mid, &masks) > 0.0) {
            lo = mid;
            best_masks = std::move(masks);
            have = true;
        } else {
            hi = mid;
        }
    }
    if (!have) h_at(c, l, lo, &best_masks);  // root at or below 0: take the argmax there
    DeltaStar ds;
    ds.masks = best_masks;
    ds.value = support_ratio(c, best_masks);
    return ds;
}

}  // namespace prgame
