#include "prgame/parametric.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace prgame;

namespace {

// reference optimizer: try every support of the requested cardinality
std::pair<std::vector<char>, double> enumerate_level(const LinearFractionalProgram& p, int l) {
    int d = p.dim();
    std::vector<char> best_x;
    double best = -1e300;
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        if (std::popcount(mask) != l) continue;
        double num = p.A0, den = p.B0;
        for (int i = 0; i < d; ++i)
            if (mask >> i & 1) {
                num += p.a[i];
                den += p.b[i];
            }
        double val = num / den;
        if (val > best) {
            best = val;
            best_x.assign(d, 0);
            for (int i = 0; i < d; ++i) best_x[i] = (mask >> i & 1) ? 1 : 0;
        }
    }
    return {best_x, best};
}

double enumerate_fractional(const LinearFractionalProgram& p) {
    int d = p.dim();
    double best = -1e300;
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        double num = p.A0, den = p.B0;
        int l = 0;
        for (int i = 0; i < d; ++i)
            if (mask >> i & 1) {
                num += p.a[i];
                den += p.b[i];
                ++l;
            }
        best = std::max(best, l * num / den);
    }
    return best;
}

LinearFractionalProgram random_program(std::mt19937_64& rng, int d, bool with_offsets) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    LinearFractionalProgram p;
    p.a.resize(d);
    p.b.resize(d);
    for (int i = 0; i < d; ++i) {
        p.a[i] = uni(rng);
        p.b[i] = 0.1 + uni(rng);
    }
    if (with_offsets) {
        p.A0 = 0.25 * uni(rng);
        p.B0 = 0.25 * uni(rng);
    }
    return p;
}

}  // namespace

TEST_CASE("layer walk on a two-line instance") {
    LinearFractionalProgram p;
    p.a = {1.0, 0.0};
    p.b = {1.0, 1.0};
    auto l1 = layer_walk_max(p, 1);
    CHECK(l1.x == std::vector<char>{1, 0});
    CHECK(l1.value == doctest::Approx(1.0));
    auto l2 = layer_walk_max(p, 2);
    CHECK(l2.x == std::vector<char>{1, 1});
    CHECK(l2.value == doctest::Approx(0.5));
}

TEST_CASE("fractional max tie goes to the smaller weight") {
    LinearFractionalProgram p;
    p.a = {1.0, 0.0};
    p.b = {1.0, 1.0};
    auto opt = fractional_max(p);
    CHECK(opt.value == doctest::Approx(1.0));
    CHECK(opt.weight == 1);
    CHECK(opt.x == std::vector<char>{1, 0});
}

TEST_CASE("all-ones objective equals the weight") {
    LinearFractionalProgram p;
    p.a.assign(5, 1.0);
    p.b.assign(5, 1.0);
    auto opt = fractional_max(p);
    CHECK(opt.value == doctest::Approx(5.0));
    CHECK(opt.weight == 5);
}

TEST_CASE("layer walk equals enumeration on random instances") {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        int d = 1 + static_cast<int>(rng() % 10);
        auto p = random_program(rng, d, trial % 2 == 0);
        auto levels = all_level_optima(p);
        for (int l = 1; l <= d; ++l) {
            auto [ex, ev] = enumerate_level(p, l);
            CHECK(std::abs(levels[l - 1].value - ev) <= 1e-9);
        }
    }
}

TEST_CASE("fractional max equals enumeration, dims up to 14") {
    std::mt19937_64 rng(405);
    for (int trial = 0; trial < 200; ++trial) {
        int d = 1 + static_cast<int>(rng() % 14);
        auto p = random_program(rng, d, true);
        auto opt = fractional_max(p);
        CHECK(std::abs(opt.value - enumerate_fractional(p)) <= 1e-9);
    }
}

TEST_CASE("layer walk handles coincident and parallel lines") {
    LinearFractionalProgram p;
    p.a = {0.5, 0.5, 0.5, 0.8};
    p.b = {0.3, 0.3, 0.7, 0.7};  // lines 0,1 coincide; 0/1 vs 2 parallel pairs cross 3
    auto levels = all_level_optima(p);
    for (int l = 1; l <= 4; ++l) {
        auto [ex, ev] = enumerate_level(p, l);
        CHECK(std::abs(levels[l - 1].value - ev) <= 1e-12);
    }
}

TEST_CASE("layer walk handles concurrent crossings") {
    // three lines through one point, a fourth crossing nearby
    LinearFractionalProgram p;
    p.a = {0.9, 0.6, 0.3, 0.5};
    p.b = {0.9, 0.6, 0.3, 0.45};
    auto levels = all_level_optima(p);
    for (int l = 1; l <= 4; ++l) {
        auto [ex, ev] = enumerate_level(p, l);
        CHECK(std::abs(levels[l - 1].value - ev) <= 1e-12);
    }
}

TEST_CASE("negative coefficients are accepted while denominators stay positive") {
    LinearFractionalProgram p;
    p.A0 = 0.1;
    p.B0 = 2.0;
    p.a = {0.4, 0.7, 0.2};
    p.b = {0.9, -0.4, -0.3};
    auto levels = all_level_optima(p);
    for (int l = 1; l <= 3; ++l) {
        auto [ex, ev] = enumerate_level(p, l);
        CHECK(std::abs(levels[l - 1].value - ev) <= 1e-12);
    }
}

TEST_CASE("nonpositive denominators are rejected") {
    LinearFractionalProgram p;
    p.a = {1.0, 1.0};
    p.b = {1.0, -1.5};
    CHECK_THROWS_AS(all_level_optima(p), std::invalid_argument);
}

TEST_CASE("group value table") {
    SubsetCoefficients c;
    c.groups.resize(2);
    c.groups[0].members = {5};
    c.groups[0].a = {0.0, 0.3};
    c.groups[0].b = {0.0, 0.5};
    c.groups[1].members = {7, 9};
    c.groups[1].a = {0.0, 0.2, 0.4, -0.1};
    c.groups[1].b = {0.0, 0.6, 0.5, -0.2};
    double delta = 0.25;
    auto table = group_value_table(c, delta);
    CHECK(table.rows[0].e[0] == 0.0);
    CHECK(table.rows[0].e[1] == doctest::Approx(0.3 - 0.5 * delta));
    // size-2 subset accumulates every contained nonempty subset
    double c01 = (0.2 - 0.6 * delta) + (0.4 - 0.5 * delta) + (-0.1 + 0.2 * delta);
    CHECK(table.rows[1].e[2] == doctest::Approx(c01));
    CHECK(table.rows[1].e[1] ==
          doctest::Approx(std::max(0.2 - 0.6 * delta, 0.4 - 0.5 * delta)));
    CHECK(table.rows[1].witness[1] == 2u);  // the {9} singleton wins
}

TEST_CASE("knapsack with a single group picks the level directly") {
    GroupValueTable t;
    t.rows.push_back({{0.0, 5.0, 7.0}, {0u, 1u, 3u}});
    auto sol = knapsack_argmax(t, 2);
    CHECK(sol.value == doctest::Approx(7.0));
    CHECK(sol.masks[0] == 3u);
}

TEST_CASE("knapsack across two groups") {
    GroupValueTable t;
    t.rows.push_back({{0.0, 5.0}, {0u, 1u}});
    t.rows.push_back({{0.0, 4.0, 7.0}, {0u, 1u, 3u}});
    auto sol = knapsack_argmax(t, 2);
    CHECK(sol.value == doctest::Approx(9.0));
    CHECK(sol.masks[0] == 1u);
    CHECK(sol.masks[1] == 1u);
    CHECK_THROWS_AS(knapsack_argmax(t, 4), std::invalid_argument);
}

TEST_CASE("knapsack equals exhaustive subset enumeration") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        int d = 1 + static_cast<int>(rng() % 4);
        GroupValueTable t;
        int cap = 0;
        for (int i = 0; i < d; ++i) {
            int k = 1 + static_cast<int>(rng() % 4);
            cap += k;
            GroupValueTable::Row row;
            row.e.resize(k + 1);
            row.witness.assign(k + 1, 0);
            row.e[0] = 0.0;
            for (int s = 1; s <= k; ++s) row.e[s] = uni(rng);
            t.rows.push_back(row);
        }
        for (int l = 0; l <= cap; ++l) {
            auto sol = knapsack_argmax(t, l);
            // enumerate all per-group pick counts
            std::vector<int> pick(d, 0);
            double best = -1e300;
            for (;;) {
                int total = 0;
                double val = 0.0;
                for (int i = 0; i < d; ++i) {
                    total += pick[i];
                    val += t.rows[i].e[pick[i]];
                }
                if (total == l) best = std::max(best, val);
                int i = 0;
                while (i < d) {
                    if (++pick[i] < static_cast<int>(t.rows[i].e.size())) break;
                    pick[i++] = 0;
                }
                if (i == d) break;
            }
            CHECK(std::abs(sol.value - best) <= 1e-12);
        }
    }
}

TEST_CASE("improvement test: zero threshold improves whenever a gain exists") {
    SubsetCoefficients c;
    c.groups.resize(1);
    c.groups[0].members = {3};
    c.groups[0].a = {0.0, 0.2};
    c.groups[0].b = {0.0, 0.9};
    auto res = improvement_test(c, 1, 0.0);
    CHECK(res.improves);
    CHECK(res.h == doctest::Approx(0.2));
    CHECK(res.masks[0] == 1u);
}
