#include <doctest.h>

#include "speiser_lab/error.h"
#include "speiser_lab/generators.h"
#include "speiser_lab/graph_ops.h"
#include "speiser_lab/speiser.h"
#include "speiser_lab/walk.h"

#include <cmath>
#include <random>

using namespace speiser_lab;

namespace {

// series-parallel reduction on the rooted tree: a vertex with c children at
// distance d < n sees c parallel branches of (1 + R_child)
double tree_oracle(int degree, int n) {
    double below = 0.0;  // resistance from a depth-(n-1) vertex down to S(n), per child
    for (int d = n - 1; d >= 1; --d) below = (1.0 + below) / (degree - 1);
    return (1.0 + below) / degree;
}

}  // namespace

TEST_CASE("series and parallel gadgets") {
    const auto p = path_graph(5);
    for (int n = 1; n <= 5; ++n) CHECK(effective_resistance(p, 0, n).resistance == doctest::Approx(n).epsilon(1e-9));
    CHECK(effective_resistance(cycle_graph(2), 0, 1).resistance == doctest::Approx(0.5));
    // 4-cycle from 0 to its antipode: two 2-edge branches in parallel
    CHECK(effective_resistance(cycle_graph(4), 0, 2).resistance == doctest::Approx(1.0).epsilon(1e-9));
    // 6-cycle, S(2) short-circuited: two 2-edge branches
    CHECK(effective_resistance(cycle_graph(6), 0, 2).resistance == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("tree matches the series-parallel closed form") {
    const auto t = regular_tree(3, 20);
    std::vector<int> radii;
    for (int n = 1; n <= 20; ++n) radii.push_back(n);
    const auto c = resistance_curve(t, 0, radii);
    const auto L = bfs_layers(t, 0, 20);
    const auto P = nash_williams_sum(L);
    for (int n = 1; n <= 20; ++n) {
        const double exact = (2.0 / 3.0) * (1.0 - std::pow(2.0, -n));
        CHECK(std::abs(c.resistance[n - 1] - exact) < 1e-9);
        CHECK(std::abs(c.resistance[n - 1] - tree_oracle(3, n)) < 1e-9);
        // spherically symmetric: the cut-set bound is attained
        CHECK(std::abs(c.resistance[n - 1] - P[n]) < 1e-9);
    }
    CHECK(std::abs(c.resistance[19] - c.resistance[18]) / c.resistance[19] < 0.01);
    CHECK(resistance_verdict(c) == "transient-leaning");
}

TEST_CASE("Z2 resistance grows like c log n") {
    const auto z = z2_patch(65);
    const auto c = resistance_curve(z, 0, {8, 16, 32, 64});
    std::vector<double> x;
    for (int n : c.radii) x.push_back(std::log(n));
    const auto f = fit_linear(x, c.resistance);
    CHECK(f.slope >= 0.1);
    CHECK(f.slope <= 0.3);
    CHECK(f.r2 > 0.999);
    CHECK(resistance_verdict(c) == "recurrent-leaning");
}

TEST_CASE("Nash-Williams sums") {
    const auto p = path_graph(6);
    const auto P = nash_williams_sum(bfs_layers(p, 0, 6));
    for (int n = 0; n <= 6; ++n) CHECK(P[n] == doctest::Approx(n));

    // |E(k)| = 8k + 4 in the l1 balls of Z2, so P(n) ~ (1/8) ln n
    const auto z = z2_patch(129);
    const auto L = bfs_layers(z, 0, 128);
    for (int k = 1; k < 20; ++k) CHECK(L.cut_edges[k].size() == static_cast<std::size_t>(8 * k + 4));
    const auto Q = nash_williams_sum(L);
    const double slope = (Q[128] - Q[16]) / (std::log(128.0) - std::log(16.0));
    CHECK(std::abs(slope - 0.125) < 0.2 * 0.125);

    const auto t = nash_williams_sum(bfs_layers(regular_tree(3, 12), 0, 12));
    CHECK(t.back() < 2.0 / 3.0);
    CHECK(t.back() - t[t.size() - 2] < 1e-3);
}

TEST_CASE("resistance dominates the cut-set bound and is monotone") {
    for (const auto& g : {hex_lattice_ball(12), triangular_tiling_ball(7, 5), z2_patch(12)}) {
        const auto L = bfs_layers(g, 0, 12);
        const auto P = nash_williams_sum(L);
        double prev = 0.0;
        for (int n = 1; n <= L.reliable_depth + 1 && n <= L.depth; ++n) {
            const double r = effective_resistance(g, 0, n).resistance;
            CHECK(r >= P[n] - 1e-12);
            CHECK(r >= prev - 1e-12);
            prev = r;
        }
    }
}

TEST_CASE("Rayleigh monotonicity under random conductance cuts") {
    const auto g = hex_lattice_ball(8);
    const double base = effective_resistance(g, 0, 7).resistance;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        ResistanceOptions o;
        o.conductance.assign(g.num_edges(), 1.0);
        for (auto& c : o.conductance)
            if (rng() % 3 == 0) c = 0.25 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
        CHECK(effective_resistance(g, 0, 7, o).resistance >= base - 1e-12);
        for (auto& c : o.conductance) c *= 2.0;  // uniform scaling halves R
        CHECK(effective_resistance(g, 0, 7, o).resistance >= base / 2.0 - 1e-12);
    }
}

TEST_CASE("input and convergence errors") {
    const auto z = z2_patch(10);
    CHECK_THROWS_AS(effective_resistance(z, 0, 12), InputError);  // beyond the reliable range
    CHECK_THROWS_AS(effective_resistance(z, 0, 0), InputError);
    CHECK_THROWS_AS(effective_resistance(path_graph(3), 0, 4), InputError);
    ResistanceOptions bad;
    bad.conductance = {1.0};
    CHECK_THROWS_AS(effective_resistance(z, 0, 3, bad), InputError);
    ResistanceOptions tight;
    tight.max_iter = 1;
    tight.tol = 1e-14;
    CHECK_THROWS_AS(effective_resistance(z2_patch(40), 0, 39, tight), ConvergenceError);
    CHECK_THROWS_AS(doyle_test(path_graph(3), 1, 0, 0), InputError);
}

TEST_CASE("doyle control: {3,8} triangulation") {
    const auto g = triangular_tiling_ball(8, 7);
    const auto rep = doyle_test(g, 1, 0, 7);
    CHECK_FALSE(rep.speiser_input);
    REQUIRE_FALSE(rep.flags.empty());
    CHECK(rep.flags[0].find("not a Speiser graph") != std::string::npos);
    CHECK(rep.n_used == 7);
    CHECK(rep.verdict == "transient-leaning");
    const auto& R = rep.curve.resistance;
    CHECK((R[6] - R[5]) / R[6] < 0.01);
    for (std::size_t i = 0; i < R.size(); ++i) CHECK(R[i] >= rep.nash_williams[i + 1] - 1e-12);

    const auto one = doyle_test(g, 1, 0, 1);
    CHECK(one.verdict == "inconclusive");
}

TEST_CASE("doyle on a tree-replaced octagonal graph leans recurrent") {
    const auto psi = build_octagonal_speiser(3);
    GrowthSchedule s;
    s.lengths = {21, 41, 61};
    const auto gamma = tree_replace(psi, bfs_layers(psi, 0, 3), s);
    const auto rep = doyle_test(gamma, 40, 0, 40);
    CHECK(rep.speiser_input);
    CHECK(rep.flags.empty());
    CHECK(rep.n_used == 40);
    CHECK(rep.verdict == "recurrent-leaning");
    for (std::size_t i = 1; i < rep.nash_williams.size(); ++i) {
        CHECK(rep.nash_williams[i] > rep.nash_williams[i - 1]);
        CHECK(rep.curve.resistance[i - 1] >= rep.nash_williams[i] - 1e-12);
    }
    // the extended graph keeps degree <= 6 off the frontier
    ExtendOptions eo;
    eo.grid_depth = 40;
    eo.include_truncation_faces = true;
    eo.ball_radius = 41;
    const auto ups = extend_speiser(gamma, eo);
    for (VertexId v = 0; v < static_cast<VertexId>(ups.num_vertices()); ++v)
        if (!ups.is_frontier(v)) CHECK(ups.degree(v) <= 6);
    CHECK(to_json(rep)["verdict"] == "recurrent-leaning");
}
