#include <doctest.h>

#include "speiser_lab/error.h"
#include "speiser_lab/graph_ops.h"
#include "speiser_lab/theorem1.h"

#include <cmath>
#include <queue>

using namespace speiser_lab;

namespace {

// plain BFS over the half-edge structure
std::vector<long long> sphere_sizes(const RotationGraph& g, int n) {
    std::vector<int> dist(g.num_vertices(), -1);
    std::queue<VertexId> q;
    dist[0] = 0;
    q.push(0);
    std::vector<long long> s(n + 1, 0);
    while (!q.empty()) {
        const VertexId v = q.front();
        q.pop();
        if (dist[v] > n) continue;
        ++s[dist[v]];
        for (HalfEdgeId h : g.rotation(v)) {
            const VertexId w = g.target(h);
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    return s;
}

// odd ceiling of exp(x) from the Taylor series
long long odd_ceil_exp(int x) {
    long double term = 1, sum = 1;
    for (int i = 1; i < 400; ++i) {
        term *= static_cast<long double>(x) / i;
        sum += term;
    }
    auto l = static_cast<long long>(std::ceil(sum));
    return l % 2 ? l : l + 1;
}

GrowthSchedule sched(std::vector<long long> l) {
    GrowthSchedule s;
    s.lengths = std::move(l);
    return s;
}

Theorem1Config small_config() {
    Theorem1Config c;
    c.schedule = {21, 41};
    c.growth_k_min = 25;
    c.growth_k_max = 60;
    c.upsilon_k_max = 40;
    c.doyle_n_max = 30;
    c.dual_resistance_radius = 5;
    c.dual_vel_radius = 5;
    c.dual_vel_annuli = {{0, 1}, {1, 2}, {2, 3}, {3, 4}};
    c.dual_ratio_n = {2, 3, 4, 5};
    c.containment_depth = 5;
    return c;
}

}  // namespace

TEST_CASE("schedule from exp(3^(n+1))") {
    CHECK(paper_schedule(0) == 21);
    CHECK(paper_schedule(0) == odd_ceil_exp(3));
    CHECK(paper_schedule(1) == odd_ceil_exp(9));
    CHECK(paper_schedule(1) == 8105);  // e^9 = 8103.08..., so 8103 falls short
    CHECK(paper_schedule(2) == odd_ceil_exp(27));
    for (int n = 0; n < 3; ++n) CHECK(paper_schedule(n) % 2 == 1);
    CHECK_THROWS_AS(paper_schedule(3), InputError);
    CHECK_THROWS_AS(paper_schedule(-1), InputError);
}

TEST_CASE("gamma construction") {
    const auto psi = build_octagonal_speiser(4);
    CHECK(isomorphic(build_gamma(4, sched({1, 1, 1, 1})), psi));

    const auto g3 = build_gamma(1, sched({3}));
    const auto s3 = sphere_sizes(g3, 3);
    for (int k = 1; k <= 3; ++k) CHECK(s3[k] == 3);

    const auto g = build_gamma(2, sched({21, 8103}));
    const auto psi2 = build_octagonal_speiser(2);
    CHECK(g.num_vertices() - psi2.num_vertices() == 3 * 20 + 6 * 8102);
    const auto cls = classify(g);
    CHECK(cls.is_bipartite);
    REQUIRE(cls.homogeneous_degree.has_value());
    CHECK(*cls.homogeneous_degree == 3);

    // replacement arithmetic: one vertex per replaced edge per distance
    const auto s = sphere_sizes(g, 21 + 8103);
    long long ball = 0;
    for (int k = 0; k <= 21 + 8103; ++k) {
        ball += s[k];
        const int shell = k <= 21 ? 0 : 1;
        CHECK(s[k] <= std::pow(3, shell + 1));
        if (k > 21 && k < 21 + 8103) CHECK(ball == 6LL * k - 62);
    }

    CHECK_THROWS_AS(build_gamma(2, sched({20, 8103})), InputError);
    CHECK_THROWS_AS(build_gamma(3, sched({21, 8103})), InputError);
}

TEST_CASE("ball growth table") {
    const auto g = build_gamma(2, sched({21, 8103}));
    const auto t = verify_growth(g, 2, 8000);
    const auto s = sphere_sizes(g, 8000);
    long long ball = 0;
    int last_fail = -1;
    for (int k = 0; k <= 8000; ++k) {
        ball += s[k];
        if (k >= 2) {
            CHECK(t.count[k - 2] == ball);
            if (ball > k * std::log(k)) last_fail = k;
        }
    }
    CHECK(t.reliable_until == 8000);
    CHECK_FALSE(t.holds[0]);  // k = 2: 7 > 2 ln 2
    CHECK_FALSE(t.pass);
    CHECK(t.holds_from == last_fail + 1);
    CHECK(t.holds_from > 300);
    CHECK(t.holds_from < 400);

    // the Psi truncation runs out long before k = 20000
    const auto far = verify_growth(g, 8000, 9000);
    CHECK(far.reliable_until == 21 + 8103 - 1);
    CHECK_FALSE(far.reliable.back());

    // identity schedule: Psi grows exponentially
    const auto id = verify_growth(build_gamma(10, sched(std::vector<long long>(10, 1))), 5, 9);
    CHECK_FALSE(id.pass);
    CHECK(id.failures.back() == 9);
    CHECK(id.holds_from == -1);
}

TEST_CASE("coarser truncations give prefix tables") {
    const auto fine = verify_growth(build_gamma(3, sched({21, 41, 61})), 1, 200);
    const auto coarse = verify_growth(build_gamma(2, sched({21, 41})), 1, 200);
    CHECK(coarse.reliable_until == 21 + 41 - 1);
    CHECK(fine.reliable_until > coarse.reliable_until);
    for (std::size_t i = 0; i < coarse.k.size(); ++i) {
        if (!coarse.reliable[i]) break;
        CHECK(coarse.count[i] == fine.count[i]);
    }
}

TEST_CASE("extended graph bounds") {
    const auto g = build_gamma(2, sched({21, 41}));
    const auto r = verify_upsilon_bounds(g, 61, 1, 60);
    CHECK(r.sphere.reliable_until == 60);
    CHECK(r.columns_exact);
    CHECK(r.max_degree_nonfrontier <= 6);
    CHECK(r.nash_williams_increasing);
    CHECK(std::isfinite(r.fitted_C));
    CHECK(r.fitted_C > 0);
    // |S_Y(k)| = |S_G(k)| + 3 |B_G(k-1)| while the columns are tall enough
    const auto s = sphere_sizes(g, 60);
    long long ball = 0;
    for (int k = 1; k <= 60; ++k) {
        ball += s[k - 1];
        CHECK(r.sphere.count[k - 1] == s[k] + 3 * ball);
    }
    for (std::size_t i = 24; i < r.sphere.k.size(); ++i) CHECK(r.sphere.holds[i]);

    // short columns: only heights up to the grid depth contribute
    const auto low = verify_upsilon_bounds(g, 5, 1, 30);
    CHECK(low.columns_exact);
    CHECK(low.sphere.reliable_until < 30);
}

TEST_CASE("dual of gamma contains the dual of psi") {
    const auto psi = build_octagonal_speiser(6);
    const auto c = dual_contains_psi_dual(psi, build_gamma(6, sched({3, 3, 3, 5, 5, 7})));
    CHECK(c.psi_dual_edges > 9);
    CHECK(c.contained());
    // a different truncation shares no face
    const auto other = dual_contains_psi_dual(psi, build_gamma(4, sched({3, 3, 3, 3})));
    CHECK_FALSE(other.contained());
}

TEST_CASE("small end-to-end run") {
    const auto c = small_config();
    const auto r = run_theorem1(c);
    CHECK(r.errors.empty());
    CHECK(r.leg_a_verdict == "hyperbolic-leaning");
    CHECK(r.leg_b_verdict == "recurrent-leaning");
    CHECK(r.schedule_source == "custom");
    CHECK(r.upsilon.sphere.pass);
    CHECK_FALSE(r.growth.pass);  // small k is outside the asymptotic range
    const auto j = to_json(r);
    CHECK(j["leg_a"]["verdict"] == "hyperbolic-leaning");
    CHECK(j["seed"] == c.seed);
    CHECK(j.dump() == to_json(run_theorem1(c)).dump());

    // config round trip
    CHECK(Theorem1Config::from_json(c.to_json()).to_json() == c.to_json());
    CHECK_THROWS_AS(Theorem1Config::from_json({{"schedul", {21}}}), InputError);
    CHECK_THROWS_AS(Theorem1Config::from_json({{"psi_depth", "two"}}), InputError);
}

TEST_CASE("schedule mismatches surface in the report") {
    auto c = small_config();
    c.schedule = std::vector<long long>(8, 1);
    c.psi_depth = 8;
    c.growth_k_min = 5;
    c.growth_k_max = 7;
    c.upsilon_k_max = 7;
    c.doyle_n_max = 6;
    auto r = run_theorem1(c);
    CHECK_FALSE(r.growth.pass);
    CHECK_FALSE(r.growth_bounds_pass);
    bool flagged = false;
    for (const auto& f : r.flags) flagged |= f.find("k ln k fails") != std::string::npos;
    CHECK(flagged);

    c = small_config();
    c.schedule = {20, 41};
    r = run_theorem1(c);
    CHECK(r.leg_b_verdict == "error");
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].find("odd") != std::string::npos);
    CHECK(r.leg_a_verdict == "hyperbolic-leaning");
}
