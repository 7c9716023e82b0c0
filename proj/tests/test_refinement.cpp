#include <doctest.h>

#include "speiser_lab/error.h"
#include "speiser_lab/generators.h"
#include "speiser_lab/graph_ops.h"
#include "speiser_lab/refinement.h"

#include <random>

using namespace speiser_lab;

namespace {

double sq_sum(const VMetric& m) {
    double s = 0.0;
    for (double x : m) s += x * x;
    return s;
}

VMetric random_metric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution zero(0.2);
    VMetric m(n);
    for (double& x : m) x = zero(rng) ? 0.0 : u(rng);
    return m;
}

}  // namespace

TEST_CASE("subdivide4 of the octahedron") {
    const auto [g, map] = subdivide4(octahedron());
    CHECK(g.num_vertices() == 18);
    CHECK(g.num_edges() == 48);
    const auto f = trace_faces(g);
    CHECK(f.size() == 32);
    CHECK(18 - 48 + 32 == 2);
    for (const auto& w : f.walks) CHECK(w.size() == 3);
    CHECK(p_value(g) <= 6);
    for (VertexId v = 0; v < 6; ++v) CHECK(g.degree(v) == 4);
    for (VertexId v = 6; v < 18; ++v) CHECK(g.degree(v) == 6);
    const auto r = check_refinement(octahedron(), g, map);
    CHECK(r.is_refinement);
    CHECK(r.is_bounded);
    CHECK(r.M_edge == 3);
    CHECK(r.M_face == 6);
    for (const auto& c : map.face_cover) CHECK(c.size() == 4);
}

TEST_CASE("subdivide4 of one triangle") {
    const auto t = from_faces(3, {{0, 1, 2}}, false);
    const auto [g, map] = subdivide4(t);
    CHECK(g.num_vertices() == 6);
    const auto f = trace_faces(g);
    CHECK(f.num_interior() == 4);
    const auto r = check_refinement(t, g, map);
    CHECK(r.is_refinement);
    CHECK(r.M_face == 6);
    CHECK_THROWS_AS(subdivide4(grid_patch(3, 3)), InputError);
}

TEST_CASE("subdivide4 of a {3,8} patch satisfies p(6)") {
    const auto t = triangular_tiling_ball(8, 3);
    const auto [g, map] = subdivide4(t);
    CHECK(g.num_vertices() == t.num_vertices() + t.num_edges());
    CHECK(p_value(g) <= 6);
    const auto c = classify(g);
    REQUIRE(c.p_of.has_value());
    CHECK(*c.p_of <= 6);
    for (VertexId v = 0; v < static_cast<VertexId>(t.num_vertices()); ++v) CHECK(g.degree(v) == t.degree(v));
    for (VertexId v = static_cast<VertexId>(t.num_vertices()); v < static_cast<VertexId>(g.num_vertices()); ++v)
        if (!g.is_frontier(v)) CHECK(g.degree(v) == 6);
    CHECK(is_disk_triangulation(g, trace_faces(g)));
    const auto r = check_refinement(t, g, map);
    CHECK(r.is_refinement);
    CHECK(r.M_edge == 3);
}

TEST_CASE("identity refinement") {
    const auto g = hex_lattice_ball(2);
    const auto r = check_refinement(g, g, identity_map(g));
    CHECK(r.is_refinement);
    CHECK(r.M_edge == 2);
    CHECK(r.M_face == 3);
}

TEST_CASE("broken covers are reported") {
    const auto t = octahedron();
    auto [g, map] = subdivide4(t);
    auto bad = map;
    std::swap(bad.edge_cover[0], bad.edge_cover[1]);
    CHECK_FALSE(check_refinement(t, g, bad).is_refinement);
    bad = map;
    bad.face_cover[1].push_back(bad.face_cover[0][0]);
    CHECK_FALSE(check_refinement(t, g, bad).is_refinement);
}

TEST_CASE("coarsen_metric on a subdivided edge") {
    const auto g = path_graph(1);
    const auto gr = path_graph(2);
    RefinementMap map;
    map.vertex_origin = {{Origin::Kind::vertex, 0}, {Origin::Kind::edge, 0}, {Origin::Kind::vertex, 1}};
    map.edge_cover = {{0, 1}};
    map.face_cover = {{0}};
    const double a = 0.3, b = 0.7, c = 0.1;
    const auto m = coarsen_metric(g, gr, map, {a, b, c});
    CHECK(m[0] == doctest::Approx(6 * std::max(a, b)));
    CHECK(m[1] == doctest::Approx(6 * std::max(b, c)));
    const auto z = coarsen_metric(g, gr, map, {0, 0, 0});
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK_THROWS_AS(coarsen_metric(g, gr, map, {0.1, -0.2, 0.3}), InputError);
}

TEST_CASE("coarsen_metric inequalities on random metrics") {
    const auto t = triangular_tiling_ball(8, 3);
    const auto [g, map] = subdivide4(t);
    const int M = check_refinement(t, g, map).M_edge;
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const auto mr = random_metric(g.num_vertices(), rng);
        const auto m = coarsen_metric(t, g, map, mr);
        CHECK(sq_sum(m) <= 8.0 * M * M * sq_sum(mr));
        for (EdgeId e = 0; e < static_cast<EdgeId>(t.num_edges()); ++e) {
            const auto [u, v] = t.endpoints(e);
            double along = mr[u] + mr[v] + mr[t.num_vertices() + e];
            CHECK(along <= 0.5 * (m[u] + m[v]) + 1e-12);
        }
    }
}

TEST_CASE("refine_metric preconditions and inequality") {
    const auto t = triangular_tiling_ball(8, 3);
    const auto [t4, map_t] = subdivide4(t);
    std::mt19937_64 rng(5);
    // the {3,8} patch itself violates p(6)
    CHECK_THROWS_AS(refine_metric(t, t4, map_t, random_metric(t.num_vertices(), rng), 6), InputError);

    const auto [g2, map2] = subdivide4(t4);
    const int M = check_refinement(t4, g2, map2).M_edge;
    const int K = 6;
    const auto zero = refine_metric(t4, g2, map2, VMetric(t4.num_vertices(), 0.0), K);
    CHECK(sq_sum(zero) == 0.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto m = random_metric(t4.num_vertices(), rng);
        const auto mp = refine_metric(t4, g2, map2, m, K);
        CHECK(sq_sum(mp) <= 9.0 * K * M * sq_sum(m));
    }
}
