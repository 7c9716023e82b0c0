#include <doctest.h>

#include "speiser_lab/error.h"
#include "speiser_lab/generators.h"
#include "speiser_lab/graph_json.h"
#include "speiser_lab/graph_ops.h"

#include <random>
#include <set>

using namespace speiser_lab;

namespace {

// Mirror image: reverse every rotation.
RotationGraph mirror(const RotationGraph& g) {
    std::vector<std::vector<HalfEdgeId>> rot(g.num_vertices());
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        auto r = g.rotation(v);
        rot[v].assign(r.rbegin(), r.rend());
    }
    std::vector<std::array<HalfEdgeId, 2>> halves;
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) halves.push_back(g.half_edges(e));
    return RotationGraph::from_parts(rot, halves);
}

// Stacked triangulation: repeatedly insert a vertex into a chosen face.
RotationGraph stacked_triangulation(int inserts, unsigned seed) {
    std::vector<std::vector<VertexId>> faces{{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}};
    std::mt19937 rng(seed);
    VertexId n = 4;
    for (int i = 0; i < inserts; ++i) {
        const std::size_t k = rng() % faces.size();
        const auto f = faces[k];
        faces[k] = {f[0], f[1], n};
        faces.push_back({f[1], f[2], n});
        faces.push_back({f[2], f[0], n});
        ++n;
    }
    return from_faces(n, faces, false);
}

int euler(const RotationGraph& g) {
    return static_cast<int>(g.num_vertices()) - static_cast<int>(g.num_edges()) +
           static_cast<int>(trace_faces(g).size());
}

}  // namespace

TEST_CASE("octahedron counts and Euler formula") {
    const auto g = octahedron();
    CHECK(g.num_vertices() == 6);
    CHECK(g.num_edges() == 12);
    const auto faces = trace_faces(g);
    CHECK(faces.size() == 8);
    for (const auto& w : faces.walks) CHECK(w.size() == 3);
    CHECK(euler(g) == 2);
    const auto c = classify(g);
    CHECK(c.homogeneous_degree == 4);
    CHECK_FALSE(c.is_bipartite);
}

TEST_CASE("cube is bipartite and 3-regular") {
    const auto g = cube();
    CHECK(g.num_vertices() == 8);
    CHECK(g.num_edges() == 12);
    CHECK(euler(g) == 2);
    const auto c = classify(g);
    CHECK(c.is_bipartite);
    CHECK(c.homogeneous_degree == 3);
}

TEST_CASE("3x3 grid patch") {
    const auto g = grid_patch(3, 3);
    CHECK(g.num_vertices() == 9);
    CHECK(g.num_edges() == 12);
    const auto faces = trace_faces(g);
    CHECK(faces.num_interior() == 4);
    CHECK(faces.size() == 5);
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (faces.interior[f]) CHECK(faces.walks[f].size() == 4);
    CHECK(g.frontier().size() == 8);
}

TEST_CASE("validation rejects malformed rotation systems") {
    // edge pairing two half-edges at the same vertex
    CHECK_THROWS_AS(RotationGraph::from_parts({{0, 1}, {}}, {{0, 1}}), InputError);
    // dangling half-edge: 3 listed, edge table covers 0..1 only
    CHECK_THROWS_AS(RotationGraph::from_parts({{0, 2}, {1}}, {{0, 1}}), InputError);
    // disconnected
    CHECK_THROWS_AS(RotationGraph::from_parts({{0}, {1}, {2}, {3}}, {{0, 1}, {2, 3}}), InputError);
    // half-edge listed twice
    CHECK_THROWS_AS(RotationGraph::from_parts({{0, 0}, {1}}, {{0, 1}}), InputError);
    GraphBuilder b;
    b.add_vertex();
    b.add_vertex();
    b.add_edge(0, 1);
    b.add_edge(1, 1);
    CHECK_THROWS_AS(b.build(), InputError);
}

TEST_CASE("bigon face from a doubled edge") {
    GraphBuilder b;
    b.add_vertex();
    b.add_vertex();
    b.add_edge(0, 1);
    b.add_edge(0, 1);
    const auto g = b.build();
    const auto faces = trace_faces(g);
    CHECK(faces.size() == 2);
    for (const auto& w : faces.walks) CHECK(w.size() == 2);
    CHECK(euler(g) == 2);
}

TEST_CASE("JSON round trip is byte-stable") {
    for (const auto& g : {octahedron(), grid_patch(3, 4), hex_lattice_ball(2), regular_tree(3, 3)}) {
        const std::string a = dump_graph(g);
        const auto h = parse_graph(a);
        CHECK(dump_graph(h) == a);
        CHECK(isomorphic(g, h));
        CHECK(h.frontier() == g.frontier());
        CHECK(h.boundary_half_edges() == g.boundary_half_edges());
    }
    const auto tagged = cube().with_tags(bipartition_tags(cube()));
    CHECK(dump_graph(parse_graph(dump_graph(tagged))) == dump_graph(tagged));
    CHECK_THROWS_AS(parse_graph("{\"version\": 2}"), InputError);
    CHECK_THROWS_AS(parse_graph("not json"), InputError);
}

TEST_CASE("dual of classical pairs") {
    CHECK(isomorphic(dual(cube()).graph, octahedron()));
    CHECK(isomorphic(dual(octahedron()).graph, cube()));
    const auto d = dual(cycle_graph(5)).graph;
    CHECK(d.num_vertices() == 2);
    CHECK(d.num_edges() == 5);
    CHECK_THROWS_AS(dual(grid_patch(3, 3)), InputError);
}

TEST_CASE("dual of dual is orientation-preserving identity") {
    int chiral = 0;
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const auto g = stacked_triangulation(12, seed);
        CHECK(euler(g) == 2);
        CHECK(isomorphic(dual(dual(g).graph).graph, g));
        if (!isomorphic(g, mirror(g))) {
            ++chiral;
            CHECK_FALSE(isomorphic(dual(dual(g).graph).graph, mirror(g)));
        }
    }
    CHECK(chiral > 0);
    CHECK(isomorphic(dual(dual(octahedron()).graph).graph, octahedron()));
}

TEST_CASE("canonical code is invariant under relabelling") {
    const auto g = stacked_triangulation(20, 7);
    for (VertexId r : {3, 9, 17}) CHECK(isomorphic(relabel_bfs(g, r), g));
}

TEST_CASE("truncated {8,3} patch from the {3,8} ball") {
    const auto t = triangular_tiling_ball(8, 4);
    const auto d = dual(t, OuterFacePolicy::drop).graph;
    const auto c = classify(d);
    CHECK(c.is_bipartite);
    CHECK(c.homogeneous_degree == 3);
    const auto faces = trace_faces(d);
    std::size_t octagons = 0, outer = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (faces.interior[f]) {
            CHECK(faces.walks[f].size() == 8);
            ++octagons;
        } else {
            ++outer;
        }
    }
    // genuine octagons = vertices of the {3,8} ball off its frontier
    CHECK(octagons == t.num_vertices() - t.frontier().size());
    CHECK(outer >= 1);
}

TEST_CASE("{3,q} balls: layer sizes and degrees") {
    const auto t = triangular_tiling_ball(8, 5);
    const auto L = bfs_layers(t, 0, 5);
    // oracle: a(1) = 8, a(2) = 32, a(n+1) = 4 a(n) - a(n-1)
    std::vector<std::size_t> expect{1, 8, 32};
    while (expect.size() < 6) expect.push_back(4 * expect[expect.size() - 1] - expect[expect.size() - 2]);
    for (int n = 0; n <= 5; ++n) CHECK(L.sphere_size(n) == expect[n]);
    for (VertexId v = 0; v < static_cast<VertexId>(t.num_vertices()); ++v)
        if (!t.is_frontier(v)) CHECK(t.degree(v) == 8);
    const auto faces = trace_faces(t);
    CHECK(is_disk_triangulation(t, faces));
    CHECK(isomorphic(triangular_tiling_ball(6, 3), hex_lattice_ball(3)));
}

TEST_CASE("hex lattice ball") {
    const auto g = hex_lattice_ball(3);
    CHECK(g.num_vertices() == 37);
    const auto faces = trace_faces(g);
    CHECK(faces.num_interior() == 54);
    CHECK(is_disk_triangulation(g, faces));
    CHECK(boundary_cycle(g, faces).size() == 18);
    const auto L = bfs_layers(g, 0, 3);
    for (int n = 1; n <= 3; ++n) CHECK(L.sphere_size(n) == static_cast<std::size_t>(6 * n));
}

TEST_CASE("BFS layers on Z^2 and on a path") {
    const auto g = z2_patch(12);
    const auto L = bfs_layers(g, 0, 30);
    CHECK(L.reliable_depth == 11);
    CHECK(L.frontier_reached);
    for (int n = 1; n <= L.reliable_depth; ++n) {
        CHECK(L.sphere_size(n) == static_cast<std::size_t>(4 * n));
        CHECK(L.cut_edges[n - 1].size() == static_cast<std::size_t>(4 * (2 * n - 1)));
    }
    // every edge joins equal or adjacent spheres
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [a, b] = g.endpoints(e);
        if (L.distance[a] >= 0 && L.distance[b] >= 0) CHECK(std::abs(L.distance[a] - L.distance[b]) <= 1);
    }
    const auto p = path_graph(5);
    const auto Lp = bfs_layers(p, 0, 5);
    CHECK(Lp.depth == 5);
    for (int k = 0; k <= 4; ++k) CHECK(Lp.cut_edges[k].size() == 1);
    CHECK(Lp.ball_size(5) == 6);
}

TEST_CASE("cut sets count parallel edges") {
    GraphBuilder b;
    for (int i = 0; i < 3; ++i) b.add_vertex();
    b.add_edge(0, 1);
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    const auto L = bfs_layers(b.build(), 0, 2);
    CHECK(L.cut_edges[0].size() == 2);
    CHECK(L.cut_edges[1].size() == 1);
}

TEST_CASE("classification and p(K)") {
    const auto z = z2_patch(6);
    const auto c = classify(z);
    CHECK(c.is_bipartite);
    CHECK(c.homogeneous_degree == 4);
    CHECK(c.p_of == 4);
    REQUIRE(c.p_witness != kNone);
    const auto [a, b] = z.endpoints(c.p_witness);
    CHECK(std::min(z.degree(a), z.degree(b)) == 4);
    // half-edge conservation
    std::size_t sum = 0;
    for (VertexId v = 0; v < static_cast<VertexId>(z.num_vertices()); ++v) sum += z.degree(v);
    CHECK(sum == 2 * z.num_edges());
    CHECK(p_value(octahedron()) == 4);
    CHECK(classify(triangular_tiling_ball(8, 3)).p_of == 8);
}

TEST_CASE("induced subgraph marks cut vertices and cut faces") {
    const auto g = octahedron();
    std::vector<std::uint8_t> keep(6, 1);
    keep[5] = 0;
    const auto s = induced_subgraph(g, keep);
    CHECK(s.graph.num_vertices() == 5);
    CHECK(s.graph.num_edges() == 8);
    CHECK(s.graph.frontier().size() == 4);
    const auto faces = trace_faces(s.graph);
    CHECK(faces.num_interior() == 4);
    CHECK(is_disk_triangulation(s.graph, faces));
}

TEST_CASE("bipartition tags alternate") {
    const auto g = z2_patch(4);
    const auto t = bipartition_tags(g);
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [a, b] = g.endpoints(e);
        CHECK(t[a] == opposite(t[b]));
    }
    CHECK_THROWS_AS(bipartition_tags(octahedron()), InputError);
}
