#include "speiser_lab/speiser.h"

#include "speiser_lab/error.h"
#include "speiser_lab/generators.h"

#include <algorithm>
#include <string>

namespace speiser_lab {

void GrowthSchedule::validate() const {
    for (std::size_t n = 0; n < lengths.size(); ++n) {
        if (lengths[n] < 1 || lengths[n] % 2 == 0) {
            throw InputError("growth schedule: l_" + std::to_string(n) + " = " + std::to_string(lengths[n]) +
                             " must be an odd positive integer");
        }
    }
}

namespace {

HalfEdgeId side_of(const RotationGraph& g, HalfEdgeId h) { return g.half_edges(g.edge_of(h))[0] == h ? 0 : 1; }

// Builder half-edge for an edge copied with the same id.
HalfEdgeId copied_half(const RotationGraph& g, HalfEdgeId h) {
    return GraphBuilder::half(g.edge_of(h), side_of(g, h));
}

GraphBuilder copy_vertices_and_edges(const RotationGraph& g) {
    GraphBuilder b;
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) b.add_vertex(g.tag(v));
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [u, v] = g.endpoints(e);
        b.add_edge_unplaced(u, v);
    }
    return b;
}

}  // namespace

// ════════════════════════════════════════════════════════════════════
//  Octagonal base graph
// ════════════════════════════════════════════════════════════════════

RotationGraph build_octagonal_speiser(int depth) {
    if (depth < 1) throw InputError("build_octagonal_speiser: depth must be >= 1");
    // Dual of a {3,8} ball, enlarged until B(depth) around the root triangle
    // is free of truncation effects.
    for (int radius = depth / 2 + 2; radius <= depth + 2; ++radius) {
        const RotationGraph t = triangular_tiling_ball(8, radius);
        const DualResult d = dual(t, OuterFacePolicy::drop);
        const VertexId root = d.graph.origin(d.dual_half[t.rotation(0)[0]]);
        const LayerDecomposition L = bfs_layers(d.graph, root, depth);
        if (L.depth < depth || L.reliable_depth < depth - 1) continue;
        const SubgraphResult crop = ball(d.graph, root, depth);
        RotationGraph g = relabel_bfs(crop.graph, crop.new_id[root]);
        const LayerDecomposition Lg = bfs_layers(g, 0, depth);
        std::vector<VertexId> frontier = g.frontier();
        frontier.insert(frontier.end(), Lg.spheres[depth].begin(), Lg.spheres[depth].end());
        g = g.with_frontier(std::move(frontier));
        return g.with_tags(bipartition_tags(g));
    }
    throw ConvergenceError("build_octagonal_speiser: truncation never became reliable");
}

// ════════════════════════════════════════════════════════════════════
//  Tree replacement
// ════════════════════════════════════════════════════════════════════

RotationGraph tree_replace(const RotationGraph& g, const LayerDecomposition& layers, const GrowthSchedule& schedule) {
    schedule.validate();
    if (schedule.lengths.size() < layers.cut_edges.size()) {
        throw InputError("tree_replace: schedule has " + std::to_string(schedule.lengths.size()) +
                         " lengths but the layers have " + std::to_string(layers.cut_edges.size()) + " cut sets");
    }
    if (layers.distance.size() != g.num_vertices()) throw InputError("tree_replace: layers belong to another graph");
    const std::vector<Tag> tags = g.has_tags() ? g.tags() : bipartition_tags(g);

    const auto ne = static_cast<EdgeId>(g.num_edges());
    std::vector<long long> length(ne, 1);
    for (std::size_t n = 0; n < layers.cut_edges.size(); ++n)
        for (EdgeId e : layers.cut_edges[n]) length[e] = schedule.lengths[n];

    GraphBuilder b;
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) b.add_vertex(tags[v]);
    std::vector<HalfEdgeId> new_half(g.num_half_edges(), kNone);
    for (EdgeId e = 0; e < ne; ++e) {
        auto [h0, h1] = g.half_edges(e);
        if (length[e] == 1) {
            const EdgeId x = b.add_edge_unplaced(g.origin(h0), g.origin(h1));
            new_half[h0] = GraphBuilder::half(x, 0);
            new_half[h1] = GraphBuilder::half(x, 1);
            continue;
        }
        // Orient the path from the inner endpoint.
        if (layers.distance[g.origin(h0)] > layers.distance[g.origin(h1)]) std::swap(h0, h1);
        const VertexId u = g.origin(h0), v = g.origin(h1);
        std::vector<VertexId> nodes{u};
        for (long long j = 1; j < length[e]; ++j) nodes.push_back(b.add_vertex(j % 2 == 0 ? tags[u] : opposite(tags[u])));
        nodes.push_back(v);
        // edges[j] joins nodes[j] and nodes[j+1]: one edge for even j, two for odd j.
        std::vector<std::array<EdgeId, 2>> edges;
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
            const EdgeId a = b.add_edge_unplaced(nodes[j], nodes[j + 1]);
            const EdgeId c = (j % 2 == 1) ? b.add_edge_unplaced(nodes[j], nodes[j + 1]) : kNone;
            edges.push_back({a, c});
        }
        for (std::size_t j = 1; j + 1 < nodes.size(); ++j) {
            auto& rot = b.rotation(nodes[j]);
            if (j % 2 == 1) {  // single edge behind, double edge ahead
                rot = {GraphBuilder::half(edges[j - 1][0], 1), GraphBuilder::half(edges[j][0], 0),
                       GraphBuilder::half(edges[j][1], 0)};
            } else {
                rot = {GraphBuilder::half(edges[j - 1][1], 1), GraphBuilder::half(edges[j - 1][0], 1),
                       GraphBuilder::half(edges[j][0], 0)};
            }
        }
        new_half[h0] = GraphBuilder::half(edges.front()[0], 0);
        new_half[h1] = GraphBuilder::half(edges.back()[0], 1);
    }
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        auto& rot = b.rotation(v);
        for (HalfEdgeId h : g.rotation(v)) rot.push_back(new_half[h]);
    }
    for (VertexId v : g.frontier()) b.mark_frontier(v);
    for (HalfEdgeId h : g.boundary_half_edges()) b.mark_boundary(new_half[h]);
    return b.build();
}

// ════════════════════════════════════════════════════════════════════
//  Lambda triangulation
// ════════════════════════════════════════════════════════════════════

LambdaResult lambda_triangulation_full(const RotationGraph& g) {
    const FaceSet faces = trace_faces(g);
    const auto nv = static_cast<VertexId>(g.num_vertices());
    const auto ne = static_cast<EdgeId>(g.num_edges());
    const auto nh = static_cast<HalfEdgeId>(g.num_half_edges());

    GraphBuilder b;
    for (VertexId v = 0; v < nv; ++v) b.add_vertex(g.tag(v));
    for (EdgeId e = 0; e < ne; ++e) b.add_vertex();
    std::vector<VertexId> center(faces.size(), kNone);
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (faces.interior[f]) center[f] = b.add_vertex();
    auto mid = [nv](EdgeId e) { return nv + e; };

    // vm[h]: origin(h) -- mid(edge h); cv[h], cm[h]: centre of face_right(h)
    // to origin(h) and to mid(edge h).
    std::vector<EdgeId> vm(nh), cv(nh, kNone), cm(nh, kNone);
    for (HalfEdgeId h = 0; h < nh; ++h) vm[h] = b.add_edge_unplaced(g.origin(h), mid(g.edge_of(h)));
    std::vector<std::int32_t> owner_face;  // refined edge -> coarse face it lies in
    owner_face.assign(b.num_edges(), kNone);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) continue;
        for (HalfEdgeId h : faces.walks[f]) {
            cv[h] = b.add_edge_unplaced(center[f], g.origin(h));
            cm[h] = b.add_edge_unplaced(center[f], mid(g.edge_of(h)));
            owner_face.push_back(static_cast<std::int32_t>(f));
            owner_face.push_back(static_cast<std::int32_t>(f));
        }
    }
    auto H = [](EdgeId e, int side) { return GraphBuilder::half(e, side); };

    for (VertexId v = 0; v < nv; ++v) {
        auto& rot = b.rotation(v);
        for (HalfEdgeId h : g.rotation(v)) {
            rot.push_back(H(vm[h], 0));
            const HalfEdgeId nx = g.rot_next(h);
            if (cv[nx] != kNone) rot.push_back(H(cv[nx], 1));
        }
    }
    for (EdgeId e = 0; e < ne; ++e) {
        auto& rot = b.rotation(mid(e));
        for (HalfEdgeId h : g.half_edges(e)) {
            rot.push_back(H(vm[h], 1));
            if (cm[h] != kNone) rot.push_back(H(cm[h], 1));
        }
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) continue;
        auto& rot = b.rotation(center[f]);
        const auto& walk = faces.walks[f];
        for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
            rot.push_back(H(cm[*it], 0));
            rot.push_back(H(cv[*it], 0));
        }
    }

    // Truncation faces stay whole; everything touching one is incomplete.
    for (HalfEdgeId h = 0; h < nh; ++h) {
        if (faces.interior[faces.face_of[h]]) continue;
        b.mark_boundary(H(vm[h], 0));
        b.mark_boundary(H(vm[g.twin(h)], 1));
    }
    std::vector<std::uint8_t> incomplete(b.num_vertices(), 0);
    for (VertexId v : g.frontier()) incomplete[v] = 1;
    for (HalfEdgeId h = 0; h < nh; ++h) {
        if (faces.interior[faces.face_of[h]]) continue;
        incomplete[g.origin(h)] = 1;
        incomplete[g.target(h)] = 1;
        incomplete[mid(g.edge_of(h))] = 1;
    }
    for (VertexId v = 0; v < static_cast<VertexId>(b.num_vertices()); ++v)
        if (incomplete[v]) b.mark_frontier(v);

    LambdaResult out;
    out.graph = b.build();
    const RotationGraph& L = out.graph;
    const FaceSet lf = trace_faces(L);

    // ── map relative to g ──
    RefinementMap& pm = out.primal_map;
    pm.vertex_origin.resize(L.num_vertices());
    for (VertexId v = 0; v < nv; ++v) pm.vertex_origin[v] = {Origin::Kind::vertex, v};
    for (EdgeId e = 0; e < ne; ++e) pm.vertex_origin[mid(e)] = {Origin::Kind::edge, e};
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (center[f] != kNone) pm.vertex_origin[center[f]] = {Origin::Kind::face, static_cast<std::int32_t>(f)};
    pm.edge_cover.resize(ne);
    for (EdgeId e = 0; e < ne; ++e) {
        const auto [h0, h1] = g.half_edges(e);
        pm.edge_cover[e] = {vm[h0], vm[h1]};
    }
    pm.face_cover.assign(faces.size(), {});
    std::vector<std::int32_t> lface_owner(lf.size(), kNone);
    std::vector<VertexId> lface_corner(lf.size(), kNone);
    for (std::size_t lfid = 0; lfid < lf.size(); ++lfid) {
        if (!lf.interior[lfid]) continue;
        for (HalfEdgeId h : lf.walks[lfid]) {
            const EdgeId e = L.edge_of(h);
            if (owner_face[e] == kNone) continue;
            lface_owner[lfid] = owner_face[e];
            const VertexId a = L.origin(h), c = L.target(h);
            if (a < nv) lface_corner[lfid] = a;
            if (c < nv) lface_corner[lfid] = c;
        }
        if (lface_owner[lfid] != kNone) pm.face_cover[lface_owner[lfid]].push_back(static_cast<std::int32_t>(lfid));
    }

    // ── map relative to the dual ──
    out.dual = dual(g, OuterFacePolicy::drop);
    const DualResult& D = out.dual;
    const FaceSet df = trace_faces(D.graph);
    // dual face -> primal vertex it surrounds
    std::vector<std::int32_t> dual_face_of_vertex(nv, kNone);
    for (HalfEdgeId h = 0; h < nh; ++h) {
        if (D.dual_half[h] == kNone) continue;
        const std::int32_t phi = df.face_of[D.dual_half[h]];
        if (df.interior[phi]) dual_face_of_vertex[g.target(h)] = phi;
    }
    std::vector<VertexId> dual_vertex_of_face(faces.size(), kNone);
    for (std::size_t dv = 0; dv < D.primal_face.size(); ++dv)
        dual_vertex_of_face[D.primal_face[dv]] = static_cast<VertexId>(dv);
    std::vector<EdgeId> dual_edge_of(ne, kNone);
    for (std::size_t de = 0; de < D.primal_edge.size(); ++de) dual_edge_of[D.primal_edge[de]] = static_cast<EdgeId>(de);

    RefinementMap& dm = out.dual_map;
    dm.vertex_origin.resize(L.num_vertices());
    for (VertexId v = 0; v < nv; ++v) dm.vertex_origin[v] = {Origin::Kind::face, dual_face_of_vertex[v]};
    for (EdgeId e = 0; e < ne; ++e) {
        dm.vertex_origin[mid(e)] = dual_edge_of[e] != kNone ? Origin{Origin::Kind::edge, dual_edge_of[e]}
                                                            : Origin{Origin::Kind::face, kNone};
    }
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (center[f] != kNone) dm.vertex_origin[center[f]] = {Origin::Kind::vertex, dual_vertex_of_face[f]};
    dm.edge_cover.resize(D.primal_edge.size());
    for (std::size_t de = 0; de < D.primal_edge.size(); ++de) {
        const auto [d0, d1] = D.graph.half_edges(static_cast<EdgeId>(de));
        const auto [h0, h1] = g.half_edges(D.primal_edge[de]);
        // d(h) starts in face_right(h), so cm[h] starts at the centre d0 sits on.
        const HalfEdgeId first = (D.dual_half[h0] == d0) ? h0 : h1;
        (void)d1;
        dm.edge_cover[de] = {cm[first], cm[g.twin(first)]};
    }
    dm.face_cover.assign(df.size(), {});
    for (std::size_t lfid = 0; lfid < lf.size(); ++lfid) {
        const VertexId v = lface_corner[lfid];
        if (v == kNone || dual_face_of_vertex[v] == kNone) continue;
        dm.face_cover[dual_face_of_vertex[v]].push_back(static_cast<std::int32_t>(lfid));
    }
    return out;
}

RotationGraph lambda_triangulation(const RotationGraph& g) {
    const FaceSet faces = trace_faces(g);
    if (faces.num_interior() == 0) throw InputError("lambda_triangulation: no interior faces");
    return lambda_triangulation_full(g).graph;
}

// ════════════════════════════════════════════════════════════════════
//  Extended Speiser graph
// ════════════════════════════════════════════════════════════════════

RotationGraph extend_speiser(const RotationGraph& g, int grid_depth) {
    ExtendOptions opt;
    opt.grid_depth = grid_depth;
    return extend_speiser(g, opt);
}

RotationGraph extend_speiser(const RotationGraph& g, const ExtendOptions& opt) {
    if (opt.grid_depth < 1) throw InputError("extend_speiser: grid_depth must be >= 1");
    const FaceSet faces = trace_faces(g);
    std::vector<std::int32_t> dist;
    if (opt.ball_radius >= 0) dist = bfs_layers(g, opt.ball_root, opt.ball_radius).distance;

    GraphBuilder b = copy_vertices_and_edges(g);
    const auto nh = static_cast<HalfEdgeId>(g.num_half_edges());
    std::vector<HalfEdgeId> column_foot(nh, kNone);  // vertical half-edge inserted before h
    std::vector<std::uint8_t> extended(faces.size(), 0);
    auto H = [](EdgeId e, int side) { return GraphBuilder::half(e, side); };

    // a Gamma vertex missing any of its columns has an incomplete neighbourhood
    std::vector<std::uint8_t> cut(g.num_vertices(), 0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f] && !opt.include_truncation_faces) {
            for (HalfEdgeId h : faces.walks[f]) cut[g.origin(h)] = 1;
            continue;
        }
        extended[f] = 1;
        const auto& walk = faces.walks[f];
        const std::size_t k = walk.size();
        std::vector<int> height(k, opt.grid_depth);
        if (!dist.empty()) {
            for (std::size_t i = 0; i < k; ++i) {
                const int d = dist[g.origin(walk[i])];
                height[i] = d < 0 ? 0 : std::clamp(opt.ball_radius - d, 0, opt.grid_depth);
            }
        }
        // col[i][j], j = 1..height[i]; vert[i][j] joins level j-1 and j.
        std::vector<std::vector<VertexId>> col(k);
        std::vector<std::vector<EdgeId>> vert(k), ring(k);
        for (std::size_t i = 0; i < k; ++i) {
            col[i].assign(height[i] + 1, kNone);
            vert[i].assign(height[i] + 1, kNone);
            col[i][0] = g.origin(walk[i]);
            for (int j = 1; j <= height[i]; ++j) {
                col[i][j] = b.add_vertex();
                vert[i][j] = b.add_edge_unplaced(col[i][j - 1], col[i][j]);
            }
            if (height[i] >= 1) column_foot[walk[i]] = H(vert[i][1], 0);
            else cut[col[i][0]] = 1;
        }
        // ring[i][j] joins col[i][j] -> col[i+1][j], running along the walk.
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t n = (i + 1) % k;
            const int top = std::min(height[i], height[n]);
            ring[i].assign(top + 1, kNone);
            for (int j = 1; j <= top; ++j) ring[i][j] = b.add_edge_unplaced(col[i][j], col[n][j]);
            // The region right of the highest ring edge (or of walk[i]) is cut off.
            b.mark_boundary(top == 0 ? copied_half(g, walk[i]) : H(ring[i][top], 0));
        }
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t p = (i + k - 1) % k;
            for (int j = 1; j <= height[i]; ++j) {
                auto& rot = b.rotation(col[i][j]);
                if (j < static_cast<int>(ring[i].size())) rot.push_back(H(ring[i][j], 0));
                rot.push_back(H(vert[i][j], 1));
                if (j < static_cast<int>(ring[p].size())) rot.push_back(H(ring[p][j], 1));
                if (j < height[i]) rot.push_back(H(vert[i][j + 1], 0));
            }
            if (height[i] >= 1) b.mark_frontier(col[i][height[i]]);
        }
    }

    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        auto& rot = b.rotation(v);
        for (HalfEdgeId h : g.rotation(v)) {
            if (column_foot[h] != kNone) rot.push_back(column_foot[h]);
            rot.push_back(copied_half(g, h));
        }
    }
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v)
        if (cut[v] || g.is_frontier(v)) b.mark_frontier(v);
    for (HalfEdgeId h : g.boundary_half_edges())
        if (!extended[faces.face_of[h]]) b.mark_boundary(copied_half(g, h));
    return b.build();
}

}  // namespace speiser_lab
