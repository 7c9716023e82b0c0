#include "speiser_lab/refinement.h"

#include "speiser_lab/error.h"
#include "speiser_lab/graph_ops.h"

#include <algorithm>
#include <set>
#include <string>

namespace speiser_lab {

RefinementMap identity_map(const RotationGraph& g) {
    RefinementMap m;
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) m.vertex_origin.push_back({Origin::Kind::vertex, v});
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) m.edge_cover.push_back({e});
    const FaceSet faces = trace_faces(g);
    m.face_cover.resize(faces.size());
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (faces.interior[f]) m.face_cover[f] = {static_cast<std::int32_t>(f)};
    return m;
}

// ════════════════════════════════════════════════════════════════════
//  Midpoint subdivision
// ════════════════════════════════════════════════════════════════════

std::pair<RotationGraph, RefinementMap> subdivide4(const RotationGraph& g) {
    const FaceSet faces = trace_faces(g);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (faces.interior[f] && faces.walks[f].size() != 3) {
            throw InputError("subdivide4: interior face " + std::to_string(f) + " has " +
                             std::to_string(faces.walks[f].size()) + " sides");
        }
    }
    const auto nv = static_cast<VertexId>(g.num_vertices());
    const auto ne = static_cast<EdgeId>(g.num_edges());
    const auto nh = static_cast<HalfEdgeId>(g.num_half_edges());
    auto mid = [nv](EdgeId e) { return nv + e; };
    auto H = [](EdgeId e, int side) { return GraphBuilder::half(e, side); };

    GraphBuilder b;
    for (VertexId v = 0; v < nv; ++v) b.add_vertex(g.tag(v));
    for (EdgeId e = 0; e < ne; ++e) b.add_vertex();
    std::vector<EdgeId> vm(nh);
    for (HalfEdgeId h = 0; h < nh; ++h) vm[h] = b.add_edge_unplaced(g.origin(h), mid(g.edge_of(h)));
    // mm[h] joins mid(h) to mid(face_next(h)) inside face_right(h).
    std::vector<EdgeId> mm(nh, kNone);
    std::vector<std::int32_t> owner_face(b.num_edges(), kNone);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) continue;
        for (HalfEdgeId h : faces.walks[f]) {
            mm[h] = b.add_edge_unplaced(mid(g.edge_of(h)), mid(g.edge_of(g.face_next(h))));
            owner_face.push_back(static_cast<std::int32_t>(f));
        }
    }
    for (VertexId v = 0; v < nv; ++v) {
        auto& rot = b.rotation(v);
        for (HalfEdgeId h : g.rotation(v)) rot.push_back(H(vm[h], 0));
    }
    for (EdgeId e = 0; e < ne; ++e) {
        auto& rot = b.rotation(mid(e));
        for (HalfEdgeId h : g.half_edges(e)) {
            rot.push_back(H(vm[h], 1));
            if (mm[h] == kNone) continue;
            const HalfEdgeId second = g.face_next(h), third = g.face_next(second);
            rot.push_back(H(mm[third], 1));
            rot.push_back(H(mm[h], 0));
        }
    }
    std::vector<std::uint8_t> incomplete(b.num_vertices(), 0);
    for (VertexId v : g.frontier()) incomplete[v] = 1;
    for (HalfEdgeId h = 0; h < nh; ++h) {
        if (faces.interior[faces.face_of[h]]) continue;
        b.mark_boundary(H(vm[h], 0));
        b.mark_boundary(H(vm[g.twin(h)], 1));
        incomplete[g.origin(h)] = 1;
        incomplete[mid(g.edge_of(h))] = 1;
    }
    for (VertexId v = 0; v < static_cast<VertexId>(b.num_vertices()); ++v)
        if (incomplete[v]) b.mark_frontier(v);

    RotationGraph out = b.build();
    RefinementMap map;
    map.vertex_origin.resize(out.num_vertices());
    for (VertexId v = 0; v < nv; ++v) map.vertex_origin[v] = {Origin::Kind::vertex, v};
    for (EdgeId e = 0; e < ne; ++e) map.vertex_origin[mid(e)] = {Origin::Kind::edge, e};
    map.edge_cover.resize(ne);
    for (EdgeId e = 0; e < ne; ++e) {
        const auto [h0, h1] = g.half_edges(e);
        map.edge_cover[e] = {vm[h0], vm[h1]};
    }
    map.face_cover.assign(faces.size(), {});
    const FaceSet rf = trace_faces(out);
    for (std::size_t f = 0; f < rf.size(); ++f) {
        if (!rf.interior[f]) continue;
        for (HalfEdgeId h : rf.walks[f]) {
            const std::int32_t owner = owner_face[out.edge_of(h)];
            if (owner == kNone) continue;
            map.face_cover[owner].push_back(static_cast<std::int32_t>(f));
            break;
        }
    }
    return {std::move(out), std::move(map)};
}

// ════════════════════════════════════════════════════════════════════
//  Refinement check
// ════════════════════════════════════════════════════════════════════

RefinementReport check_refinement(const RotationGraph& g, const RotationGraph& g_ref, const RefinementMap& map) {
    RefinementReport r;
    auto issue = [&r](std::string s) { r.issues.push_back(std::move(s)); };
    const FaceSet faces = trace_faces(g);
    const FaceSet rf = trace_faces(g_ref);
    if (map.vertex_origin.size() != g_ref.num_vertices()) issue("vertex_origin size differs from refined vertex count");
    if (map.edge_cover.size() != g.num_edges()) issue("edge_cover size differs from edge count");
    if (map.face_cover.size() != faces.size()) issue("face_cover size differs from face count");
    if (!r.issues.empty()) return r;

    std::vector<VertexId> image(g.num_vertices(), kNone);
    for (VertexId w = 0; w < static_cast<VertexId>(g_ref.num_vertices()); ++w) {
        const Origin o = map.vertex_origin[w];
        if (o.kind != Origin::Kind::vertex) continue;
        if (o.id < 0 || o.id >= static_cast<std::int32_t>(g.num_vertices()) || image[o.id] != kNone) {
            issue("vertex origin " + std::to_string(o.id) + " invalid or repeated");
            continue;
        }
        image[o.id] = w;
    }
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v)
        if (image[v] == kNone) issue("vertex " + std::to_string(v) + " has no refined image");

    r.M_edge = 0;
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()) && r.issues.empty(); ++e) {
        const auto& cover = map.edge_cover[e];
        const auto [a, b] = g.endpoints(e);
        if (cover.empty()) {
            issue("edge " + std::to_string(e) + " has an empty cover");
            continue;
        }
        VertexId cur = image[a];
        for (std::size_t i = 0; i < cover.size(); ++i) {
            const auto [x, y] = g_ref.endpoints(cover[i]);
            if (x != cur && y != cur) {
                issue("edge " + std::to_string(e) + " cover is not a path");
                break;
            }
            cur = (x == cur) ? y : x;
            if (i + 1 < cover.size()) {
                const Origin o = map.vertex_origin[cur];
                if (o.kind != Origin::Kind::edge || o.id != e) issue("edge " + std::to_string(e) + " cover leaves the edge");
            }
        }
        if (cur != image[b]) issue("edge " + std::to_string(e) + " cover ends at the wrong vertex");
        r.M_edge = std::max(r.M_edge, static_cast<int>(cover.size()) + 1);
    }

    std::vector<std::int32_t> owner(rf.size(), kNone);
    r.M_face = 0;
    bool all_faces_covered = true;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const auto& cover = map.face_cover[f];
        if (!faces.interior[f]) continue;
        if (cover.empty()) {
            all_faces_covered = false;
            continue;
        }
        std::set<VertexId> verts;
        for (std::int32_t x : cover) {
            if (x < 0 || x >= static_cast<std::int32_t>(rf.size()) || !rf.interior[x]) {
                issue("face " + std::to_string(f) + " cover holds a non-interior refined face");
                continue;
            }
            if (owner[x] != kNone) issue("refined face " + std::to_string(x) + " lies in two covers");
            owner[x] = static_cast<std::int32_t>(f);
            for (HalfEdgeId h : rf.walks[x]) verts.insert(g_ref.origin(h));
        }
        r.M_face = std::max(r.M_face, static_cast<int>(verts.size()));
    }
    for (std::size_t x = 0; x < rf.size(); ++x)
        if (rf.interior[x] && owner[x] == kNone) ++r.uncovered_faces;
    const bool truncated = g.has_frontier() || !g.boundary_half_edges().empty();
    if (r.uncovered_faces > 0 && !truncated) issue(std::to_string(r.uncovered_faces) + " refined faces are uncovered");

    r.is_refinement = r.issues.empty();
    r.is_semi_bounded = r.is_refinement;
    r.is_bounded = r.is_refinement && all_faces_covered;
    return r;
}

// ════════════════════════════════════════════════════════════════════
//  Metric transfer
// ════════════════════════════════════════════════════════════════════

namespace {

void check_metric(const VMetric& m, std::size_t n, const char* what) {
    if (m.size() != n) throw InputError(std::string(what) + ": metric size does not match the graph");
    for (double x : m)
        if (!(x >= 0.0)) throw InputError(std::string(what) + ": metric weights must be nonnegative");
}

}  // namespace

VMetric coarsen_metric(const RotationGraph& g, const RotationGraph& g_ref, const RefinementMap& map,
                       const VMetric& m_ref) {
    check_metric(m_ref, g_ref.num_vertices(), "coarsen_metric");
    const RefinementReport rep = check_refinement(g, g_ref, map);
    if (!rep.is_semi_bounded) throw InputError("coarsen_metric: not a semi-bounded refinement");
    const double M = rep.M_edge;
    // Half-open star of v: v itself plus refined vertices inside edges at v.
    VMetric m(g.num_vertices(), 0.0);
    for (VertexId w = 0; w < static_cast<VertexId>(g_ref.num_vertices()); ++w) {
        const Origin o = map.vertex_origin[w];
        if (o.kind == Origin::Kind::vertex) {
            m[o.id] = std::max(m[o.id], m_ref[w]);
        } else if (o.kind == Origin::Kind::edge) {
            const auto [a, b] = g.endpoints(o.id);
            m[a] = std::max(m[a], m_ref[w]);
            m[b] = std::max(m[b], m_ref[w]);
        }
    }
    for (double& x : m) x *= 2.0 * M;
    return m;
}

VMetric refine_metric(const RotationGraph& g, const RotationGraph& g_ref, const RefinementMap& map, const VMetric& m,
                      int K) {
    check_metric(m, g.num_vertices(), "refine_metric");
    const FaceSet faces = trace_faces(g);
    for (std::size_t f = 0; f < faces.size(); ++f)
        if (faces.interior[f] && faces.walks[f].size() != 3) throw InputError("refine_metric: coarse graph is not a triangulation");
    const int p = p_value(g);
    if (p > K) throw InputError("refine_metric: property p(" + std::to_string(K) + ") fails (p = " + std::to_string(p) + ")");
    const RefinementReport rep = check_refinement(g, g_ref, map);
    if (!rep.is_semi_bounded) throw InputError("refine_metric: not a semi-bounded refinement");

    auto in_Z = [&](VertexId v) { return g.degree(v) > K; };
    VMetric out(g_ref.num_vertices(), 0.0);
    for (VertexId w = 0; w < static_cast<VertexId>(g_ref.num_vertices()); ++w) {
        const Origin o = map.vertex_origin[w];
        double best = -1.0;
        if (o.kind == Origin::Kind::vertex) {
            const VertexId v = o.id;
            if (in_Z(v)) {
                out[w] = m[v];
                continue;
            }
            best = m[v];
            for (HalfEdgeId h : g.rotation(v)) {
                const VertexId x = g.target(h);
                if (!in_Z(x)) best = std::max(best, m[x]);
            }
        } else if (o.kind == Origin::Kind::edge) {
            for (VertexId x : g.endpoints(o.id))
                if (!in_Z(x)) best = std::max(best, m[x]);
            if (best < 0.0) throw InputError("refine_metric: both ends of edge " + std::to_string(o.id) + " exceed K");
        } else {
            continue;
        }
        out[w] = 3.0 * best;
    }
    return out;
}

}  // namespace speiser_lab
