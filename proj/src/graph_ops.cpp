#include "speiser_lab/graph_ops.h"

#include "speiser_lab/error.h"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

namespace speiser_lab {

// ════════════════════════════════════════════════════════════════════
//  Faces
// ════════════════════════════════════════════════════════════════════

std::size_t FaceSet::num_interior() const {
    return static_cast<std::size_t>(std::count(interior.begin(), interior.end(), 1));
}

std::vector<VertexId> FaceSet::walk_vertices(const RotationGraph& g, std::int32_t f) const {
    std::vector<VertexId> out;
    out.reserve(walks[f].size());
    for (HalfEdgeId h : walks[f]) out.push_back(g.origin(h));
    return out;
}

FaceSet trace_faces(const RotationGraph& g) {
    FaceSet fs;
    const auto nh = static_cast<HalfEdgeId>(g.num_half_edges());
    fs.face_of.assign(nh, kNone);
    for (HalfEdgeId start = 0; start < nh; ++start) {
        if (fs.face_of[start] != kNone) continue;
        const auto f = static_cast<std::int32_t>(fs.walks.size());
        std::vector<HalfEdgeId> walk;
        bool interior = true;
        HalfEdgeId h = start;
        do {
            fs.face_of[h] = f;
            walk.push_back(h);
            if (interior && g.is_boundary_half_edge(h)) interior = false;
            h = g.face_next(h);
        } while (h != start);
        fs.walks.push_back(std::move(walk));
        fs.interior.push_back(interior ? 1 : 0);
    }
    return fs;
}

// ════════════════════════════════════════════════════════════════════
//  Duality
// ════════════════════════════════════════════════════════════════════

DualResult dual(const RotationGraph& g, OuterFacePolicy policy) {
    const FaceSet faces = trace_faces(g);
    if (policy == OuterFacePolicy::reject && faces.num_interior() != faces.size()) {
        throw InputError("dual: graph has truncation faces; pass OuterFacePolicy::drop to discard them");
    }

    std::vector<std::int32_t> dual_vertex(faces.size(), kNone);
    DualResult out;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) continue;
        dual_vertex[f] = static_cast<std::int32_t>(out.primal_face.size());
        out.primal_face.push_back(static_cast<std::int32_t>(f));
    }
    if (out.primal_face.empty()) throw InputError("dual: no interior faces");

    // Dual half-edge d(h) starts in the face right of h and crosses edge(h).
    const auto nh = static_cast<HalfEdgeId>(g.num_half_edges());
    std::vector<HalfEdgeId> dual_half(nh, kNone);
    std::vector<std::array<HalfEdgeId, 2>> halves;
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [h0, h1] = g.half_edges(e);
        const std::int32_t f0 = faces.face_of[h0];
        const std::int32_t f1 = faces.face_of[h1];
        if (!faces.interior[f0] || !faces.interior[f1]) continue;
        if (f0 == f1) {
            if (policy == OuterFacePolicy::reject) {
                throw InputError("dual: edge " + std::to_string(e) + " bounds the same face twice");
            }
            continue;
        }
        const auto de = static_cast<EdgeId>(halves.size());
        dual_half[h0] = 2 * de;
        dual_half[h1] = 2 * de + 1;
        halves.push_back({2 * de, 2 * de + 1});
        out.primal_edge.push_back(e);
    }

    // Counterclockwise rotation around a face centre is the reverse walk order.
    std::vector<std::vector<HalfEdgeId>> rotations(out.primal_face.size());
    std::vector<VertexId> frontier;
    for (std::size_t dv = 0; dv < out.primal_face.size(); ++dv) {
        const auto& walk = faces.walks[out.primal_face[dv]];
        bool lost = false;
        for (auto it = walk.rbegin(); it != walk.rend(); ++it) {
            if (dual_half[*it] == kNone) {
                lost = true;
                continue;
            }
            rotations[dv].push_back(dual_half[*it]);
        }
        bool touches_frontier = false;
        for (HalfEdgeId h : walk) touches_frontier = touches_frontier || g.is_frontier(g.origin(h));
        if (lost || touches_frontier) frontier.push_back(static_cast<VertexId>(dv));
    }

    // The right face of d(h) surrounds target(h); it is a genuine dual face
    // only when target(h) is off the frontier with every incident face interior.
    std::vector<std::uint8_t> complete(g.num_vertices(), 1);
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        if (g.is_frontier(v)) {
            complete[v] = 0;
            continue;
        }
        for (HalfEdgeId h : g.rotation(v)) {
            if (!faces.interior[faces.face_of[h]] || dual_half[h] == kNone) complete[v] = 0;
        }
    }
    std::vector<HalfEdgeId> boundary;
    for (HalfEdgeId h = 0; h < nh; ++h) {
        if (dual_half[h] != kNone && !complete[g.target(h)]) boundary.push_back(dual_half[h]);
    }

    out.graph = RotationGraph::from_parts(rotations, halves, std::move(frontier), {}, std::move(boundary));
    out.dual_half = std::move(dual_half);
    return out;
}

// ════════════════════════════════════════════════════════════════════
//  BFS layers
// ════════════════════════════════════════════════════════════════════

std::size_t LayerDecomposition::ball_size(int n) const {
    std::size_t total = 0;
    for (int k = 0; k <= n && k < static_cast<int>(spheres.size()); ++k) total += spheres[k].size();
    return total;
}

LayerDecomposition bfs_layers(const RotationGraph& g, VertexId root, int n_max) {
    if (root < 0 || static_cast<std::size_t>(root) >= g.num_vertices()) throw InputError("bfs_layers: root out of range");
    if (n_max < 0) throw InputError("bfs_layers: n_max must be >= 0");
    LayerDecomposition L;
    L.root = root;
    L.distance.assign(g.num_vertices(), -1);
    L.distance[root] = 0;
    L.spheres.push_back({root});
    int first_frontier = g.is_frontier(root) ? 0 : -1;
    for (int n = 0; n < n_max; ++n) {
        std::vector<VertexId> next;
        std::vector<EdgeId> cut;
        for (VertexId v : L.spheres[n]) {
            for (HalfEdgeId h : g.rotation(v)) {
                const VertexId w = g.target(h);
                if (L.distance[w] == -1) {
                    L.distance[w] = n + 1;
                    next.push_back(w);
                    if (first_frontier < 0 && g.is_frontier(w)) first_frontier = n + 1;
                }
                if (L.distance[w] == n + 1) cut.push_back(g.edge_of(h));
            }
        }
        if (next.empty()) break;
        L.spheres.push_back(std::move(next));
        L.cut_edges.push_back(std::move(cut));
    }
    L.depth = static_cast<int>(L.spheres.size()) - 1;
    L.frontier_reached = first_frontier >= 0;
    L.reliable_depth = L.frontier_reached ? first_frontier - 1 : L.depth;
    return L;
}

// ════════════════════════════════════════════════════════════════════
//  Classification
// ════════════════════════════════════════════════════════════════════

std::vector<Tag> bipartition_tags(const RotationGraph& g) {
    const LayerDecomposition L = bfs_layers(g, 0, static_cast<int>(g.num_vertices()));
    std::vector<Tag> tags(g.num_vertices(), Tag::none);
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        tags[v] = (L.distance[v] % 2 == 0) ? Tag::circle : Tag::cross;
    }
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [u, v] = g.endpoints(e);
        if (tags[u] == tags[v]) throw InputError("graph is not bipartite");
    }
    return tags;
}

int p_value(const RotationGraph& g) {
    int K = 0;
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [u, v] = g.endpoints(e);
        K = std::max(K, std::min(g.degree(u), g.degree(v)));
    }
    return K;
}

bool is_disk_triangulation(const RotationGraph& g, const FaceSet& faces) {
    // Simple graph.
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        std::vector<VertexId> nb;
        for (HalfEdgeId h : g.rotation(v)) nb.push_back(g.target(h));
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) return false;
    }
    std::size_t n_int = 0;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) continue;
        ++n_int;
        const auto& w = faces.walks[f];
        if (w.size() != 3) return false;
        const VertexId a = g.origin(w[0]), b = g.origin(w[1]), c = g.origin(w[2]);
        if (a == b || b == c || a == c) return false;
    }
    if (n_int == 0) return false;
    const auto chi = static_cast<long long>(g.num_vertices()) - static_cast<long long>(g.num_edges()) +
                     static_cast<long long>(n_int);
    if (chi != 1) return false;
    // Exactly one non-interior face, bounded by a simple cycle.
    if (faces.size() - n_int != 1) return false;
    const auto cyc = boundary_cycle(g, faces);
    std::vector<VertexId> sorted = cyc;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() && cyc.size() >= 3;
}

std::vector<VertexId> boundary_cycle(const RotationGraph& g, const FaceSet& faces) {
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) return faces.walk_vertices(g, static_cast<std::int32_t>(f));
    }
    throw InputError("boundary_cycle: graph has no truncation face");
}

GraphClassification classify(const RotationGraph& g) {
    GraphClassification c;
    try {
        bipartition_tags(g);
        c.is_bipartite = true;
    } catch (const InputError&) {
        c.is_bipartite = false;
    }
    std::optional<int> common;
    bool homogeneous = true;
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        if (g.is_frontier(v)) continue;
        const int d = g.degree(v);
        c.max_degree = std::max(c.max_degree.value_or(0), d);
        if (!common) common = d;
        else if (*common != d) homogeneous = false;
    }
    if (homogeneous && common) c.homogeneous_degree = common;

    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [u, v] = g.endpoints(e);
        if (g.is_frontier(u) || g.is_frontier(v)) continue;
        const int m = std::min(g.degree(u), g.degree(v));
        if (!c.p_of || m > *c.p_of) {
            c.p_of = m;
            c.p_witness = e;
        }
    }
    c.is_disk_triangulation = is_disk_triangulation(g, trace_faces(g));
    return c;
}

// ════════════════════════════════════════════════════════════════════
//  Subgraphs
// ════════════════════════════════════════════════════════════════════

SubgraphResult induced_subgraph(const RotationGraph& g, const std::vector<std::uint8_t>& keep) {
    const auto nv = static_cast<VertexId>(g.num_vertices());
    SubgraphResult r;
    r.new_id.assign(nv, kNone);
    for (VertexId v = 0; v < nv; ++v) {
        if (keep[v]) {
            r.new_id[v] = static_cast<VertexId>(r.old_id.size());
            r.old_id.push_back(v);
        }
    }
    std::vector<EdgeId> new_edge(g.num_edges(), kNone);
    std::vector<std::array<HalfEdgeId, 2>> halves;
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [u, v] = g.endpoints(e);
        if (keep[u] && keep[v]) {
            new_edge[e] = static_cast<EdgeId>(halves.size());
            halves.push_back({2 * new_edge[e], 2 * new_edge[e] + 1});
        }
    }
    auto new_half = [&](HalfEdgeId h) -> HalfEdgeId {
        const EdgeId ne = new_edge[g.edge_of(h)];
        if (ne == kNone) return kNone;
        return 2 * ne + (g.half_edges(g.edge_of(h))[0] == h ? 0 : 1);
    };

    std::vector<std::vector<HalfEdgeId>> rotations(r.old_id.size());
    std::vector<VertexId> frontier;
    std::vector<HalfEdgeId> boundary;
    for (VertexId nvx = 0; nvx < static_cast<VertexId>(r.old_id.size()); ++nvx) {
        const VertexId v = r.old_id[nvx];
        bool lost = false;
        for (HalfEdgeId h : g.rotation(v)) {
            const HalfEdgeId nh = new_half(h);
            if (nh == kNone) {
                lost = true;
                continue;
            }
            rotations[nvx].push_back(nh);
            if (g.is_boundary_half_edge(h)) boundary.push_back(nh);
            // A removed successor means the corner after h opens onto the cut.
            if (new_half(g.rot_next(h)) == kNone) boundary.push_back(new_half(g.twin(h)));
        }
        if (lost || g.is_frontier(v)) frontier.push_back(nvx);
    }
    std::vector<Tag> tags;
    if (g.has_tags()) {
        for (VertexId v : r.old_id) tags.push_back(g.tag(v));
    }
    r.graph = RotationGraph::from_parts(rotations, halves, std::move(frontier), std::move(tags), std::move(boundary));
    return r;
}

SubgraphResult triangulated_core(const RotationGraph& g) {
    const FaceSet faces = trace_faces(g);
    std::vector<std::uint8_t> keep(g.num_vertices(), 0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) continue;
        for (HalfEdgeId h : faces.walks[f]) keep[g.origin(h)] = 1;
    }
    return induced_subgraph(g, keep);
}

SubgraphResult ball(const RotationGraph& g, VertexId root, int radius) {
    const LayerDecomposition L = bfs_layers(g, root, radius);
    std::vector<std::uint8_t> keep(g.num_vertices(), 0);
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) keep[v] = L.distance[v] >= 0;
    return induced_subgraph(g, keep);
}

// ════════════════════════════════════════════════════════════════════
//  Canonical form
// ════════════════════════════════════════════════════════════════════

namespace {

std::vector<std::int32_t> traversal_code(const RotationGraph& g, HalfEdgeId root) {
    const auto nv = g.num_vertices();
    const auto nh = g.num_half_edges();
    std::vector<std::int32_t> vlabel(nv, kNone);
    std::vector<std::int32_t> hlabel(nh, kNone);
    std::vector<HalfEdgeId> start_of;  // by vertex label
    std::deque<VertexId> queue;

    vlabel[g.origin(root)] = 0;
    start_of.push_back(root);
    queue.push_back(g.origin(root));

    // First pass: label half-edges in discovery order.
    std::vector<HalfEdgeId> order;
    order.reserve(nh);
    while (!queue.empty()) {
        const VertexId v = queue.front();
        queue.pop_front();
        HalfEdgeId h = start_of[vlabel[v]];
        for (int i = 0; i < g.degree(v); ++i, h = g.rot_next(h)) {
            hlabel[h] = static_cast<std::int32_t>(order.size());
            order.push_back(h);
            const VertexId w = g.target(h);
            if (vlabel[w] == kNone) {
                vlabel[w] = static_cast<std::int32_t>(start_of.size());
                start_of.push_back(g.twin(h));
                queue.push_back(w);
            }
        }
    }
    // Second pass: degrees and twin labels.
    std::vector<std::int32_t> code;
    code.reserve(nh + nv + 2);
    code.push_back(static_cast<std::int32_t>(nv));
    code.push_back(static_cast<std::int32_t>(nh));
    std::size_t i = 0;
    for (std::size_t vl = 0; vl < start_of.size(); ++vl) {
        const int d = g.degree(g.origin(start_of[vl]));
        code.push_back(-d - 1);
        for (int k = 0; k < d; ++k, ++i) code.push_back(hlabel[g.twin(order[i])]);
    }
    return code;
}

}  // namespace

std::vector<std::int32_t> canonical_code(const RotationGraph& g) {
    std::vector<std::int32_t> best;
    for (HalfEdgeId h = 0; h < static_cast<HalfEdgeId>(g.num_half_edges()); ++h) {
        auto code = traversal_code(g, h);
        if (best.empty() || code < best) best = std::move(code);
    }
    if (best.empty()) best = {static_cast<std::int32_t>(g.num_vertices()), 0};
    return best;
}

bool isomorphic(const RotationGraph& a, const RotationGraph& b) {
    if (a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges()) return false;
    return canonical_code(a) == canonical_code(b);
}

}  // namespace speiser_lab
