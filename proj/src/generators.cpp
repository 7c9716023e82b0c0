#include "speiser_lab/generators.h"

#include "speiser_lab/error.h"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <string>
#include <unordered_map>
#include <utility>

namespace speiser_lab {

namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

// ── Polygonal complexes ─────────────────────────────────────────────

RotationGraph from_faces(std::size_t num_vertices, const std::vector<std::vector<VertexId>>& faces,
                         bool boundary_is_frontier) {
    const auto nv = static_cast<VertexId>(num_vertices);
    // Around v, a ccw face (.., p, v, n, ..) contributes the wedge n -> p.
    std::vector<std::vector<std::pair<VertexId, VertexId>>> wedges(nv);
    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(faces.size() * 4);
    for (const auto& f : faces) {
        const auto k = f.size();
        if (k < 3) throw InputError("from_faces: faces need at least three vertices");
        for (std::size_t i = 0; i < k; ++i) {
            const VertexId v = f[i], n = f[(i + 1) % k], p = f[(i + k - 1) % k];
            if (v < 0 || v >= nv) throw InputError("from_faces: vertex out of range");
            wedges[v].push_back({n, p});
            if (++directed[pair_key(v, n)] > 1) throw InputError("from_faces: inconsistent face orientation");
        }
    }

    GraphBuilder b;
    for (VertexId v = 0; v < nv; ++v) b.add_vertex();
    std::unordered_map<std::uint64_t, EdgeId> edge_id;
    edge_id.reserve(directed.size());
    std::vector<std::uint8_t> on_boundary(nv, 0);
    for (VertexId v = 0; v < nv; ++v) {
        auto& w = wedges[v];
        if (w.empty()) throw InputError("from_faces: vertex " + std::to_string(v) + " lies on no face");
        std::sort(w.begin(), w.end());
        auto next_of = [&](VertexId x) -> const std::pair<VertexId, VertexId>* {
            auto it = std::lower_bound(w.begin(), w.end(), std::pair<VertexId, VertexId>{x, -1});
            return (it != w.end() && it->first == x) ? &*it : nullptr;
        };
        // An open fan starts at a neighbour that no wedge ends at.
        VertexId start = w.front().first;
        for (const auto& [n, p] : w) {
            const bool is_end = std::any_of(w.begin(), w.end(), [&](const auto& q) { return q.second == n; });
            if (!is_end) {
                start = n;
                on_boundary[v] = 1;
                break;
            }
        }
        std::vector<VertexId> order;
        VertexId cur = start;
        for (;;) {
            order.push_back(cur);
            const auto* nx = next_of(cur);
            if (!nx) break;
            if (nx->second == start) break;
            cur = nx->second;
            if (order.size() > w.size() + 1) throw InputError("from_faces: vertex link is not a fan");
        }
        const std::size_t used = on_boundary[v] ? order.size() - 1 : order.size();
        if (used != w.size()) throw InputError("from_faces: vertex " + std::to_string(v) + " link is not a fan");
        auto& rot = b.rotation(v);
        for (VertexId u : order) {
            const auto key = pair_key(std::min(u, v), std::max(u, v));
            auto it = edge_id.find(key);
            EdgeId e;
            if (it == edge_id.end()) {
                e = b.add_edge_unplaced(v, u);
                edge_id.emplace(key, e);
                rot.push_back(GraphBuilder::half(e, 0));
            } else {
                e = it->second;
                rot.push_back(GraphBuilder::half(e, 1));
            }
        }
    }
    for (const auto& [key, count] : directed) {
        const auto a = static_cast<VertexId>(key >> 32);
        const auto c = static_cast<VertexId>(key & 0xffffffffu);
        if (directed.count(pair_key(c, a))) continue;
        // Face lies left of a->c, so the truncation face is on its right.
        const EdgeId e = edge_id.at(pair_key(std::min(a, c), std::max(a, c)));
        b.mark_boundary(b.origin(GraphBuilder::half(e, 0)) == a ? GraphBuilder::half(e, 0) : GraphBuilder::half(e, 1));
    }
    if (boundary_is_frontier) {
        for (VertexId v = 0; v < nv; ++v)
            if (on_boundary[v]) b.mark_frontier(v);
    }
    return b.build();
}

// ── Small fixed graphs ──────────────────────────────────────────────

RotationGraph octahedron() {
    // 0:+x 1:-x 2:+y 3:-y 4:+z 5:-z
    std::vector<std::vector<VertexId>> faces;
    for (int sx = 0; sx < 2; ++sx)
        for (int sy = 0; sy < 2; ++sy)
            for (int sz = 0; sz < 2; ++sz) {
                std::vector<VertexId> f{sx, 2 + sy, 4 + sz};
                if ((sx + sy + sz) % 2 == 1) std::swap(f[1], f[2]);
                faces.push_back(f);
            }
    return from_faces(6, faces, false);
}

RotationGraph cube() {
    // id = x + 2y + 4z
    const std::vector<std::vector<VertexId>> faces{{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 4, 6, 2},
                                                   {1, 3, 7, 5}, {0, 1, 5, 4}, {2, 6, 7, 3}};
    return from_faces(8, faces, false);
}

RotationGraph path_graph(int length) {
    if (length < 1) throw InputError("path_graph: length must be >= 1");
    GraphBuilder b;
    b.add_vertex();
    for (int i = 1; i <= length; ++i) {
        b.add_vertex();
        b.add_edge(i - 1, i);
    }
    return b.build();
}

RotationGraph cycle_graph(int q) {
    if (q < 2) throw InputError("cycle_graph: q must be >= 2");
    GraphBuilder b;
    for (int i = 0; i < q; ++i) b.add_vertex();
    for (int i = 0; i < q; ++i) b.add_edge(i, (i + 1) % q);
    return b.build();
}

// ── Lattice patches ─────────────────────────────────────────────────

RotationGraph grid_patch(int rows, int cols) {
    if (rows < 2 || cols < 2) throw InputError("grid_patch: need at least 2 x 2 vertices");
    std::vector<std::vector<VertexId>> faces;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r + 1 < rows; ++r)
        for (int c = 0; c + 1 < cols; ++c) faces.push_back({id(r, c), id(r, c + 1), id(r + 1, c + 1), id(r + 1, c)});
    return from_faces(static_cast<std::size_t>(rows) * cols, faces, true);
}

RotationGraph z2_patch(int radius) {
    if (radius < 1) throw InputError("z2_patch: radius must be >= 1");
    const int side = 2 * radius + 1;
    return relabel_bfs(grid_patch(side, side), radius * side + radius);
}

RotationGraph hex_lattice_ball(int n) {
    if (n < 1) throw InputError("hex_lattice_ball: n must be >= 1");
    const int side = 2 * n + 1;
    auto inside = [n](int q, int r) { return std::abs(q) <= n && std::abs(r) <= n && std::abs(q + r) <= n; };
    std::vector<VertexId> id(static_cast<std::size_t>(side) * side, kNone);
    auto slot = [&](int q, int r) -> VertexId& { return id[(q + n) * side + (r + n)]; };
    VertexId count = 0;
    for (int q = -n; q <= n; ++q)
        for (int r = -n; r <= n; ++r)
            if (inside(q, r)) slot(q, r) = count++;
    std::vector<std::vector<VertexId>> faces;
    for (int q = -n; q <= n; ++q)
        for (int r = -n; r <= n; ++r) {
            if (!inside(q, r)) continue;
            if (inside(q + 1, r) && inside(q, r + 1)) faces.push_back({slot(q, r), slot(q + 1, r), slot(q, r + 1)});
            if (inside(q + 1, r - 1) && inside(q + 1, r)) faces.push_back({slot(q, r), slot(q + 1, r - 1), slot(q + 1, r)});
        }
    return relabel_bfs(from_faces(count, faces, true), slot(0, 0));
}

RotationGraph triangular_tiling_ball(int q, int radius) {
    if (q < 6) throw InputError("triangular_tiling_ball: q must be >= 6");
    if (radius < 1) throw InputError("triangular_tiling_ball: radius must be >= 1");
    std::vector<std::vector<VertexId>> faces;
    std::vector<int> deg{q};
    std::vector<VertexId> layer;
    for (int i = 0; i < q; ++i) {
        layer.push_back(1 + i);
        deg.push_back(3);
    }
    for (int i = 0; i < q; ++i) faces.push_back({0, layer[i], layer[(i + 1) % q]});
    VertexId next = 1 + q;
    for (int l = 2; l <= radius; ++l) {
        const auto m = layer.size();
        std::vector<VertexId> shared(m), new_layer;
        std::vector<std::vector<VertexId>> outs(m);
        for (std::size_t i = 0; i < m; ++i) {
            const int k = q - deg[layer[i]];
            if (k < 2) throw InputError("triangular_tiling_ball: layer construction degenerates");
            const std::size_t before = (i + m - 1) % m;
            shared[before] = next++;
            deg.push_back(4);
            new_layer.push_back(shared[before]);
            outs[i].push_back(shared[before]);
            for (int j = 0; j < k - 2; ++j) {
                outs[i].push_back(next++);
                deg.push_back(3);
                new_layer.push_back(outs[i].back());
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            outs[i].push_back(shared[i]);
            const VertexId v = layer[i];
            for (std::size_t j = 0; j + 1 < outs[i].size(); ++j) faces.push_back({v, outs[i][j], outs[i][j + 1]});
            faces.push_back({layer[(i + 1) % m], v, shared[i]});
            deg[v] = q;
        }
        layer = std::move(new_layer);
    }
    return from_faces(static_cast<std::size_t>(next), faces, true);
}

RotationGraph regular_tree(int degree, int depth) {
    if (degree < 2 || depth < 1) throw InputError("regular_tree: need degree >= 2 and depth >= 1");
    GraphBuilder b;
    b.add_vertex();
    std::vector<VertexId> level{0};
    for (int d = 1; d <= depth; ++d) {
        std::vector<VertexId> next;
        for (VertexId v : level) {
            const int children = (d == 1) ? degree : degree - 1;
            for (int c = 0; c < children; ++c) {
                const VertexId w = b.add_vertex();
                b.add_edge(v, w);
                next.push_back(w);
            }
        }
        level = std::move(next);
    }
    for (VertexId v : level) b.mark_frontier(v);
    // The single face of a truncated tree is not a genuine face.
    b.mark_boundary(0);
    return b.build();
}

// ── Relabelling ─────────────────────────────────────────────────────

RotationGraph relabel_bfs(const RotationGraph& g, VertexId root) {
    const auto nv = static_cast<VertexId>(g.num_vertices());
    if (root < 0 || root >= nv) throw InputError("relabel_bfs: root out of range");
    std::vector<VertexId> new_v(nv, kNone), order;
    order.reserve(nv);
    new_v[root] = 0;
    order.push_back(root);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (HalfEdgeId h : g.rotation(order[i])) {
            const VertexId w = g.target(h);
            if (new_v[w] == kNone) {
                new_v[w] = static_cast<VertexId>(order.size());
                order.push_back(w);
            }
        }
    }
    std::vector<HalfEdgeId> new_h(g.num_half_edges(), kNone);
    std::vector<std::vector<HalfEdgeId>> rotations(nv);
    std::vector<std::array<HalfEdgeId, 2>> halves;
    halves.reserve(g.num_edges());
    for (VertexId nvid = 0; nvid < nv; ++nvid) {
        for (HalfEdgeId h : g.rotation(order[nvid])) {
            if (new_h[h] == kNone) {
                const auto e = static_cast<HalfEdgeId>(halves.size());
                new_h[h] = 2 * e;
                new_h[g.twin(h)] = 2 * e + 1;
                halves.push_back({2 * e, 2 * e + 1});
            }
            rotations[nvid].push_back(new_h[h]);
        }
    }
    std::vector<VertexId> frontier;
    for (VertexId v : g.frontier()) frontier.push_back(new_v[v]);
    std::sort(frontier.begin(), frontier.end());
    std::vector<Tag> tags;
    if (g.has_tags()) {
        tags.resize(nv);
        for (VertexId v = 0; v < nv; ++v) tags[new_v[v]] = g.tag(v);
    }
    std::vector<HalfEdgeId> boundary;
    for (HalfEdgeId h : g.boundary_half_edges()) boundary.push_back(new_h[h]);
    return RotationGraph::from_parts(rotations, halves, std::move(frontier), std::move(tags), std::move(boundary));
}

}  // namespace speiser_lab
