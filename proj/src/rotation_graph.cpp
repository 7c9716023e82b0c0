#include "speiser_lab/rotation_graph.h"

#include "speiser_lab/error.h"

#include <algorithm>
#include <string>

namespace speiser_lab {

RotationGraph RotationGraph::from_parts(const std::vector<std::vector<HalfEdgeId>>& rotations,
                                        const std::vector<std::array<HalfEdgeId, 2>>& edge_halves,
                                        std::vector<VertexId> frontier,
                                        std::vector<Tag> tags,
                                        std::vector<HalfEdgeId> boundary) {
    RotationGraph g;
    const auto nv = static_cast<std::int32_t>(rotations.size());
    const auto ne = static_cast<std::int32_t>(edge_halves.size());
    const std::int32_t nh = 2 * ne;
    if (nv == 0) throw InputError("graph has no vertices");

    g.offset_.assign(nv + 1, 0);
    for (VertexId v = 0; v < nv; ++v) g.offset_[v + 1] = g.offset_[v] + static_cast<std::int32_t>(rotations[v].size());
    if (g.offset_[nv] != nh) {
        throw InputError("malformed rotation: rotations list " + std::to_string(g.offset_[nv]) +
                         " half-edges but edges own " + std::to_string(nh));
    }
    g.rot_.resize(nh);
    g.origin_.assign(nh, kNone);
    g.pos_.assign(nh, kNone);
    for (VertexId v = 0; v < nv; ++v) {
        std::int32_t i = 0;
        for (HalfEdgeId h : rotations[v]) {
            if (h < 0 || h >= nh) throw InputError("malformed rotation: half-edge id " + std::to_string(h) + " out of range");
            if (g.origin_[h] != kNone) throw InputError("malformed rotation: half-edge " + std::to_string(h) + " listed twice");
            g.origin_[h] = v;
            g.pos_[h] = i;
            g.rot_[g.offset_[v] + i] = h;
            ++i;
        }
    }
    g.edge_of_.assign(nh, kNone);
    g.edge_halves_.resize(nh);
    for (EdgeId e = 0; e < ne; ++e) {
        for (int s = 0; s < 2; ++s) {
            const HalfEdgeId h = edge_halves[e][s];
            if (h < 0 || h >= nh) throw InputError("dangling half-edge " + std::to_string(h) + " in edge " + std::to_string(e));
            if (g.edge_of_[h] != kNone) throw InputError("half-edge " + std::to_string(h) + " paired twice");
            g.edge_of_[h] = e;
            g.edge_halves_[2 * e + s] = h;
        }
        if (g.origin_[edge_halves[e][0]] == g.origin_[edge_halves[e][1]]) {
            throw InputError("self-loop at vertex " + std::to_string(g.origin_[edge_halves[e][0]]) + " (edge " +
                             std::to_string(e) + ")");
        }
    }

    // Connectivity.
    std::vector<std::uint8_t> seen(nv, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    std::int32_t reached = 1;
    while (!stack.empty()) {
        const VertexId v = stack.back();
        stack.pop_back();
        for (HalfEdgeId h : g.rotation(v)) {
            const VertexId w = g.target(h);
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != nv) throw InputError("graph is disconnected");

    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    g.frontier_flag_.assign(nv, 0);
    for (VertexId v : frontier) {
        if (v < 0 || v >= nv) throw InputError("frontier vertex out of range");
        g.frontier_flag_[v] = 1;
    }
    g.frontier_ = std::move(frontier);

    if (!tags.empty() && static_cast<std::int32_t>(tags.size()) != nv) throw InputError("tag count mismatch");
    if (std::all_of(tags.begin(), tags.end(), [](Tag t) { return t == Tag::none; })) tags.clear();
    g.tags_ = std::move(tags);

    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    for (HalfEdgeId h : boundary) {
        if (h < 0 || h >= nh) throw InputError("boundary half-edge out of range");
    }
    g.boundary_ = std::move(boundary);
    return g;
}

HalfEdgeId RotationGraph::rot_next(HalfEdgeId h) const {
    const VertexId v = origin_[h];
    const std::int32_t d = offset_[v + 1] - offset_[v];
    return rot_[offset_[v] + (pos_[h] + 1) % d];
}

HalfEdgeId RotationGraph::rot_prev(HalfEdgeId h) const {
    const VertexId v = origin_[h];
    const std::int32_t d = offset_[v + 1] - offset_[v];
    return rot_[offset_[v] + (pos_[h] + d - 1) % d];
}

bool RotationGraph::is_boundary_half_edge(HalfEdgeId h) const {
    return std::binary_search(boundary_.begin(), boundary_.end(), h);
}

RotationGraph RotationGraph::with_tags(std::vector<Tag> tags) const {
    if (!tags.empty() && tags.size() != num_vertices()) throw InputError("tag count mismatch");
    RotationGraph g = *this;
    if (std::all_of(tags.begin(), tags.end(), [](Tag t) { return t == Tag::none; })) tags.clear();
    g.tags_ = std::move(tags);
    return g;
}

RotationGraph RotationGraph::with_frontier(std::vector<VertexId> frontier) const {
    RotationGraph g = *this;
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    g.frontier_flag_.assign(num_vertices(), 0);
    for (VertexId v : frontier) {
        if (v < 0 || static_cast<std::size_t>(v) >= num_vertices()) throw InputError("frontier vertex out of range");
        g.frontier_flag_[v] = 1;
    }
    g.frontier_ = std::move(frontier);
    return g;
}

RotationGraph RotationGraph::with_boundary(std::vector<HalfEdgeId> boundary) const {
    RotationGraph g = *this;
    std::sort(boundary.begin(), boundary.end());
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    g.boundary_ = std::move(boundary);
    return g;
}

// ── GraphBuilder ────────────────────────────────────────────────

VertexId GraphBuilder::add_vertex(Tag tag) {
    rotations_.emplace_back();
    tags_.push_back(tag);
    return static_cast<VertexId>(rotations_.size() - 1);
}

EdgeId GraphBuilder::add_edge(VertexId u, VertexId v) {
    const EdgeId e = add_edge_unplaced(u, v);
    rotations_[u].push_back(half(e, 0));
    rotations_[v].push_back(half(e, 1));
    return e;
}

EdgeId GraphBuilder::add_edge_unplaced(VertexId u, VertexId v) {
    ends_.push_back({u, v});
    return static_cast<EdgeId>(ends_.size() - 1);
}

RotationGraph GraphBuilder::build() const {
    std::vector<std::array<HalfEdgeId, 2>> halves(ends_.size());
    for (std::size_t e = 0; e < ends_.size(); ++e) {
        halves[e] = {half(static_cast<EdgeId>(e), 0), half(static_cast<EdgeId>(e), 1)};
    }
    // Rotations must place each half-edge at its recorded endpoint.
    for (std::size_t v = 0; v < rotations_.size(); ++v) {
        for (HalfEdgeId h : rotations_[v]) {
            if (h < 0 || static_cast<std::size_t>(h) >= 2 * ends_.size() ||
                origin(h) != static_cast<VertexId>(v)) {
                throw InputError("builder: half-edge " + std::to_string(h) + " placed at wrong vertex " +
                                 std::to_string(v));
            }
        }
    }
    return RotationGraph::from_parts(rotations_, halves, frontier_, tags_, boundary_);
}

}  // namespace speiser_lab
