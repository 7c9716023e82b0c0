#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace speiser_lab {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;
using HalfEdgeId = std::int32_t;

inline constexpr std::int32_t kNone = -1;

/// Bipartition label of a Speiser graph vertex.
enum class Tag : std::uint8_t { none = 0, circle = 1, cross = 2 };

inline Tag opposite(Tag t) {
    return t == Tag::circle ? Tag::cross : (t == Tag::cross ? Tag::circle : Tag::none);
}

/// Locally finite planar graph stored as a rotation system.
///
/// Every vertex carries the cyclic (counterclockwise) order of the half-edges
/// leaving it. An edge owns exactly two half-edges sitting at distinct
/// vertices; parallel edges are allowed, self-loops are not.
///
/// Faces are traced with `face_next(h) = rot_next(twin(h))`, which walks the
/// face lying to the right of `h`.
///
/// Finite truncations of infinite graphs carry two pieces of bookkeeping:
///  - `frontier`: vertices whose neighbourhood was cut by the truncation;
///  - `boundary half-edges`: half-edges whose right face is an artefact of the
///    truncation (the "outer" face of a patch). Faces containing one of them
///    are treated as non-interior by every face-based operation.
///
/// Instances are immutable once built.
class RotationGraph {
public:
    RotationGraph() = default;

    /// Validating constructor. `rotations[v]` lists the half-edges leaving v in
    /// cyclic order; `edge_halves[e]` holds the two half-edges of edge e.
    /// Half-edge ids must be exactly 0..2E-1. Throws InputError on self-loops,
    /// dangling or duplicated half-edges, and disconnected graphs.
    static RotationGraph from_parts(const std::vector<std::vector<HalfEdgeId>>& rotations,
                                    const std::vector<std::array<HalfEdgeId, 2>>& edge_halves,
                                    std::vector<VertexId> frontier = {},
                                    std::vector<Tag> tags = {},
                                    std::vector<HalfEdgeId> boundary = {});

    std::size_t num_vertices() const { return offset_.empty() ? 0 : offset_.size() - 1; }
    std::size_t num_edges() const { return edge_halves_.size() / 2; }
    std::size_t num_half_edges() const { return origin_.size(); }

    std::span<const HalfEdgeId> rotation(VertexId v) const {
        return {rot_.data() + offset_[v], static_cast<std::size_t>(offset_[v + 1] - offset_[v])};
    }
    int degree(VertexId v) const { return offset_[v + 1] - offset_[v]; }

    VertexId origin(HalfEdgeId h) const { return origin_[h]; }
    EdgeId edge_of(HalfEdgeId h) const { return edge_of_[h]; }
    HalfEdgeId twin(HalfEdgeId h) const {
        const EdgeId e = edge_of_[h];
        return edge_halves_[2 * e] == h ? edge_halves_[2 * e + 1] : edge_halves_[2 * e];
    }
    VertexId target(HalfEdgeId h) const { return origin_[twin(h)]; }
    std::array<HalfEdgeId, 2> half_edges(EdgeId e) const {
        return {edge_halves_[2 * e], edge_halves_[2 * e + 1]};
    }
    std::array<VertexId, 2> endpoints(EdgeId e) const {
        return {origin_[edge_halves_[2 * e]], origin_[edge_halves_[2 * e + 1]]};
    }
    /// Position of h inside the rotation of its origin.
    int rotation_index(HalfEdgeId h) const { return pos_[h]; }
    HalfEdgeId rot_next(HalfEdgeId h) const;
    HalfEdgeId rot_prev(HalfEdgeId h) const;
    HalfEdgeId face_next(HalfEdgeId h) const { return rot_next(twin(h)); }

    bool is_frontier(VertexId v) const { return frontier_flag_[v] != 0; }
    const std::vector<VertexId>& frontier() const { return frontier_; }
    bool has_frontier() const { return !frontier_.empty(); }

    bool has_tags() const { return !tags_.empty(); }
    Tag tag(VertexId v) const { return tags_.empty() ? Tag::none : tags_[v]; }
    const std::vector<Tag>& tags() const { return tags_; }

    const std::vector<HalfEdgeId>& boundary_half_edges() const { return boundary_; }
    bool is_boundary_half_edge(HalfEdgeId h) const;

    /// Copies with modified bookkeeping; structure is shared by value.
    RotationGraph with_tags(std::vector<Tag> tags) const;
    RotationGraph with_frontier(std::vector<VertexId> frontier) const;
    RotationGraph with_boundary(std::vector<HalfEdgeId> boundary) const;

private:
    std::vector<std::int32_t> offset_;
    std::vector<HalfEdgeId> rot_;
    std::vector<VertexId> origin_;
    std::vector<std::int32_t> pos_;
    std::vector<EdgeId> edge_of_;
    std::vector<HalfEdgeId> edge_halves_;
    std::vector<VertexId> frontier_;
    std::vector<std::uint8_t> frontier_flag_;
    std::vector<Tag> tags_;
    std::vector<HalfEdgeId> boundary_;
};

/// Incremental construction helper. Half-edges of edge e are 2e (at the
/// first endpoint) and 2e+1 (at the second). `add_edge` appends both
/// half-edges to the ends of the rotations; callers that need a specific
/// cyclic order edit `rotation(v)` directly before `build()`.
class GraphBuilder {
public:
    VertexId add_vertex(Tag tag = Tag::none);
    EdgeId add_edge(VertexId u, VertexId v);
    /// Adds an edge without touching any rotation.
    EdgeId add_edge_unplaced(VertexId u, VertexId v);

    static HalfEdgeId half(EdgeId e, int side) { return 2 * e + side; }

    std::vector<HalfEdgeId>& rotation(VertexId v) { return rotations_[v]; }
    const std::vector<HalfEdgeId>& rotation(VertexId v) const { return rotations_[v]; }
    VertexId origin(HalfEdgeId h) const { return ends_[h / 2][h % 2]; }
    VertexId target(HalfEdgeId h) const { return ends_[h / 2][1 - h % 2]; }

    void set_tag(VertexId v, Tag t) { tags_[v] = t; }
    void mark_frontier(VertexId v) { frontier_.push_back(v); }
    void mark_boundary(HalfEdgeId h) { boundary_.push_back(h); }

    std::size_t num_vertices() const { return rotations_.size(); }
    std::size_t num_edges() const { return ends_.size(); }

    /// Validates and freezes. Tags are dropped when every tag is `none`.
    RotationGraph build() const;

private:
    std::vector<std::vector<HalfEdgeId>> rotations_;
    std::vector<std::array<VertexId, 2>> ends_;
    std::vector<Tag> tags_;
    std::vector<VertexId> frontier_;
    std::vector<HalfEdgeId> boundary_;
};

}  // namespace speiser_lab
