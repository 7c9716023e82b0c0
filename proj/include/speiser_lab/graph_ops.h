#pragma once

#include "speiser_lab/rotation_graph.h"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace speiser_lab {

// ── Faces ───────────────────────────────────────────────────────

/// Result of tracing every face of a rotation system.
struct FaceSet {
    std::vector<std::int32_t> face_of;           // half-edge -> face (face to its right)
    std::vector<std::vector<HalfEdgeId>> walks;  // face -> closed boundary walk
    std::vector<std::uint8_t> interior;          // 0 when the walk carries a boundary marker

    std::size_t size() const { return walks.size(); }
    std::size_t num_interior() const;
    /// Vertices visited by the walk of face f, in walk order (repeats kept).
    std::vector<VertexId> walk_vertices(const RotationGraph& g, std::int32_t f) const;
};

/// Partitions half-edges into face walks. Face ids follow the smallest
/// half-edge id on each walk, so the numbering is deterministic.
FaceSet trace_faces(const RotationGraph& g);

// ── Duality ─────────────────────────────────────────────────────

enum class OuterFacePolicy { reject, drop };

struct DualResult {
    RotationGraph graph;
    std::vector<std::int32_t> primal_face;  // dual vertex -> primal face id
    std::vector<EdgeId> primal_edge;        // dual edge -> primal edge id
    /// primal half-edge h -> dual half-edge d(h) leaving face_right(h), or kNone.
    /// The right face of d(h) surrounds target(h).
    std::vector<HalfEdgeId> dual_half;
};

/// One dual vertex per interior face and one dual edge per primal edge
/// separating two interior faces. With `reject`, any truncation face or any
/// edge bounding the same face on both sides is an InputError.
DualResult dual(const RotationGraph& g, OuterFacePolicy policy = OuterFacePolicy::reject);

// ── BFS layers ──────────────────────────────────────────────────

struct LayerDecomposition {
    VertexId root = 0;
    int depth = 0;
    std::vector<std::vector<VertexId>> spheres;    // S(0..depth)
    std::vector<std::vector<EdgeId>> cut_edges;    // E(0..depth-1), multiplicity kept
    std::vector<std::int32_t> distance;            // per vertex, -1 beyond depth
    /// Largest n such that B(n) holds no frontier vertex (== depth when the
    /// frontier is never reached).
    int reliable_depth = 0;
    bool frontier_reached = false;

    std::size_t sphere_size(int n) const { return spheres[n].size(); }
    std::size_t ball_size(int n) const;
};

/// Combinatorial spheres around `root` up to radius n_max (or until the
/// graph is exhausted).
LayerDecomposition bfs_layers(const RotationGraph& g, VertexId root, int n_max);

// ── Classification ──────────────────────────────────────────────

struct GraphClassification {
    bool is_bipartite = false;
    std::optional<int> homogeneous_degree;
    bool is_disk_triangulation = false;
    std::optional<int> max_degree;
    std::optional<int> p_of;       // minimal K with property p(K)
    EdgeId p_witness = kNone;      // an edge attaining p_of
};

/// Degree statistics ignore frontier vertices; p(K) is evaluated on edges
/// whose endpoints are both off the frontier.
GraphClassification classify(const RotationGraph& g);

/// Minimal K such that min(deg u, deg v) <= K on every edge, using the
/// actual degrees of the (finite) graph.
int p_value(const RotationGraph& g);

/// Disk triangulation test: simple graph, every interior face a triangle on
/// three distinct vertices, interior complex has Euler characteristic 1 and
/// the non-interior faces form one simple boundary cycle.
bool is_disk_triangulation(const RotationGraph& g, const FaceSet& faces);

/// Boundary cycle of a disk triangulation, in walk order.
std::vector<VertexId> boundary_cycle(const RotationGraph& g, const FaceSet& faces);

/// Two-colouring by BFS parity from vertex 0 (circle at even distance).
/// Throws InputError when the graph is not bipartite.
std::vector<Tag> bipartition_tags(const RotationGraph& g);

// ── Subgraphs ───────────────────────────────────────────────────

struct SubgraphResult {
    RotationGraph graph;
    std::vector<VertexId> new_id;   // old vertex -> new vertex or -1
    std::vector<VertexId> old_id;   // new vertex -> old vertex
};

/// Induced subgraph on `keep`. Vertices that lose an edge join the frontier
/// and every gap left in a rotation gets a boundary marker, so the faces
/// created by the cut are never mistaken for interior faces.
SubgraphResult induced_subgraph(const RotationGraph& g, const std::vector<std::uint8_t>& keep);

/// Induced subgraph on the vertices that lie on some interior face.
SubgraphResult triangulated_core(const RotationGraph& g);

/// Induced subgraph on the combinatorial ball B(root, radius).
SubgraphResult ball(const RotationGraph& g, VertexId root, int radius);

// ── Canonical form ──────────────────────────────────────────────

/// Orientation-preserving canonical code of a rotation system: the
/// lexicographically smallest traversal code over all root half-edges.
std::vector<std::int32_t> canonical_code(const RotationGraph& g);

/// Oriented-map isomorphism via canonical codes.
bool isomorphic(const RotationGraph& a, const RotationGraph& b);

}  // namespace speiser_lab
