#pragma once

#include "speiser_lab/rotation_graph.h"

#include <vector>

namespace speiser_lab {

/// Rotation system of a simple polygonal complex given by its faces, each a
/// counterclockwise vertex cycle. Edges used by a single face bound the outer
/// face and get boundary markers; with `boundary_is_frontier` their endpoints
/// join the frontier. Throws InputError when a vertex link is not a fan.
RotationGraph from_faces(std::size_t num_vertices, const std::vector<std::vector<VertexId>>& faces,
                         bool boundary_is_frontier);

RotationGraph octahedron();
RotationGraph cube();

/// Path v0 - v1 - ... - v_length. No frontier.
RotationGraph path_graph(int length);

/// Cycle on q vertices, as a map on the sphere (two faces).
RotationGraph cycle_graph(int q);

/// Rectangular patch of Z^2 with `rows` x `cols` vertices, id = row*cols + col.
/// Border vertices are frontier; the outer face is marked.
RotationGraph grid_patch(int rows, int cols);

/// Square patch of Z^2 of half-width `radius` with the centre vertex as id 0
/// after BFS relabelling; B(radius - 1) is frontier-free.
RotationGraph z2_patch(int radius);

/// Ball of radius n in the triangular lattice (all interior degrees 6),
/// centre vertex id 0. The outermost ring is frontier.
RotationGraph hex_lattice_ball(int n);

/// Ball of radius `radius` in the regular {3,q} triangulation (q >= 6),
/// built layer by layer; root is vertex 0. The last layer is frontier.
RotationGraph triangular_tiling_ball(int q, int radius);

/// Rooted tree: root with `degree` children, every other internal vertex
/// with `degree - 1` children. Leaves at `depth` are frontier.
RotationGraph regular_tree(int degree, int depth);

/// Relabels vertices in BFS order from `root` (root becomes 0); edges are
/// renumbered in order of first appearance. Bookkeeping is carried over.
RotationGraph relabel_bfs(const RotationGraph& g, VertexId root);

}  // namespace speiser_lab
