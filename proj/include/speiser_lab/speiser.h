#pragma once

#include "speiser_lab/graph_ops.h"
#include "speiser_lab/refinement.h"
#include "speiser_lab/rotation_graph.h"

#include <vector>

namespace speiser_lab {

/// Lengths l_0, l_1, ... of the unbranched trees replacing the edges of E(n).
struct GrowthSchedule {
    enum class Source { paper, custom };
    std::vector<long long> lengths;
    Source source = Source::custom;

    /// Throws InputError unless every length is odd and positive.
    void validate() const;
};

/// Truncation of the 3-regular planar graph with octagonal faces containing
/// B(depth) around vertex 0. Vertices are numbered in BFS order, tags are the
/// bipartition (vertex 0 is `circle`), S(depth) is frontier.
RotationGraph build_octagonal_speiser(int depth);

/// Replaces every edge of E(n) by a path of length l_n whose edges have
/// multiplicities 1,2,1,...,2,1. Original vertices keep their ids; internal
/// path vertices are appended.
RotationGraph tree_replace(const RotationGraph& g, const LayerDecomposition& layers, const GrowthSchedule& schedule);

/// The triangulation dividing each interior k-gon into 2k triangles.
/// Vertex ids: original vertices, then edge midpoints (|V| + e), then one
/// centre per interior face in face-id order.
struct LambdaResult {
    RotationGraph graph;
    RefinementMap primal_map;  // as a refinement of the input graph
    DualResult dual;           // dual of the input, truncation faces dropped
    RefinementMap dual_map;    // as a refinement of dual.graph
};

LambdaResult lambda_triangulation_full(const RotationGraph& g);
RotationGraph lambda_triangulation(const RotationGraph& g);

struct ExtendOptions {
    int grid_depth = 1;
    /// Also glue grids into truncation faces (used to close off truncated
    /// trees, whose only faces are truncation faces).
    bool include_truncation_faces = false;
    /// When ball_radius >= 0, each grid column above a vertex w is cut at
    /// height ball_radius - dist(ball_root, w) so only B(ball_radius) is built.
    VertexId ball_root = 0;
    int ball_radius = -1;
};

/// Extended Speiser graph: a cylindrical square grid of grid_depth rings is
/// glued into every interior face. Original vertices keep their ids; the top
/// vertex of every column is frontier, and so is every original vertex that
/// misses a column (on an unextended face, or cut by the ball limit).
RotationGraph extend_speiser(const RotationGraph& g, int grid_depth);
RotationGraph extend_speiser(const RotationGraph& g, const ExtendOptions& options);

}  // namespace speiser_lab
