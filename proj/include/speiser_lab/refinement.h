#pragma once

#include "speiser_lab/rotation_graph.h"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace speiser_lab {

/// Nonnegative weight per vertex.
using VMetric = std::vector<double>;

/// Where a refined vertex sits inside the coarse graph.
struct Origin {
    enum class Kind : std::uint8_t { vertex, edge, face };
    Kind kind = Kind::vertex;
    std::int32_t id = kNone;  // coarse vertex / edge / face id; face may be kNone (outside every face)
};

/// Refinement bookkeeping. Face ids are those of trace_faces() on the
/// respective graph.
struct RefinementMap {
    std::vector<Origin> vertex_origin;            // refined vertex -> origin
    std::vector<std::vector<EdgeId>> edge_cover;  // coarse edge -> refined edges, from endpoints(e)[0]
    std::vector<std::vector<std::int32_t>> face_cover;  // coarse face -> refined faces (empty if not interior)
};

RefinementMap identity_map(const RotationGraph& g);

/// Midpoint subdivision G^f: each interior triangle becomes four. Vertex ids:
/// original vertices first, then the midpoint of edge e at |V| + e.
/// Truncation faces are left as they are; midpoints on them join the frontier.
std::pair<RotationGraph, RefinementMap> subdivide4(const RotationGraph& g);

struct RefinementReport {
    bool is_refinement = false;
    bool is_semi_bounded = false;
    int M_edge = 0;  // refined vertices on a closed edge, endpoints included
    bool is_bounded = false;
    int M_face = 0;  // refined vertices on a closed interior face
    std::size_t uncovered_faces = 0;
    std::vector<std::string> issues;
};

/// Checks the cover structure of `map`. Violations are reported, not thrown.
RefinementReport check_refinement(const RotationGraph& g, const RotationGraph& g_ref, const RefinementMap& map);

/// m(v) = 2M * max of m' over the refined vertices of the half-open star of v.
VMetric coarsen_metric(const RotationGraph& g, const RotationGraph& g_ref, const RefinementMap& map,
                       const VMetric& m_ref);

/// m'(w) = m(w) on Z = {deg > K}; 3 * max{m(v) : v in V_w \ Z} on the rest of
/// the 1-skeleton; 0 inside faces.
VMetric refine_metric(const RotationGraph& g, const RotationGraph& g_ref, const RefinementMap& map, const VMetric& m,
                      int K);

}  // namespace speiser_lab
