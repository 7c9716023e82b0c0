#pragma once

#include "speiser_lab/numeric.h"
#include "speiser_lab/refinement.h"
#include "speiser_lab/rotation_graph.h"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace speiser_lab {

using VertexSet = std::vector<VertexId>;

struct MetricObjective {
    double dist = 0.0;   // min over A-B paths of the summed weights, endpoints included
    double area = 0.0;   // sum of m(v)^2
    double ratio = 0.0;  // dist^2 / area, 0 when area == 0
    bool connected = true;  // false: no A-B path, dist = +inf
};

/// Vertex mask restricting paths to a subgraph; empty means every vertex.
using VertexMask = std::vector<std::uint8_t>;

MetricObjective metric_objective(const RotationGraph& g, const VertexSet& A, const VertexSet& B, const VMetric& m,
                                 const VertexMask& allowed = {});

struct VelOptions {
    double tol = 1e-6;        // separation: stop once every A-B path has m-length >= 1 - tol
    int max_rounds = 5000;    // cutting-plane rounds
    long max_sweeps = 200000; // inner coordinate sweeps per round
    double relax = 1.5;       // over-relaxation of the coordinate steps, in (0, 2)
};

/// Bracket on the vertex extremal length between A and B.
///
/// `lower` is metric_objective(metric).ratio for the returned metric, so it is
/// certified by re-evaluation. Two certificates bound it from above:
///  - the vertex-disjoint paths in `paths`: with vertex counts L_i and k
///    paths, any metric obeys dist^2 / area <= sum L_i / k^2 (`upper_disjoint`);
///  - the solver's path measure mu: dist^2 / area <= sum_v mu(paths through v)^2
///    for any probability measure on A-B paths.
/// `upper` is the smaller of the two.
struct VelEstimate {
    double lower = 0.0;
    double upper = 0.0;
    double upper_disjoint = 0.0;
    VMetric metric;
    std::vector<std::vector<VertexId>> paths;
    int rounds = 0;
    long sweeps = 0;
    bool converged = false;
    bool infinite = false;  // A and B disconnected
    std::vector<std::string> flags;
};

/// Cutting planes: minimise sum m^2 subject to m-length >= 1 on a growing
/// set of shortest paths (dual coordinate ascent), separating by vertex
/// weighted Dijkstra.
VelEstimate solve_vel(const RotationGraph& g, const VertexSet& A, const VertexSet& B, const VelOptions& opts = {},
                      const VertexMask& allowed = {});

/// Vertex-disjoint A-B paths, greedily by hop-shortest path.
std::vector<std::vector<VertexId>> disjoint_paths(const RotationGraph& g, const VertexSet& A, const VertexSet& B,
                                                  const VertexMask& allowed = {});

// ── Annulus trends ──────────────────────────────────────────────────

struct AnnulusResult {
    int n_inner = 0;
    int n_outer = 0;
    bool excluded = false;
    std::string reason;
    std::size_t num_vertices = 0;
    VelEstimate estimate;
};

struct TypeTrendReport {
    std::vector<AnnulusResult> annuli;
    std::vector<double> cumulative_lower;  // over the included annuli, in order
    TrendFit fit;
    std::string verdict;  // parabolic-leaning | hyperbolic-leaning | inconclusive
};

/// Layers n_inner..n_outer as a mask on g, with A = S(n_inner) and
/// B = S(n_outer). Annuli of trees fall apart, so no subgraph is built.
struct Annulus {
    VertexMask mask;
    VertexSet A, B;
    std::size_t size = 0;
};
Annulus make_annulus(const RotationGraph& g, const std::vector<std::int32_t>& distance, int n_inner, int n_outer);

TypeTrendReport vel_type_trend(const RotationGraph& g, VertexId root, const std::vector<std::pair<int, int>>& radii,
                               const VelOptions& opts = {});

nlohmann::json to_json(const VelEstimate& e, bool with_metric = false);
nlohmann::json to_json(const TypeTrendReport& r);

}  // namespace speiser_lab
