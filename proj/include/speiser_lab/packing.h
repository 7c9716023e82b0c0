#pragma once

#include "speiser_lab/fatness.h"
#include "speiser_lab/numeric.h"
#include "speiser_lab/rotation_graph.h"

#include <json.hpp>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace speiser_lab {

enum class BoundaryCondition { euclidean_fixed_boundary_radii, maximal_in_unit_disk };

struct PackOptions {
    BoundaryCondition boundary = BoundaryCondition::euclidean_fixed_boundary_radii;
    double boundary_radius = 1.0;              // euclidean boundary radii
    double boundary_hyperbolic_radius = 1e3;   // horocycle surrogate for the maximal packing
    double tol = 1e-10;                        // max |angle sum - 2 pi| at interior vertices
    int max_sweeps = 100000;
    double warm_start_tol = 1e-2;              // relaxation sweeps hand over to Newton below this
    VertexId alpha = kNone;                    // vertex placed at the origin; default: first interior vertex
};

/// Packing of a finite disk triangulation. Circles are euclidean: for the
/// maximal packing they are the images in the unit disk of the hyperbolic
/// circles (horocycles on the boundary).
struct CirclePacking {
    RotationGraph graph;
    BoundaryCondition boundary = BoundaryCondition::euclidean_fixed_boundary_radii;
    std::vector<std::array<VertexId, 3>> triangles;  // interior faces, in face-walk order
    std::vector<std::uint8_t> on_boundary;
    std::vector<VertexId> boundary_cycle;
    /// Labels solved for: euclidean radii, or s = exp(-hyperbolic radius).
    std::vector<double> label;
    std::vector<double> radii;
    std::vector<Point> centers;
    VertexId alpha = kNone;
    double angle_residual = 0.0;
    int sweeps = 0;
    int newton_steps = 0;
    bool converged = false;
    std::vector<std::string> flags;
};

/// Radius relaxation (each interior label set to close its own angle sum)
/// down to warm_start_tol, then damped Newton on the angle sums. Throws
/// InputError for non-triangulations and ConvergenceError when tol is missed
/// (the diagnostics are in the message).
CirclePacking pack_disk(const RotationGraph& g, const PackOptions& opts = {});

/// Angle sum at every vertex from the labels (euclidean or hyperbolic).
std::vector<double> angle_sums(const CirclePacking& p);

/// Recomputes centres by breadth-first triangle placement from `alpha`,
/// first neighbour on the positive real axis. `reverse` walks the triangle
/// queue in the opposite order (used for consistency checks).
std::vector<Point> layout_centers(const CirclePacking& p, VertexId alpha, bool reverse = false);

struct PackingCheck {
    double angle_residual = 0.0;     // interior vertices
    double tangency_error = 0.0;     // max relative | |c_v - c_w| - (r_v + r_w) |
    double overlap_error = 0.0;      // max relative intrusion of non-adjacent pairs
    double gauss_bonnet_error = 0.0; // | sum over boundary of (pi - angle sum) - 2 pi |
    double boundary_turning = 0.0;   // turning of the boundary polygon of centres
};

PackingCheck check_packing(const CirclePacking& p);

// ── Type heuristic ──────────────────────────────────────────────────

struct RatioTrendOptions {
    /// Verdict data: euclidean packings with boundary radii 1.
    PackOptions euclidean;
    /// Also compute the maximal packing in the unit disk and report its
    /// root radius (informational).
    bool with_maximal = true;
};

struct RatioRow {
    int n = 0;
    std::size_t num_vertices = 0;
    double root_radius = 0.0;          // euclidean packing with boundary radii 1
    double rho = 0.0;                  // boundary-to-root radius ratio, 1 / root_radius
    double maximal_root_radius = 0.0;  // maximal packing in the unit disk (0 when skipped)
    double angle_residual = 0.0;
};

/// Verdict from rho(n): cp-parabolic-leaning when every per-step ratio
/// rho(n+1)/rho(n) is >= 0.9, cp-hyperbolic-leaning when log rho(n) falls
/// linearly (slope < 0, R^2 >= 0.95), else inconclusive; 3+ radii needed.
/// The maximal packing gives a second opinion: its root radius tends to 0
/// on parabolic balls and to a positive limit on hyperbolic ones.
struct CpTypeReport {
    std::vector<RatioRow> rows;
    std::vector<double> ratios;  // per-step rho(n+1) / rho(n) over consecutive rows
    LinearFit log_fit;           // log rho(n) against n
    std::string verdict;         // cp-parabolic-leaning | cp-hyperbolic-leaning | inconclusive
    std::string reason;
    TrendFit maximal_fit;        // trend of 1 / maximal root radius
    std::string maximal_verdict;
};

/// `ball(n)` must return a disk triangulation whose vertex 0 is the root.
CpTypeReport ratio_trend(const std::function<RotationGraph(int)>& ball, const std::vector<int>& n_list,
                         const RatioTrendOptions& opts = {});

// ── Inscribed-disk collection ───────────────────────────────────────

/// Incircle of the triangle of centres of three mutually tangent circles;
/// it passes through the three tangency points.
Disk incircle(Point a, double ra, Point b, double rb, Point c, double rc);

/// P_v = packed disk, P_e = union of the incircles of the faces on e, indexed
/// by the vertices of subdivide4(graph) (vertices, then |V| + edge id).
/// Claimed tau = 1/16 and M = 7. Edges on one face get a single incircle.
FatCollection inscribed_collection(const CirclePacking& p);

// ── Output ──────────────────────────────────────────────────────────

nlohmann::json to_json(const CirclePacking& p);
nlohmann::json to_json(const PackingCheck& c);
nlohmann::json to_json(const CpTypeReport& r);
/// Circles as <circle> elements, nerve edges as an optional layer.
std::string to_svg(const CirclePacking& p, bool with_nerve = true);

}  // namespace speiser_lab
