#pragma once

#include "speiser_lab/graph_ops.h"
#include "speiser_lab/numeric.h"
#include "speiser_lab/rotation_graph.h"

#include <json.hpp>

#include <string>
#include <vector>

namespace speiser_lab {

struct ResistanceOptions {
    double tol = 1e-10;               // relative residual of the Dirichlet solve
    int max_iter = 100000;
    std::vector<double> conductance;  // per edge; empty means every edge is a unit resistor
};

struct ResistanceValue {
    double resistance = 0.0;
    double residual = 0.0;  // relative, ||b - A x|| / ||b||
    int iterations = 0;
};

/// Root at potential 1, S(n) short-circuited to 0; R = 1 / current.
/// Parallel edges add. Throws InputError when B(n-1) meets the frontier or
/// S(n) is empty, ConvergenceError when the residual target is missed.
ResistanceValue effective_resistance(const RotationGraph& g, VertexId root, int n, const ResistanceOptions& opts = {});

struct ResistanceCurve {
    std::vector<int> radii;
    std::vector<double> resistance;
    std::vector<double> residual;
};

/// Independent radii are solved concurrently.
ResistanceCurve resistance_curve(const RotationGraph& g, VertexId root, const std::vector<int>& radii,
                                 const ResistanceOptions& opts = {});

/// P(n) = sum_{k<n} 1/|E(k)| for n = 0..depth, multiplicity counted.
std::vector<double> nash_williams_sum(const LayerDecomposition& layers);

struct DoyleReport {
    bool speiser_input = false;
    std::vector<std::string> flags;
    int grid_depth = 0;
    int n_max = 0;          // requested
    int n_used = 0;         // after trimming to the reliable range
    std::size_t num_vertices = 0;
    ResistanceCurve curve;
    std::vector<double> nash_williams;          // P(0..n_used)
    std::vector<std::size_t> cut_sizes;         // |E(k)|, k < n_used
    std::vector<std::size_t> sphere_sizes;      // |S(k)|, k <= n_used
    TrendFit fit;
    std::string verdict;  // recurrent-leaning | transient-leaning | inconclusive
};

/// Builds the extended graph of a Speiser graph and tests its recurrence.
/// Graphs that are not bipartite and homogeneous are analysed as given,
/// with a flag (useful for controls such as triangulations).
DoyleReport doyle_test(const RotationGraph& speiser_graph, int grid_depth, VertexId root, int n_max,
                       const ResistanceOptions& opts = {});

/// Recurrence verdict from a resistance curve: growing (log or linear) vs
/// converging, under the ratio-2 rule.
std::string resistance_verdict(const ResistanceCurve& c, TrendFit* fit = nullptr);

nlohmann::json to_json(const ResistanceCurve& c);
nlohmann::json to_json(const DoyleReport& r);

}  // namespace speiser_lab
