#pragma once

#include "speiser_lab/packing.h"
#include "speiser_lab/rotation_graph.h"
#include "speiser_lab/speiser.h"
#include "speiser_lab/vel.h"
#include "speiser_lab/walk.h"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace speiser_lab {

/// Smallest odd integer >= exp(3^(n+1)). n >= 3 is rejected (l_3 ~ e^81).
long long paper_schedule(int n);

/// build_octagonal_speiser(depth), then tree_replace over its BFS layers.
/// The schedule needs at least `depth` lengths.
RotationGraph build_gamma(int depth, const GrowthSchedule& schedule);

// ── Growth tables ───────────────────────────────────────────────────

/// Column table over k = k_min..k_max. Rows past the reliable range keep
/// their (truncated) counts but are flagged and excluded from the verdict.
struct GrowthTable {
    std::vector<int> k;
    std::vector<long long> count;
    std::vector<double> bound;
    std::vector<std::uint8_t> reliable;
    std::vector<std::uint8_t> holds;
    bool pass = false;                 // bound holds on every reliable row
    int reliable_until = -1;           // last reliable k
    int holds_from = -1;               // first k from which the bound holds through the last reliable row
    std::vector<int> failures;         // reliable k where the bound fails
};

/// |B_Gamma(k)| against k ln k.
GrowthTable verify_growth(const RotationGraph& gamma, int k_min, int k_max);

struct UpsilonReport {
    int grid_depth = 0;
    std::size_t num_vertices = 0;
    GrowthTable sphere;                     // |S_Upsilon(k)| against 4 k ln k
    bool columns_exact = false;             // |S_Upsilon(k) \ V_Gamma| == 3 #{w : column reaches k}
    int max_degree_nonfrontier = 0;
    double fitted_C = 0.0;                  // max |B_Upsilon(k)| / (k^2 ln k) on the reliable range
    std::vector<double> nash_williams;      // P(0..reliable + 1)
    std::vector<std::size_t> cut_sizes;
    bool nash_williams_increasing = false;
    TrendFit nash_williams_fit;             // divergent means no plateau
};

/// Builds the extended graph of gamma inside B(k_max + 1) (grids glued into
/// every face, truncation faces included) and tabulates it.
UpsilonReport verify_upsilon_bounds(const RotationGraph& gamma, int grid_depth, int k_min, int k_max);

/// Every edge of the dual of psi between two interior faces reappears as an
/// edge of the dual of gamma between the corresponding faces.
struct DualContainment {
    std::size_t psi_dual_edges = 0;
    std::size_t found = 0;
    bool contained() const { return psi_dual_edges > 0 && found == psi_dual_edges; }
};
DualContainment dual_contains_psi_dual(const RotationGraph& psi, const RotationGraph& gamma);

// ── Full run ────────────────────────────────────────────────────────

struct Theorem1Config {
    std::vector<long long> schedule{21, 8103};
    int psi_depth = 2;           // Psi truncation carrying the schedule
    int growth_k_min = 25;
    int growth_k_max = 8000;
    int upsilon_k_max = 1000;    // Upsilon is built inside this ball
    int doyle_n_max = 100;       // resistance radii on Upsilon
    int dual_resistance_radius = 8;
    int dual_vel_radius = 6;
    std::vector<std::pair<int, int>> dual_vel_annuli{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
    std::vector<int> dual_ratio_n{2, 3, 4, 5, 6, 7, 8};
    int containment_depth = 7;   // small Psi / Gamma pair for the dual containment check
    std::uint64_t seed = 20240611;

    static Theorem1Config from_json(const nlohmann::json& j);  // missing keys keep defaults
    nlohmann::json to_json() const;
};

struct Theorem1Report {
    Theorem1Config config;
    std::string schedule_source;  // paper | custom
    std::vector<std::string> errors;
    std::vector<std::string> flags;

    // leg A: the dual side
    DualContainment containment;
    ResistanceCurve dual_resistance;
    std::vector<double> dual_nash_williams;
    TrendFit dual_resistance_fit;
    std::string dual_resistance_verdict;
    double dual_resistance_last_change = 0.0;  // |R(n) - R(n-1)| / R(n) at the largest n
    TypeTrendReport dual_vel;
    CpTypeReport dual_ratio;
    std::string leg_a_verdict;  // hyperbolic-leaning | inconclusive | mismatch | error

    // leg B: parabolicity evidence
    std::size_t gamma_vertices = 0;
    GrowthTable growth;
    UpsilonReport upsilon;
    DoyleReport doyle;
    std::string leg_b_verdict;  // recurrent-leaning | inconclusive | mismatch | error
    bool growth_bounds_pass = false;
};

/// Legs A and B run concurrently; the report holds no timings, so equal
/// configs give byte-identical JSON.
Theorem1Report run_theorem1(const Theorem1Config& config);

nlohmann::json to_json(const GrowthTable& t);
nlohmann::json to_json(const UpsilonReport& r);
nlohmann::json to_json(const Theorem1Report& r);

}  // namespace speiser_lab
