#pragma once

#include "speiser_lab/rotation_graph.h"

#include <json.hpp>

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace speiser_lab {

using Point = std::complex<double>;

struct Disk {
    Point center;
    double radius = 0.0;
};

/// Finite union of closed disks.
class PlanarSet {
public:
    PlanarSet() = default;
    /// Throws InputError when empty, when a radius is not positive, or when
    /// the union is disconnected.
    explicit PlanarSet(std::vector<Disk> disks);
    static PlanarSet disk(Point c, double r) { return PlanarSet({{c, r}}); }

    const std::vector<Disk>& disks() const { return disks_; }
    bool contains(Point p) const;
    /// Bounding box corners.
    Point lo() const { return lo_; }
    Point hi() const { return hi_; }
    double diameter() const;
    /// Smallest r with D(x, r) containing the set.
    double covering_radius(Point x) const;
    /// Uniform point of the set (rejection from area-weighted disks).
    Point sample(std::mt19937_64& rng) const;
    /// Exact test on the disk pairs, tangency counted as touching up to
    /// `rel_tol` of the radii.
    bool intersects(const PlanarSet& other, double rel_tol = 1e-9) const;

private:
    std::vector<Disk> disks_;
    Point lo_, hi_;
};

struct FatnessOptions {
    int n_samples = 100000;  // Monte Carlo points per area ratio
    int n_radii = 16;        // radii per centre
    int n_centers = 32;      // centres x sampled in the set
    std::uint64_t seed = 1;
};

struct FatnessEstimate {
    double tau = 1.0;  // min over the sampled (x, r) of area(s cap D) / area(D)
    Point worst_center;
    double worst_radius = 0.0;
    long evaluations = 0;
};

/// Centres are uniform in a uniformly chosen disk of the set (any x in the
/// set is admissible, and this reaches small parts). Radii are log-uniform
/// in [1e-3 diam, 2 diam]; pairs with D(x, r) containing the set are
/// skipped. Streams are keyed by (centre, radius index), so raising n_radii
/// or n_centers only adds pairs to the minimum.
FatnessEstimate fatness_estimate(const PlanarSet& s, const FatnessOptions& opts = {});

struct UnionFatReport {
    double tau = 0.0;       // claimed fatness of the inputs
    double tau_a = 0.0, tau_b = 0.0, tau_union = 0.0;
    double tolerance = 0.01;
    bool precondition_met = false;  // both inputs estimated >= tau - tolerance
    bool pass = false;              // precondition and tau_union >= tau/4 - tolerance
};

/// Throws InputError when the sets are disjoint.
UnionFatReport check_union_fat(const PlanarSet& a, const PlanarSet& b, double tau, const FatnessOptions& opts = {},
                               double tolerance = 0.01);

/// Sets indexed by the vertices of `index` (a copy of the index graph).
struct FatCollection {
    std::vector<PlanarSet> sets;
    RotationGraph index;
    double tau_claim = 0.0;
    int overlap_claim = 0;  // M
    std::vector<std::string> flags;
};

struct HSCondition {
    bool pass = false;
    std::string detail;
};

struct HSReport {
    HSCondition compact_connected;  // (1)
    HSCondition locally_finite;     // (2)
    HSCondition bounded_overlap;    // (3)
    HSCondition adjacency;          // (4)
    int max_overlap = 0;
    std::size_t max_bbox_neighbours = 0;
    double worst_fatness = 1.0;
    std::vector<std::size_t> failed_edges;
    std::string note;
    bool all_pass() const {
        return compact_connected.pass && locally_finite.pass && bounded_overlap.pass && adjacency.pass;
    }
};

struct HSOptions {
    int overlap_samples = 100000;
    FatnessOptions fatness{20000, 8, 8, 1};
    /// Estimate fatness of at most this many sets (evenly spread), 0 = all.
    std::size_t fatness_sets = 0;
    std::uint64_t seed = 1;
};

/// Checks the four hypotheses of the fat-collection criterion on g.
/// Throws InputError when the collection is not indexed by g's vertices.
HSReport check_hs(const RotationGraph& g, const FatCollection& c, const HSOptions& opts = {});

nlohmann::json to_json(const FatnessEstimate& e);
nlohmann::json to_json(const UnionFatReport& r);
nlohmann::json to_json(const HSReport& r);

}  // namespace speiser_lab
