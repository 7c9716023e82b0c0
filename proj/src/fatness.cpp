#include "speiser_lab/fatness.h"

#include "speiser_lab/error.h"
#include "speiser_lab/numeric.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace speiser_lab {

namespace {

bool disks_touch(const Disk& a, const Disk& b, double rel_tol) {
    return std::abs(a.center - b.center) <= (a.radius + b.radius) * (1.0 + rel_tol);
}

Point uniform_in_disk(Point c, double r, std::mt19937_64& rng) {
    for (;;) {
        const double x = 2.0 * uniform01(rng) - 1.0, y = 2.0 * uniform01(rng) - 1.0;
        if (x * x + y * y <= 1.0) return c + r * Point{x, y};
    }
}

nlohmann::json point_json(Point p) { return nlohmann::json::array({p.real(), p.imag()}); }

}  // namespace

// ── PlanarSet ───────────────────────────────────────────────────────

PlanarSet::PlanarSet(std::vector<Disk> disks) : disks_(std::move(disks)) {
    if (disks_.empty()) throw InputError("PlanarSet: no disks");
    for (const auto& d : disks_)
        if (!(d.radius > 0.0) || !std::isfinite(d.radius) || !std::isfinite(d.center.real()) ||
            !std::isfinite(d.center.imag()))
            throw InputError("PlanarSet: disk with bad centre or radius");
    // connectivity by union-find over touching pairs
    std::vector<std::size_t> parent(disks_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < disks_.size(); ++i)
        for (std::size_t j = i + 1; j < disks_.size(); ++j)
            if (disks_touch(disks_[i], disks_[j], 1e-9)) parent[find(i)] = find(j);
    for (std::size_t i = 1; i < disks_.size(); ++i)
        if (find(i) != find(0)) throw InputError("PlanarSet: union of disks is disconnected");

    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (const auto& d : disks_) {
        x0 = std::min(x0, d.center.real() - d.radius);
        y0 = std::min(y0, d.center.imag() - d.radius);
        x1 = std::max(x1, d.center.real() + d.radius);
        y1 = std::max(y1, d.center.imag() + d.radius);
    }
    lo_ = {x0, y0};
    hi_ = {x1, y1};
}

bool PlanarSet::contains(Point p) const {
    for (const auto& d : disks_)
        if (std::norm(p - d.center) <= d.radius * d.radius) return true;
    return false;
}

double PlanarSet::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < disks_.size(); ++i)
        for (std::size_t j = i; j < disks_.size(); ++j)
            best = std::max(best, std::abs(disks_[i].center - disks_[j].center) + disks_[i].radius + disks_[j].radius);
    return best;
}

double PlanarSet::covering_radius(Point x) const {
    double r = 0.0;
    for (const auto& d : disks_) r = std::max(r, std::abs(x - d.center) + d.radius);
    return r;
}

Point PlanarSet::sample(std::mt19937_64& rng) const {
    if (disks_.size() == 1) return uniform_in_disk(disks_[0].center, disks_[0].radius, rng);
    double total = 0.0;
    for (const auto& d : disks_) total += d.radius * d.radius;
    for (;;) {
        double u = uniform01(rng) * total;
        std::size_t k = 0;
        while (k + 1 < disks_.size() && u >= disks_[k].radius * disks_[k].radius) {
            u -= disks_[k].radius * disks_[k].radius;
            ++k;
        }
        const Point p = uniform_in_disk(disks_[k].center, disks_[k].radius, rng);
        int cover = 0;
        for (const auto& d : disks_) cover += std::norm(p - d.center) <= d.radius * d.radius;
        // a point in c disks is proposed c times as often
        if (uniform01(rng) * cover < 1.0) return p;
    }
}

bool PlanarSet::intersects(const PlanarSet& other, double rel_tol) const {
    for (const auto& a : disks_)
        for (const auto& b : other.disks_)
            if (disks_touch(a, b, rel_tol)) return true;
    return false;
}

// ── Fatness ─────────────────────────────────────────────────────────

FatnessEstimate fatness_estimate(const PlanarSet& s, const FatnessOptions& opts) {
    if (s.disks().empty()) throw InputError("fatness_estimate: empty set");
    if (opts.n_samples < 1 || opts.n_radii < 1 || opts.n_centers < 1)
        throw InputError("fatness_estimate: sample counts must be positive");
    const double diam = s.diameter();
    if (!(diam > 0.0)) throw InputError("fatness_estimate: degenerate set");
    const double r_lo = 1e-3 * diam, r_hi = 2.0 * diam;

    // centres pick a disk uniformly, not by area, so small parts get probed too
    std::vector<Point> centers;
    auto crng = make_rng(opts.seed, 0);
    const auto& D = s.disks();
    for (int i = 0; i < opts.n_centers; ++i) {
        const auto k = static_cast<std::size_t>(uniform01(crng) * static_cast<double>(D.size()));
        centers.push_back(uniform_in_disk(D[k].center, D[k].radius, crng));
    }

    std::vector<FatnessEstimate> per(centers.size());
    parallel_for(centers.size(), [&](std::size_t i) {
        auto& best = per[i];
        const Point x = centers[i];
        const double cover = s.covering_radius(x);
        for (int j = 0; j < opts.n_radii; ++j) {
            auto rng = make_rng(opts.seed, 1 + (static_cast<std::uint64_t>(i) << 24) + static_cast<std::uint64_t>(j));
            const double r = r_lo * std::pow(r_hi / r_lo, uniform01(rng));
            if (r >= cover) continue;  // D(x, r) contains the set
            long hit = 0;
            for (int k = 0; k < opts.n_samples; ++k) hit += s.contains(uniform_in_disk(x, r, rng));
            const double ratio = static_cast<double>(hit) / opts.n_samples;
            ++best.evaluations;
            if (ratio < best.tau) {
                best.tau = ratio;
                best.worst_center = x;
                best.worst_radius = r;
            }
        }
    });
    FatnessEstimate out;
    for (const auto& p : per) {
        out.evaluations += p.evaluations;
        if (p.tau < out.tau) {
            const long ev = out.evaluations;
            out = p;
            out.evaluations = ev;
        }
    }
    return out;
}

UnionFatReport check_union_fat(const PlanarSet& a, const PlanarSet& b, double tau, const FatnessOptions& opts,
                               double tolerance) {
    if (!a.intersects(b)) throw InputError("check_union_fat: the sets are disjoint");
    std::vector<Disk> both = a.disks();
    both.insert(both.end(), b.disks().begin(), b.disks().end());
    const PlanarSet u(std::move(both));

    UnionFatReport r;
    r.tau = tau;
    r.tolerance = tolerance;
    r.tau_a = fatness_estimate(a, opts).tau;
    FatnessOptions ob = opts;
    ob.seed = opts.seed + 1;
    r.tau_b = fatness_estimate(b, ob).tau;
    FatnessOptions ou = opts;
    ou.seed = opts.seed + 2;
    r.tau_union = fatness_estimate(u, ou).tau;
    r.precondition_met = r.tau_a >= tau - tolerance && r.tau_b >= tau - tolerance;
    r.pass = r.precondition_met && r.tau_union >= tau / 4.0 - tolerance;
    return r;
}

// ── Fat-collection criterion ────────────────────────────────────────

HSReport check_hs(const RotationGraph& g, const FatCollection& c, const HSOptions& opts) {
    const std::size_t n = c.sets.size();
    if (n != g.num_vertices())
        throw InputError("check_hs: collection has " + std::to_string(n) + " sets for " +
                         std::to_string(g.num_vertices()) + " vertices");
    HSReport rep;
    rep.note = "only the hypotheses are checked; VEL-parabolicity itself is not re-proved here";

    rep.compact_connected = {true, "finite unions of closed disks; connectivity verified on construction"};

    // (2) bounding-box neighbours, by a sweep over x
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return c.sets[a].lo().real() < c.sets[b].lo().real(); });
    std::vector<std::size_t> nb(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& A = c.sets[order[i]];
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& B = c.sets[order[j]];
            if (B.lo().real() > A.hi().real()) break;
            if (B.lo().imag() <= A.hi().imag() && A.lo().imag() <= B.hi().imag()) {
                ++nb[order[i]];
                ++nb[order[j]];
            }
        }
    }
    rep.max_bbox_neighbours = n ? *std::max_element(nb.begin(), nb.end()) : 0;
    rep.locally_finite = {true, "every set meets at most " + std::to_string(rep.max_bbox_neighbours) +
                                    " other bounding boxes"};

    // (3) overlap at random points of the union
    double total = 0.0;
    std::vector<double> cum;
    for (const auto& s : c.sets) {
        double a = 0.0;
        for (const auto& d : s.disks()) a += d.radius * d.radius;
        total += a;
        cum.push_back(total);
    }
    auto rng = make_rng(opts.seed, 0);
    for (int k = 0; k < opts.overlap_samples && n > 0; ++k) {
        const double u = uniform01(rng) * total;
        const auto idx = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        const Point p = c.sets[std::min(idx, n - 1)].sample(rng);
        int count = 0;
        for (const auto& s : c.sets) {
            if (p.real() < s.lo().real() || p.real() > s.hi().real() || p.imag() < s.lo().imag() ||
                p.imag() > s.hi().imag())
                continue;
            count += s.contains(p);
        }
        rep.max_overlap = std::max(rep.max_overlap, count);
    }
    rep.bounded_overlap = {rep.max_overlap <= c.overlap_claim,
                           "max overlap " + std::to_string(rep.max_overlap) + " at " +
                               std::to_string(opts.overlap_samples) + " points, M = " +
                               std::to_string(c.overlap_claim)};

    // (4) adjacent sets meet
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [u, v] = g.endpoints(e);
        if (!c.sets[u].intersects(c.sets[v], 1e-7)) rep.failed_edges.push_back(static_cast<std::size_t>(e));
    }
    rep.adjacency = {rep.failed_edges.empty(),
                     std::to_string(rep.failed_edges.size()) + " of " + std::to_string(g.num_edges()) +
                         " edges join disjoint sets"};

    // fatness of the members
    std::vector<std::size_t> pick;
    const std::size_t want = opts.fatness_sets == 0 ? n : std::min(n, opts.fatness_sets);
    for (std::size_t k = 0; k < want; ++k) pick.push_back(k * n / want);
    for (std::size_t k : pick) {
        FatnessOptions fo = opts.fatness;
        fo.seed = opts.fatness.seed + k;
        rep.worst_fatness = std::min(rep.worst_fatness, fatness_estimate(c.sets[k], fo).tau);
    }
    return rep;
}

// ── JSON ────────────────────────────────────────────────────────────

nlohmann::json to_json(const FatnessEstimate& e) {
    return {{"tau", e.tau},
            {"worst_center", point_json(e.worst_center)},
            {"worst_radius", e.worst_radius},
            {"evaluations", e.evaluations}};
}

nlohmann::json to_json(const UnionFatReport& r) {
    return {{"tau", r.tau},           {"tau_a", r.tau_a},         {"tau_b", r.tau_b},
            {"tau_union", r.tau_union}, {"tolerance", r.tolerance}, {"precondition_met", r.precondition_met},
            {"pass", r.pass}};
}

nlohmann::json to_json(const HSReport& r) {
    auto cond = [](const HSCondition& c) { return nlohmann::json{{"pass", c.pass}, {"detail", c.detail}}; };
    return {{"compact_connected", cond(r.compact_connected)},
            {"locally_finite", cond(r.locally_finite)},
            {"bounded_overlap", cond(r.bounded_overlap)},
            {"adjacency", cond(r.adjacency)},
            {"max_overlap", r.max_overlap},
            {"max_bbox_neighbours", r.max_bbox_neighbours},
            {"worst_fatness", r.worst_fatness},
            {"failed_edges", r.failed_edges},
            {"all_pass", r.all_pass()},
            {"note", r.note}};
}

}  // namespace speiser_lab
