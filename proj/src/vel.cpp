#include "speiser_lab/vel.h"

#include "speiser_lab/error.h"
#include "speiser_lab/graph_ops.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

namespace speiser_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sets(const RotationGraph& g, const VertexSet& A, const VertexSet& B, const VertexMask& allowed) {
    if (A.empty() || B.empty()) throw InputError("vel: A and B must be nonempty");
    if (!allowed.empty() && allowed.size() != g.num_vertices()) throw InputError("vel: mask size mismatch");
    for (const auto* s : {&A, &B})
        for (VertexId v : *s)
            if (v >= 0 && v < static_cast<VertexId>(g.num_vertices()) && !allowed.empty() && !allowed[v])
                throw InputError("vel: A and B must lie inside the mask");
    std::vector<std::uint8_t> in_a(g.num_vertices(), 0);
    for (VertexId a : A) {
        if (a < 0 || a >= static_cast<VertexId>(g.num_vertices())) throw InputError("vel: vertex out of range");
        in_a[a] = 1;
    }
    for (VertexId b : B) {
        if (b < 0 || b >= static_cast<VertexId>(g.num_vertices())) throw InputError("vel: vertex out of range");
        if (in_a[b]) throw InputError("vel: A and B must be disjoint");
    }
}

struct ShortestPaths {
    std::vector<double> dist;
    std::vector<VertexId> parent;
};

// Vertex-weighted Dijkstra: a path costs the sum of the weights it visits.
ShortestPaths dijkstra(const RotationGraph& g, const VertexSet& A, const std::vector<std::uint8_t>& in_b,
                       const VMetric& m, const VertexMask& allowed) {
    const std::size_t n = g.num_vertices();
    ShortestPaths sp{std::vector<double>(n, kInf), std::vector<VertexId>(n, kNone)};
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (VertexId a : A) {
        if (m[a] < sp.dist[a]) {
            sp.dist[a] = m[a];
            pq.push({m[a], a});
        }
    }
    while (!pq.empty()) {
        const auto [d, v] = pq.top();
        pq.pop();
        if (d > sp.dist[v] || in_b[v]) continue;
        for (HalfEdgeId h : g.rotation(v)) {
            const VertexId w = g.target(h);
            if (!allowed.empty() && !allowed[w]) continue;
            const double nd = d + m[w];
            if (nd < sp.dist[w]) {
                sp.dist[w] = nd;
                sp.parent[w] = v;
                pq.push({nd, w});
            }
        }
    }
    return sp;
}

std::vector<VertexId> trace_back(const ShortestPaths& sp, VertexId b) {
    std::vector<VertexId> path;
    for (VertexId v = b; v != kNone; v = sp.parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<std::uint8_t> membership(std::size_t n, const VertexSet& s) {
    std::vector<std::uint8_t> in(n, 0);
    for (VertexId v : s) in[v] = 1;
    return in;
}

double min_over(const ShortestPaths& sp, const VertexSet& B, VertexId* arg = nullptr) {
    double best = kInf;
    for (VertexId b : B) {
        if (sp.dist[b] < best) {
            best = sp.dist[b];
            if (arg) *arg = b;
        }
    }
    return best;
}


using PathList = std::vector<std::vector<VertexId>>;

double path_length(const std::vector<VertexId>& p, const VMetric& m) {
    double len = 0.0;
    for (VertexId v : p) len += m[v];
    return len;
}

// One cyclic pass of dual coordinate ascent; returns the largest KKT violation seen.
double hildreth_sweep(const PathList& cons, std::vector<double>& lambda, VMetric& m, double relax) {
    double worst = 0.0;
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const auto& p = cons[i];
        const double len = path_length(p, m);
        const double viol = lambda[i] > 0.0 ? std::abs(1.0 - len) : std::max(0.0, 1.0 - len);
        worst = std::max(worst, viol);
        const double step = std::max(-lambda[i], relax * (1.0 - len) / static_cast<double>(p.size()));
        if (step != 0.0) {
            lambda[i] += step;
            for (VertexId v : p) m[v] += step;
        }
    }
    return worst;
}

// m = C lambda from scratch, so rounding drift never reaches the bounds.
VMetric metric_of(const PathList& cons, const std::vector<double>& lambda, std::size_t n) {
    VMetric m(n, 0.0);
    for (std::size_t i = 0; i < cons.size(); ++i)
        if (lambda[i] > 0.0)
            for (VertexId v : cons[i]) m[v] += lambda[i];
    return m;
}

}  // namespace

MetricObjective metric_objective(const RotationGraph& g, const VertexSet& A, const VertexSet& B, const VMetric& m,
                                 const VertexMask& allowed) {
    check_sets(g, A, B, allowed);
    if (m.size() != g.num_vertices()) throw InputError("metric_objective: metric size mismatch");
    for (double x : m)
        if (!(x >= 0.0)) throw InputError("metric_objective: weights must be nonnegative");
    MetricObjective o;
    for (std::size_t v = 0; v < m.size(); ++v)
        if (allowed.empty() || allowed[v]) o.area += m[v] * m[v];
    const auto sp = dijkstra(g, A, membership(g.num_vertices(), B), m, allowed);
    o.dist = min_over(sp, B);
    o.connected = std::isfinite(o.dist);
    if (!o.connected) {
        o.ratio = kInf;
        return o;
    }
    o.ratio = o.area > 0.0 ? o.dist * o.dist / o.area : 0.0;
    return o;
}

std::vector<std::vector<VertexId>> disjoint_paths(const RotationGraph& g, const VertexSet& A, const VertexSet& B,
                                                  const VertexMask& allowed) {
    check_sets(g, A, B, allowed);
    const std::size_t n = g.num_vertices();
    const auto in_b = membership(n, B);
    std::vector<std::uint8_t> used(n, 0);
    if (!allowed.empty())
        for (std::size_t v = 0; v < n; ++v) used[v] = !allowed[v];
    std::vector<std::vector<VertexId>> family;
    std::vector<VertexId> parent(n);
    std::vector<std::uint8_t> seen(n);
    for (;;) {
        std::fill(seen.begin(), seen.end(), 0);
        std::queue<VertexId> q;
        for (VertexId a : A) {
            if (!used[a] && !seen[a]) {
                seen[a] = 1;
                parent[a] = kNone;
                q.push(a);
            }
        }
        VertexId hit = kNone;
        while (!q.empty() && hit == kNone) {
            const VertexId v = q.front();
            q.pop();
            for (HalfEdgeId h : g.rotation(v)) {
                const VertexId w = g.target(h);
                if (used[w] || seen[w]) continue;
                seen[w] = 1;
                parent[w] = v;
                if (in_b[w]) {
                    hit = w;
                    break;
                }
                q.push(w);
            }
        }
        if (hit == kNone) break;
        std::vector<VertexId> path;
        for (VertexId v = hit; v != kNone; v = parent[v]) {
            path.push_back(v);
            used[v] = 1;
        }
        std::reverse(path.begin(), path.end());
        family.push_back(std::move(path));
    }
    return family;
}

VelEstimate solve_vel(const RotationGraph& g, const VertexSet& A, const VertexSet& B, const VelOptions& opts,
                      const VertexMask& allowed) {
    check_sets(g, A, B, allowed);
    const std::size_t n = g.num_vertices();
    const auto in_b = membership(n, B);
    VelEstimate est;

    est.paths = disjoint_paths(g, A, B, allowed);
    if (est.paths.empty()) {
        est.infinite = true;
        est.lower = est.upper = est.upper_disjoint = kInf;
        est.converged = true;
        est.metric.assign(n, 0.0);
        est.flags.push_back("A and B are disconnected");
        return est;
    }
    double total_len = 0.0;
    for (const auto& p : est.paths) total_len += static_cast<double>(p.size());
    const double k = static_cast<double>(est.paths.size());
    est.upper = est.upper_disjoint = total_len / (k * k);

    VMetric m(n, 0.0);
    std::vector<std::vector<VertexId>> cons;
    std::vector<double> lambda;
    std::set<std::vector<VertexId>> known;
    double inner_tol = opts.tol * 0.1;
    double best_ratio = -1.0;
    bool precise = false;

    for (est.rounds = 0; est.rounds < opts.max_rounds; ++est.rounds) {
        const auto sp = dijkstra(g, A, in_b, m, allowed);
        const double d = min_over(sp, B);
        double area = 0.0;
        for (double x : m) area += x * x;
        if (area > 0.0) {
            const double ratio = d * d / area;
            if (ratio > best_ratio) {
                best_ratio = ratio;
                est.metric = m;
                for (double& x : est.metric) x = std::max(0.0, x) / d;
            }
        }
        // only a tightly solved restricted problem proves optimality
        if (d >= 1.0 - opts.tol && precise) {
            est.converged = true;
            break;
        }
        // every B vertex still closer than 1 - tol contributes its tree path
        std::size_t added = 0;
        for (VertexId b : B) {
            if (sp.dist[b] >= 1.0 - opts.tol) continue;
            auto path = trace_back(sp, b);
            if (known.insert(path).second) {
                cons.push_back(std::move(path));
                lambda.push_back(0.0);
                ++added;
            }
        }
        if (added == 0 && d < 1.0 - opts.tol) inner_tol *= 0.1;

        // inexact solves while the outer violation is large
        const double round_tol = added == 0 ? inner_tol : std::max(inner_tol, 0.1 * (1.0 - d));
        precise = round_tol <= inner_tol;
        long work = 0;
        while (work < opts.max_sweeps) {
            ++work;
            if (hildreth_sweep(cons, lambda, m, opts.relax) < round_tol) break;
        }
        m = metric_of(cons, lambda, n);
        est.sweeps += work;
        // any path measure certifies VEL <= sum_v (mass through v)^2 / (total mass)^2
        double mass = 0.0;
        for (double l : lambda) mass += l;
        if (mass > 0.0) {
            const VMetric through = metric_of(cons, lambda, n);
            double energy = 0.0;
            for (double x : through) energy += x * x;
            est.upper = std::min(est.upper, energy / (mass * mass));
        }
    }
    if (!est.converged) est.flags.push_back("cutting-plane round cap reached");
    if (est.metric.empty()) {
        // unreachable for connected A, B: the first round always yields a positive metric
        est.metric.assign(n, 0.0);
    }
    est.lower = metric_objective(g, A, B, est.metric, allowed).ratio;
    if (est.lower > est.upper) {
        // rounding at the last bit; the bracket stays ordered
        est.lower = std::min(est.lower, est.upper);
    }
    return est;
}

// ── Annulus trends ──────────────────────────────────────────────────

Annulus make_annulus(const RotationGraph& g, const std::vector<std::int32_t>& distance, int n_inner, int n_outer) {
    if (n_inner < 0 || n_outer <= n_inner) throw InputError("annulus: need 0 <= n_inner < n_outer");
    Annulus a;
    a.mask.assign(g.num_vertices(), 0);
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        const int d = distance[v];
        if (d < n_inner || d > n_outer) continue;
        a.mask[v] = 1;
        ++a.size;
        if (d == n_inner) a.A.push_back(static_cast<VertexId>(v));
        if (d == n_outer) a.B.push_back(static_cast<VertexId>(v));
    }
    return a;
}

TypeTrendReport vel_type_trend(const RotationGraph& g, VertexId root, const std::vector<std::pair<int, int>>& radii,
                               const VelOptions& opts) {
    int deepest = 0;
    for (const auto& [a, b] : radii) {
        if (a < 0 || b <= a) throw InputError("vel_type_trend: need 0 <= n_inner < n_outer");
        deepest = std::max(deepest, b);
    }
    const auto L = bfs_layers(g, root, deepest);
    TypeTrendReport rep;
    rep.annuli.resize(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        auto& r = rep.annuli[i];
        r.n_inner = radii[i].first;
        r.n_outer = radii[i].second;
        // edges leaving S(n_outer) do not matter, so B(n_outer - 1) must be intact
        if (r.n_outer > L.depth || r.n_outer - 1 > L.reliable_depth) {
            r.excluded = true;
            r.reason = "annulus touches the truncation frontier";
            return;
        }
        const auto ann = make_annulus(g, L.distance, r.n_inner, r.n_outer);
        r.num_vertices = ann.size;
        r.estimate = solve_vel(g, ann.A, ann.B, opts, ann.mask);
    });
    std::vector<double> x;
    double sum = 0.0;
    for (const auto& r : rep.annuli) {
        if (r.excluded) continue;
        sum += r.estimate.lower;
        rep.cumulative_lower.push_back(sum);
        x.push_back(static_cast<double>(x.size() + 1));
    }
    rep.fit = classify_trend(x, rep.cumulative_lower);
    switch (rep.fit.verdict) {
        case Trend::divergent: rep.verdict = "parabolic-leaning"; break;
        case Trend::convergent: rep.verdict = "hyperbolic-leaning"; break;
        default: rep.verdict = "inconclusive";
    }
    return rep;
}

// ── JSON ────────────────────────────────────────────────────────────


nlohmann::json to_json(const VelEstimate& e, bool with_metric) {
    nlohmann::json j = {{"lower", json_real(e.lower)},      {"upper", json_real(e.upper)},
                        {"upper_disjoint", json_real(e.upper_disjoint)},
                        {"num_paths", e.paths.size()}, {"rounds", e.rounds},
                        {"sweeps", e.sweeps},          {"converged", e.converged},
                        {"infinite", e.infinite},      {"flags", e.flags}};
    if (with_metric) j["metric"] = e.metric;
    return j;
}

nlohmann::json to_json(const TypeTrendReport& r) {
    nlohmann::json annuli = nlohmann::json::array();
    for (const auto& a : r.annuli) {
        nlohmann::json j = {{"n_inner", a.n_inner}, {"n_outer", a.n_outer}, {"excluded", a.excluded}};
        if (a.excluded) {
            j["reason"] = a.reason;
        } else {
            j["num_vertices"] = a.num_vertices;
            j["estimate"] = to_json(a.estimate);
        }
        annuli.push_back(std::move(j));
    }
    return {{"annuli", annuli}, {"cumulative_lower", r.cumulative_lower}, {"fit", to_json(r.fit)},
            {"verdict", r.verdict}};
}

}  // namespace speiser_lab
