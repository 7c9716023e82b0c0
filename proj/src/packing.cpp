#include "speiser_lab/packing.h"

#include "speiser_lab/error.h"
#include "speiser_lab/graph_ops.h"
#include "speiser_lab/refinement.h"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>

namespace speiser_lab {

namespace {

constexpr double kPi = std::numbers::pi;

bool hyperbolic(BoundaryCondition b) { return b == BoundaryCondition::maximal_in_unit_disk; }

// Angle at v of the triangle (v; u, w) and its derivatives with respect to
// the log-labels t = log x of v, u, w.
//
// euclidean, x = r:        tan^2(a/2) = r_u r_w / (r_v (r_v + r_u + r_w))
// hyperbolic, x = e^{-h}:  tan^2(a/2) = x_v^2 (1 - x_u^2)(1 - x_w^2) / ((1 - x_v^2)(1 - x_v^2 x_u^2 x_w^2))
// and da = (sin a / 2) d log tan^2(a/2) in both cases.
struct Corner {
    double angle;
    double d_v, d_u, d_w;
};

Corner corner(bool hyp, double xv, double xu, double xw) {
    Corner c{};
    if (!hyp) {
        const double S = xv + xu + xw;
        const double T2 = xu * xw / (xv * S);
        c.angle = 2.0 * std::atan(std::sqrt(T2));
        const double k = 0.5 * std::sin(c.angle);
        c.d_v = k * (-1.0 - xv / S);
        c.d_u = k * (1.0 - xu / S);
        c.d_w = k * (1.0 - xw / S);
    } else {
        const double v2 = xv * xv, u2 = xu * xu, w2 = xw * xw;
        const double P = v2 * u2 * w2;
        const double T2 = v2 * (1.0 - u2) * (1.0 - w2) / ((1.0 - v2) * (1.0 - P));
        c.angle = 2.0 * std::atan(std::sqrt(T2));
        const double k = 0.5 * std::sin(c.angle);
        const double q = 2.0 * P / (1.0 - P);
        c.d_v = k * (2.0 / (1.0 - v2) + q);
        c.d_u = k * (-2.0 * u2 / (1.0 - u2) + q);
        c.d_w = k * (-2.0 * w2 / (1.0 - w2) + q);
    }
    return c;
}

struct Incidence {
    std::int32_t tri;
    int pos;  // position of the vertex inside the triangle
};

struct Setup {
    std::vector<std::vector<Incidence>> star;
    std::vector<std::int32_t> interior_index;  // vertex -> unknown, -1 on the boundary
    std::vector<VertexId> interior;
};

Setup make_setup(const CirclePacking& p) {
    Setup s;
    const auto nv = p.graph.num_vertices();
    s.star.resize(nv);
    for (std::size_t t = 0; t < p.triangles.size(); ++t)
        for (int k = 0; k < 3; ++k) s.star[p.triangles[t][k]].push_back({static_cast<std::int32_t>(t), k});
    s.interior_index.assign(nv, -1);
    for (VertexId v = 0; v < static_cast<VertexId>(nv); ++v)
        if (!p.on_boundary[v]) {
            s.interior_index[v] = static_cast<std::int32_t>(s.interior.size());
            s.interior.push_back(v);
        }
    return s;
}

double vertex_angle(const CirclePacking& p, const Setup& s, VertexId v, double xv, double* deriv = nullptr) {
    const bool hyp = hyperbolic(p.boundary);
    double sum = 0.0, d = 0.0;
    for (const auto& in : s.star[v]) {
        const auto& T = p.triangles[in.tri];
        const Corner c = corner(hyp, xv, p.label[T[(in.pos + 1) % 3]], p.label[T[(in.pos + 2) % 3]]);
        sum += c.angle;
        d += c.d_v;
    }
    if (deriv) *deriv = d;
    return sum;
}

double max_residual(const CirclePacking& p, const Setup& s) {
    double r = 0.0;
    for (VertexId v : s.interior) r = std::max(r, std::abs(vertex_angle(p, s, v, p.label[v]) - 2.0 * kPi));
    return r;
}

// Sets label[v] so that the angle sum at v is 2 pi, neighbours fixed.
void relax_vertex(CirclePacking& p, const Setup& s, VertexId v) {
    const bool hyp = hyperbolic(p.boundary);
    double t = std::log(p.label[v]);
    // the angle sum decreases in t for euclidean labels and increases for hyperbolic ones
    double lo = -INFINITY, hi = hyp ? 0.0 : INFINITY;
    for (int it = 0; it < 60; ++it) {
        double d = 0.0;
        const double f = vertex_angle(p, s, v, std::exp(t), &d) - 2.0 * kPi;
        if (std::abs(f) < 1e-14) break;
        const bool increase_t = hyp ? (f < 0) : (f > 0);
        if (increase_t) lo = t;
        else hi = t;
        double next = t - f / d;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            if (std::isfinite(lo) && std::isfinite(hi)) next = 0.5 * (lo + hi);
            else next = increase_t ? t + 1.0 : t - 1.0;
            if (hyp && next >= 0.0) next = 0.5 * t;
        }
        if (std::abs(next - t) < 1e-15 * (1.0 + std::abs(t))) break;
        t = next;
    }
    p.label[v] = std::exp(t);
}

// Damped Newton on the angle sums in log-labels. Returns the number of steps.
int newton(CirclePacking& p, const Setup& s, double tol, int max_steps) {
    const bool hyp = hyperbolic(p.boundary);
    const auto m = static_cast<Eigen::Index>(s.interior.size());
    auto residual = [&](const std::vector<double>& x, Eigen::VectorXd& F) {
        F.resize(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const VertexId v = s.interior[i];
            double sum = 0.0;
            for (const auto& in : s.star[v]) {
                const auto& T = p.triangles[in.tri];
                sum += corner(hyp, x[v], x[T[(in.pos + 1) % 3]], x[T[(in.pos + 2) % 3]]).angle;
            }
            F[i] = sum - 2.0 * kPi;
        }
    };
    Eigen::VectorXd F;
    residual(p.label, F);
    int steps = 0;
    while (steps < max_steps && F.lpNorm<Eigen::Infinity>() >= tol) {
        std::vector<Eigen::Triplet<double>> trips;
        for (Eigen::Index i = 0; i < m; ++i) {
            const VertexId v = s.interior[i];
            for (const auto& in : s.star[v]) {
                const auto& T = p.triangles[in.tri];
                const VertexId u = T[(in.pos + 1) % 3], w = T[(in.pos + 2) % 3];
                const Corner c = corner(hyp, p.label[v], p.label[u], p.label[w]);
                trips.emplace_back(i, i, c.d_v);
                if (s.interior_index[u] >= 0) trips.emplace_back(i, s.interior_index[u], c.d_u);
                if (s.interior_index[w] >= 0) trips.emplace_back(i, s.interior_index[w], c.d_w);
            }
        }
        Eigen::SparseMatrix<double> J(m, m);
        J.setFromTriplets(trips.begin(), trips.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) break;
        const Eigen::VectorXd dt = lu.solve(-F);
        if (lu.info() != Eigen::Success || !dt.allFinite()) break;

        const double f0 = F.squaredNorm();
        double step = 1.0;
        bool accepted = false;
        std::vector<double> trial = p.label;
        Eigen::VectorXd Ft;
        for (int ls = 0; ls < 40; ++ls, step *= 0.5) {
            bool ok = true;
            for (Eigen::Index i = 0; i < m; ++i) {
                const VertexId v = s.interior[i];
                const double tv = std::log(p.label[v]) + step * dt[i];
                if (hyp && tv >= 0.0) ok = false;
                trial[v] = std::exp(tv);
            }
            if (!ok) continue;
            residual(trial, Ft);
            if (Ft.allFinite() && Ft.squaredNorm() < (1.0 - 1e-4 * step) * f0) {
                accepted = true;
                break;
            }
        }
        ++steps;
        if (!accepted) break;
        p.label = trial;
        F = Ft;
    }
    return steps;
}

// ── Layout helpers ──────────────────────────────────────────────────

Point mobius_to_origin(Point z, Point a) { return (z - a) / (1.0 - std::conj(a) * z); }
Point mobius_from_origin(Point w, Point a) { return (w + a) / (1.0 + std::conj(a) * w); }

Disk circumcircle(Point a, Point b, Point c) {
    const Point ab = b - a, ac = c - a;
    const double d = 2.0 * (ab.real() * ac.imag() - ab.imag() * ac.real());
    const double nb = std::norm(ab), nc = std::norm(ac);
    const Point o{(ac.imag() * nb - ab.imag() * nc) / d, (ab.real() * nc - ac.real() * nb) / d};
    return {a + o, std::abs(o)};
}

// Euclidean image of a circle of euclidean radius rho about the origin under
// the disk automorphism taking 0 to z.
Disk hyperbolic_circle(Point z, double rho) {
    const double z2 = std::norm(z);
    const double den = 1.0 - rho * rho * z2;
    return {z * (1.0 - rho * rho) / den, rho * (1.0 - z2) / den};
}

std::vector<Point> layout(const CirclePacking& p, VertexId alpha, bool reverse, std::vector<double>* radii_out,
                          std::vector<std::string>* flags);

}  // namespace

// ════════════════════════════════════════════════════════════════════
//  Solve
// ════════════════════════════════════════════════════════════════════

std::vector<double> angle_sums(const CirclePacking& p) {
    const auto s = make_setup(p);
    std::vector<double> out(p.graph.num_vertices());
    for (VertexId v = 0; v < static_cast<VertexId>(out.size()); ++v) out[v] = vertex_angle(p, s, v, p.label[v]);
    return out;
}

CirclePacking pack_disk(const RotationGraph& g, const PackOptions& opts) {
    const auto faces = trace_faces(g);
    if (!is_disk_triangulation(g, faces)) throw InputError("pack_disk: input is not a disk triangulation");
    CirclePacking p;
    p.graph = g;
    p.boundary = opts.boundary;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!faces.interior[f]) continue;
        const auto& w = faces.walks[f];
        p.triangles.push_back({g.origin(w[0]), g.origin(w[1]), g.origin(w[2])});
    }
    p.boundary_cycle = boundary_cycle(g, faces);
    p.on_boundary.assign(g.num_vertices(), 0);
    for (VertexId v : p.boundary_cycle) p.on_boundary[v] = 1;
    const bool hyp = hyperbolic(opts.boundary);
    if (hyp && !(opts.boundary_hyperbolic_radius > 0.0))
        throw InputError("pack_disk: boundary hyperbolic radius must be positive");
    if (!hyp && !(opts.boundary_radius > 0.0)) throw InputError("pack_disk: boundary radius must be positive");

    // s = exp(-1e3) underflows to 0: boundary circles become horocycles
    const double boundary_label = hyp ? std::exp(-opts.boundary_hyperbolic_radius) : opts.boundary_radius;
    p.label.assign(g.num_vertices(), hyp ? 0.5 : opts.boundary_radius);
    for (VertexId v : p.boundary_cycle) p.label[v] = boundary_label;

    const auto s = make_setup(p);
    if (s.interior.empty()) p.flags.push_back("no interior vertex; labels are the boundary condition");

    double res = max_residual(p, s);
    auto relax_until = [&](double target) {
        while (res >= target && p.sweeps < opts.max_sweeps) {
            for (VertexId v : s.interior) relax_vertex(p, s, v);
            ++p.sweeps;
            if (p.sweeps % 4 == 0 || p.sweeps == opts.max_sweeps) res = max_residual(p, s);
        }
        res = max_residual(p, s);
    };
    relax_until(std::max(opts.warm_start_tol, opts.tol));
    if (res >= opts.tol) {
        p.newton_steps = newton(p, s, opts.tol, 200);
        res = max_residual(p, s);
    }
    if (res >= opts.tol) {
        p.flags.push_back("Newton stalled; continuing with relaxation sweeps");
        relax_until(opts.tol);
    }
    p.angle_residual = res;
    p.converged = res < opts.tol;
    if (!p.converged) {
        std::ostringstream msg;
        msg << "pack_disk: angle residual " << res << " after " << p.sweeps << " sweeps and " << p.newton_steps
            << " Newton steps";
        throw ConvergenceError(msg.str());
    }

    p.alpha = opts.alpha;
    if (p.alpha == kNone) p.alpha = s.interior.empty() ? 0 : s.interior.front();
    if (p.alpha < 0 || p.alpha >= static_cast<VertexId>(g.num_vertices()))
        throw InputError("pack_disk: alpha out of range");
    if (hyp && p.on_boundary[p.alpha]) throw InputError("pack_disk: alpha must be interior for the maximal packing");
    p.centers = layout(p, p.alpha, false, &p.radii, &p.flags);
    return p;
}

// ════════════════════════════════════════════════════════════════════
//  Layout
// ════════════════════════════════════════════════════════════════════

namespace {

// Centres, plus euclidean radii and flags as by-products.
std::vector<Point> layout(const CirclePacking& p, VertexId alpha, bool reverse, std::vector<double>* radii_out,
                          std::vector<std::string>* flags) {
    const auto& g = p.graph;
    const auto nv = g.num_vertices();
    const bool hyp = hyperbolic(p.boundary);
    const auto s = make_setup(p);

    std::vector<Point> z(nv, Point{NAN, NAN});  // euclidean centre, or hyperbolic centre / ideal point
    std::vector<std::uint8_t> placed(nv, 0);
    std::vector<Disk> circle(nv, Disk{{NAN, NAN}, NAN});
    auto finite = [&](VertexId v) { return !hyp || p.label[v] > 0.0; };
    auto hyp_rho = [&](VertexId v) { return (1.0 - p.label[v]) / (1.0 + p.label[v]); };

    if (s.star[alpha].empty()) throw InputError("layout_centers: alpha lies on no triangle");
    const auto& T0 = p.triangles[s.star[alpha].front().tri];
    const int k0 = s.star[alpha].front().pos;
    const VertexId n1 = T0[(k0 + 1) % 3];

    z[alpha] = 0.0;
    placed[alpha] = 1;
    if (!hyp) {
        z[n1] = p.label[alpha] + p.label[n1];
    } else {
        z[n1] = (1.0 - p.label[alpha] * p.label[n1]) / (1.0 + p.label[alpha] * p.label[n1]);
        if (!finite(n1)) circle[n1] = {Point{(1.0 + hyp_rho(alpha)) / 2.0, 0.0}, (1.0 - hyp_rho(alpha)) / 2.0};
    }
    placed[n1] = 1;

    // x lies to the right of the directed edge a -> b (faces are walked clockwise)
    auto place = [&](VertexId a, VertexId b, VertexId x) -> bool {
        if (!hyp) {
            const double ang = corner(false, p.label[a], p.label[b], p.label[x]).angle;
            const Point dir = (z[b] - z[a]) / std::abs(z[b] - z[a]);
            z[x] = z[a] + (p.label[a] + p.label[x]) * dir * std::polar(1.0, -ang);
            return true;
        }
        VertexId pivot = a, other = b;
        double sign = -1.0;
        if (!finite(a)) {
            if (!finite(b)) return false;
            pivot = b;
            other = a;
            sign = 1.0;
        }
        const Point q = mobius_to_origin(z[other], z[pivot]);
        const double ang = corner(true, p.label[pivot], p.label[other], p.label[x]).angle;
        const double dist = (1.0 - p.label[pivot] * p.label[x]) / (1.0 + p.label[pivot] * p.label[x]);
        const Point w = dist * (q / std::abs(q)) * std::polar(1.0, sign * ang);
        z[x] = mobius_from_origin(w, z[pivot]);
        if (!finite(x)) {
            // horocycle touching the pivot's circle, built in the pivot's frame
            const double rp = hyp_rho(pivot);
            const double rh = (1.0 - rp) / 2.0;
            const Point u = w / std::abs(w);
            const Point c = (1.0 - rh) * u;
            const Point a1 = mobius_from_origin(c + rh, z[pivot]);
            const Point a2 = mobius_from_origin(c + Point{0.0, rh}, z[pivot]);
            const Point a3 = mobius_from_origin(c - rh, z[pivot]);
            circle[x] = circumcircle(a1, a2, a3);
        }
        return true;
    };

    // breadth-first over triangles across shared edges
    std::vector<std::uint8_t> seen(p.triangles.size(), 0);
    std::vector<std::vector<std::int32_t>> tri_nb(p.triangles.size());
    {
        std::map<std::pair<VertexId, VertexId>, std::int32_t> by_edge;
        for (std::size_t t = 0; t < p.triangles.size(); ++t)
            for (int k = 0; k < 3; ++k) by_edge[{p.triangles[t][k], p.triangles[t][(k + 1) % 3]}] = static_cast<std::int32_t>(t);
        for (std::size_t t = 0; t < p.triangles.size(); ++t)
            for (int k = 0; k < 3; ++k) {
                const auto it = by_edge.find({p.triangles[t][(k + 1) % 3], p.triangles[t][k]});
                if (it != by_edge.end()) tri_nb[t].push_back(it->second);
            }
    }
    std::deque<std::int32_t> work{s.star[alpha].front().tri};
    seen[work.front()] = 1;
    std::vector<std::int32_t> deferred;
    while (!work.empty()) {
        std::int32_t t;
        if (reverse) {
            t = work.back();
            work.pop_back();
        } else {
            t = work.front();
            work.pop_front();
        }
        const auto& T = p.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const VertexId a = T[k], b = T[(k + 1) % 3], x = T[(k + 2) % 3];
            if (placed[a] && placed[b] && !placed[x]) {
                if (place(a, b, x)) placed[x] = 1;
                else deferred.push_back(t);
            }
        }
        auto nbs = tri_nb[t];
        if (reverse) std::reverse(nbs.begin(), nbs.end());
        for (std::int32_t u : nbs)
            if (!seen[u]) {
                seen[u] = 1;
                work.push_back(u);
            }
    }
    for (int pass = 0; pass < 4; ++pass)
        for (std::int32_t t : deferred) {
            const auto& T = p.triangles[t];
            for (int k = 0; k < 3; ++k) {
                const VertexId a = T[k], b = T[(k + 1) % 3], x = T[(k + 2) % 3];
                if (placed[a] && placed[b] && !placed[x] && place(a, b, x)) placed[x] = 1;
            }
        }

    bool missing = false;
    for (std::size_t v = 0; v < nv; ++v) missing |= !placed[v];
    if (missing && flags) flags->push_back("some vertices could not be laid out");

    if (!hyp) {
        if (radii_out) *radii_out = p.label;
        return z;
    }

    std::vector<Point> centers(nv, Point{NAN, NAN});
    std::vector<double> radii(nv, NAN);
    for (std::size_t v = 0; v < nv; ++v) {
        if (!placed[v]) continue;
        const Disk d = finite(static_cast<VertexId>(v)) ? hyperbolic_circle(z[v], hyp_rho(static_cast<VertexId>(v)))
                                                         : circle[v];
        centers[v] = d.center;
        radii[v] = d.radius;
    }
    if (radii_out) *radii_out = radii;
    return centers;
}

}  // namespace

std::vector<Point> layout_centers(const CirclePacking& p, VertexId alpha, bool reverse) {
    return layout(p, alpha, reverse, nullptr, nullptr);
}

// ════════════════════════════════════════════════════════════════════
//  Checks
// ════════════════════════════════════════════════════════════════════

PackingCheck check_packing(const CirclePacking& p) {
    PackingCheck c;
    const auto& g = p.graph;
    const auto nv = g.num_vertices();
    const auto sums = angle_sums(p);
    for (std::size_t v = 0; v < nv; ++v)
        if (!p.on_boundary[v]) c.angle_residual = std::max(c.angle_residual, std::abs(sums[v] - 2.0 * kPi));

    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [u, v] = g.endpoints(e);
        const double want = p.radii[u] + p.radii[v];
        c.tangency_error = std::max(c.tangency_error, std::abs(std::abs(p.centers[u] - p.centers[v]) - want) / want);
    }

    // non-adjacent pairs, swept along x
    std::vector<VertexId> order(nv);
    for (std::size_t v = 0; v < nv; ++v) order[v] = static_cast<VertexId>(v);
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        return p.centers[a].real() - p.radii[a] < p.centers[b].real() - p.radii[b];
    });
    std::vector<VertexId> stamp(nv, kNone);
    for (std::size_t i = 0; i < nv; ++i) {
        const VertexId a = order[i];
        for (HalfEdgeId h : g.rotation(a)) stamp[g.target(h)] = a;
        const double right = p.centers[a].real() + p.radii[a];
        for (std::size_t j = i + 1; j < nv; ++j) {
            const VertexId b = order[j];
            if (p.centers[b].real() - p.radii[b] > right) break;
            if (stamp[b] == a) continue;
            const double want = p.radii[a] + p.radii[b];
            const double gap = std::abs(p.centers[a] - p.centers[b]);
            c.overlap_error = std::max(c.overlap_error, (want - gap) / want);
        }
    }

    if (!hyperbolic(p.boundary)) {
        double defect = 0.0;
        for (VertexId v : p.boundary_cycle) defect += kPi - sums[v];
        c.gauss_bonnet_error = std::abs(defect - 2.0 * kPi);
    } else {
        c.gauss_bonnet_error = NAN;
    }
    const auto& B = p.boundary_cycle;
    double turn = 0.0;
    for (std::size_t i = 0; i < B.size(); ++i) {
        const Point d0 = p.centers[B[i]] - p.centers[B[(i + B.size() - 1) % B.size()]];
        const Point d1 = p.centers[B[(i + 1) % B.size()]] - p.centers[B[i]];
        turn += std::arg(d1 / d0);
    }
    c.boundary_turning = turn;
    return c;
}

// ════════════════════════════════════════════════════════════════════
//  Ratio trend
// ════════════════════════════════════════════════════════════════════

CpTypeReport ratio_trend(const std::function<RotationGraph(int)>& ball, const std::vector<int>& n_list,
                         const RatioTrendOptions& opts) {
    CpTypeReport rep;
    rep.rows.resize(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t i) {
        const RotationGraph g = ball(n_list[i]);
        auto& row = rep.rows[i];
        row.n = n_list[i];
        row.num_vertices = g.num_vertices();
        PackOptions eo = opts.euclidean;
        eo.boundary = BoundaryCondition::euclidean_fixed_boundary_radii;
        eo.alpha = 0;
        const auto pe = pack_disk(g, eo);
        row.root_radius = pe.radii[0];
        row.rho = 1.0 / pe.radii[0];
        row.angle_residual = pe.angle_residual;
        if (opts.with_maximal) {
            PackOptions mo = opts.euclidean;
            mo.boundary = BoundaryCondition::maximal_in_unit_disk;
            mo.alpha = 0;
            const auto pm = pack_disk(g, mo);
            row.maximal_root_radius = pm.radii[0];
            row.angle_residual = std::max(row.angle_residual, pm.angle_residual);
        }
    });

    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const double step = rep.rows[i].n - rep.rows[i - 1].n;
        rep.ratios.push_back(std::pow(rep.rows[i].rho / rep.rows[i - 1].rho, 1.0 / step));
    }
    std::vector<double> x, y, inv_max;
    for (const auto& r : rep.rows) {
        x.push_back(r.n);
        y.push_back(std::log(r.rho));
        inv_max.push_back(r.maximal_root_radius > 0.0 ? 1.0 / r.maximal_root_radius : 0.0);
    }
    if (opts.with_maximal) {
        rep.maximal_fit = classify_trend(x, inv_max);
        rep.maximal_verdict = rep.maximal_fit.verdict == Trend::divergent    ? "cp-parabolic-leaning"
                              : rep.maximal_fit.verdict == Trend::convergent ? "cp-hyperbolic-leaning"
                                                                             : "inconclusive";
    }
    if (rep.rows.size() < 3) {
        rep.verdict = "inconclusive";
        rep.reason = "fewer than 3 radii";
        return rep;
    }
    rep.log_fit = fit_linear(x, y);
    const double min_ratio = *std::min_element(rep.ratios.begin(), rep.ratios.end());
    const double max_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
    if (min_ratio >= 0.9) {
        rep.verdict = "cp-parabolic-leaning";
        rep.reason = "rho bounded below: every step ratio >= 0.9";
    } else if (rep.log_fit.slope < 0.0 && rep.log_fit.r2 >= 0.95 && max_ratio < 1.0) {
        rep.verdict = "cp-hyperbolic-leaning";
        rep.reason = "log rho decreases linearly (R^2 >= 0.95)";
    } else {
        rep.verdict = "inconclusive";
        rep.reason = "neither bounded ratios nor a linear decay of log rho";
    }
    return rep;
}

// ════════════════════════════════════════════════════════════════════
//  Inscribed collection
// ════════════════════════════════════════════════════════════════════

Disk incircle(Point a, double ra, Point b, double rb, Point c, double rc) {
    const double la = rb + rc, lb = ra + rc, lc = ra + rb;  // sides opposite a, b, c
    const Point centre = (la * a + lb * b + lc * c) / (la + lb + lc);
    return {centre, std::sqrt(ra * rb * rc / (ra + rb + rc))};
}

FatCollection inscribed_collection(const CirclePacking& p) {
    const auto& g = p.graph;
    FatCollection col;
    col.index = subdivide4(g).first;
    col.tau_claim = 1.0 / 16.0;
    col.overlap_claim = 7;
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v)
        col.sets.push_back(PlanarSet::disk(p.centers[v], p.radii[v]));

    const auto faces = trace_faces(g);
    std::size_t single = 0;
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        std::vector<Disk> disks;
        for (HalfEdgeId h : g.half_edges(e)) {
            const auto f = faces.face_of[h];
            if (!faces.interior[f]) continue;
            const auto& w = faces.walks[f];
            const VertexId a = g.origin(w[0]), b = g.origin(w[1]), c = g.origin(w[2]);
            disks.push_back(incircle(p.centers[a], p.radii[a], p.centers[b], p.radii[b], p.centers[c], p.radii[c]));
        }
        if (disks.size() == 1) ++single;
        col.sets.emplace_back(std::move(disks));
    }
    if (single) col.flags.push_back(std::to_string(single) + " boundary edges carry a single incircle");
    return col;
}

// ════════════════════════════════════════════════════════════════════
//  Output
// ════════════════════════════════════════════════════════════════════

namespace {

double sig12(double x) {
    if (!std::isfinite(x)) return x;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

nlohmann::json to_json(const CirclePacking& p) {
    nlohmann::json radii = nlohmann::json::array(), centers = nlohmann::json::array(),
                   labels = nlohmann::json::array();
    for (std::size_t v = 0; v < p.radii.size(); ++v) {
        radii.push_back(json_real(sig12(p.radii[v])));
        centers.push_back({json_real(sig12(p.centers[v].real())), json_real(sig12(p.centers[v].imag()))});
        labels.push_back(json_real(sig12(p.label[v])));
    }
    return {{"boundary_condition", hyperbolic(p.boundary) ? "maximal_in_unit_disk" : "euclidean_fixed_boundary_radii"},
            {"alpha", p.alpha},
            {"num_vertices", p.graph.num_vertices()},
            {"radii", radii},
            {"centers", centers},
            {"labels", labels},
            {"angle_residual", p.angle_residual},
            {"sweeps", p.sweeps},
            {"newton_steps", p.newton_steps},
            {"converged", p.converged},
            {"flags", p.flags}};
}

nlohmann::json to_json(const PackingCheck& c) {
    return {{"angle_residual", c.angle_residual},
            {"tangency_error", c.tangency_error},
            {"overlap_error", c.overlap_error},
            {"gauss_bonnet_error", json_real(c.gauss_bonnet_error)},
            {"boundary_turning", c.boundary_turning}};
}

nlohmann::json to_json(const CpTypeReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& x : r.rows)
        rows.push_back({{"n", x.n},
                        {"num_vertices", x.num_vertices},
                        {"root_radius", x.root_radius},
                        {"rho", x.rho},
                        {"maximal_root_radius", x.maximal_root_radius},
                        {"angle_residual", x.angle_residual}});
    return {{"rows", rows},
            {"ratios", r.ratios},
            {"log_fit", {{"slope", r.log_fit.slope}, {"intercept", r.log_fit.intercept}, {"r2", r.log_fit.r2}}},
            {"verdict", r.verdict},
            {"reason", r.reason},
            {"maximal_fit", to_json(r.maximal_fit)},
            {"maximal_verdict", r.maximal_verdict}};
}

std::string to_svg(const CirclePacking& p, bool with_nerve) {
    double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
    for (std::size_t v = 0; v < p.radii.size(); ++v) {
        if (!std::isfinite(p.radii[v])) continue;
        x0 = std::min(x0, p.centers[v].real() - p.radii[v]);
        x1 = std::max(x1, p.centers[v].real() + p.radii[v]);
        y0 = std::min(y0, -p.centers[v].imag() - p.radii[v]);
        y1 = std::max(y1, -p.centers[v].imag() + p.radii[v]);
    }
    const double pad = 0.02 * std::max(x1 - x0, y1 - y0);
    const double w = x1 - x0 + 2 * pad, h = y1 - y0 + 2 * pad;
    const double stroke = 0.002 * std::max(w, h);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(x0 - pad) << ' ' << fmt(y0 - pad) << ' '
       << fmt(w) << ' ' << fmt(h) << "\">\n";
    if (hyperbolic(p.boundary))
        os << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#888\" stroke-width=\"" << fmt(stroke)
           << "\"/>\n";
    os << "<g id=\"circles\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"" << fmt(stroke) << "\">\n";
    for (std::size_t v = 0; v < p.radii.size(); ++v) {
        if (!std::isfinite(p.radii[v])) continue;
        os << "<circle cx=\"" << fmt(p.centers[v].real()) << "\" cy=\"" << fmt(-p.centers[v].imag()) << "\" r=\""
           << fmt(p.radii[v]) << "\"/>\n";
    }
    os << "</g>\n";
    if (with_nerve) {
        os << "<g id=\"nerve\" stroke=\"#c0392b\" stroke-width=\"" << fmt(stroke / 2) << "\">\n";
        for (EdgeId e = 0; e < static_cast<EdgeId>(p.graph.num_edges()); ++e) {
            const auto [u, v] = p.graph.endpoints(e);
            os << "<line x1=\"" << fmt(p.centers[u].real()) << "\" y1=\"" << fmt(-p.centers[u].imag()) << "\" x2=\""
               << fmt(p.centers[v].real()) << "\" y2=\"" << fmt(-p.centers[v].imag()) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace speiser_lab
