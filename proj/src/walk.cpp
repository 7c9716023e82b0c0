#include "speiser_lab/walk.h"

#include "speiser_lab/error.h"
#include "speiser_lab/speiser.h"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <cmath>

namespace speiser_lab {

ResistanceValue effective_resistance(const RotationGraph& g, VertexId root, int n, const ResistanceOptions& opts) {
    if (n < 1) throw InputError("effective_resistance: n must be >= 1");
    if (root < 0 || root >= static_cast<VertexId>(g.num_vertices())) throw InputError("effective_resistance: bad root");
    if (!opts.conductance.empty() && opts.conductance.size() != g.num_edges())
        throw InputError("effective_resistance: conductance size mismatch");
    const auto L = bfs_layers(g, root, n);
    if (L.depth < n || L.spheres[n].empty()) throw InputError("effective_resistance: S(n) is empty");
    if (n - 1 > L.reliable_depth) throw InputError("effective_resistance: frontier inside B(n-1)");

    auto cond = [&](HalfEdgeId h) { return opts.conductance.empty() ? 1.0 : opts.conductance[g.edge_of(h)]; };

    // unknowns: S(1) .. S(n-1), numbered in BFS order
    std::vector<std::int32_t> index(g.num_vertices(), -1);
    std::vector<VertexId> unknown;
    for (int k = 1; k < n; ++k)
        for (VertexId v : L.spheres[k]) {
            index[v] = static_cast<std::int32_t>(unknown.size());
            unknown.push_back(v);
        }

    ResistanceValue out;
    const auto m = static_cast<Eigen::Index>(unknown.size());
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(m);
    if (m > 0) {
        std::vector<Eigen::Triplet<double>> trips;
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            double diag = 0.0;
            for (HalfEdgeId h : g.rotation(unknown[i])) {
                const double c = cond(h);
                const VertexId w = g.target(h);
                diag += c;
                if (w == root) b[i] += c;
                else if (index[w] >= 0) trips.emplace_back(i, index[w], -c);
            }
            trips.emplace_back(i, i, diag);
        }
        Eigen::SparseMatrix<double> A(m, m);
        A.setFromTriplets(trips.begin(), trips.end());
        if (b.norm() == 0.0) throw InputError("effective_resistance: root has no conducting edge");

        Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                                 Eigen::IncompleteCholesky<double>>
            cg;
        cg.setTolerance(opts.tol * 1e-2);
        cg.setMaxIterations(opts.max_iter);
        cg.compute(A);
        if (cg.info() != Eigen::Success) throw ConvergenceError("effective_resistance: preconditioner failed");
        phi = cg.solve(b);
        out.iterations = static_cast<int>(cg.iterations());
        out.residual = (b - A * phi).norm() / b.norm();
        if (!(out.residual <= opts.tol))
            throw ConvergenceError("effective_resistance: residual " + std::to_string(out.residual) + " at n = " +
                                   std::to_string(n));
    }
    double current = 0.0;
    for (HalfEdgeId h : g.rotation(root)) {
        const VertexId w = g.target(h);
        current += cond(h) * (1.0 - (index[w] >= 0 ? phi[index[w]] : 0.0));
    }
    if (!(current > 0.0)) throw InputError("effective_resistance: no current reaches S(n)");
    out.resistance = 1.0 / current;
    return out;
}

ResistanceCurve resistance_curve(const RotationGraph& g, VertexId root, const std::vector<int>& radii,
                                 const ResistanceOptions& opts) {
    ResistanceCurve c;
    c.radii = radii;
    c.resistance.assign(radii.size(), 0.0);
    c.residual.assign(radii.size(), 0.0);
    parallel_for(radii.size(), [&](std::size_t i) {
        const auto r = effective_resistance(g, root, radii[i], opts);
        c.resistance[i] = r.resistance;
        c.residual[i] = r.residual;
    });
    return c;
}

std::vector<double> nash_williams_sum(const LayerDecomposition& layers) {
    std::vector<double> P{0.0};
    for (int k = 0; k < layers.depth; ++k) {
        const auto cut = layers.cut_edges[k].size();
        if (cut == 0) throw InputError("nash_williams_sum: empty cut set at k = " + std::to_string(k));
        P.push_back(P.back() + 1.0 / static_cast<double>(cut));
    }
    return P;
}

std::string resistance_verdict(const ResistanceCurve& c, TrendFit* fit) {
    std::vector<double> x(c.radii.begin(), c.radii.end());
    const TrendFit f = classify_trend(x, c.resistance);
    if (fit) *fit = f;
    switch (f.verdict) {
        case Trend::divergent: return "recurrent-leaning";
        case Trend::convergent: return "transient-leaning";
        default: return "inconclusive";
    }
}

DoyleReport doyle_test(const RotationGraph& speiser_graph, int grid_depth, VertexId root, int n_max,
                       const ResistanceOptions& opts) {
    if (n_max < 1) throw InputError("doyle_test: n_max must be >= 1");
    DoyleReport rep;
    rep.grid_depth = grid_depth;
    rep.n_max = n_max;
    const auto cls = classify(speiser_graph);
    rep.speiser_input = cls.is_bipartite && cls.homogeneous_degree.has_value();
    RotationGraph work;
    if (rep.speiser_input) {
        ExtendOptions eo;
        eo.grid_depth = grid_depth;
        // faces of a truncated Speiser graph are truncation faces near the
        // frontier; their walks follow the real faces up to it
        eo.include_truncation_faces = true;
        eo.ball_root = root;
        eo.ball_radius = n_max + 1;
        work = extend_speiser(speiser_graph, eo);
    } else {
        rep.flags.push_back("input is not a Speiser graph; analysed as given without extension");
        work = speiser_graph;
    }
    rep.num_vertices = work.num_vertices();

    const auto L = bfs_layers(work, root, n_max);
    rep.n_used = std::min({n_max, L.depth, L.reliable_depth + 1});
    if (rep.n_used < n_max) rep.flags.push_back("radius trimmed to the reliable range");
    for (int k = 0; k <= rep.n_used; ++k) rep.sphere_sizes.push_back(L.sphere_size(k));
    for (int k = 0; k < rep.n_used; ++k) rep.cut_sizes.push_back(L.cut_edges[k].size());
    const auto P = nash_williams_sum(L);
    rep.nash_williams.assign(P.begin(), P.begin() + rep.n_used + 1);

    std::vector<int> radii;
    for (int n = 1; n <= rep.n_used; ++n) radii.push_back(n);
    rep.curve = resistance_curve(work, root, radii, opts);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (rep.curve.resistance[i] < rep.nash_williams[radii[i]] - 1e-9)
            rep.flags.push_back("resistance below the Nash-Williams bound at n = " + std::to_string(radii[i]));
        if (i > 0 && rep.curve.resistance[i] < rep.curve.resistance[i - 1] - 1e-12)
            rep.flags.push_back("resistance decreased at n = " + std::to_string(radii[i]));
    }
    rep.verdict = resistance_verdict(rep.curve, &rep.fit);
    return rep;
}

nlohmann::json to_json(const ResistanceCurve& c) {
    return {{"radii", c.radii}, {"resistance", c.resistance}, {"residual", c.residual}};
}

nlohmann::json to_json(const DoyleReport& r) {
    return {{"speiser_input", r.speiser_input},
            {"flags", r.flags},
            {"grid_depth", r.grid_depth},
            {"n_max", r.n_max},
            {"n_used", r.n_used},
            {"num_vertices", r.num_vertices},
            {"resistance", to_json(r.curve)},
            {"nash_williams", r.nash_williams},
            {"cut_sizes", r.cut_sizes},
            {"sphere_sizes", r.sphere_sizes},
            {"fit", to_json(r.fit)},
            {"verdict", r.verdict}};
}

}  // namespace speiser_lab
