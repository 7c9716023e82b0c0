// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include "speiser_lab/error.h"
#include "speiser_lab/fatness.h"
#include "speiser_lab/generators.h"
#include "speiser_lab/graph_ops.h"
#include "speiser_lab/numeric.h"
#include "speiser_lab/packing.h"
#include "speiser_lab/refinement.h"
#include "speiser_lab/theorem1.h"
#include "speiser_lab/vel.h"
#include "speiser_lab/walk.h"

#include <sys/resource.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

using namespace speiser_lab;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0 && secs > budget_s) {
        o.pass = false;
        o.detail += "; over the time budget";
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2d  %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double sq_sum(const VMetric& m) {
    double s = 0.0;
    for (double x : m) s += x * x;
    return s;
}

VMetric random_metric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::bernoulli_distribution zero(0.2);
    VMetric m(n);
    for (double& x : m) x = zero(rng) ? 0.0 : u(rng);
    return m;
}

// max |angle sum - 2 pi| over interior vertices, recomputed from the labels
double interior_angle_error(const CirclePacking& p) {
    const auto sums = angle_sums(p);
    double err = 0.0;
    for (std::size_t v = 0; v < sums.size(); ++v)
        if (!p.on_boundary[v]) err = std::max(err, std::abs(sums[v] - 2 * kPi));
    return err;
}

double cos_law_angle(double r, double a, double b) {
    const double x = r + a, y = r + b, z = a + b;
    return std::acos((x * x + y * y - z * z) / (2 * x * y));
}

// interior radius of the two-ring hex patch with boundary radii 1, by bisection
double two_ring_oracle() {
    auto f = [](double r) { return 2 * kPi / 3 + 2 * cos_law_angle(r, r, 1) + 2 * cos_law_angle(r, 1, 1) - 2 * kPi; };
    double lo = 0.01, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// exhaustive VEL over metrics on a 1/64 grid, dist over an explicit path list
double brute_force_vel(int n, const std::vector<std::vector<int>>& paths) {
    const int steps = 64;
    std::vector<int> idx(n, 0);
    double best = 0.0;
    for (;;) {
        double area = 0.0;
        for (int i : idx) area += (i / 64.0) * (i / 64.0);
        if (area > 0.0) {
            double dist = INFINITY;
            for (const auto& p : paths) {
                double s = 0.0;
                for (int v : p) s += idx[v] / 64.0;
                dist = std::min(dist, s);
            }
            best = std::max(best, dist * dist / area);
        }
        int k = 0;
        while (k < n && ++idx[k] > steps) idx[k++] = 0;
        if (k == n) break;
    }
    return best;
}

double peak_rss_gb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return u.ru_maxrss / (1024.0 * 1024.0);
}

}  // namespace

int main() {
    criterion(1, "subdivide4 of the octahedron", 1.0, [] {
        const auto [g, map] = subdivide4(octahedron());
        const auto f = trace_faces(g);
        const long V = g.num_vertices(), E = g.num_edges(), F = f.size();
        const int p = p_value(g);
        std::ostringstream d;
        d << "V=" << V << " E=" << E << " F=" << F << " chi=" << V - E + F << " p=" << p;
        return Outcome{V == 18 && E == 48 && F == 32 && V - E + F == 2 && p <= 6, d.str()};
    });

    criterion(2, "unit-disk fatness", 5.0, [] {
        FatnessOptions o;
        o.n_samples = 100000;
        const auto e = fatness_estimate(PlanarSet::disk({0, 0}, 1.0), o);
        return Outcome{e.tau >= 0.25 - 0.02, "tau=" + fmt("%.4f", e.tau) + " (need >= 0.23)"};
    });

    criterion(3, "union check on 200 random pairs", 60.0, [] {
        auto rng = make_rng(20240611, 3);
        FatnessOptions o;
        o.n_samples = 4000;
        o.n_radii = 8;
        o.n_centers = 8;
        int ok = 0;
        double worst_margin = INFINITY;
        for (int k = 0; k < 200; ++k) {
            const double r1 = 0.1 * std::pow(100.0, uniform01(rng));
            const double r2 = 0.1 * std::pow(100.0, uniform01(rng));
            const double d = (r1 + r2) * uniform01(rng);
            const double phi = 2 * kPi * uniform01(rng);
            o.seed = 1000 + k;
            const auto rep =
                check_union_fat(PlanarSet::disk({0, 0}, r1), PlanarSet::disk(std::polar(d, phi), r2), 0.25, o);
            // tau is the fatness both inputs actually have
            const double tau = std::min(rep.tau_a, rep.tau_b);
            const double margin = rep.tau_union - (tau / 4.0 - 0.01);
            worst_margin = std::min(worst_margin, margin);
            ok += margin >= 0;
        }
        return Outcome{ok == 200, std::to_string(ok) + "/200 pairs, worst margin " + fmt("%.4f", worst_margin)};
    });

    criterion(4, "metric transfer inequalities", 30.0, [] {
        const auto t = triangular_tiling_ball(8, 3);
        const auto [t4, map4] = subdivide4(t);
        const int M1 = check_refinement(t, t4, map4).M_edge;
        const auto [g2, map2] = subdivide4(t4);
        const int M2 = check_refinement(t4, g2, map2).M_edge;
        const int K = 6;
        std::mt19937_64 rng(20240611);
        int coarse_ok = 0, refine_ok = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto mr = random_metric(t4.num_vertices(), rng);
            coarse_ok += sq_sum(coarsen_metric(t, t4, map4, mr)) <= 8.0 * M1 * M1 * sq_sum(mr);
            const auto m = random_metric(t4.num_vertices(), rng);
            refine_ok += sq_sum(refine_metric(t4, g2, map2, m, K)) <= 9.0 * K * M2 * sq_sum(m);
        }
        return Outcome{coarse_ok == 100 && refine_ok == 100,
                       "coarsen " + std::to_string(coarse_ok) + "/100 (M=" + std::to_string(M1) + "), refine " +
                           std::to_string(refine_ok) + "/100 (K=6, M=" + std::to_string(M2) + ")"};
    });

    criterion(5, "packing solver", 10.0, [] {
        PackOptions maximal;
        maximal.boundary = BoundaryCondition::maximal_in_unit_disk;
        maximal.alpha = 0;
        const auto flower = pack_disk(hex_lattice_ball(1));
        const double flower_err = std::abs(flower.radii[0] - 1.0);
        const auto two = pack_disk(hex_lattice_ball(2));
        const double r = two_ring_oracle();
        double two_err = 0.0;
        for (std::size_t v = 0; v < two.radii.size(); ++v)
            if (!two.on_boundary[v]) two_err = std::max(two_err, std::abs(two.radii[v] - r));
        double angle_err = std::max(interior_angle_error(flower), interior_angle_error(two));
        int solved = 2;
        for (const auto& g : {hex_lattice_ball(5), triangular_tiling_ball(7, 4), triangular_tiling_ball(8, 4)}) {
            angle_err = std::max(angle_err, interior_angle_error(pack_disk(g)));
            angle_err = std::max(angle_err, interior_angle_error(pack_disk(g, maximal)));
            solved += 2;
        }
        std::ostringstream d;
        d << "flower |r-1|=" << fmt("%.1e", flower_err) << ", two-ring |r-oracle|=" << fmt("%.1e", two_err)
          << ", max angle error " << fmt("%.1e", angle_err) << " over " << solved << " packings";
        return Outcome{flower_err <= 1e-8 && two_err <= 1e-8 && angle_err <= 1e-8, d.str()};
    });

    criterion(6, "inscribed fat collection", 60.0, [] {
        const auto p = pack_disk(hex_lattice_ball(2));
        const auto col = inscribed_collection(p);
        HSOptions o;
        o.overlap_samples = 100000;
        // only the edge sets P_e are held to 1/16
        const auto nv = p.graph.num_vertices();
        double worst_pe = INFINITY;
        for (std::size_t i = nv; i < col.sets.size(); ++i)
            worst_pe = std::min(worst_pe, fatness_estimate(col.sets[i], o.fatness).tau);
        const auto rep = check_hs(col.index, col, o);
        std::ostringstream d;
        d << "overlap " << rep.max_overlap << " (M<=7), worst P_e fatness " << fmt("%.4f", worst_pe)
          << " over " << col.sets.size() - nv << " edge sets, HS conditions " << (rep.all_pass() ? "pass" : "fail");
        return Outcome{rep.max_overlap <= 7 && worst_pe >= 1.0 / 16.0 - 0.01 && rep.all_pass(), d.str()};
    });

    criterion(7, "type dichotomy by ratio trends", 0, [] {
        const auto hex = ratio_trend([](int n) { return hex_lattice_ball(n); }, {2, 3, 4, 5, 6, 7, 8});
        const auto hyp = ratio_trend([](int n) { return triangular_tiling_ball(8, n); }, {2, 3, 4, 5, 6, 7});
        double min_ratio = INFINITY;
        for (double r : hex.ratios) min_ratio = std::min(min_ratio, r);
        std::ostringstream d;
        d << "hex " << hex.verdict << " (min ratio " << fmt("%.3f", min_ratio) << "), {3,8} " << hyp.verdict
          << " (log-rho slope " << fmt("%.3f", hyp.log_fit.slope) << ", R^2 " << fmt("%.4f", hyp.log_fit.r2) << ")";
        return Outcome{hex.verdict == "cp-parabolic-leaning" && min_ratio >= 0.9 &&
                           hyp.verdict == "cp-hyperbolic-leaning" && hyp.log_fit.slope < 0 && hyp.log_fit.r2 >= 0.95,
                       d.str()};
    });

    criterion(8, "resistance controls", 60.0, [] {
        const auto c = resistance_curve(z2_patch(65), 0, {8, 16, 32, 64});
        std::vector<double> x;
        for (int n : c.radii) x.push_back(std::log(n));
        const auto fit = fit_linear(x, c.resistance);
        std::vector<int> radii;
        for (int n = 1; n <= 20; ++n) radii.push_back(n);
        const auto t = resistance_curve(regular_tree(3, 20), 0, radii);
        double closed_err = 0.0;
        for (int n = 1; n <= 20; ++n)
            closed_err = std::max(closed_err, std::abs(t.resistance[n - 1] - (2.0 / 3.0) * (1.0 - std::pow(2.0, -n))));
        const double change = std::abs(t.resistance[19] - t.resistance[18]) / t.resistance[19];
        std::ostringstream d;
        d << "Z2 c=" << fmt("%.4f", fit.slope) << " (R^2 " << fmt("%.5f", fit.r2) << "), tree R(20)="
          << fmt("%.10f", t.resistance[19]) << " last change " << fmt("%.1e", change) << ", closed-form error "
          << fmt("%.1e", closed_err);
        return Outcome{fit.slope >= 0.1 && fit.slope <= 0.3 && change < 0.01 && closed_err <= 1e-9, d.str()};
    });

    // criteria 9, 10 and 12 share the default run
    Theorem1Report report;
    std::string first_dump;
    double run_secs = 0.0;
    {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            report = run_theorem1(Theorem1Config{});
            first_dump = to_json(report).dump(1);
        } catch (const std::exception& e) {
            report.errors.push_back(e.what());
        }
        run_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    criterion(9, "dual side of the construction", 0, [&] {
        const auto& R = report.dual_resistance;
        std::ostringstream d;
        d << "resistance " << report.dual_resistance_verdict << ", R(" << (R.radii.empty() ? 0 : R.radii.back())
          << ")=" << (R.resistance.empty() ? NAN : R.resistance.back()) << " last change "
          << fmt("%.1e", report.dual_resistance_last_change) << "; VEL " << report.dual_vel.verdict
          << "; dual containment " << report.containment.found << "/" << report.containment.psi_dual_edges;
        const bool ok = report.errors.empty() && report.dual_resistance_verdict == "transient-leaning" &&
                        report.dual_resistance_last_change < 0.01 && !R.radii.empty() && R.radii.back() <= 12 &&
                        report.dual_vel.verdict == "hyperbolic-leaning";
        return Outcome{ok, d.str()};
    });

    criterion(10, "parabolic side of the construction", 0, [&] {
        const auto& g = report.growth;
        const auto& u = report.upsilon;
        const double gb = peak_rss_gb();
        std::ostringstream d;
        d << "|B_Gamma(k)| <= k ln k on [25, 8000]: " << (g.pass ? "yes" : "no");
        if (!g.failures.empty())
            d << " (fails at " << g.failures.size() << " k in " << g.failures.front() << ".." << g.failures.back()
              << ", holds from k=" << g.holds_from << ")";
        d << "; |S_Upsilon(k)| <= 4k ln k for k <= " << u.sphere.reliable_until << ": "
          << (u.sphere.pass ? "yes" : "no") << "; max degree " << u.max_degree_nonfrontier << "; Nash-Williams "
          << (u.nash_williams_increasing ? "increasing" : "not increasing") << ", "
          << trend_name(u.nash_williams_fit.verdict) << "; run " << fmt("%.0f", run_secs) << " s, peak "
          << fmt("%.2f", gb) << " GB";
        const bool ok = report.errors.empty() && g.pass && u.sphere.pass && u.max_degree_nonfrontier <= 6 &&
                        u.nash_williams_increasing && u.nash_williams_fit.verdict == Trend::divergent &&
                        run_secs <= 600 && gb <= 4.0;
        return Outcome{ok, d.str()};
    });

    criterion(11, "VEL solver against brute force", 30.0, [] {
        const double bf1 = brute_force_vel(3, {{0, 1, 2}});
        const auto e1 = solve_vel(path_graph(2), {0}, {2});
        const double bf2 = brute_force_vel(4, {{0, 1, 2}, {0, 3, 2}});
        const auto e2 = solve_vel(cycle_graph(4), {0}, {2});
        std::ostringstream d;
        d << "one vertex: solver " << fmt("%.6f", e1.lower) << " vs " << fmt("%.6f", bf1) << "; two vertices: solver "
          << fmt("%.6f", e2.lower) << " vs " << fmt("%.6f", bf2);
        return Outcome{std::abs(e1.lower - bf1) <= 1e-2 && std::abs(e2.lower - bf2) <= 1e-2, d.str()};
    });

    criterion(12, "determinism of the full run", 0, [&] {
        if (first_dump.empty()) return Outcome{false, "first run failed"};
        const std::string second = to_json(run_theorem1(Theorem1Config{})).dump(1);
        return Outcome{second == first_dump,
                       std::to_string(first_dump.size()) + " bytes, " + (second == first_dump ? "identical" : "differ")};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
