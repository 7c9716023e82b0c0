#include "speiser_lab/theorem1.h"

#include "speiser_lab/error.h"
#include "speiser_lab/generators.h"
#include "speiser_lab/graph_ops.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace speiser_lab {

long long paper_schedule(int n) {
    if (n < 0) throw InputError("paper_schedule: n must be >= 0");
    if (n >= 3) throw InputError("paper_schedule: l_" + std::to_string(n) + " = exp(3^" + std::to_string(n + 1) +
                                 ") does not fit the desk scale (l_3 ~ e^81)");
    const long double x = std::exp(std::pow(3.0L, n + 1));
    auto l = static_cast<long long>(std::ceil(x));
    if (l % 2 == 0) ++l;
    return l;
}

RotationGraph build_gamma(int depth, const GrowthSchedule& schedule) {
    schedule.validate();
    if (static_cast<int>(schedule.lengths.size()) < depth)
        throw InputError("build_gamma: schedule covers " + std::to_string(schedule.lengths.size()) +
                         " layers, depth is " + std::to_string(depth));
    const RotationGraph psi = build_octagonal_speiser(depth);
    const auto layers = bfs_layers(psi, 0, depth);
    GrowthSchedule s = schedule;
    s.lengths.resize(layers.cut_edges.size());
    return tree_replace(psi, layers, s);
}

// ── Growth tables ───────────────────────────────────────────────────

namespace {

double klogk(int k) { return k * std::log(static_cast<double>(k)); }

// fills holds / pass / holds_from / failures from count and bound
void finish_table(GrowthTable& t) {
    t.holds.resize(t.k.size());
    t.pass = false;
    bool any = false, all = true;
    int last_fail = -1;
    for (std::size_t i = 0; i < t.k.size(); ++i) {
        t.holds[i] = static_cast<double>(t.count[i]) <= t.bound[i];
        if (!t.reliable[i]) continue;
        any = true;
        if (!t.holds[i]) {
            all = false;
            t.failures.push_back(t.k[i]);
            last_fail = t.k[i];
        }
    }
    t.pass = any && all;
    if (!any) return;
    if (last_fail < 0) {
        t.holds_from = t.k.front();
    } else if (last_fail < t.reliable_until) {
        t.holds_from = last_fail + 1;
    }
}

}  // namespace

GrowthTable verify_growth(const RotationGraph& gamma, int k_min, int k_max) {
    if (k_min < 1 || k_max < k_min) throw InputError("verify_growth: need 1 <= k_min <= k_max");
    const auto L = bfs_layers(gamma, 0, k_max);
    GrowthTable t;
    t.reliable_until = std::min(L.reliable_depth, L.depth);
    std::size_t ball = 0;
    for (int k = 0; k <= k_max; ++k) {
        if (k <= L.depth) ball += L.sphere_size(k);
        if (k < k_min) continue;
        t.k.push_back(k);
        t.count.push_back(static_cast<long long>(ball));
        t.bound.push_back(klogk(k));
        t.reliable.push_back(k <= t.reliable_until);
    }
    finish_table(t);
    return t;
}

UpsilonReport verify_upsilon_bounds(const RotationGraph& gamma, int grid_depth, int k_min, int k_max) {
    if (k_min < 1 || k_max < k_min) throw InputError("verify_upsilon_bounds: need 1 <= k_min <= k_max");
    if (grid_depth < 1) throw InputError("verify_upsilon_bounds: grid_depth must be >= 1");
    UpsilonReport r;
    r.grid_depth = grid_depth;

    ExtendOptions eo;
    eo.grid_depth = grid_depth;
    eo.include_truncation_faces = true;
    eo.ball_root = 0;
    eo.ball_radius = k_max + 1;
    const RotationGraph ups = extend_speiser(gamma, eo);
    r.num_vertices = ups.num_vertices();
    const auto nv_gamma = static_cast<VertexId>(gamma.num_vertices());

    const auto LG = bfs_layers(gamma, 0, k_max);
    const auto L = bfs_layers(ups, 0, k_max + 1);
    // Gamma-distances survive in Upsilon (a detour through a grid is never
    // shorter than the face walk it follows), so the grid truncation is the
    // only extra source of unreliability: columns reach height grid_depth.
    const int reliable = std::min({L.reliable_depth, L.depth, LG.reliable_depth, LG.depth});

    // columns of height >= h above Gamma-vertices at distance d contribute
    // 3 vertices to S(d + h); expected count of non-Gamma vertices per sphere
    std::vector<long long> by_distance(k_max + 1, 0);
    for (int d = 0; d <= std::min(k_max, LG.depth); ++d) by_distance[d] = static_cast<long long>(LG.sphere_size(d));

    r.sphere.reliable_until = reliable;
    r.columns_exact = true;
    long long ball = 0;
    for (int k = 0; k <= k_max; ++k) {
        const long long sphere = k <= L.depth ? static_cast<long long>(L.sphere_size(k)) : 0;
        ball += sphere;
        if (k <= reliable && k >= 1) {
            long long grid = 0;
            for (VertexId v : L.spheres[k]) grid += v >= nv_gamma;
            long long expect = 0;
            for (int d = std::max(0, k - grid_depth); d < k; ++d) expect += 3 * by_distance[d];
            if (grid != expect) r.columns_exact = false;
            if (k >= std::max(k_min, 2)) r.fitted_C = std::max(r.fitted_C, ball / (static_cast<double>(k) * k * std::log(k)));
        }
        if (k < k_min) continue;
        r.sphere.k.push_back(k);
        r.sphere.count.push_back(sphere);
        r.sphere.bound.push_back(4.0 * klogk(k));
        r.sphere.reliable.push_back(k <= reliable);
    }
    finish_table(r.sphere);

    for (int k = 0; k <= std::min(reliable, L.depth); ++k)
        for (VertexId v : L.spheres[k])
            if (!ups.is_frontier(v)) r.max_degree_nonfrontier = std::max(r.max_degree_nonfrontier, ups.degree(v));

    // cuts E(k) for k <= reliable only see vertices of B(reliable + 1)
    const int n_cut = std::min(reliable + 1, L.depth);
    const auto P = nash_williams_sum(L);
    r.nash_williams.assign(P.begin(), P.begin() + n_cut + 1);
    for (int k = 0; k < n_cut; ++k) r.cut_sizes.push_back(L.cut_edges[k].size());
    r.nash_williams_increasing = r.nash_williams.size() >= 2;
    for (std::size_t i = 1; i < r.nash_williams.size(); ++i)
        if (!(r.nash_williams[i] > r.nash_williams[i - 1])) r.nash_williams_increasing = false;
    std::vector<double> x, y;
    for (std::size_t i = 1; i < r.nash_williams.size(); ++i) {
        x.push_back(static_cast<double>(i));
        y.push_back(r.nash_williams[i]);
    }
    r.nash_williams_fit = classify_trend(x, y);
    return r;
}

DualContainment dual_contains_psi_dual(const RotationGraph& psi, const RotationGraph& gamma) {
    const FaceSet fp = trace_faces(psi), fg = trace_faces(gamma);
    const auto nv = static_cast<VertexId>(psi.num_vertices());
    // a face of gamma corresponds to the face of psi with the same original vertices
    auto key = [](std::vector<VertexId> vs) {
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    };
    std::map<std::vector<VertexId>, std::int32_t> psi_face;
    for (std::int32_t f = 0; f < static_cast<std::int32_t>(fp.size()); ++f)
        if (fp.interior[f]) psi_face[key(fp.walk_vertices(psi, f))] = f;
    std::vector<std::int32_t> match(fg.size(), -1);
    for (std::int32_t f = 0; f < static_cast<std::int32_t>(fg.size()); ++f) {
        if (!fg.interior[f]) continue;
        std::vector<VertexId> orig;
        for (VertexId v : fg.walk_vertices(gamma, f))
            if (v < nv) orig.push_back(v);
        const auto it = psi_face.find(key(orig));
        if (it != psi_face.end()) match[f] = it->second;
    }
    std::set<std::pair<std::int32_t, std::int32_t>> gamma_pairs;
    for (EdgeId e = 0; e < static_cast<EdgeId>(gamma.num_edges()); ++e) {
        const auto [h0, h1] = gamma.half_edges(e);
        const auto a = match[fg.face_of[h0]], b = match[fg.face_of[h1]];
        if (a >= 0 && b >= 0 && a != b) gamma_pairs.insert(std::minmax(a, b));
    }
    DualContainment c;
    for (EdgeId e = 0; e < static_cast<EdgeId>(psi.num_edges()); ++e) {
        const auto [h0, h1] = psi.half_edges(e);
        const auto a = fp.face_of[h0], b = fp.face_of[h1];
        if (!fp.interior[a] || !fp.interior[b] || a == b) continue;
        ++c.psi_dual_edges;
        c.found += gamma_pairs.count(std::minmax(a, b));
    }
    return c;
}

// ── Config ──────────────────────────────────────────────────────────

Theorem1Config Theorem1Config::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("theorem1 config must be a JSON object");
    static const std::set<std::string> known{"schedule",       "psi_depth",       "growth_k_min",
                                             "growth_k_max",   "upsilon_k_max",   "doyle_n_max",
                                             "dual_resistance_radius", "dual_vel_radius", "dual_vel_annuli",
                                             "dual_ratio_n",   "containment_depth", "seed"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw InputError("theorem1 config: unknown key '" + k + "'");
    Theorem1Config c;
    try {
        if (j.contains("schedule")) c.schedule = j["schedule"].get<std::vector<long long>>();
        if (j.contains("psi_depth")) c.psi_depth = j["psi_depth"].get<int>();
        if (j.contains("growth_k_min")) c.growth_k_min = j["growth_k_min"].get<int>();
        if (j.contains("growth_k_max")) c.growth_k_max = j["growth_k_max"].get<int>();
        if (j.contains("upsilon_k_max")) c.upsilon_k_max = j["upsilon_k_max"].get<int>();
        if (j.contains("doyle_n_max")) c.doyle_n_max = j["doyle_n_max"].get<int>();
        if (j.contains("dual_resistance_radius")) c.dual_resistance_radius = j["dual_resistance_radius"].get<int>();
        if (j.contains("dual_vel_radius")) c.dual_vel_radius = j["dual_vel_radius"].get<int>();
        if (j.contains("dual_vel_annuli")) c.dual_vel_annuli = j["dual_vel_annuli"].get<std::vector<std::pair<int, int>>>();
        if (j.contains("dual_ratio_n")) c.dual_ratio_n = j["dual_ratio_n"].get<std::vector<int>>();
        if (j.contains("containment_depth")) c.containment_depth = j["containment_depth"].get<int>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("theorem1 config: ") + e.what());
    }
    return c;
}

nlohmann::json Theorem1Config::to_json() const {
    return {{"schedule", schedule},
            {"psi_depth", psi_depth},
            {"growth_k_min", growth_k_min},
            {"growth_k_max", growth_k_max},
            {"upsilon_k_max", upsilon_k_max},
            {"doyle_n_max", doyle_n_max},
            {"dual_resistance_radius", dual_resistance_radius},
            {"dual_vel_radius", dual_vel_radius},
            {"dual_vel_annuli", dual_vel_annuli},
            {"dual_ratio_n", dual_ratio_n},
            {"containment_depth", containment_depth},
            {"seed", seed}};
}

// ── Legs ────────────────────────────────────────────────────────────

namespace {

// both legs write to disjoint fields of the report
void run_leg_a(const Theorem1Config& c, Theorem1Report& r, std::vector<std::string>& errors) {
    try {
        const int d = c.containment_depth;
        const auto psi = build_octagonal_speiser(d);
        GrowthSchedule small;
        small.lengths.assign(d, 3);
        r.containment = dual_contains_psi_dual(psi, build_gamma(d, small));

        const auto t = triangular_tiling_ball(8, c.dual_resistance_radius);
        std::vector<int> radii;
        for (int n = 1; n <= c.dual_resistance_radius; ++n) radii.push_back(n);
        r.dual_resistance = resistance_curve(t, 0, radii);
        r.dual_nash_williams = nash_williams_sum(bfs_layers(t, 0, c.dual_resistance_radius));
        r.dual_resistance_verdict = resistance_verdict(r.dual_resistance, &r.dual_resistance_fit);
        const auto& R = r.dual_resistance.resistance;
        if (R.size() >= 2) r.dual_resistance_last_change = std::abs(R.back() - R[R.size() - 2]) / R.back();

        r.dual_vel = vel_type_trend(triangular_tiling_ball(8, c.dual_vel_radius), 0, c.dual_vel_annuli);
        r.dual_ratio = ratio_trend([](int n) { return triangular_tiling_ball(8, n); }, c.dual_ratio_n);

        const bool hyp = r.dual_resistance_verdict == "transient-leaning" && r.dual_vel.verdict == "hyperbolic-leaning" &&
                         r.dual_ratio.verdict == "cp-hyperbolic-leaning";
        const bool opposite = r.dual_resistance_verdict == "recurrent-leaning" ||
                              r.dual_vel.verdict == "parabolic-leaning" ||
                              r.dual_ratio.verdict == "cp-parabolic-leaning";
        if (!r.containment.contained()) {
            r.leg_a_verdict = "mismatch";
            r.flags.push_back("leg A: the dual of Gamma does not contain the dual of Psi");
        } else {
            r.leg_a_verdict = hyp ? "hyperbolic-leaning" : opposite ? "mismatch" : "inconclusive";
        }
    } catch (const ConvergenceError& e) {
        errors.push_back(std::string("leg A: convergence: ") + e.what());
        r.leg_a_verdict = "error";
    } catch (const std::exception& e) {
        errors.push_back(std::string("leg A: input: ") + e.what());
        r.leg_a_verdict = "error";
    }
}

void run_leg_b(const Theorem1Config& c, Theorem1Report& r, std::vector<std::string>& errors,
               std::vector<std::string>& flags) {
    try {
        GrowthSchedule s;
        s.lengths = c.schedule;
        const auto gamma = build_gamma(c.psi_depth, s);
        r.gamma_vertices = gamma.num_vertices();

        r.growth = verify_growth(gamma, c.growth_k_min, c.growth_k_max);
        if (r.growth.reliable_until < c.growth_k_max)
            flags.push_back("leg B: growth table trimmed to k <= " + std::to_string(r.growth.reliable_until));
        r.upsilon = verify_upsilon_bounds(gamma, c.upsilon_k_max + 1, c.growth_k_min, c.upsilon_k_max);
        r.doyle = doyle_test(gamma, c.doyle_n_max + 1, 0, c.doyle_n_max);

        r.growth_bounds_pass = r.growth.pass && r.upsilon.sphere.pass;
        if (!r.growth.pass) {
            std::string msg = "leg B: |B_Gamma(k)| <= k ln k fails at " + std::to_string(r.growth.failures.size()) +
                              " reliable k";
            if (!r.growth.failures.empty())
                msg += " (k = " + std::to_string(r.growth.failures.front()) + ".." +
                       std::to_string(r.growth.failures.back()) + ")";
            msg += r.growth.holds_from > 0 ? "; holds from k = " + std::to_string(r.growth.holds_from) +
                                                 " through the reliable range"
                                           : "; never holds through the end of the reliable range";
            flags.push_back(msg);
        }
        if (!r.upsilon.sphere.pass) flags.push_back("leg B: |S_Upsilon(k)| <= 4 k ln k fails on the reliable range");
        if (!r.upsilon.columns_exact) flags.push_back("leg B: grid columns do not add exactly 3 vertices per height");
        if (r.upsilon.max_degree_nonfrontier > 6) flags.push_back("leg B: Upsilon has a non-frontier vertex of degree > 6");

        const bool nw_ok = r.upsilon.nash_williams_increasing && r.upsilon.nash_williams_fit.verdict == Trend::divergent;
        if (nw_ok && r.doyle.verdict == "recurrent-leaning") {
            r.leg_b_verdict = "recurrent-leaning";
        } else if (r.doyle.verdict == "transient-leaning" || r.upsilon.nash_williams_fit.verdict == Trend::convergent) {
            r.leg_b_verdict = "mismatch";
        } else {
            r.leg_b_verdict = "inconclusive";
        }
    } catch (const ConvergenceError& e) {
        errors.push_back(std::string("leg B: convergence: ") + e.what());
        r.leg_b_verdict = "error";
    } catch (const std::exception& e) {
        errors.push_back(std::string("leg B: input: ") + e.what());
        r.leg_b_verdict = "error";
    }
}

}  // namespace

Theorem1Report run_theorem1(const Theorem1Config& config) {
    Theorem1Report r;
    r.config = config;
    bool paper = !config.schedule.empty() && config.schedule.size() <= 3;
    for (std::size_t n = 0; paper && n < config.schedule.size(); ++n)
        paper = config.schedule[n] == paper_schedule(static_cast<int>(n));
    r.schedule_source = paper ? "paper" : "custom";

    std::vector<std::string> err_a, err_b, flags_b;
    parallel_for(2, [&](std::size_t leg) {
        if (leg == 0) run_leg_a(config, r, err_a);
        else run_leg_b(config, r, err_b, flags_b);
    });
    r.errors = err_a;
    r.errors.insert(r.errors.end(), err_b.begin(), err_b.end());
    r.flags.insert(r.flags.end(), flags_b.begin(), flags_b.end());
    if (r.leg_a_verdict != "hyperbolic-leaning") r.flags.push_back("leg A is not hyperbolic-leaning: " + r.leg_a_verdict);
    if (r.leg_b_verdict != "recurrent-leaning") r.flags.push_back("leg B is not recurrent-leaning: " + r.leg_b_verdict);
    return r;
}

// ── Output ──────────────────────────────────────────────────────────

nlohmann::json to_json(const GrowthTable& t) {
    std::vector<bool> reliable(t.reliable.begin(), t.reliable.end()), holds(t.holds.begin(), t.holds.end());
    return {{"k", t.k},
            {"count", t.count},
            {"bound", t.bound},
            {"reliable", reliable},
            {"holds", holds},
            {"pass", t.pass},
            {"reliable_until", t.reliable_until},
            {"holds_from", t.holds_from},
            {"failures", t.failures}};
}

nlohmann::json to_json(const UpsilonReport& r) {
    return {{"grid_depth", r.grid_depth},
            {"num_vertices", r.num_vertices},
            {"sphere", to_json(r.sphere)},
            {"columns_exact", r.columns_exact},
            {"max_degree_nonfrontier", r.max_degree_nonfrontier},
            {"fitted_C", r.fitted_C},
            {"nash_williams", r.nash_williams},
            {"cut_sizes", r.cut_sizes},
            {"nash_williams_increasing", r.nash_williams_increasing},
            {"nash_williams_fit", to_json(r.nash_williams_fit)}};
}

nlohmann::json to_json(const Theorem1Report& r) {
    nlohmann::json a = {{"verdict", r.leg_a_verdict},
                        {"dual_containment",
                         {{"psi_dual_edges", r.containment.psi_dual_edges},
                          {"found", r.containment.found},
                          {"contained", r.containment.contained()}}},
                        {"resistance", to_json(r.dual_resistance)},
                        {"resistance_verdict", r.dual_resistance_verdict},
                        {"resistance_fit", to_json(r.dual_resistance_fit)},
                        {"resistance_last_change", r.dual_resistance_last_change},
                        {"nash_williams", r.dual_nash_williams},
                        {"vel_trend", to_json(r.dual_vel)},
                        {"ratio_trend", to_json(r.dual_ratio)}};
    nlohmann::json b = {{"verdict", r.leg_b_verdict},
                        {"gamma_vertices", r.gamma_vertices},
                        {"growth_bounds_pass", r.growth_bounds_pass},
                        {"ball_growth", to_json(r.growth)},
                        {"upsilon", to_json(r.upsilon)},
                        {"doyle", to_json(r.doyle)}};
    return {{"config", r.config.to_json()},
            {"seed", r.config.seed},
            {"schedule", {{"lengths", r.config.schedule}, {"source", r.schedule_source}}},
            {"errors", r.errors},
            {"flags", r.flags},
            {"leg_a", a},
            {"leg_b", b}};
}

}  // namespace speiser_lab
