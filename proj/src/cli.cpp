#include "speiser_lab/cli.h"

#include "speiser_lab/error.h"
#include "speiser_lab/fatness.h"
#include "speiser_lab/generators.h"
#include "speiser_lab/graph_json.h"
#include "speiser_lab/graph_ops.h"
#include "speiser_lab/packing.h"
#include "speiser_lab/refinement.h"
#include "speiser_lab/speiser.h"
#include "speiser_lab/theorem1.h"
#include "speiser_lab/vel.h"
#include "speiser_lab/walk.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace speiser_lab {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 20240611;

struct Options {
    std::uint64_t seed = kDefaultSeed;
    std::string output;
    std::string graph;
    std::string format = "json";
    int depth = 4;
    std::vector<long long> schedule;
    bool paper_schedule = false;
    int grid_depth = 1;
    int ball_radius = -1;
    bool truncation_faces = false;
    bool drop_outer = false;
    VertexId root = 0;
    int n_max = 10;
    std::vector<int> radii;
    std::vector<std::string> annuli;
    int inner = -1, outer = -1;
    double tol = -1;
    int max_iter = -1;
    std::string family;
    std::string disks, other;
    double tau = 0.25;
    int samples = 100000, n_radii = 16, n_centers = 32;
    std::string config = "default";
};

// ── Parsing helpers ─────────────────────────────────────────────────

std::vector<Disk> parse_disks(const std::string& text) {
    std::vector<Disk> out;
    std::stringstream all(text);
    std::string item;
    while (std::getline(all, item, ';')) {
        if (item.empty()) continue;
        std::stringstream one(item);
        std::string a, b, c;
        if (!std::getline(one, a, ',') || !std::getline(one, b, ',') || !std::getline(one, c, ','))
            throw InputError("--disks: expected x,y,r;x,y,r;... got '" + item + "'");
        try {
            out.push_back({{std::stod(a), std::stod(b)}, std::stod(c)});
        } catch (const std::exception&) {
            throw InputError("--disks: not a number in '" + item + "'");
        }
    }
    return out;
}

std::vector<std::pair<int, int>> parse_annuli(const std::vector<std::string>& items) {
    std::vector<std::pair<int, int>> out;
    for (const auto& s : items) {
        const auto colon = s.find(':');
        if (colon == std::string::npos) throw InputError("--annuli: expected inner:outer, got '" + s + "'");
        try {
            out.emplace_back(std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1)));
        } catch (const std::exception&) {
            throw InputError("--annuli: not an integer in '" + s + "'");
        }
    }
    return out;
}

// ball(n) factory for ratio trends
std::function<RotationGraph(int)> family_of(const Options& o) {
    if (!o.graph.empty()) {
        auto g = std::make_shared<RotationGraph>(load_graph(o.graph));
        const VertexId root = o.root;
        return [g, root](int n) {
            auto b = ball(*g, root, n);
            return relabel_bfs(b.graph, b.new_id[root]);
        };
    }
    if (o.family == "hex") return [](int n) { return hex_lattice_ball(n); };
    if (o.family.rfind("tri", 0) == 0) {
        int q = 0;
        try {
            q = std::stoi(o.family.substr(3));
        } catch (const std::exception&) {
            throw InputError("--family: expected hex or triQ (e.g. tri8), got '" + o.family + "'");
        }
        return [q](int n) { return triangular_tiling_ball(q, n); };
    }
    throw InputError("ratio-trend needs --graph or --family hex | triQ");
}

// ── Output ──────────────────────────────────────────────────────────

// written via a temporary file so a failure never leaves partial output
void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.output.empty()) {
        out << text << '\n';
        return;
    }
    const fs::path tmp = o.output + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw InputError("cannot write " + tmp.string());
        f << text << '\n';
    }
    fs::rename(tmp, o.output);
}

std::string report(const Options& o, nlohmann::json j) {
    j["seed"] = o.seed;
    return j.dump(1);
}

void check_output_path(const std::string& path) {
    if (path.empty()) return;
    const fs::path p(path);
    const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(dir)) throw InputError("output directory does not exist: " + dir.string());
    if (fs::is_directory(p)) throw InputError("output path is a directory: " + path);
}

RotationGraph input_graph(const Options& o) {
    if (o.graph.empty()) throw InputError("--graph is required");
    return load_graph(o.graph);
}

ResistanceOptions resistance_options(const Options& o) {
    ResistanceOptions r;
    if (o.tol > 0) r.tol = o.tol;
    if (o.max_iter > 0) r.max_iter = o.max_iter;
    return r;
}

// ── Commands ────────────────────────────────────────────────────────

std::string run_gen(const std::string& kind, const Options& o) {
    if (kind == "octagonal") return dump_graph(build_octagonal_speiser(o.depth));
    if (kind == "gamma") {
        GrowthSchedule s;
        if (o.paper_schedule) {
            s.source = GrowthSchedule::Source::paper;
            for (int n = 0; n < o.depth; ++n) s.lengths.push_back(paper_schedule(n));
        } else {
            s.lengths = o.schedule;
        }
        return dump_graph(build_gamma(o.depth, s));
    }
    const RotationGraph g = input_graph(o);
    if (kind == "lambda") return dump_graph(lambda_triangulation(g));
    if (kind == "extend") {
        ExtendOptions e;
        e.grid_depth = o.grid_depth;
        e.include_truncation_faces = o.truncation_faces;
        e.ball_root = o.root;
        e.ball_radius = o.ball_radius;
        return dump_graph(extend_speiser(g, e));
    }
    if (kind == "subdivide4") return dump_graph(subdivide4(g).first);
    if (kind == "dual") return dump_graph(dual(g, o.drop_outer ? OuterFacePolicy::drop : OuterFacePolicy::reject).graph);
    throw InputError("unknown generator " + kind);
}

std::string run_analyze(const std::string& kind, const Options& o) {
    if (kind == "vel") {
        const RotationGraph g = input_graph(o);
        VelOptions v;
        if (o.tol > 0) v.tol = o.tol;
        if (o.max_iter > 0) v.max_rounds = o.max_iter;
        if (!o.annuli.empty()) {
            auto j = to_json(vel_type_trend(g, o.root, parse_annuli(o.annuli), v));
            return report(o, j);
        }
        if (o.inner < 0 || o.outer <= o.inner) throw InputError("vel needs --annuli or 0 <= --inner < --outer");
        const auto L = bfs_layers(g, o.root, o.outer);
        if (L.depth < o.outer) throw InputError("vel: S(" + std::to_string(o.outer) + ") is empty");
        const auto a = make_annulus(g, L.distance, o.inner, o.outer);
        nlohmann::json j = to_json(solve_vel(g, a.A, a.B, v, a.mask), true);
        j["inner"] = o.inner;
        j["outer"] = o.outer;
        return report(o, j);
    }
    if (kind == "resistance") {
        const RotationGraph g = input_graph(o);
        std::vector<int> radii = o.radii;
        if (radii.empty())
            for (int n = 1; n <= o.n_max; ++n) radii.push_back(n);
        const auto c = resistance_curve(g, o.root, radii, resistance_options(o));
        TrendFit fit;
        const std::string verdict = resistance_verdict(c, &fit);
        return report(o, {{"resistance", to_json(c)}, {"fit", to_json(fit)}, {"verdict", verdict}});
    }
    if (kind == "nash-williams") {
        const RotationGraph g = input_graph(o);
        const auto L = bfs_layers(g, o.root, o.n_max);
        std::vector<std::size_t> cuts;
        for (const auto& e : L.cut_edges) cuts.push_back(e.size());
        return report(o, {{"nash_williams", nash_williams_sum(L)},
                          {"cut_sizes", cuts},
                          {"depth", L.depth},
                          {"reliable_depth", L.reliable_depth}});
    }
    if (kind == "doyle") {
        const RotationGraph g = input_graph(o);
        return report(o, to_json(doyle_test(g, o.grid_depth, o.root, o.n_max, resistance_options(o))));
    }
    if (kind == "ratio-trend") {
        const auto family = family_of(o);
        if (o.radii.empty()) throw InputError("ratio-trend needs --radii");
        if (o.format == "svg") {
            const int n = *std::max_element(o.radii.begin(), o.radii.end());
            return to_svg(pack_disk(family(n)));
        }
        return report(o, to_json(ratio_trend(family, o.radii)));
    }
    if (kind == "fatness") {
        if (o.disks.empty()) throw InputError("fatness needs --disks");
        FatnessOptions f{o.samples, o.n_radii, o.n_centers, o.seed};
        const PlanarSet a(parse_disks(o.disks));
        if (!o.other.empty()) return report(o, to_json(check_union_fat(a, PlanarSet(parse_disks(o.other)), o.tau, f)));
        return report(o, to_json(fatness_estimate(a, f)));
    }
    throw InputError("unknown analysis " + kind);
}

std::string run_theorem1_cmd(const Options& o, bool seed_given, int& code) {
    Theorem1Config c;
    if (o.config != "default") {
        std::ifstream f(o.config);
        if (!f) throw InputError("cannot read config " + o.config);
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InputError("config " + o.config + ": " + e.what());
        }
        c = Theorem1Config::from_json(j);
    }
    if (seed_given) c.seed = o.seed;
    const auto r = run_theorem1(c);
    for (const auto& e : r.errors) code = std::max(code, e.find(": convergence: ") != std::string::npos ? 3 : 2);
    return to_json(r).dump(1);
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"speiser-lab: Speiser graphs, extremal length, random walks and circle packings"};
    app.name("speiser-lab");
    app.require_subcommand(1);
    app.add_option("--seed", o.seed, "seed for every random stream (default 20240611)");

    auto add_output = [&](CLI::App* s) { s->add_option("-o,--output", o.output, "output file (default: stdout)"); };
    auto add_graph = [&](CLI::App* s, bool required) {
        auto* opt = s->add_option("--graph", o.graph, "input graph, JSON format v1")->check(CLI::ExistingFile);
        if (required) opt->required();
    };
    auto add_root = [&](CLI::App* s) { s->add_option("--root", o.root, "root vertex (default 0)"); };

    // gen
    auto* gen = app.add_subcommand("gen", "build a graph")->require_subcommand(1);
    auto* g_oct = gen->add_subcommand("octagonal", "3-regular graph with octagonal faces, truncated at --depth");
    g_oct->add_option("--depth", o.depth, "BFS depth around vertex 0")->required();
    auto* g_gamma = gen->add_subcommand("gamma", "octagonal graph with layer edges replaced by trees");
    g_gamma->add_option("--depth", o.depth, "depth of the octagonal truncation")->required();
    g_gamma->add_option("--schedule", o.schedule, "odd path lengths l_0,l_1,...")->delimiter(',');
    g_gamma->add_flag("--paper-schedule", o.paper_schedule, "use l_n = odd ceiling of exp(3^(n+1))");
    auto* g_lambda = gen->add_subcommand("lambda", "2k triangles in every interior k-gon");
    auto* g_extend = gen->add_subcommand("extend", "glue cylindrical grids into the faces");
    g_extend->add_option("--grid-depth", o.grid_depth, "rings per grid")->required();
    g_extend->add_option("--ball-radius", o.ball_radius, "only build B(root, radius)");
    g_extend->add_flag("--truncation-faces", o.truncation_faces, "also fill truncation faces");
    add_root(g_extend);
    auto* g_sub = gen->add_subcommand("subdivide4", "barycentric-style subdivision");
    auto* g_dual = gen->add_subcommand("dual", "dual graph");
    g_dual->add_flag("--drop-outer", o.drop_outer, "drop truncation faces instead of rejecting them");
    for (auto* s : {g_oct, g_gamma, g_lambda, g_extend, g_sub, g_dual}) add_output(s);
    for (auto* s : {g_lambda, g_extend, g_sub, g_dual}) add_graph(s, true);

    // analyze
    auto* an = app.add_subcommand("analyze", "run an analysis and write a JSON report")->require_subcommand(1);
    auto* a_vel = an->add_subcommand("vel", "vertex extremal length of annuli");
    a_vel->add_option("--annuli", o.annuli, "type trend over inner:outer,...")->delimiter(',');
    a_vel->add_option("--inner", o.inner, "inner radius of a single annulus");
    a_vel->add_option("--outer", o.outer, "outer radius of a single annulus");
    auto* a_res = an->add_subcommand("resistance", "effective resistance from the root to S(n)");
    a_res->add_option("--radii", o.radii, "radii n (default 1..n-max)")->delimiter(',');
    a_res->add_option("--n-max", o.n_max, "largest radius");
    auto* a_nw = an->add_subcommand("nash-williams", "partial sums of 1/|E(k)|");
    a_nw->add_option("--n-max", o.n_max, "largest radius");
    auto* a_doyle = an->add_subcommand("doyle", "extend a Speiser graph and test recurrence");
    a_doyle->add_option("--grid-depth", o.grid_depth, "rings per grid")->required();
    a_doyle->add_option("--n-max", o.n_max, "largest radius");
    auto* a_ratio = an->add_subcommand("ratio-trend", "circle packing radius ratios over growing balls");
    a_ratio->add_option("--family", o.family, "hex or triQ, when no --graph is given");
    a_ratio->add_option("--radii", o.radii, "ball radii n")->delimiter(',')->required();
    a_ratio->add_option("--format", o.format, "json report or svg of the largest packing")
        ->check(CLI::IsMember({"json", "svg"}));
    auto* a_fat = an->add_subcommand("fatness", "Monte Carlo fatness of a union of disks");
    a_fat->add_option("--disks", o.disks, "x,y,r;x,y,r;...")->required();
    a_fat->add_option("--union-with", o.other, "second set: report the union check");
    a_fat->add_option("--tau", o.tau, "claimed fatness of both sets (union check)");
    a_fat->add_option("--samples", o.samples, "sample points per evaluation");
    a_fat->add_option("--n-radii", o.n_radii, "radii per centre");
    a_fat->add_option("--n-centers", o.n_centers, "centres");
    for (auto* s : {a_vel, a_res, a_nw, a_doyle, a_ratio, a_fat}) add_output(s);
    for (auto* s : {a_vel, a_res, a_nw, a_doyle}) {
        add_graph(s, true);
        add_root(s);
    }
    for (auto* s : {a_vel, a_res, a_doyle}) {
        s->add_option("--tol", o.tol, "solver tolerance");
        s->add_option("--max-iter", o.max_iter, "iteration cap (VEL: cutting-plane rounds)");
    }
    add_graph(a_ratio, false);
    add_root(a_ratio);

    // theorem1
    auto* th = app.add_subcommand("theorem1", "full two-leg run, one JSON report");
    th->add_option("--config", o.config, "'default' or a JSON config file");
    add_output(th);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        bool sub = false;
        for (auto* s : app.get_subcommands()) sub |= s->parsed();
        if (sub) {
            out << app.help();
            return 0;
        }
        // top level: every leaf command with all of its flags
        out << app.help();
        std::function<void(CLI::App*)> leaves = [&](CLI::App* a) {
            for (auto* s : a->get_subcommands({})) {
                if (s->get_subcommands({}).empty()) out << '\n' << s->help();
                else leaves(s);
            }
        };
        leaves(&app);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    int code = 0;
    try {
        check_output_path(o.output);
        if (th->parsed() && o.config != "default" && !fs::is_regular_file(o.config))
            throw InputError("config file not found: " + o.config);
        std::string text;
        if (gen->parsed()) {
            for (auto* s : gen->get_subcommands())
                if (s->parsed()) text = run_gen(s->get_name(), o);
        } else if (an->parsed()) {
            for (auto* s : an->get_subcommands())
                if (s->parsed()) text = run_analyze(s->get_name(), o);
        } else {
            text = run_theorem1_cmd(o, app.count("--seed") > 0, code);
        }
        emit(o, text, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        err << "not converged: " << e.what() << '\n';
        try {
            emit(o, report(o, {{"error", "convergence"}, {"diagnostics", e.what()}}), out);
        } catch (const std::exception&) {
        }
        return 3;
    }
    return code;
}

int run_command(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_command(args, std::cout, std::cerr);
}

}  // namespace speiser_lab
