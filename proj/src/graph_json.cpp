#include "speiser_lab/graph_json.h"

#include "speiser_lab/error.h"

#include <fstream>
#include <sstream>

namespace speiser_lab {

using nlohmann::json;

json graph_to_json(const RotationGraph& g) {
    json j;
    j["version"] = 1;
    json vertices = json::array();
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
        const auto rot = g.rotation(v);
        vertices.push_back({{"id", v}, {"rotation", std::vector<HalfEdgeId>(rot.begin(), rot.end())}});
    }
    j["vertices"] = std::move(vertices);
    json edges = json::array();
    for (EdgeId e = 0; e < static_cast<EdgeId>(g.num_edges()); ++e) {
        const auto [a, b] = g.half_edges(e);
        edges.push_back({{"id", e}, {"halfedges", {a, b}}});
    }
    j["edges"] = std::move(edges);
    j["frontier"] = g.frontier();
    json tags = json::object();
    if (g.has_tags()) {
        for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
            if (g.tag(v) == Tag::circle) tags[std::to_string(v)] = "circle";
            else if (g.tag(v) == Tag::cross) tags[std::to_string(v)] = "cross";
        }
    }
    j["tags"] = std::move(tags);
    if (!g.boundary_half_edges().empty()) j["boundary"] = g.boundary_half_edges();
    return j;
}

RotationGraph graph_from_json(const json& j) {
    try {
        if (!j.is_object()) throw InputError("graph JSON must be an object");
        if (!j.contains("version") || j.at("version").get<int>() != 1) throw InputError("unsupported graph format version");
        const auto& jv = j.at("vertices");
        const auto& je = j.at("edges");
        const std::size_t nv = jv.size();
        const std::size_t ne = je.size();
        std::vector<std::vector<HalfEdgeId>> rotations(nv);
        std::vector<std::uint8_t> seen_v(nv, 0);
        for (const auto& item : jv) {
            const auto id = item.at("id").get<long long>();
            if (id < 0 || static_cast<std::size_t>(id) >= nv || seen_v[id]) {
                throw InputError("vertex ids must be a permutation of 0..V-1");
            }
            seen_v[id] = 1;
            rotations[id] = item.at("rotation").get<std::vector<HalfEdgeId>>();
        }
        std::vector<std::array<HalfEdgeId, 2>> halves(ne);
        std::vector<std::uint8_t> seen_e(ne, 0);
        for (const auto& item : je) {
            const auto id = item.at("id").get<long long>();
            if (id < 0 || static_cast<std::size_t>(id) >= ne || seen_e[id]) {
                throw InputError("edge ids must be a permutation of 0..E-1");
            }
            seen_e[id] = 1;
            const auto h = item.at("halfedges").get<std::vector<HalfEdgeId>>();
            if (h.size() != 2) throw InputError("edge " + std::to_string(id) + " must list exactly two half-edges");
            halves[id] = {h[0], h[1]};
        }
        std::vector<VertexId> frontier;
        if (j.contains("frontier")) frontier = j.at("frontier").get<std::vector<VertexId>>();
        std::vector<Tag> tags;
        if (j.contains("tags") && !j.at("tags").empty()) {
            tags.assign(nv, Tag::none);
            for (const auto& [key, value] : j.at("tags").items()) {
                const long long v = std::stoll(key);
                if (v < 0 || static_cast<std::size_t>(v) >= nv) throw InputError("tag for unknown vertex " + key);
                const auto s = value.get<std::string>();
                if (s == "circle") tags[v] = Tag::circle;
                else if (s == "cross") tags[v] = Tag::cross;
                else throw InputError("unknown tag '" + s + "'");
            }
        }
        std::vector<HalfEdgeId> boundary;
        if (j.contains("boundary")) boundary = j.at("boundary").get<std::vector<HalfEdgeId>>();
        return RotationGraph::from_parts(rotations, halves, std::move(frontier), std::move(tags), std::move(boundary));
    } catch (const json::exception& ex) {
        throw InputError(std::string("malformed graph JSON: ") + ex.what());
    } catch (const std::invalid_argument& ex) {
        if (dynamic_cast<const InputError*>(&ex)) throw;
        throw InputError(std::string("malformed graph JSON: ") + ex.what());
    }
}

std::string dump_graph(const RotationGraph& g) { return graph_to_json(g).dump() + "\n"; }

RotationGraph parse_graph(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw InputError(std::string("invalid JSON: ") + ex.what());
    }
    return graph_from_json(j);
}

RotationGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open graph file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str());
}

void save_graph(const RotationGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << dump_graph(g);
}

json metric_to_json(const std::vector<double>& m) {
    json j = json::object();
    for (std::size_t v = 0; v < m.size(); ++v) j[std::to_string(v)] = m[v];
    return j;
}

std::vector<double> metric_from_json(const json& j, std::size_t num_vertices) {
    std::vector<double> m(num_vertices, 0.0);
    for (const auto& [key, value] : j.items()) {
        const long long v = std::stoll(key);
        if (v < 0 || static_cast<std::size_t>(v) >= num_vertices) throw InputError("metric entry for unknown vertex " + key);
        const double w = value.get<double>();
        if (!(w >= 0.0)) throw InputError("metric weights must be nonnegative");
        m[v] = w;
    }
    return m;
}

}  // namespace speiser_lab
