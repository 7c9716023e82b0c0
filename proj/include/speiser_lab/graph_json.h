#pragma once

#include "speiser_lab/rotation_graph.h"

#include <json.hpp>

#include <map>
#include <string>

namespace speiser_lab {

/// JSON graph format, version 1:
///
///   { "version": 1,
///     "vertices": [{"id": int, "rotation": [half-edge ids]}],
///     "edges":    [{"id": int, "halfedges": [h1, h2]}],
///     "frontier": [vertex ids],
///     "tags":     {"<vertex id>": "circle" | "cross"},
///     "boundary": [half-edge ids] }            // optional
///
/// `boundary` lists half-edges whose right face is a truncation face; it is
/// omitted when empty. Keys are emitted in sorted order so dumps are
/// byte-stable.
nlohmann::json graph_to_json(const RotationGraph& g);
RotationGraph graph_from_json(const nlohmann::json& j);

std::string dump_graph(const RotationGraph& g);
RotationGraph parse_graph(const std::string& text);

RotationGraph load_graph(const std::string& path);
void save_graph(const RotationGraph& g, const std::string& path);

/// v-metric as {"<vertex id>": weight}.
nlohmann::json metric_to_json(const std::vector<double>& m);
std::vector<double> metric_from_json(const nlohmann::json& j, std::size_t num_vertices);

}  // namespace speiser_lab
