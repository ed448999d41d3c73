#pragma once

#include <optional>
#include <string>

#include "mgwb/graphcore/multiplex_graph.hpp"
#include "mgwb/graphcore/task_bundle.hpp"

namespace mgwb {

// Self-describing JSON document per graph (schema version, topology,
// features, edge triples with attributes and masks, optional task blocks).
// load(save(g)) reproduces the graph bit-exactly.

std::string graph_to_json(const MultiplexGraph& g, const TaskBundle* tasks = nullptr);
void graph_from_json(const std::string& text, MultiplexGraph& g,
                     std::optional<TaskBundle>* tasks = nullptr);

void save_graph(const std::string& path, const MultiplexGraph& g,
                const TaskBundle* tasks = nullptr);
void load_graph(const std::string& path, MultiplexGraph& g,
                std::optional<TaskBundle>* tasks = nullptr);

}  // namespace mgwb
