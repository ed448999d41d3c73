#include "mgwb/graphcore/graph_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mgwb {

namespace {

using json = nlohmann::ordered_json;

json pairs_to_json(const std::vector<std::pair<int, int>>& ps) {
  json a = json::array();
  for (auto [u, v] : ps) a.push_back(json::array({u, v}));
  return a;
}

std::vector<std::pair<int, int>> pairs_from_json(const json& a) {
  std::vector<std::pair<int, int>> out;
  out.reserve(a.size());
  for (const auto& e : a) out.emplace_back(e[0].get<int>(), e[1].get<int>());
  return out;
}

json tasks_to_json(const TaskBundle& t) {
  json j;
  j["node_labels"] = t.node_labels;
  j["node_split"] = {{"train", t.node_train},
                     {"val", t.node_val},
                     {"test", t.node_test()}};
  j["links"] = {{"train_pos", pairs_to_json(t.link_train_pos)},
                {"train_neg", pairs_to_json(t.link_train_neg)},
                {"val_pos", pairs_to_json(t.link_val_pos)},
                {"val_neg", pairs_to_json(t.link_val_neg)},
                {"test_pos", pairs_to_json(t.link_test_pos())},
                {"test_neg", pairs_to_json(t.link_test_neg())}};
  json subs = json::array();
  for (const auto& s : t.subgraphs)
    subs.push_back({{"nodes", s.nodes}, {"target", s.target}});
  j["subgraphs"] = subs;
  j["subgraph_split"] = {{"train", t.subgraph_train},
                         {"val", t.subgraph_val},
                         {"test", t.subgraph_test()}};
  return j;
}

TaskBundle tasks_from_json(const json& j) {
  TaskBundle t;
  t.node_labels = j.at("node_labels").get<std::vector<int>>();
  const auto& ns = j.at("node_split");
  t.node_train = ns.at("train").get<std::vector<int>>();
  t.node_val = ns.at("val").get<std::vector<int>>();
  t.set_node_test(ns.at("test").get<std::vector<int>>());
  const auto& ls = j.at("links");
  t.link_train_pos = pairs_from_json(ls.at("train_pos"));
  t.link_train_neg = pairs_from_json(ls.at("train_neg"));
  t.link_val_pos = pairs_from_json(ls.at("val_pos"));
  t.link_val_neg = pairs_from_json(ls.at("val_neg"));
  t.set_link_test(pairs_from_json(ls.at("test_pos")),
                  pairs_from_json(ls.at("test_neg")));
  for (const auto& s : j.at("subgraphs")) {
    SubgraphTask st;
    st.nodes = s.at("nodes").get<std::vector<int>>();
    st.target = s.at("target").get<double>();
    t.subgraphs.push_back(std::move(st));
  }
  const auto& ss = j.at("subgraph_split");
  t.subgraph_train = ss.at("train").get<std::vector<int>>();
  t.subgraph_val = ss.at("val").get<std::vector<int>>();
  t.set_subgraph_test(ss.at("test").get<std::vector<int>>());
  return t;
}

}  // namespace

std::string graph_to_json(const MultiplexGraph& g, const TaskBundle* tasks) {
  json j;
  j["schema"] = "mgwb.graph/1";
  j["n"] = g.n;
  j["k"] = g.k;
  j["community"] = g.community;
  j["site"] = g.site;
  json feats = json::array();
  for (int r = 0; r < g.n; ++r) {
    json row = json::array();
    for (int c = 0; c < 6; ++c) row.push_back(g.features(r, c));
    feats.push_back(std::move(row));
  }
  j["features"] = std::move(feats);
  json edges = json::array();
  for (int i = 0; i < g.edge_count(); ++i) {
    edges.push_back(json::array({g.edges[i].first, g.edges[i].second,
                                 g.edge_attrs(i, 0), g.edge_attrs(i, 1),
                                 int(g.channel_present[i][0]),
                                 int(g.channel_present[i][1])}));
  }
  j["edges"] = std::move(edges);
  if (tasks) j["tasks"] = tasks_to_json(*tasks);
  return j.dump();
}

void graph_from_json(const std::string& text, MultiplexGraph& g,
                     std::optional<TaskBundle>* tasks) {
  json j = json::parse(text);
  if (j.at("schema").get<std::string>() != "mgwb.graph/1")
    throw std::runtime_error("graph_from_json: unknown schema " +
                             j.at("schema").get<std::string>());
  g = MultiplexGraph();
  g.n = j.at("n").get<int>();
  g.k = j.at("k").get<int>();
  g.community = j.at("community").get<std::vector<int>>();
  g.site = j.at("site").get<std::vector<int>>();
  g.features = Matrix(g.n, 6);
  const auto& feats = j.at("features");
  for (int r = 0; r < g.n; ++r)
    for (int c = 0; c < 6; ++c) g.features(r, c) = feats[r][c].get<double>();
  const auto& edges = j.at("edges");
  int m = int(edges.size());
  g.edges.reserve(m);
  g.edge_attrs = Matrix(m, 2);
  g.channel_present.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto& e = edges[i];
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    g.edge_attrs(i, 0) = e[2].get<double>();
    g.edge_attrs(i, 1) = e[3].get<double>();
    g.channel_present[i] = {e[4].get<int>() != 0, e[5].get<int>() != 0};
  }
  g.finalize();
  if (tasks) {
    if (j.contains("tasks"))
      *tasks = tasks_from_json(j.at("tasks"));
    else
      tasks->reset();
  }
}

void save_graph(const std::string& path, const MultiplexGraph& g,
                const TaskBundle* tasks) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_graph: cannot open " + path);
  f << graph_to_json(g, tasks);
  if (!f) throw std::runtime_error("save_graph: write failed for " + path);
}

void load_graph(const std::string& path, MultiplexGraph& g,
                std::optional<TaskBundle>* tasks) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_graph: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  graph_from_json(text, g, tasks);
}

}  // namespace mgwb
