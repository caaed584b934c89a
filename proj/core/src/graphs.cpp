#include "krongraph/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "krongraph/csv.hpp"
#include "krongraph/errors.hpp"
#include "krongraph/glasso.hpp"

namespace krongraph {

bool LabeledGraph::has_edge(int a, int b) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.a == a && e.b == b) return true;
  return false;
}

void LabeledGraph::add_edge(int a, int b, double weight, double pearson) {
  if (a == b) {
    throw ValidationError("DimensionMismatch", "self-loops are not allowed");
  }
  if (a > b) std::swap(a, b);
  if (a < 0 || b >= vertex_count()) {
    throw ValidationError("IndexOutOfRange", "edge endpoint outside the vertex set");
  }
  if (has_edge(a, b)) {
    throw ValidationError("DuplicateCell", "edge (" + vertices[a] + ", " + vertices[b] +
                                               ") added twice");
  }
  edges.push_back({a, b, weight, pearson});
}

void LabeledGraph::sort_edges() {
  std::sort(edges.begin(), edges.end(), [](const GraphEdge& x, const GraphEdge& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
}

LabeledGraph graph_from_precision(const SymMatrix& theta, const SymMatrix& gamma, double tau,
                                  const std::vector<std::string>* labels) {
  const int p = theta.dim();
  if (gamma.dim() != p) {
    throw ValidationError("DimensionMismatch",
                          "precision and correlation matrices differ in dimension");
  }
  if (tau < 0.0) {
    throw ValidationError("IndexOutOfRange", "threshold must be nonnegative");
  }
  LabeledGraph g;
  g.vertices = labels != nullptr ? *labels : theta.labels;
  if (static_cast<int>(g.vertices.size()) != p) {
    throw ValidationError("DimensionMismatch", "label count does not match dimension");
  }
  const double cutoff = std::max(tau, kStructuralZeroTol);
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (std::abs(theta.values(i, j)) >= cutoff)
        g.edges.push_back({i, j, theta.values(i, j), gamma.values(i, j)});
  return g;
}

PairTable::Cell& PairTable::cell(int i, int j) {
  if (i > j) std::swap(i, j);
  return cells[static_cast<size_t>(i) * values.size() + j];
}

const PairTable::Cell& PairTable::cell(int i, int j) const {
  if (i > j) std::swap(i, j);
  return cells[static_cast<size_t>(i) * values.size() + j];
}

void PairTable::write_csv(std::ostream& out) const {
  out << attribute;
  for (const auto& v : values) out << ',' << v;
  out << '\n';
  const int n = static_cast<int>(values.size());
  for (int i = 0; i < n; ++i) {
    out << values[i];
    for (int j = 0; j < n; ++j) {
      const Cell& c = cell(std::min(i, j), std::max(i, j));
      out << ',' << (c.defined ? csv::format_double(c.value) : "NA");
    }
    out << '\n';
  }
}

namespace {

// Sorted attribute values and per-vertex group indices; every vertex must
// carry the attribute.
std::pair<std::vector<std::string>, std::vector<int>> group_vertices(
    const LabeledGraph& graph, const WordMetadata& metadata, const std::string& attribute) {
  if (!metadata.has_attribute(attribute)) {
    throw ValidationError("MissingAttribute", "metadata has no attribute '" + attribute + "'");
  }
  std::vector<std::string> raw(graph.vertices.size());
  std::set<std::string> distinct;
  for (size_t v = 0; v < graph.vertices.size(); ++v) {
    raw[v] = metadata.attribute(graph.vertices[v], attribute);
    distinct.insert(raw[v]);
  }
  std::vector<std::string> values(distinct.begin(), distinct.end());
  std::vector<int> index(graph.vertices.size());
  for (size_t v = 0; v < raw.size(); ++v) {
    index[v] = static_cast<int>(
        std::lower_bound(values.begin(), values.end(), raw[v]) - values.begin());
  }
  return {std::move(values), std::move(index)};
}

PairTable make_table(const std::string& attribute, std::vector<std::string> values) {
  PairTable t;
  t.attribute = attribute;
  t.values = std::move(values);
  t.cells.assign(t.values.size() * t.values.size(), {});
  return t;
}

}  // namespace

PairTable edge_fraction_by_attribute(const LabeledGraph& graph, const WordMetadata& metadata,
                                     const std::string& attribute) {
  auto [values, group] = group_vertices(graph, metadata, attribute);
  PairTable table = make_table(attribute, std::move(values));
  const int n = static_cast<int>(table.values.size());

  std::vector<long long> sizes(n, 0);
  for (int g : group) ++sizes[g];
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      auto& c = table.cell(i, j);
      c.possible = i == j ? sizes[i] * (sizes[i] - 1) / 2 : sizes[i] * sizes[j];
    }
  }
  for (const auto& e : graph.edges) ++table.cell(group[e.a], group[e.b]).edges;
  for (auto& c : table.cells) {
    if (c.possible > 0) {
      c.defined = true;
      c.value = static_cast<double>(c.edges) / static_cast<double>(c.possible);
    }
  }
  return table;
}

PairTable mean_abs_pearson_among_edges(const LabeledGraph& graph,
                                       const WordMetadata& metadata,
                                       const std::string& attribute) {
  auto [values, group] = group_vertices(graph, metadata, attribute);
  PairTable table = make_table(attribute, std::move(values));
  for (const auto& e : graph.edges) {
    auto& c = table.cell(group[e.a], group[e.b]);
    ++c.edges;
    c.value += std::abs(e.pearson);
  }
  for (auto& c : table.cells) {
    if (c.edges > 0) {
      c.defined = true;
      c.value /= static_cast<double>(c.edges);
    }
  }
  return table;
}

namespace {
const std::string& assigned_group(const std::map<std::string, std::string>& assignment,
                                  const std::string& vertex) {
  auto it = assignment.find(vertex);
  if (it == assignment.end()) {
    throw ValidationError("UnassignedVertex", "vertex '" + vertex + "' has no assignment");
  }
  return it->second;
}
}  // namespace

CutWeights cluster_cut_weights(const LabeledGraph& graph,
                               const std::map<std::string, std::string>& partition) {
  for (const auto& v : graph.vertices) assigned_group(partition, v);
  CutWeights cut;
  for (const auto& e : graph.edges) {
    const bool same = assigned_group(partition, graph.vertices[e.a]) ==
                      assigned_group(partition, graph.vertices[e.b]);
    (same ? cut.within : cut.between) += std::abs(e.weight);
  }
  return cut;
}

LabeledGraph supernode_graph(const LabeledGraph& graph,
                             const std::map<std::string, std::string>& grouping) {
  std::set<std::string> distinct;
  for (const auto& v : graph.vertices) distinct.insert(assigned_group(grouping, v));

  LabeledGraph super;
  super.vertices.assign(distinct.begin(), distinct.end());
  auto index_of = [&](const std::string& name) {
    return static_cast<int>(
        std::lower_bound(super.vertices.begin(), super.vertices.end(), name) -
        super.vertices.begin());
  };

  std::map<std::pair<int, int>, long long> counts;
  for (const auto& e : graph.edges) {
    int ga = index_of(grouping.at(graph.vertices[e.a]));
    int gb = index_of(grouping.at(graph.vertices[e.b]));
    if (ga == gb) continue;
    if (ga > gb) std::swap(ga, gb);
    ++counts[{ga, gb}];
  }
  for (const auto& [pair, count] : counts) {
    super.edges.push_back({pair.first, pair.second, static_cast<double>(count), 0.0});
  }
  return super;
}

GraphSetOps graph_set_ops(const LabeledGraph& first, const LabeledGraph& second) {
  if (std::set<std::string>(first.vertices.begin(), first.vertices.end()) !=
      std::set<std::string>(second.vertices.begin(), second.vertices.end())) {
    throw ValidationError("VertexSetMismatch", "graphs have different vertex sets");
  }
  // Remap the second graph's endpoints into the first graph's order.
  std::map<std::string, int> pos;
  for (size_t i = 0; i < first.vertices.size(); ++i) pos[first.vertices[i]] = static_cast<int>(i);
  std::set<std::pair<int, int>> in_second;
  for (const auto& e : second.edges) {
    int a = pos[second.vertices[e.a]];
    int b = pos[second.vertices[e.b]];
    if (a > b) std::swap(a, b);
    in_second.insert({a, b});
  }
  std::set<std::pair<int, int>> in_first;
  for (const auto& e : first.edges) in_first.insert({e.a, e.b});

  GraphSetOps ops;
  ops.intersection.vertices = first.vertices;
  ops.only_first.vertices = first.vertices;
  ops.only_second.vertices = first.vertices;
  ops.intersection.groups = first.groups;
  ops.only_first.groups = first.groups;
  ops.only_second.groups = first.groups;
  for (const auto& e : first.edges) {
    (in_second.count({e.a, e.b}) ? ops.intersection : ops.only_first).edges.push_back(e);
  }
  for (const auto& e : second.edges) {
    int a = pos[second.vertices[e.a]];
    int b = pos[second.vertices[e.b]];
    if (a > b) std::swap(a, b);
    if (!in_first.count({a, b})) {
      ops.only_second.edges.push_back({a, b, e.weight, e.pearson});
    }
  }
  ops.only_second.sort_edges();
  return ops;
}

TopEdges top_k_edges(const SymMatrix& theta, long long k, const SymMatrix* gamma) {
  if (k < 1) {
    throw ValidationError("IndexOutOfRange", "k must be positive");
  }
  if (gamma != nullptr && gamma->dim() != theta.dim()) {
    throw ValidationError("DimensionMismatch",
                          "precision and correlation matrices differ in dimension");
  }
  struct Candidate {
    double magnitude;
    int a, b;
  };
  std::vector<Candidate> candidates;
  for (int i = 0; i < theta.dim(); ++i)
    for (int j = i + 1; j < theta.dim(); ++j)
      if (std::abs(theta.values(i, j)) >= kStructuralZeroTol)
        candidates.push_back({std::abs(theta.values(i, j)), i, j});

  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.magnitude != y.magnitude) return x.magnitude > y.magnitude;
    const auto xpair = std::make_pair(theta.labels[x.a], theta.labels[x.b]);
    const auto ypair = std::make_pair(theta.labels[y.a], theta.labels[y.b]);
    return xpair < ypair;
  });

  TopEdges out;
  out.complete = static_cast<long long>(candidates.size()) >= k;
  out.graph.vertices = theta.labels;
  const long long take = std::min<long long>(k, candidates.size());
  for (long long i = 0; i < take; ++i) {
    const auto& c = candidates[i];
    out.graph.edges.push_back({c.a, c.b, theta.values(c.a, c.b),
                               gamma != nullptr ? gamma->values(c.a, c.b) : 0.0});
  }
  out.graph.sort_edges();
  return out;
}

GraphMetrics graph_metrics(const SymMatrix& factor, const LabeledGraph& graph) {
  if (factor.dim() != graph.vertex_count()) {
    throw ValidationError("DimensionMismatch", "matrix and graph differ in dimension");
  }
  GraphMetrics m;
  m.n_edges = graph.edge_count();
  m.avg_degree = graph.vertex_count() > 0
                     ? 2.0 * static_cast<double>(m.n_edges) / graph.vertex_count()
                     : 0.0;
  const double fro = factor.values.norm();
  m.trace_over_frobenius = fro > 0.0 ? factor.values.trace() / fro : 0.0;
  m.spectral_norm = spectral_norm(factor.values);
  return m;
}

namespace {
std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}
}  // namespace

void write_dot(const LabeledGraph& graph, std::ostream& out) {
  out << "graph estimate {\n";
  for (const auto& v : graph.vertices) {
    out << "  " << dot_quote(v);
    auto it = graph.groups.find(v);
    if (it != graph.groups.end()) out << " [cluster=" << dot_quote(it->second) << "]";
    out << ";\n";
  }
  for (const auto& e : graph.edges) {
    out << "  " << dot_quote(graph.vertices[e.a]) << " -- " << dot_quote(graph.vertices[e.b])
        << " [label=" << dot_quote(csv::format_double(e.weight)) << "];\n";
  }
  out << "}\n";
}

void write_edge_csv(const LabeledGraph& graph, std::ostream& out) {
  out << "label_a,label_b,weight,pearson\n";
  for (const auto& e : graph.edges) {
    out << graph.vertices[e.a] << ',' << graph.vertices[e.b] << ','
        << csv::format_double(e.weight) << ',' << csv::format_double(e.pearson) << '\n';
  }
}

void write_graph_json(const LabeledGraph& graph, std::ostream& out) {
  nlohmann::ordered_json j;
  j["vertices"] = graph.vertices;
  if (!graph.groups.empty()) j["groups"] = graph.groups;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : graph.edges) {
    edges.push_back({{"a", graph.vertices[e.a]},
                     {"b", graph.vertices[e.b]},
                     {"weight", e.weight},
                     {"pearson", e.pearson}});
  }
  j["edges"] = std::move(edges);
  out << j.dump(2) << '\n';
}

LabeledGraph read_graph_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("SchemaMismatch", std::string("bad graph JSON: ") + e.what());
  }
  if (!j.contains("vertices") || !j.contains("edges")) {
    throw ValidationError("SchemaMismatch", "graph JSON needs vertices and edges");
  }
  LabeledGraph g;
  g.vertices = j["vertices"].get<std::vector<std::string>>();
  if (j.contains("groups")) {
    g.groups = j["groups"].get<std::map<std::string, std::string>>();
  }
  std::map<std::string, int> pos;
  for (size_t i = 0; i < g.vertices.size(); ++i) pos[g.vertices[i]] = static_cast<int>(i);
  for (const auto& e : j["edges"]) {
    const std::string a = e.at("a").get<std::string>();
    const std::string b = e.at("b").get<std::string>();
    if (!pos.count(a) || !pos.count(b)) {
      throw ValidationError("SchemaMismatch", "graph JSON edge endpoint is not a vertex");
    }
    g.add_edge(pos[a], pos[b], e.at("weight").get<double>(), e.at("pearson").get<double>());
  }
  g.sort_edges();
  return g;
}

}  // namespace krongraph
