#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "krongraph/sym_matrix.hpp"
#include "krongraph/tensor.hpp"

namespace krongraph {

// Undirected labeled graph.  Edges hold the precision entry (weight) and
// the sample-correlation entry (pearson) for the vertex pair; no
// self-loops, each pair at most once, endpoints 0-based indices with
// a < b, stored sorted by (a, b).
struct GraphEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
  double pearson = 0.0;
};

struct LabeledGraph {
  std::vector<std::string> vertices;
  std::map<std::string, std::string> groups;  // optional vertex -> group
  std::vector<GraphEdge> edges;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  long long edge_count() const { return static_cast<long long>(edges.size()); }
  bool has_edge(int a, int b) const;
  void add_edge(int a, int b, double weight, double pearson);
  void sort_edges();
};

// Edge (i, j) iff |theta_ij| >= max(tau, 1e-10); weight = theta_ij,
// pearson = gamma_ij.
LabeledGraph graph_from_precision(const SymMatrix& theta, const SymMatrix& gamma,
                                  double tau,
                                  const std::vector<std::string>* labels = nullptr);

// Symmetric table over the (sorted) values of one word attribute.
// Cells without content stay absent rather than zero so emitters can tell
// "no possible pairs" and "no edges" apart.
struct PairTable {
  struct Cell {
    bool defined = false;
    double value = 0.0;
    long long edges = 0;
    long long possible = 0;  // only meaningful for fraction tables
  };

  std::string attribute;
  std::vector<std::string> values;  // sorted
  std::vector<Cell> cells;          // packed upper triangle, (i, j) with i <= j

  Cell& cell(int i, int j);
  const Cell& cell(int i, int j) const;
  void write_csv(std::ostream& out) const;
};

// Fraction of present edges among the possible pairs for every pair of
// attribute values; same-value cells with group size < 2 are undefined.
PairTable edge_fraction_by_attribute(const LabeledGraph& graph, const WordMetadata& metadata,
                                     const std::string& attribute);

// Mean |pearson| over the edges in each attribute-value cell; cells with
// no edges are absent.
PairTable mean_abs_pearson_among_edges(const LabeledGraph& graph,
                                       const WordMetadata& metadata,
                                       const std::string& attribute);

struct CutWeights {
  double within = 0.0;
  double between = 0.0;
};

// Sum of |weight| over edges inside a cluster and across the cut.
CutWeights cluster_cut_weights(const LabeledGraph& graph,
                               const std::map<std::string, std::string>& partition);

// Groups become vertices; an edge connects two distinct groups when any
// member edge crosses them, weighted by the number of contributing edges.
LabeledGraph supernode_graph(const LabeledGraph& graph,
                             const std::map<std::string, std::string>& grouping);

struct GraphSetOps {
  LabeledGraph intersection;
  LabeledGraph only_first;
  LabeledGraph only_second;
};

// Edge-set intersection and differences; both graphs must share the same
// vertex set.  Intersection edges carry the first graph's values.
GraphSetOps graph_set_ops(const LabeledGraph& first, const LabeledGraph& second);

struct TopEdges {
  LabeledGraph graph;
  bool complete = false;  // false when fewer than k edges were available
};

// Keeps the k largest |theta_ij| off-diagonal entries; ties at the cutoff
// keep the lexicographically smaller label pair.  With fewer than k
// nonzero entries all of them are returned and `complete` is false.
TopEdges top_k_edges(const SymMatrix& theta, long long k, const SymMatrix* gamma = nullptr);

struct GraphMetrics {
  double avg_degree = 0.0;
  long long n_edges = 0;
  double trace_over_frobenius = 0.0;
  double spectral_norm = 0.0;
};

// Degree statistics from the graph; trace/Frobenius ratio and spectral
// norm from the factor estimate passed alongside it.
GraphMetrics graph_metrics(const SymMatrix& factor, const LabeledGraph& graph);

void write_dot(const LabeledGraph& graph, std::ostream& out);
void write_edge_csv(const LabeledGraph& graph, std::ostream& out);
void write_graph_json(const LabeledGraph& graph, std::ostream& out);
LabeledGraph read_graph_json(std::istream& in);

}  // namespace krongraph
