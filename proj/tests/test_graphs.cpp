#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "krongraph/errors.hpp"
#include "krongraph/glasso.hpp"
#include "krongraph/graphs.hpp"
#include "test_support.hpp"

using namespace krongraph;

namespace {

SymMatrix precision_from(const Eigen::MatrixXd& m) {
  return SymMatrix::checked(m, MatrixKind::precision,
                            index_labels("w", static_cast<int>(m.rows())));
}

SymMatrix identity_correlation(int dim) {
  return SymMatrix::checked(Eigen::MatrixXd::Identity(dim, dim), MatrixKind::correlation,
                            index_labels("w", dim));
}

using testsupport::table_oracle;

}  // namespace

TEST_CASE("graph extraction keeps entries above the cutoff") {
  SUBCASE("a diagonal precision gives the empty graph") {
    const LabeledGraph g = graph_from_precision(
        precision_from(Eigen::MatrixXd::Identity(4, 4)), identity_correlation(4), 0.0);
    CHECK(g.edge_count() == 0);
    CHECK(g.vertex_count() == 4);
  }
  SUBCASE("a dense 3x3 precision at tau 0 is complete") {
    Eigen::MatrixXd m(3, 3);
    m << 2.0, 0.3, -0.4, 0.3, 2.0, 0.2, -0.4, 0.2, 2.0;
    const LabeledGraph g =
        graph_from_precision(precision_from(m), identity_correlation(3), 0.0);
    CHECK(g.edge_count() == 3);
    CHECK(g.edges[0].weight == 0.3);
  }
  SUBCASE("entries below tau are dropped") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    m(0, 1) = m(1, 0) = 0.05;
    m(1, 2) = m(2, 1) = 0.4;
    const LabeledGraph g =
        graph_from_precision(precision_from(m), identity_correlation(3), 0.1);
    CHECK(g.edge_count() == 1);
    CHECK(g.edges[0].a == 1);
    CHECK(g.edges[0].b == 2);
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_WITH_AS(
        graph_from_precision(precision_from(Eigen::MatrixXd::Identity(3, 3)),
                             identity_correlation(4), 0.0),
        doctest::Contains("DimensionMismatch"), ValidationError);
  }
}

TEST_CASE("edge fractions per attribute pair") {
  std::mt19937 rng(42);

  SUBCASE("complete graph has all fractions one") {
    LabeledGraph g;
    g.vertices = index_labels("w", 5);
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) g.edges.push_back({i, j, 1.0, 0.0});
    const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
    const PairTable t = edge_fraction_by_attribute(g, meta, "vowel_length");
    for (const auto& c : t.cells)
      if (c.defined) CHECK(c.value == 1.0);
  }
  SUBCASE("empty graph has all defined fractions zero") {
    LabeledGraph g;
    g.vertices = index_labels("w", 5);
    const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
    const PairTable t = edge_fraction_by_attribute(g, meta, "onset");
    for (const auto& c : t.cells)
      if (c.defined) CHECK(c.value == 0.0);
  }
  SUBCASE("random graphs match the enumeration oracle exactly") {
    for (int rep = 0; rep < 25; ++rep) {
      std::uniform_int_distribution<int> size(3, 12);
      const LabeledGraph g = testsupport::random_graph(rng, size(rng), 0.4);
      const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
      const PairTable t = edge_fraction_by_attribute(g, meta, "group");
      const auto oracle = table_oracle(g, meta, "group");
      for (int i = 0; i < static_cast<int>(t.values.size()); ++i) {
        for (int j = i; j < static_cast<int>(t.values.size()); ++j) {
          const auto& cell = t.cell(i, j);
          auto it = oracle.find({t.values[i], t.values[j]});
          const long long possible = it == oracle.end() ? 0 : it->second.possible;
          const long long edges = it == oracle.end() ? 0 : it->second.edges;
          CHECK(cell.possible == possible);
          CHECK(cell.defined == (possible > 0));
          if (cell.defined) {
            CHECK(cell.value == static_cast<double>(edges) / possible);
            CHECK(cell.value >= 0.0);
            CHECK(cell.value <= 1.0);
          }
        }
      }
    }
  }
  SUBCASE("missing attribute is rejected") {
    const LabeledGraph g = testsupport::random_graph(rng, 4, 0.5);
    const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
    CHECK_THROWS_WITH_AS(edge_fraction_by_attribute(g, meta, "syllables"),
                         doctest::Contains("MissingAttribute"), ValidationError);
  }
}

TEST_CASE("mean absolute correlation among edges") {
  SUBCASE("a single edge reports its absolute value") {
    LabeledGraph g;
    g.vertices = index_labels("w", 3);
    g.edges.push_back({0, 1, 1.0, -0.48});
    const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
    const PairTable t = mean_abs_pearson_among_edges(g, meta, "vowel_length");
    // w1 is long, w2 short, so the edge lands in the (long, short) cell.
    bool found = false;
    for (int i = 0; i < static_cast<int>(t.values.size()); ++i)
      for (int j = i; j < static_cast<int>(t.values.size()); ++j)
        if (t.cell(i, j).defined) {
          CHECK(t.cell(i, j).value == 0.48);
          found = true;
        }
    CHECK(found);
  }
  SUBCASE("cells without edges stay absent") {
    LabeledGraph g;
    g.vertices = index_labels("w", 4);
    const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
    const PairTable t = mean_abs_pearson_among_edges(g, meta, "vowel_length");
    for (const auto& c : t.cells) CHECK_FALSE(c.defined);
  }
  SUBCASE("random graphs match enumeration to 1e-12") {
    std::mt19937 rng(4242);
    for (int rep = 0; rep < 25; ++rep) {
      std::uniform_int_distribution<int> size(3, 12);
      const LabeledGraph g = testsupport::random_graph(rng, size(rng), 0.5);
      const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
      const PairTable t = mean_abs_pearson_among_edges(g, meta, "group");
      const auto oracle = table_oracle(g, meta, "group");
      for (int i = 0; i < static_cast<int>(t.values.size()); ++i) {
        for (int j = i; j < static_cast<int>(t.values.size()); ++j) {
          const auto& cell = t.cell(i, j);
          auto it = oracle.find({t.values[i], t.values[j]});
          const long long edges = it == oracle.end() ? 0 : it->second.edges;
          CHECK(cell.defined == (edges > 0));
          if (cell.defined) {
            CHECK(cell.value ==
                  doctest::Approx(it->second.abs_pearson_sum / edges).epsilon(1e-12));
            CHECK(cell.value >= 0.0);
            CHECK(cell.value <= 1.0 + 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("cluster cut weights split the total absolute weight") {
  std::mt19937 rng(7);

  SUBCASE("one cluster has no between weight") {
    const LabeledGraph g = testsupport::random_graph(rng, 6, 0.6);
    std::map<std::string, std::string> partition;
    for (const auto& v : g.vertices) partition[v] = "all";
    const CutWeights cut = cluster_cut_weights(g, partition);
    CHECK(cut.between == 0.0);
  }
  SUBCASE("bipartite placement has no within weight") {
    LabeledGraph g;
    g.vertices = {"a", "b", "c", "d"};
    g.edges.push_back({0, 2, 0.5, 0.0});
    g.edges.push_back({1, 3, -0.25, 0.0});
    std::map<std::string, std::string> partition = {
        {"a", "left"}, {"b", "left"}, {"c", "right"}, {"d", "right"}};
    const CutWeights cut = cluster_cut_weights(g, partition);
    CHECK(cut.within == 0.0);
    CHECK(cut.between == doctest::Approx(0.75));
  }
  SUBCASE("six-vertex hand case matches the direct sum") {
    LabeledGraph g;
    g.vertices = index_labels("w", 6);
    g.edges.push_back({0, 1, 0.4, 0.0});
    g.edges.push_back({2, 4, -0.3, 0.0});
    g.edges.push_back({1, 5, 0.2, 0.0});
    g.edges.push_back({3, 5, -0.1, 0.0});
    std::map<std::string, std::string> partition;
    for (int i = 0; i < 6; ++i) partition[g.vertices[i]] = i < 3 ? "c0" : "c1";
    const CutWeights cut = cluster_cut_weights(g, partition);
    CHECK(cut.within == doctest::Approx(0.4 + 0.1));
    CHECK(cut.between == doctest::Approx(0.3 + 0.2));

    double total = 0.0;
    for (const auto& e : g.edges) total += std::abs(e.weight);
    CHECK(cut.within + cut.between == doctest::Approx(total));
  }
  SUBCASE("unassigned vertices are rejected") {
    const LabeledGraph g = testsupport::random_graph(rng, 4, 1.0);
    std::map<std::string, std::string> partial = {{"w1", "c"}};
    CHECK_THROWS_WITH_AS(cluster_cut_weights(g, partial),
                         doctest::Contains("UnassignedVertex"), ValidationError);
  }
}

TEST_CASE("supernode collapse counts contributing edges") {
  SUBCASE("empty graph collapses to an empty graph") {
    LabeledGraph g;
    g.vertices = {"a", "b"};
    std::map<std::string, std::string> grouping = {{"a", "g0"}, {"b", "g1"}};
    CHECK(supernode_graph(g, grouping).edge_count() == 0);
  }
  SUBCASE("one cross-group edge becomes one supernode edge of weight one") {
    LabeledGraph g;
    g.vertices = {"a", "b", "c"};
    g.edges.push_back({0, 1, 0.9, 0.0});
    std::map<std::string, std::string> grouping = {{"a", "g0"}, {"b", "g1"}, {"c", "g1"}};
    const LabeledGraph super = supernode_graph(g, grouping);
    REQUIRE(super.edge_count() == 1);
    CHECK(super.vertices[super.edges[0].a] == "g0");
    CHECK(super.vertices[super.edges[0].b] == "g1");
    CHECK(super.edges[0].weight == 1.0);
  }
  SUBCASE("random collapses match hand construction") {
    std::mt19937 rng(2718);
    for (int rep = 0; rep < 25; ++rep) {
      const LabeledGraph g = testsupport::random_graph(rng, 10, 0.4);
      const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);
      std::map<std::string, std::string> grouping;
      for (const auto& v : g.vertices) grouping[v] = meta.attribute(v, "group");
      const LabeledGraph super = supernode_graph(g, grouping);

      std::map<std::pair<std::string, std::string>, long long> expected;
      for (const auto& e : g.edges) {
        auto a = grouping[g.vertices[e.a]];
        auto b = grouping[g.vertices[e.b]];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        ++expected[{a, b}];
      }
      CHECK(super.edge_count() == static_cast<long long>(expected.size()));
      for (const auto& e : super.edges) {
        CHECK(e.weight ==
              static_cast<double>(expected[{super.vertices[e.a], super.vertices[e.b]}]));
      }
    }
  }
}

TEST_CASE("set operations partition the first edge set") {
  std::mt19937 rng(13);
  SUBCASE("identical graphs intersect fully") {
    const LabeledGraph g = testsupport::random_graph(rng, 8, 0.4);
    const GraphSetOps ops = graph_set_ops(g, g);
    CHECK(ops.intersection.edge_count() == g.edge_count());
    CHECK(ops.only_first.edge_count() == 0);
    CHECK(ops.only_second.edge_count() == 0);
  }
  SUBCASE("disjoint edge sets have an empty intersection") {
    LabeledGraph g1, g2;
    g1.vertices = g2.vertices = index_labels("w", 4);
    g1.edges.push_back({0, 1, 1.0, 0.0});
    g2.edges.push_back({2, 3, 1.0, 0.0});
    const GraphSetOps ops = graph_set_ops(g1, g2);
    CHECK(ops.intersection.edge_count() == 0);
    CHECK(ops.only_first.edge_count() == 1);
    CHECK(ops.only_second.edge_count() == 1);
  }
  SUBCASE("partition identity holds on random pairs") {
    for (int rep = 0; rep < 20; ++rep) {
      const LabeledGraph g1 = testsupport::random_graph(rng, 9, 0.4);
      const LabeledGraph g2 = testsupport::random_graph(rng, 9, 0.4);
      const GraphSetOps ops = graph_set_ops(g1, g2);
      CHECK(ops.intersection.edge_count() + ops.only_first.edge_count() == g1.edge_count());
      CHECK(ops.intersection.edge_count() + ops.only_second.edge_count() == g2.edge_count());
    }
  }
  SUBCASE("different vertex sets are rejected") {
    LabeledGraph g1, g2;
    g1.vertices = {"a", "b"};
    g2.vertices = {"a", "c"};
    CHECK_THROWS_WITH_AS(graph_set_ops(g1, g2), doctest::Contains("VertexSetMismatch"),
                         ValidationError);
  }
}

TEST_CASE("top-k edge selection") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(0, 1) = m(1, 0) = 0.5;
  m(0, 2) = m(2, 0) = -0.7;
  m(1, 3) = m(3, 1) = 0.2;
  m(2, 3) = m(3, 2) = 0.2;
  const SymMatrix theta = precision_from(m);

  SUBCASE("k covering all nonzeros equals tau-zero extraction") {
    const TopEdges top = top_k_edges(theta, 4);
    CHECK(top.complete);
    const LabeledGraph all = graph_from_precision(theta, identity_correlation(4), 0.0);
    CHECK(top.graph.edge_count() == all.edge_count());
  }
  SUBCASE("k = 1 picks the largest magnitude") {
    const TopEdges top = top_k_edges(theta, 1);
    REQUIRE(top.graph.edge_count() == 1);
    CHECK(top.graph.edges[0].weight == -0.7);
  }
  SUBCASE("ties at the cutoff keep the lexicographically smaller pair") {
    const TopEdges top = top_k_edges(theta, 3);
    REQUIRE(top.graph.edge_count() == 3);
    bool has_w2_w4 = false, has_w3_w4 = false;
    for (const auto& e : top.graph.edges) {
      const auto pair = std::make_pair(top.graph.vertices[e.a], top.graph.vertices[e.b]);
      if (pair == std::make_pair(std::string("w2"), std::string("w4"))) has_w2_w4 = true;
      if (pair == std::make_pair(std::string("w3"), std::string("w4"))) has_w3_w4 = true;
    }
    CHECK(has_w2_w4);
    CHECK_FALSE(has_w3_w4);
  }
  SUBCASE("asking beyond the nonzero count returns all, flagged") {
    const TopEdges top = top_k_edges(theta, 10);
    CHECK_FALSE(top.complete);
    CHECK(top.graph.edge_count() == 4);
  }
}

TEST_CASE("graph metrics") {
  SUBCASE("identity factor with an empty graph") {
    const SymMatrix eye = SymMatrix::checked(Eigen::MatrixXd::Identity(19, 19),
                                             MatrixKind::correlation, index_labels("t", 19));
    LabeledGraph g;
    g.vertices = eye.labels;
    const GraphMetrics m = graph_metrics(eye, g);
    CHECK(m.avg_degree == 0.0);
    CHECK(m.n_edges == 0);
    CHECK(m.trace_over_frobenius == doctest::Approx(std::sqrt(19.0)).epsilon(1e-15));
    CHECK(m.spectral_norm == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("spectral norm matches power iteration on random SPD factors") {
    std::mt19937 rng(31);
    for (int rep = 0; rep < 5; ++rep) {
      const SymMatrix gamma = testsupport::random_pd_correlation(rng, 10);
      LabeledGraph g;
      g.vertices = gamma.labels;
      const GraphMetrics m = graph_metrics(gamma, g);
      CHECK(m.spectral_norm ==
            doctest::Approx(testsupport::power_iteration_norm(gamma.values)).epsilon(1e-8));
    }
  }
  SUBCASE("edges and degrees stay consistent") {
    std::mt19937 rng(77);
    const LabeledGraph g = testsupport::random_graph(rng, 9, 0.5);
    const SymMatrix eye = SymMatrix::checked(Eigen::MatrixXd::Identity(9, 9),
                                             MatrixKind::correlation, g.vertices);
    const GraphMetrics m = graph_metrics(eye, g);
    CHECK(m.n_edges == g.edge_count());
    CHECK(m.avg_degree == doctest::Approx(2.0 * g.edge_count() / 9.0));
  }
}

TEST_CASE("tau-zero extraction equals the solver's structural zeros") {
  std::mt19937 rng(919);
  const SymMatrix gamma = testsupport::random_pd_correlation(rng, 9);
  const PrecisionEstimate est = glasso(gamma, 0.12);
  long long nonzeros = 0;
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j)
      if (std::abs(est.theta.values(i, j)) >= kStructuralZeroTol) ++nonzeros;
  const LabeledGraph g = graph_from_precision(est.theta, gamma, 0.0);
  CHECK(g.edge_count() == nonzeros);
}

TEST_CASE("analytics are invariant to vertex permutation") {
  std::mt19937 rng(5150);
  const LabeledGraph g = testsupport::random_graph(rng, 8, 0.5);
  const WordMetadata meta = testsupport::cyclic_metadata(g.vertices);

  // Permute vertex order, remapping edges.
  std::vector<int> perm = {5, 2, 7, 0, 3, 6, 1, 4};
  LabeledGraph pg;
  pg.vertices.resize(8);
  std::vector<int> where(8);
  for (int i = 0; i < 8; ++i) {
    pg.vertices[i] = g.vertices[perm[i]];
    where[perm[i]] = i;
  }
  for (const auto& e : g.edges) pg.add_edge(where[e.a], where[e.b], e.weight, e.pearson);
  pg.sort_edges();

  const PairTable t1 = edge_fraction_by_attribute(g, meta, "group");
  const PairTable t2 = edge_fraction_by_attribute(pg, meta, "group");
  REQUIRE(t1.values == t2.values);
  for (size_t i = 0; i < t1.cells.size(); ++i) {
    CHECK(t1.cells[i].defined == t2.cells[i].defined);
    CHECK(t1.cells[i].value == t2.cells[i].value);
  }

  std::map<std::string, std::string> partition;
  for (const auto& v : g.vertices) partition[v] = meta.attribute(v, "group");
  const CutWeights c1 = cluster_cut_weights(g, partition);
  const CutWeights c2 = cluster_cut_weights(pg, partition);
  CHECK(c1.within == doctest::Approx(c2.within).epsilon(1e-15));
  CHECK(c1.between == doctest::Approx(c2.between).epsilon(1e-15));
}

TEST_CASE("graph JSON and edge CSV round trips") {
  std::mt19937 rng(8);
  LabeledGraph g = testsupport::random_graph(rng, 6, 0.5);
  g.groups["w1"] = "left";
  g.groups["w2"] = "right";

  std::ostringstream json;
  write_graph_json(g, json);
  std::istringstream in(json.str());
  const LabeledGraph back = read_graph_json(in);
  CHECK(back.vertices == g.vertices);
  CHECK(back.groups == g.groups);
  REQUIRE(back.edge_count() == g.edge_count());
  for (size_t i = 0; i < g.edges.size(); ++i) {
    CHECK(back.edges[i].a == g.edges[i].a);
    CHECK(back.edges[i].b == g.edges[i].b);
    CHECK(back.edges[i].weight == g.edges[i].weight);
    CHECK(back.edges[i].pearson == g.edges[i].pearson);
  }

  std::ostringstream dot;
  write_dot(g, dot);
  CHECK(dot.str().find("graph estimate {") != std::string::npos);
  CHECK(dot.str().find("cluster=") != std::string::npos);
}
