#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include <revnet/centrality.hpp>
#include <revnet/review_graph.hpp>

#include "oracles.hpp"
#include "support.hpp"

using namespace revnet;
using namespace support;

namespace {

// One paper per assignment so each pair can be dated freely.
corpus assignments_corpus(const std::vector<std::tuple<std::string, std::string, int>>& pairs) {
  std::vector<review_event> ev;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [e, r, d] = pairs[i];
    const auto id = "P" + std::to_string(i);
    ev.push_back(submit(id, day(d), {"a"}));
    ev.push_back(assign(id, day(d), e, r));
  }
  return corpus(std::move(ev));
}

std::set<std::pair<std::string, std::string>> edge_names(const review_graph& g) {
  std::set<std::pair<std::string, std::string>> out;
  for (auto [u, v] : g.edges()) out.insert({g.id(static_cast<std::size_t>(u)), g.id(static_cast<std::size_t>(v))});
  return out;
}

review_graph path3() {
  const std::pair<int, int> e[] = {{0, 1}, {1, 2}};
  return review_graph::from_edges(3, e);
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("snapshot cutoffs") {
  const auto c = assignments_corpus({{"E", "r1", 10}, {"E", "r1", 12}, {"E", "r2", 20}});
  CHECK(snapshot(c, day(5)).assignments.empty());
  CHECK(snapshot(c, day(5)).reviewer_ids.empty());
  const auto s = snapshot(c, day(20));
  CHECK(s.assignments.size() == 1);
  CHECK(s.reviewer_ids == std::set<std::string>{"r1"});
  CHECK(snapshot(c, day(21)).assignments.size() == 2);
  CHECK(snapshot(c, date::max()).assignments.size() == 2);
  CHECK(snapshot(c, day(21)) == snapshot(c, day(21)));
}

TEST_CASE("projection examples") {
  const auto c = assignments_corpus(
      {{"E1", "r1", 1}, {"E1", "r2", 1}, {"E1", "r3", 1}, {"E2", "r3", 2}, {"E2", "r4", 2}, {"E3", "r5", 3}});
  const auto g = project(snapshot(c, day(100)));
  CHECK(g.size() == 5);
  CHECK(edge_names(g) == std::set<std::pair<std::string, std::string>>{
                             {"r1", "r2"}, {"r1", "r3"}, {"r2", "r3"}, {"r3", "r4"}});
  const auto deg = degree(g);
  CHECK(deg[static_cast<Eigen::Index>(*g.index_of("r3"))] == 3);
  CHECK(deg[static_cast<Eigen::Index>(*g.index_of("r5"))] == 0);
  CHECK(g.shared_editors(*g.index_of("r1"), *g.index_of("r3")) == 1);
  CHECK(g.shared_editors(*g.index_of("r1"), *g.index_of("r4")) == 0);

  SUBCASE("single editor gives a clique") {
    const auto k = project(snapshot(assignments_corpus({{"E", "a", 1}, {"E", "b", 1}, {"E", "c", 1}, {"E", "d", 1}}),
                                    day(9)));
    CHECK(k.edge_count() == 6);
  }
  SUBCASE("disjoint editors give disjoint cliques") {
    const auto k = project(snapshot(
        assignments_corpus({{"E", "a", 1}, {"E", "b", 1}, {"E", "c", 1}, {"F", "x", 1}, {"F", "y", 1}}), day(9)));
    CHECK(k.edge_count() == 4);
    CHECK_FALSE(k.has_edge(*k.index_of("a"), *k.index_of("x")));
  }
}

TEST_CASE("projection matches the pairwise predicate and grows with the cutoff") {
  rng r(17);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::tuple<std::string, std::string, int>> pairs;
    const int n = 5 + static_cast<int>(r.below(40));
    for (int i = 0; i < n; ++i)
      pairs.emplace_back("E" + std::to_string(r.below(6)), "r" + std::to_string(r.below(20)),
                         static_cast<int>(r.below(300)));
    const auto c = assignments_corpus(pairs);
    std::set<std::pair<std::string, std::string>> prev;
    const assignment_timeline tl(c);
    for (int cut = 0; cut <= 300; cut += 25) {
      const auto snap = snapshot(c, day(cut));
      const auto g = project(snap);
      const auto edges = edge_names(g);
      CHECK(edges == oracle::shared_editor_pairs(snap.assignments));
      CHECK(std::includes(edges.begin(), edges.end(), prev.begin(), prev.end()));
      CHECK(tl.snapshot_prefix(tl.prefix_length(day(cut)), day(cut)) == snap);
      prev = edges;
    }
    std::set<std::pair<std::string, std::string>> distinct;
    for (const auto& [e, rv, d] : pairs) distinct.insert({e, rv});
    CHECK(snapshot(c, date::max()).assignments == distinct);
  }
}

TEST_CASE("edge list export") {
  std::ostringstream e, n;
  write_edge_list(path3(), e, n);
  CHECK(e.str() == "0 1\n1 2\n");
  CHECK(n.str().find("1 ") != std::string::npos);
}

TEST_CASE("degree, betweenness, closeness, clustering examples") {
  const std::pair<int, int> k4e[] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const auto k4 = review_graph::from_edges(4, k4e);
  CHECK((degree(k4).array() == 3).all());
  CHECK(betweenness(k4).isZero());

  const auto p = path3();
  const auto b = betweenness(p);
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(1.0));
  const auto cc = closeness(p);
  CHECK(cc[1] == doctest::Approx(1.0));
  CHECK(cc[0] == doctest::Approx(2.0 / 3.0));
  CHECK(clustering(p)[1] == 0.0);

  const std::pair<int, int> star[] = {{0, 1}, {0, 2}, {0, 3}};
  CHECK(betweenness(review_graph::from_edges(4, star))[0] == doctest::Approx(1.0));

  const std::pair<int, int> tri[] = {{0, 1}, {0, 2}, {1, 2}};
  const auto k3 = review_graph::from_edges(3, tri);
  CHECK(closeness(k3).isApproxToConstant(1.0));
  CHECK(clustering(k3).isApproxToConstant(1.0));

  const std::pair<int, int> two[] = {{0, 1}, {2, 3}};
  CHECK(closeness(review_graph::from_edges(4, two)).isApproxToConstant(1.0 / 3.0));

  const auto iso = review_graph::from_edges(3, std::span<const std::pair<int, int>>{});
  CHECK(degree(iso).isZero());
  CHECK(closeness(iso).isZero());

  // node 3 bridges the cliques {0,1,2,3} and {3,4,5}
  const std::pair<int, int> bridge[] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {3, 5}, {4, 5}};
  const auto cl = clustering(review_graph::from_edges(6, bridge));
  CHECK(cl[3] < 1.0);
  CHECK(cl[0] == 1.0);
  CHECK(cl[4] == 1.0);
}

TEST_CASE("pagerank examples") {
  const auto one = review_graph::from_edges(1, std::span<const std::pair<int, int>>{});
  CHECK(pagerank(one).scores[0] == doctest::Approx(1.0));
  const std::pair<int, int> e[] = {{0, 1}};
  const auto two = pagerank(review_graph::from_edges(2, e));
  CHECK(two.scores[0] == doctest::Approx(0.5));
  CHECK(two.converged);

  std::vector<std::pair<int, int>> c5;
  for (int i = 0; i < 5; ++i) c5.emplace_back(i, (i + 1) % 5);
  const auto pr = pagerank(review_graph::from_edges(5, c5));
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(std::abs(pr.scores[i] - 0.2) < 1e-9);

  CHECK(pagerank(review_graph{}).scores.size() == 0);

  // an isolated node keeps the walk normalized
  const auto mixed = pagerank(review_graph::from_edges(3, e));
  CHECK(std::abs(mixed.scores.sum() - 1.0) < 1e-9);
  CHECK(mixed.scores[2] > 0.0);
}

TEST_CASE("centralities match the oracles and survive relabeling") {
  rng r(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(r.below(12));
    const auto adj = oracle::random_graph(r, n, 0.2 + 0.3 * static_cast<double>(r.below(3)));
    const auto g = oracle::to_graph(adj);
    const auto t = compute_centralities(g);
    const auto ob = oracle::betweenness(adj);
    const auto oc = oracle::closeness(adj);
    const auto ol = oracle::clustering(adj);
    for (int v = 0; v < n; ++v) {
      const auto i = static_cast<std::size_t>(v);
      CHECK(t.degree[v] == static_cast<int>(adj[i].size()));
      CHECK(std::abs(t.betweenness[v] - ob[i]) < 1e-9);
      CHECK(std::abs(t.closeness[v] - oc[i]) < 1e-9);
      CHECK(std::abs(t.clustering[v] - ol[i]) < 1e-12);
    }
    CHECK(std::abs(t.pagerank.sum() - 1.0) < 1e-6);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    r.shuffle(perm);
    std::vector<std::pair<int, int>> moved;
    for (auto [u, v] : oracle::edge_list(adj))
      moved.emplace_back(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]);
    const auto t2 = compute_centralities(review_graph::from_edges(static_cast<std::size_t>(n), moved));
    for (int v = 0; v < n; ++v) {
      const int w = perm[static_cast<std::size_t>(v)];
      CHECK(t2.degree[w] == t.degree[v]);
      CHECK(std::abs(t2.betweenness[w] - t.betweenness[v]) < 1e-12);
      CHECK(std::abs(t2.closeness[w] - t.closeness[v]) < 1e-12);
      CHECK(std::abs(t2.clustering[w] - t.clustering[v]) < 1e-12);
      CHECK(std::abs(t2.pagerank[w] - t.pagerank[v]) < 1e-9);
    }
  }
}

TEST_CASE("centrality csv") {
  std::ostringstream out;
  write_csv(out, compute_centralities(path3()));
  const auto s = out.str();
  CHECK(s.rfind("node_id,degree,betweenness,closeness,clustering,pagerank\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}

}
