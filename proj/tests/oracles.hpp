#pragma once

// Slow, obviously-correct reference implementations used to check the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <revnet/random.hpp>
#include <revnet/review_graph.hpp>

namespace oracle {

using adjacency = std::vector<std::set<int>>;

inline adjacency random_graph(revnet::rng& r, int n, double p) {
  adjacency adj(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (r.bernoulli(p)) {
        adj[static_cast<std::size_t>(u)].insert(v);
        adj[static_cast<std::size_t>(v)].insert(u);
      }
  return adj;
}

inline std::vector<std::pair<int, int>> edge_list(const adjacency& adj) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < static_cast<int>(adj.size()); ++u)
    for (int v : adj[static_cast<std::size_t>(u)])
      if (u < v) e.emplace_back(u, v);
  return e;
}

inline revnet::review_graph to_graph(const adjacency& adj) {
  const auto e = edge_list(adj);
  return revnet::review_graph::from_edges(adj.size(), e);
}

inline std::vector<int> bfs_distances(const adjacency& adj, int s) {
  std::vector<int> d(adj.size(), -1);
  std::queue<int> q;
  d[static_cast<std::size_t>(s)] = 0;
  q.push(s);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)])
      if (d[static_cast<std::size_t>(v)] < 0) {
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
  }
  return d;
}

// Every shortest s-t path written out vertex by vertex.
inline std::vector<std::vector<int>> all_shortest_paths(const adjacency& adj, int s, int t) {
  const auto ds = bfs_distances(adj, s);
  std::vector<std::vector<int>> paths;
  if (ds[static_cast<std::size_t>(t)] < 0) return paths;
  const auto dt = bfs_distances(adj, t);
  const int len = ds[static_cast<std::size_t>(t)];
  std::vector<int> path{s};
  std::function<void(int)> walk = [&](int u) {
    if (u == t) {
      paths.push_back(path);
      return;
    }
    for (int v : adj[static_cast<std::size_t>(u)])
      if (ds[static_cast<std::size_t>(v)] == ds[static_cast<std::size_t>(u)] + 1 &&
          ds[static_cast<std::size_t>(v)] + dt[static_cast<std::size_t>(v)] == len) {
        path.push_back(v);
        walk(v);
        path.pop_back();
      }
  };
  walk(s);
  return paths;
}

inline std::vector<double> betweenness(const adjacency& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<double> b(adj.size(), 0.0);
  if (n < 3) return b;
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      const auto paths = all_shortest_paths(adj, s, t);
      if (paths.empty()) continue;
      for (int v = 0; v < n; ++v) {
        if (v == s || v == t) continue;
        int through = 0;
        for (const auto& p : paths)
          for (int x : p) through += x == v;
        b[static_cast<std::size_t>(v)] += static_cast<double>(through) / static_cast<double>(paths.size());
      }
    }
  const double norm = (n - 1.0) * (n - 2.0) / 2.0;
  for (double& x : b) x /= norm;
  return b;
}

inline std::vector<double> closeness(const adjacency& adj) {
  const auto n = adj.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto d = bfs_distances(adj, static_cast<int>(v));
    double sum = 0.0;
    int reach = 0;
    for (std::size_t u = 0; u < n; ++u)
      if (u != v && d[u] > 0) {
        sum += d[u];
        ++reach;
      }
    if (reach == 0) continue;
    c[v] = (static_cast<double>(reach) / static_cast<double>(n - 1)) * (static_cast<double>(reach) / sum);
  }
  return c;
}

inline std::vector<double> clustering(const adjacency& adj) {
  std::vector<double> c(adj.size(), 0.0);
  for (std::size_t v = 0; v < adj.size(); ++v) {
    const std::vector<int> nb(adj[v].begin(), adj[v].end());
    const auto k = nb.size();
    if (k < 2) continue;
    int links = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) links += adj[static_cast<std::size_t>(nb[i])].count(nb[j]) ? 1 : 0;
    c[v] = 2.0 * links / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return c;
}

// Standard normal quantile by bisection on the CDF written with erfc.
inline double inverse_normal(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < p ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

// Smallest k with 2^k >= c, found by counting up; c <= 1 gives 0.
inline int ceil_log2_by_enumeration(std::int64_t c) {
  if (c <= 1) return 0;
  for (int k = 0;; ++k)
    if ((std::int64_t{1} << k) >= c) return k;
}

// Reviewer pairs sharing at least one editor, checked pair by pair.
inline std::set<std::pair<std::string, std::string>> shared_editor_pairs(
    const std::set<std::pair<std::string, std::string>>& assignments) {
  std::set<std::string> reviewers;
  for (const auto& [e, r] : assignments) reviewers.insert(r);
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& a : reviewers)
    for (const auto& b : reviewers) {
      if (!(a < b)) continue;
      bool shared = false;
      for (const auto& [e1, r1] : assignments)
        if (r1 == a && assignments.count({e1, b})) shared = true;
      if (shared) out.insert({a, b});
    }
  return out;
}

}  // namespace oracle
