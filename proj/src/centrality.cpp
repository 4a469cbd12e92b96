#include <revnet/centrality.hpp>

#include <algorithm>
#include <ostream>
#include <queue>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace revnet {

Eigen::VectorXi degree(const review_graph& g) {
  Eigen::VectorXi deg(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) deg[v] = static_cast<int>(g.neighbors(v).size());
  return deg;
}

Eigen::VectorXd betweenness(const review_graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd bc = Eigen::VectorXd::Zero(n);
  if (n < 3) return bc;

  std::vector<int> stack, dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::vector<int>> preds(n);
  std::queue<int> queue;

  for (int s = 0; s < n; ++s) {
    stack.clear();
    for (int v = 0; v < n; ++v) preds[v].clear();
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    dist[s] = 0;
    sigma[s] = 1.0;
    queue.push(s);
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop();
      stack.push_back(v);
      for (int w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      int w = *it;
      for (int v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  // each unordered pair was counted from both endpoints
  const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
  return bc / (2.0 * pairs);
}

Eigen::VectorXd closeness(const review_graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd cc = Eigen::VectorXd::Zero(n);
  if (n < 2) return cc;

  std::vector<int> dist(n);
  std::queue<int> queue;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.push(s);
    long long total = 0;
    long long reached = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop();
      for (int w : g.neighbors(v)) {
        if (dist[w] >= 0) continue;
        dist[w] = dist[v] + 1;
        total += dist[w];
        ++reached;
        queue.push(w);
      }
    }
    if (reached <= 1) continue;
    const double r1 = static_cast<double>(reached - 1);
    cc[s] = (r1 / static_cast<double>(n - 1)) * (r1 / static_cast<double>(total));
  }
  return cc;
}

Eigen::VectorXd clustering(const review_graph& g) {
  const auto n = g.size();
  Eigen::VectorXd cl = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  std::vector<char> mark(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    const auto k = nb.size();
    if (k < 2) continue;
    for (int u : nb) mark[u] = 1;
    long long links = 0;
    for (int u : nb)
      for (int w : g.neighbors(u))
        if (mark[w]) ++links;
    for (int u : nb) mark[u] = 0;
    // every neighbor-neighbor edge was seen from both ends
    cl[v] = static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
  }
  return cl;
}

Eigen::VectorXd pagerank_step(const review_graph& g, const Eigen::VectorXd& x, double damping) {
  const auto n = static_cast<Eigen::Index>(g.size());
  double dangling = 0.0;
  Eigen::VectorXd share(n);
  for (Eigen::Index v = 0; v < n; ++v) {
    const auto k = g.neighbors(v).size();
    if (k == 0) {
      dangling += x[v];
      share[v] = 0.0;
    } else {
      share[v] = x[v] / static_cast<double>(k);
    }
  }
  const double base = (1.0 - damping) / static_cast<double>(n) + damping * dangling / static_cast<double>(n);
  Eigen::VectorXd next(n);
  for (Eigen::Index v = 0; v < n; ++v) {
    double acc = 0.0;
    for (int u : g.neighbors(v)) acc += share[u];
    next[v] = base + damping * acc;
  }
  return next;
}

pagerank_result pagerank(const review_graph& g, const pagerank_options& opts) {
  if (!(opts.damping > 0.0 && opts.damping < 1.0))
    throw std::invalid_argument("pagerank damping must lie in (0, 1)");
  pagerank_result res;
  const auto n = static_cast<Eigen::Index>(g.size());
  if (n == 0) {
    res.converged = true;
    return res;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (res.iterations = 0; res.iterations < opts.max_iter;) {
    Eigen::VectorXd next = pagerank_step(g, x, opts.damping);
    res.residual = (next - x).lpNorm<1>();
    x = std::move(next);
    ++res.iterations;
    if (res.residual < opts.tol) {
      res.converged = true;
      break;
    }
  }
  res.scores = x / x.sum();
  return res;
}

centrality_table compute_centralities(const review_graph& g, const pagerank_options& opts) {
  centrality_table t;
  t.ids.assign(g.ids().begin(), g.ids().end());
  t.degree = degree(g);
  t.betweenness = betweenness(g);
  t.closeness = closeness(g);
  t.clustering = clustering(g);
  auto pr = pagerank(g, opts);
  t.pagerank = std::move(pr.scores);
  t.pagerank_converged = pr.converged;
  return t;
}

void write_csv(std::ostream& out, const centrality_table& t) {
  out << "node_id,degree,betweenness,closeness,clustering,pagerank\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    fmt::print(out, "{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", t.ids[i], t.degree[k],
               t.betweenness[k], t.closeness[k], t.clustering[k], t.pagerank[k]);
  }
}

}  // namespace revnet
