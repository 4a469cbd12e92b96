#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <revnet/review_graph.hpp>

namespace revnet {

Eigen::VectorXi degree(const review_graph& g);

/// Exact shortest-path betweenness (Brandes), endpoints excluded, normalized by
/// (n-1)(n-2)/2 with n the total node count. All zeros when n < 3.
Eigen::VectorXd betweenness(const review_graph& g);

/// Component-scaled closeness: ((r-1)/(n-1)) * ((r-1)/sum of distances), where r
/// is the size of the node's component. Isolated nodes score 0.
Eigen::VectorXd closeness(const review_graph& g);

/// Local clustering coefficient; 0 for nodes with degree < 2.
Eigen::VectorXd clustering(const review_graph& g);

struct pagerank_options {
  double damping = 0.85;
  double tol = 1e-9;  // L1 change between iterates
  int max_iter = 200;
};

struct pagerank_result {
  Eigen::VectorXd scores;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // L1 change of the last iteration
};

/// Power iteration with every edge walked in both directions. Degree-0 nodes
/// spread their mass uniformly.
pagerank_result pagerank(const review_graph& g, const pagerank_options& opts = {});

/// One damped power-iteration step; exposed so callers can test the fixed point.
Eigen::VectorXd pagerank_step(const review_graph& g, const Eigen::VectorXd& x, double damping);

struct centrality_table {
  std::vector<std::string> ids;
  Eigen::VectorXi degree;
  Eigen::VectorXd betweenness;
  Eigen::VectorXd closeness;
  Eigen::VectorXd clustering;
  Eigen::VectorXd pagerank;
  bool pagerank_converged = true;

  std::size_t size() const { return ids.size(); }
};

centrality_table compute_centralities(const review_graph& g, const pagerank_options& opts = {});

/// CSV with header `node_id,degree,betweenness,closeness,clustering,pagerank`.
void write_csv(std::ostream& out, const centrality_table& t);

}  // namespace revnet
