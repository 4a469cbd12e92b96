#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <revnet/corpus.hpp>

namespace revnet {

/// Editor-reviewer assignment pairs dated strictly before `cutoff`, deduplicated.
struct bipartite_snapshot {
  date cutoff;
  std::set<std::string> editor_ids;
  std::set<std::string> reviewer_ids;
  std::set<std::pair<std::string, std::string>> assignments;  // (editor, reviewer)

  bool operator==(const bipartite_snapshot&) const = default;
};

bipartite_snapshot snapshot(const corpus& c, date cutoff);

/// Undirected simple reviewer-reviewer graph. Nodes are indexed densely in
/// ascending id order; adjacency lists are sorted.
class review_graph {
 public:
  review_graph() = default;
  review_graph(date cutoff, std::vector<std::string> node_ids,
               std::vector<std::vector<int>> adjacency,
               std::vector<std::vector<int>> shared_editors = {});

  /// Graph over `n` nodes named by zero-padded index, so id order equals index order.
  static review_graph from_edges(std::size_t n, std::span<const std::pair<int, int>> edges);

  date cutoff() const { return cutoff_; }
  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_; }

  const std::string& id(std::size_t node) const { return ids_[node]; }
  std::span<const std::string> ids() const { return ids_; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  std::span<const int> neighbors(std::size_t node) const { return adj_[node]; }
  bool has_edge(std::size_t u, std::size_t v) const;
  /// Number of editors the two endpoints share; 0 if not adjacent.
  int shared_editors(std::size_t u, std::size_t v) const;

  /// Edges as (u, v) with u < v in lexicographic order.
  std::vector<std::pair<int, int>> edges() const;

 private:
  date cutoff_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> multiplicity_;
  std::size_t edges_ = 0;
};

/// One-mode projection: reviewers are adjacent iff they share at least one editor.
/// Every reviewer of the snapshot is a node, isolated ones included.
review_graph project(const bipartite_snapshot& snap);

/// Distinct (editor, reviewer) pairs ordered by the date they first appear.
/// A snapshot at any cutoff is a prefix of this list, which lets callers key
/// caches by prefix length instead of by date.
class assignment_timeline {
 public:
  struct entry {
    date first_seen;
    std::string editor_id;
    std::string reviewer_id;
  };

  explicit assignment_timeline(const corpus& c);

  std::span<const entry> entries() const { return entries_; }
  /// Number of pairs first seen strictly before `cutoff`.
  std::size_t prefix_length(date cutoff) const;
  bipartite_snapshot snapshot_prefix(std::size_t length, date cutoff) const;

 private:
  std::vector<entry> entries_;
};

/// Writes `u v` per line (dense indices) and an `index id` node map.
void write_edge_list(const review_graph& g, std::ostream& edges, std::ostream& nodes);

}  // namespace revnet
