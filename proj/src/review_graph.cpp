#include <revnet/review_graph.hpp>

#include <algorithm>
#include <map>
#include <ostream>
#include <string>

namespace revnet {

bipartite_snapshot snapshot(const corpus& c, date cutoff) {
  bipartite_snapshot snap;
  snap.cutoff = cutoff;
  for (const auto& p : c.papers()) {
    if (p.submitted >= cutoff) continue;  // assignments never precede their submission
    for (const auto& a : p.assignments) {
      if (a.on >= cutoff) continue;
      snap.editor_ids.insert(a.editor_id);
      snap.reviewer_ids.insert(a.reviewer_id);
      snap.assignments.emplace(a.editor_id, a.reviewer_id);
    }
  }
  return snap;
}

review_graph::review_graph(date cutoff, std::vector<std::string> node_ids,
                           std::vector<std::vector<int>> adjacency,
                           std::vector<std::vector<int>> shared_editors)
    : cutoff_(cutoff), ids_(std::move(node_ids)), adj_(std::move(adjacency)),
      multiplicity_(std::move(shared_editors)) {
  for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
  for (const auto& nb : adj_) edges_ += nb.size();
  edges_ /= 2;
}

review_graph review_graph::from_edges(std::size_t n, std::span<const std::pair<int, int>> edges) {
  std::vector<std::string> ids(n);
  const auto width = std::to_string(n).size();
  for (std::size_t i = 0; i < n; ++i) {
    auto s = std::to_string(i);
    ids[i] = std::string(width - s.size(), '0') + s;
  }
  std::vector<std::vector<int>> adj(n);
  for (auto [u, v] : edges) {
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return review_graph(date::min(), std::move(ids), std::move(adj));
}

std::optional<std::size_t> review_graph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool review_graph::has_edge(std::size_t u, std::size_t v) const {
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), static_cast<int>(v));
}

int review_graph::shared_editors(std::size_t u, std::size_t v) const {
  const auto& nb = adj_[u];
  auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<int>(v));
  if (it == nb.end() || *it != static_cast<int>(v)) return 0;
  if (multiplicity_.empty()) return 1;
  return multiplicity_[u][it - nb.begin()];
}

std::vector<std::pair<int, int>> review_graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edges_);
  for (std::size_t u = 0; u < adj_.size(); ++u)
    for (int v : adj_[u])
      if (static_cast<int>(u) < v) out.emplace_back(static_cast<int>(u), v);
  return out;
}

review_graph project(const bipartite_snapshot& snap) {
  std::vector<std::string> ids(snap.reviewer_ids.begin(), snap.reviewer_ids.end());
  std::unordered_map<std::string_view, int> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<int>(i));

  std::map<std::string_view, std::vector<int>> pools;
  for (const auto& [editor, reviewer] : snap.assignments) pools[editor].push_back(index.at(reviewer));

  std::vector<std::map<int, int>> counts(ids.size());
  for (const auto& [editor, pool] : pools) {
    for (std::size_t a = 0; a < pool.size(); ++a)
      for (std::size_t b = a + 1; b < pool.size(); ++b) {
        ++counts[pool[a]][pool[b]];
        ++counts[pool[b]][pool[a]];
      }
  }

  std::vector<std::vector<int>> adj(ids.size()), mult(ids.size());
  for (std::size_t u = 0; u < ids.size(); ++u) {
    adj[u].reserve(counts[u].size());
    mult[u].reserve(counts[u].size());
    for (const auto& [v, k] : counts[u]) {
      adj[u].push_back(v);
      mult[u].push_back(k);
    }
  }
  return review_graph(snap.cutoff, std::move(ids), std::move(adj), std::move(mult));
}

assignment_timeline::assignment_timeline(const corpus& c) {
  std::map<std::pair<std::string, std::string>, date> first;
  for (const auto& p : c.papers())
    for (const auto& a : p.assignments) {
      auto key = std::make_pair(a.editor_id, a.reviewer_id);
      auto it = first.find(key);
      if (it == first.end()) first.emplace(std::move(key), a.on);
      else if (a.on < it->second) it->second = a.on;
    }
  entries_.reserve(first.size());
  for (const auto& [key, d] : first) entries_.push_back({d, key.first, key.second});
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const entry& a, const entry& b) { return a.first_seen < b.first_seen; });
}

std::size_t assignment_timeline::prefix_length(date cutoff) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), cutoff,
                             [](const entry& e, date d) { return e.first_seen < d; });
  return static_cast<std::size_t>(it - entries_.begin());
}

bipartite_snapshot assignment_timeline::snapshot_prefix(std::size_t length, date cutoff) const {
  bipartite_snapshot snap;
  snap.cutoff = cutoff;
  for (std::size_t i = 0; i < length && i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    snap.editor_ids.insert(e.editor_id);
    snap.reviewer_ids.insert(e.reviewer_id);
    snap.assignments.emplace(e.editor_id, e.reviewer_id);
  }
  return snap;
}

void write_edge_list(const review_graph& g, std::ostream& edges, std::ostream& nodes) {
  for (auto [u, v] : g.edges()) edges << u << ' ' << v << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) nodes << i << ' ' << g.id(i) << '\n';
}

}  // namespace revnet
