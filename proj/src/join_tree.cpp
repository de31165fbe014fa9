#include "ajl/join_tree.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "ajl/errors.hpp"

namespace ajl {

Hypergraph Hypergraph::of(const Query& q) {
  Hypergraph h;
  h.vertices = q.variables();
  for (const auto& atom : q.body()) {
    std::vector<std::size_t> edge;
    for (const auto& v : atom.vars) {
      edge.push_back(static_cast<std::size_t>(std::find(h.vertices.begin(), h.vertices.end(), v) -
                                              h.vertices.begin()));
    }
    std::sort(edge.begin(), edge.end());
    h.edges.push_back(std::move(edge));
  }
  return h;
}

GyoResult gyo_reduce(const Hypergraph& h) {
  const std::size_t n = h.edges.size();
  std::vector<std::set<std::size_t>> edges;
  for (const auto& e : h.edges) edges.emplace_back(e.begin(), e.end());
  std::vector<bool> alive(n, true);
  std::size_t remaining = n;
  GyoResult result;

  bool progress = true;
  while (remaining > 1 && progress) {
    progress = false;

    // Ear vertices: occur in exactly one live edge.
    std::vector<std::size_t> occurrences(h.vertices.size(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (auto v : edges[i]) ++occurrences[v];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (auto it = edges[i].begin(); it != edges[i].end();) {
        if (occurrences[*it] == 1) {
          it = edges[i].erase(it);
          progress = true;
        } else {
          ++it;
        }
      }
    }

    // Lowest-index edge contained in another live edge (lowest such container).
    for (std::size_t i = 0; i < n && remaining > 1; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || !alive[j]) continue;
        if (std::includes(edges[j].begin(), edges[j].end(), edges[i].begin(), edges[i].end())) {
          alive[i] = false;
          --remaining;
          result.links.emplace_back(i, j);
          progress = true;
          break;
        }
      }
      if (progress && !alive[i]) break;
    }
  }

  result.acyclic = remaining <= 1;
  if (!result.acyclic) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      result.residue_edges.push_back(i);
      result.residue.emplace_back(edges[i].begin(), edges[i].end());
    }
  }
  return result;
}

bool is_acyclic(const Hypergraph& h) { return gyo_reduce(h).acyclic; }

JoinTree::JoinTree(std::size_t root, std::vector<int> parent) : root_(root), parent_(std::move(parent)) {
  const std::size_t n = parent_.size();
  if (root_ >= n) throw ContractError("join tree root out of range");
  if (parent_[root_] != -1) throw ContractError("join tree root must have no parent");
  children_.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    if (i == root_) continue;
    if (parent_[i] < 0 || static_cast<std::size_t>(parent_[i]) >= n || static_cast<std::size_t>(parent_[i]) == i) {
      throw ContractError("join tree node " + std::to_string(i) + " has an invalid parent");
    }
    children_[static_cast<std::size_t>(parent_[i])].push_back(i);
  }
  // Every node must reach the root (no cycles among parent links).
  if (pre_order().size() != n) throw ContractError("join tree parent links do not form a tree");
}

JoinTree JoinTree::from_edges(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                              std::size_t root) {
  std::vector<std::vector<std::size_t>> adj(nodes);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> parent(nodes, -2);
  parent[root] = -1;
  std::deque<std::size_t> queue{root};
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    std::sort(adj[u].begin(), adj[u].end());
    for (auto v : adj[u]) {
      if (parent[v] != -2) continue;
      parent[v] = static_cast<int>(u);
      queue.push_back(v);
    }
  }
  if (std::find(parent.begin(), parent.end(), -2) != parent.end() || edges.size() + 1 != nodes) {
    throw ContractError("edges do not form a spanning tree");
  }
  return JoinTree(root, std::move(parent));
}

std::vector<std::size_t> JoinTree::neighbors(std::size_t node) const {
  std::vector<std::size_t> out = children_[node];
  if (parent_[node] >= 0) out.push_back(static_cast<std::size_t>(parent_[node]));
  std::sort(out.begin(), out.end());
  return out;
}

bool JoinTree::adjacent(std::size_t a, std::size_t b) const {
  return parent_[a] == static_cast<int>(b) || parent_[b] == static_cast<int>(a);
}

std::vector<std::size_t> JoinTree::pre_order() const {
  std::vector<std::size_t> out;
  std::vector<std::size_t> stack{root_};
  while (!stack.empty() && out.size() <= parent_.size()) {
    auto u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (auto it = children_[u].rbegin(); it != children_[u].rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<std::size_t> JoinTree::post_order() const {
  std::vector<std::size_t> out;
  std::function<void(std::size_t)> visit = [&](std::size_t u) {
    for (auto c : children_[u]) visit(c);
    out.push_back(u);
  };
  visit(root_);
  return out;
}

std::vector<std::size_t> JoinTree::bfs_order() const {
  std::vector<std::size_t> out{root_};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto c : children_[out[i]]) out.push_back(c);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> JoinTree::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    if (parent_[i] >= 0) out.emplace_back(static_cast<std::size_t>(parent_[i]), i);
  }
  return out;
}

JoinTree JoinTree::rerooted(std::size_t new_root) const { return from_edges(size(), edges(), new_root); }

bool satisfies_connectedness(const JoinTree& t, const Query& q) {
  if (t.size() != q.size()) return false;
  for (const auto& var : q.variables()) {
    std::vector<bool> has(q.size(), false);
    std::size_t count = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto& vs = q.atom(i).vars;
      if (std::find(vs.begin(), vs.end(), var) != vs.end()) {
        has[i] = true;
        start = i;
        ++count;
      }
    }
    // Flood fill within the atoms containing var.
    std::vector<bool> seen(q.size(), false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    std::size_t reached = 0;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      ++reached;
      for (auto v : t.neighbors(u)) {
        if (has[v] && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    if (reached != count) return false;
  }
  return true;
}

void validate_join_tree(const JoinTree& t, const Query& q) {
  if (t.size() != q.size()) {
    throw ContractError("join tree has " + std::to_string(t.size()) + " nodes but the query has " +
                        std::to_string(q.size()) + " atoms");
  }
  if (!satisfies_connectedness(t, q)) throw ContractError("tree violates the variable-connectedness property");
}

JoinTree build_join_tree(const Query& q) {
  auto h = Hypergraph::of(q);
  auto gyo = gyo_reduce(h);
  if (!gyo.acyclic) {
    std::vector<std::vector<std::string>> residue;
    std::string msg = "query is cyclic; GYO residue:";
    for (std::size_t k = 0; k < gyo.residue_edges.size(); ++k) {
      std::vector<std::string> names;
      msg += " " + q.atom(gyo.residue_edges[k]).relation + "(";
      for (std::size_t j = 0; j < gyo.residue[k].size(); ++j) {
        names.push_back(h.vertices[gyo.residue[k][j]]);
        msg += (j ? "," : "") + names.back();
      }
      msg += ")";
      residue.push_back(std::move(names));
    }
    throw AcyclicityError(msg, std::move(residue));
  }
  return JoinTree::from_edges(q.size(), gyo.links, 0);
}

namespace {

// Unrooted labelled trees on n >= 2 nodes via Prüfer sequences.
template <typename Visit>
void for_each_labelled_tree(std::size_t n, Visit&& visit) {
  if (n == 2) {
    visit(std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});
    return;
  }
  std::vector<std::size_t> seq(n - 2, 0);
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (auto s : seq) ++degree[s];
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (auto s : seq) {
      for (std::size_t leaf = 0; leaf < n; ++leaf) {
        if (degree[leaf] == 1) {
          edges.emplace_back(leaf, s);
          --degree[leaf];
          --degree[s];
          break;
        }
      }
    }
    std::size_t u = n, w = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (degree[i] == 1) (u == n ? u : w) = i;
    }
    edges.emplace_back(u, w);
    visit(edges);

    std::size_t pos = 0;
    while (pos < seq.size() && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == seq.size()) break;
  }
}

}  // namespace

std::vector<JoinTree> enumerate_join_trees(const Query& q, std::size_t max_atoms) {
  const std::size_t n = q.size();
  if (n > max_atoms) {
    throw EnumerationLimitError("query has " + std::to_string(n) + " atoms; enumeration bound is " +
                                std::to_string(max_atoms));
  }
  std::vector<JoinTree> out;
  if (n == 1) {
    out.emplace_back(0, std::vector<int>{-1});
    return out;
  }
  for_each_labelled_tree(n, [&](const auto& edges) {
    auto unrooted = JoinTree::from_edges(n, edges, 0);
    if (!satisfies_connectedness(unrooted, q)) return;
    for (std::size_t r = 0; r < n; ++r) out.push_back(unrooted.rerooted(r));
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_monotone_order(const JoinTree& t, const JoinOrder& o) {
  std::vector<bool> placed(t.size(), false);
  if (o.size() != t.size()) throw ContractError("join order is not a permutation of the tree's atoms");
  for (auto a : o) {
    if (a >= t.size() || placed[a]) throw ContractError("join order is not a permutation of the tree's atoms");
    placed[a] = true;
  }
  std::fill(placed.begin(), placed.end(), false);
  for (std::size_t k = 0; k < o.size(); ++k) {
    if (k > 0) {
      bool connected = false;
      for (auto nb : t.neighbors(o[k])) connected = connected || placed[nb];
      if (!connected) return false;
    }
    placed[o[k]] = true;
  }
  return true;
}

std::vector<JoinOrder> monotone_orders(const JoinTree& t) {
  std::vector<JoinOrder> out;
  JoinOrder prefix;
  std::vector<bool> placed(t.size(), false);
  std::function<void()> extend = [&] {
    if (prefix.size() == t.size()) {
      out.push_back(prefix);
      return;
    }
    for (std::size_t a = 0; a < t.size(); ++a) {
      if (placed[a]) continue;
      bool ok = prefix.empty();
      for (auto nb : t.neighbors(a)) ok = ok || placed[nb];
      if (!ok) continue;
      placed[a] = true;
      prefix.push_back(a);
      extend();
      prefix.pop_back();
      placed[a] = false;
    }
  };
  extend();
  return out;
}

}  // namespace ajl
