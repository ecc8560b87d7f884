/******************************************************************************
 * Fractional assignment with proportional value floors, solved to a polytope
 * vertex with exact rational arithmetic.
 *
 * The feasible region is
 *
 *     sum_j V_i(b_j) f_{i,j} >= V_i(M) e_i   (one floor per agent)
 *     sum_i f_{i,j}          <= 1            (one capacity per item)
 *     f >= 0
 *
 * and f_{i,j} = e_i is always feasible (entitlements sum to 1, and the row
 * then meets its floor with equality). Rather than running a simplex over
 * n*m variables, we start from that proportional point and cancel structures
 * in the bipartite support graph (edge = positive f):
 *
 *   1. Cycle cancellation. A cycle admits a direction that is balanced at
 *      every item (capacities unchanged) and at every agent except one base
 *      agent, whose row can only be pushed upward (floors are >=, so that is
 *      feasible). Moving until some f hits zero removes an edge. Repeating
 *      turns the support into a forest.
 *   2. Path cancellation. While a tree component holds two "free" endpoints
 *      (an agent strictly above its floor, or an item strictly below its
 *      capacity), a direction balanced everywhere in between moves slack from
 *      one endpoint to the other until an f hits zero, a row hits its floor,
 *      or a column hits its capacity.
 *
 * Both moves keep feasibility exactly and strictly shrink (support size +
 * free endpoints), so the procedure terminates. At the end no component has
 * a cycle admitting a balanced direction or two free endpoints, which pins
 * every support variable: the point is a vertex (basic), it has at most
 * n + m non-zeros, and every component is a tree or a tree plus one edge.
 *
 * Rounding then walks each component: tree components are rooted at an agent
 * and every item goes to the agent above it, so an agent loses at most its
 * parent item; in unicyclic components one cycle item is granted outright to
 * one of its two cycle agents and the remainder is handled as trees rooted so
 * that the losing agent loses nothing else. Every agent therefore keeps its
 * fractional row value minus at most one item.
 ******************************************************************************/

#include "wmms/lp.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace wmms {

std::size_t FractionalAssignment::nonzero_count() const {
  std::size_t count = 0;
  for (const auto& row : weights)
    for (const auto& w : row)
      if (w != 0) ++count;
  return count;
}

namespace {

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t size) : parent(size) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

// Node ids: agents are 0..n-1, items are n..n+m-1.
class Crossover {
 public:
  explicit Crossover(const Instance& instance)
      : inst_(instance), n_(instance.agent_count()), m_(instance.item_count()) {
    f_.assign(n_, std::vector<Rat>(m_, Rat(0)));
    row_floor_.resize(n_);
    row_value_.resize(n_);
    col_sum_.assign(m_, Rat(0));
    for (std::size_t i = 0; i < n_; ++i) {
      row_floor_[i] = inst_.entitlement(i) * inst_.total_value(i);
      for (std::size_t j = 0; j < m_; ++j) {
        if (inst_.value(i, j) > 0) {
          f_[i][j] = inst_.entitlement(i);
          col_sum_[j] += inst_.entitlement(i);
        }
      }
      row_value_[i] = row_floor_[i];  // proportional start meets floors exactly
    }
  }

  FractionalAssignment run() {
    while (cancel_one_cycle()) {
    }
    while (cancel_one_path()) {
    }
    FractionalAssignment result;
    result.agent_count = n_;
    result.item_count = m_;
    result.weights = std::move(f_);
    result.basic = true;
    if (result.nonzero_count() > n_ + m_)
      throw std::logic_error("crossover left more than n+m non-zero weights");
    return result;
  }

 private:
  std::size_t item_node(std::size_t j) const { return n_ + j; }
  bool is_agent(std::size_t node) const { return node < n_; }

  const Rat& edge_value(std::size_t node_a, std::size_t node_b) const {
    std::size_t agent = is_agent(node_a) ? node_a : node_b;
    std::size_t item = is_agent(node_a) ? node_b - n_ : node_a - n_;
    return inst_.value(agent, item);
  }
  Rat& edge_weight(std::size_t node_a, std::size_t node_b) {
    std::size_t agent = is_agent(node_a) ? node_a : node_b;
    std::size_t item = is_agent(node_a) ? node_b - n_ : node_a - n_;
    return f_[agent][item];
  }

  std::vector<std::vector<std::size_t>> support_adjacency() const {
    std::vector<std::vector<std::size_t>> adj(n_ + m_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        if (f_[i][j] != 0) {
          adj[i].push_back(item_node(j));
          adj[item_node(j)].push_back(i);
        }
    return adj;
  }

  // Tree path between two nodes; the adjacency must be a forest on support
  // edges (or restricted to recorded tree edges).
  static std::vector<std::size_t> bfs_path(const std::vector<std::vector<std::size_t>>& adj,
                                           std::size_t from, std::size_t to) {
    std::vector<std::size_t> parent(adj.size(), adj.size());
    std::deque<std::size_t> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      if (cur == to) break;
      for (std::size_t next : adj[cur])
        if (parent[next] == adj.size()) {
          parent[next] = cur;
          queue.push_back(next);
        }
    }
    std::vector<std::size_t> path;
    for (std::size_t cur = to;; cur = parent[cur]) {
      path.push_back(cur);
      if (cur == from) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  // Direction along a vertex path, balanced at every interior vertex: item
  // sums cancel, agent rows stay where they are. Signs alternate.
  std::vector<Rat> path_direction(const std::vector<std::size_t>& path) const {
    std::vector<Rat> d(path.size() - 1);
    d[0] = Rat(1);
    for (std::size_t t = 1; t < d.size(); ++t) {
      std::size_t w = path[t];
      if (!is_agent(w)) {
        d[t] = -d[t - 1];
      } else {
        const Rat& value_in = inst_.value(w, path[t - 1] - n_);
        const Rat& value_out = inst_.value(w, path[t + 1] - n_);
        d[t] = -d[t - 1] * value_in / value_out;
      }
    }
    return d;
  }

  void apply(const std::vector<std::size_t>& path, const std::vector<Rat>& d,
             const Rat& step) {
    for (std::size_t t = 0; t + 1 < path.size(); ++t)
      edge_weight(path[t], path[t + 1]) += step * d[t];
  }

  // Finds one cycle in the support graph and cancels it. Returns false when
  // the support is already a forest.
  bool cancel_one_cycle() {
    Dsu dsu(n_ + m_);
    std::vector<std::vector<std::size_t>> tree_adj(n_ + m_);
    std::size_t extra_a = 0, extra_b = 0;
    bool found = false;
    for (std::size_t i = 0; i < n_ && !found; ++i)
      for (std::size_t j = 0; j < m_ && !found; ++j) {
        if (f_[i][j] == 0) continue;
        if (dsu.unite(i, item_node(j))) {
          tree_adj[i].push_back(item_node(j));
          tree_adj[item_node(j)].push_back(i);
        } else {
          extra_a = i;
          extra_b = item_node(j);
          found = true;
        }
      }
    if (!found) return false;

    std::vector<std::size_t> loop = bfs_path(tree_adj, extra_a, extra_b);

    // Rotate so the loop starts at its lowest-index agent; that agent's row
    // is the only one the move may change.
    std::size_t base_pos = 0;
    for (std::size_t t = 1; t < loop.size(); ++t)
      if (is_agent(loop[t]) && loop[t] < loop[base_pos]) base_pos = t;
    std::rotate(loop.begin(), loop.begin() + static_cast<std::ptrdiff_t>(base_pos),
                loop.end());
    loop.push_back(loop.front());

    std::vector<Rat> d = path_direction(loop);
    std::size_t base = loop.front();
    Rat rate = inst_.value(base, loop[1] - n_) * d.front() +
               inst_.value(base, loop[loop.size() - 2] - n_) * d.back();
    if (rate < 0) {
      for (auto& x : d) x = -x;
      rate = -rate;
    }

    std::optional<Rat> step;
    for (std::size_t t = 0; t + 1 < loop.size(); ++t) {
      if (d[t] >= 0) continue;
      Rat cap = edge_weight(loop[t], loop[t + 1]) / -d[t];
      if (!step || cap < *step) step = std::move(cap);
    }
    apply(loop, d, *step);
    row_value_[base] += *step * rate;
    return true;
  }

  // Pairs two free endpoints of one tree component and moves until a weight
  // or an endpoint constraint becomes tight. Returns false when every
  // component has at most one free endpoint.
  bool cancel_one_path() {
    auto adj = support_adjacency();
    std::vector<bool> visited(n_ + m_, false);
    for (std::size_t start = 0; start < n_ + m_; ++start) {
      if (visited[start] || adj[start].empty()) continue;
      std::vector<std::size_t> agents_free, items_free;
      std::deque<std::size_t> queue{start};
      visited[start] = true;
      while (!queue.empty()) {
        std::size_t cur = queue.front();
        queue.pop_front();
        if (is_agent(cur)) {
          if (row_value_[cur] > row_floor_[cur]) agents_free.push_back(cur);
        } else if (col_sum_[cur - n_] < 1) {
          items_free.push_back(cur);
        }
        for (std::size_t next : adj[cur])
          if (!visited[next]) {
            visited[next] = true;
            queue.push_back(next);
          }
      }
      std::sort(agents_free.begin(), agents_free.end());
      std::sort(items_free.begin(), items_free.end());
      std::vector<std::size_t> free_nodes = agents_free;
      free_nodes.insert(free_nodes.end(), items_free.begin(), items_free.end());
      if (free_nodes.size() < 2) continue;

      std::size_t u = free_nodes[0], v = free_nodes[1];
      std::vector<std::size_t> path = bfs_path(adj, u, v);
      std::vector<Rat> d = path_direction(path);

      Rat rate_u = is_agent(u) ? Rat(inst_.value(u, path[1] - n_) * d.front()) : d.front();
      Rat rate_v = is_agent(v) ? Rat(inst_.value(v, path[path.size() - 2] - n_) * d.back())
                               : d.back();

      std::optional<Rat> step;
      auto tighten = [&step](Rat cap) {
        if (!step || cap < *step) step = std::move(cap);
      };
      for (std::size_t t = 0; t + 1 < path.size(); ++t)
        if (d[t] < 0) tighten(edge_weight(path[t], path[t + 1]) / -d[t]);
      if (is_agent(u) && rate_u < 0) tighten((row_value_[u] - row_floor_[u]) / -rate_u);
      if (!is_agent(u) && rate_u > 0) tighten((1 - col_sum_[u - n_]) / rate_u);
      if (is_agent(v) && rate_v < 0) tighten((row_value_[v] - row_floor_[v]) / -rate_v);
      if (!is_agent(v) && rate_v > 0) tighten((1 - col_sum_[v - n_]) / rate_v);

      apply(path, d, *step);
      if (is_agent(u))
        row_value_[u] += *step * rate_u;
      else
        col_sum_[u - n_] += *step * rate_u;
      if (is_agent(v))
        row_value_[v] += *step * rate_v;
      else
        col_sum_[v - n_] += *step * rate_v;
      return true;
    }
    return false;
  }

  const Instance& inst_;
  std::size_t n_, m_;
  std::vector<std::vector<Rat>> f_;
  std::vector<Rat> row_floor_, row_value_, col_sum_;
};

void verify_feasible(const Instance& instance, const FractionalAssignment& fa) {
  if (fa.agent_count != instance.agent_count() || fa.item_count != instance.item_count())
    throw ValidationError("assignment dimensions do not match instance");
  for (std::size_t j = 0; j < fa.item_count; ++j) {
    Rat col(0);
    for (std::size_t i = 0; i < fa.agent_count; ++i) {
      const Rat& w = fa.weights[i][j];
      if (w < 0 || w > 1) throw ValidationError("assignment weight outside [0,1]");
      col += w;
    }
    if (col > 1) throw ValidationError("item fractionally assigned more than once");
  }
  for (std::size_t i = 0; i < fa.agent_count; ++i) {
    Rat row(0);
    for (std::size_t j = 0; j < fa.item_count; ++j)
      row += instance.value(i, j) * fa.weights[i][j];
    if (row < instance.entitlement(i) * instance.total_value(i))
      throw ValidationError("assignment misses an agent's proportional floor");
  }
}

}  // namespace

FractionalAssignment build_and_solve_lp(const Instance& instance) {
  if (instance.item_count() == 0) {
    FractionalAssignment empty;
    empty.agent_count = instance.agent_count();
    empty.item_count = 0;
    empty.weights.assign(instance.agent_count(), {});
    empty.basic = true;
    return empty;
  }
  for (std::size_t i = 0; i < instance.agent_count(); ++i)
    if (instance.total_value(i) == 0)
      throw ValidationError("agent " + std::to_string(i + 1) +
                            " values the whole item set at zero");
  return Crossover(instance).run();
}

SupportGraph build_support_graph(const FractionalAssignment& assignment) {
  if (!assignment.basic)
    throw ValidationError("support graph requires a basic assignment");

  const std::size_t n = assignment.agent_count;
  const std::size_t m = assignment.item_count;
  SupportGraph graph;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (assignment.weights[i][j] != 0) graph.edges.push_back({i, j});

  Dsu dsu(n + m);
  for (const auto& e : graph.edges) dsu.unite(e.agent, n + e.item);

  std::vector<std::size_t> component_of(n + m, n + m);
  std::vector<std::size_t> vertex_count;
  for (std::size_t node = 0; node < n + m; ++node) {
    std::size_t root = dsu.find(node);
    if (component_of[root] == n + m) {
      component_of[root] = graph.components.size();
      graph.components.emplace_back();
      vertex_count.push_back(0);
    }
    component_of[node] = component_of[root];
  }
  std::vector<bool> counted(n + m, false);
  for (std::size_t idx = 0; idx < graph.edges.size(); ++idx) {
    const auto& e = graph.edges[idx];
    std::size_t c = component_of[e.agent];
    graph.components[c].push_back(idx);
    for (std::size_t node : {e.agent, n + e.item})
      if (!counted[node]) {
        counted[node] = true;
        ++vertex_count[c];
      }
  }

  // Drop edgeless singleton components, classify the rest.
  std::vector<std::vector<std::size_t>> kept;
  for (std::size_t c = 0; c < graph.components.size(); ++c) {
    if (graph.components[c].empty()) continue;
    std::size_t edges = graph.components[c].size();
    if (edges + 1 == vertex_count[c])
      graph.kinds.push_back(ComponentKind::tree);
    else if (edges == vertex_count[c])
      graph.kinds.push_back(ComponentKind::tree_plus_edge);
    else
      throw ValidationError("assignment support is denser than a pseudoforest");
    kept.push_back(std::move(graph.components[c]));
  }
  graph.components = std::move(kept);
  return graph;
}

namespace {

// Assign every item of a tree to the agent above it; only the root loses
// nothing and every other agent loses exactly its parent item.
void assign_tree_items(const std::vector<std::vector<std::size_t>>& adj, std::size_t n,
                       std::size_t root, std::vector<bool>& removed,
                       std::vector<std::vector<std::size_t>>& bundles,
                       std::vector<bool>& visited) {
  std::deque<std::size_t> queue{root};
  visited[root] = true;
  std::vector<std::size_t> parent(adj.size(), adj.size());
  parent[root] = root;
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    if (cur >= n) bundles[parent[cur]].push_back(cur - n);
    for (std::size_t next : adj[cur]) {
      if (removed[next] || visited[next]) continue;
      visited[next] = true;
      parent[next] = cur;
      queue.push_back(next);
    }
  }
}

}  // namespace

Allocation round_assignment(const Instance& instance,
                            const FractionalAssignment& assignment) {
  if (!assignment.basic)
    throw ValidationError("rounding requires a basic assignment");
  verify_feasible(instance, assignment);

  const std::size_t n = instance.agent_count();
  const std::size_t m = instance.item_count();
  std::vector<std::vector<std::size_t>> adj(n + m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (assignment.weights[i][j] != 0) {
        adj[i].push_back(n + j);
        adj[n + j].push_back(i);
      }

  std::vector<std::vector<std::size_t>> bundles(n);
  std::vector<bool> visited(n + m, false);
  std::vector<bool> removed(n + m, false);

  for (std::size_t start = 0; start < n + m; ++start) {
    if (visited[start] || adj[start].empty()) continue;

    // Collect the component.
    std::vector<std::size_t> nodes;
    std::deque<std::size_t> queue{start};
    std::vector<bool> in_component(n + m, false);
    in_component[start] = true;
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      nodes.push_back(cur);
      for (std::size_t next : adj[cur])
        if (!in_component[next]) {
          in_component[next] = true;
          queue.push_back(next);
        }
    }
    std::size_t edge_count = 0;
    for (std::size_t node : nodes) edge_count += adj[node].size();
    edge_count /= 2;

    if (edge_count + 1 == nodes.size()) {
      std::size_t root = n + m;
      for (std::size_t node : nodes)
        if (node < n && node < root) root = node;
      assign_tree_items(adj, n, root, removed, bundles, visited);
      continue;
    }
    if (edge_count != nodes.size())
      throw ValidationError("assignment support is denser than a pseudoforest");

    // Unicyclic: peel leaves to expose the cycle.
    std::vector<std::size_t> degree(n + m, 0);
    for (std::size_t node : nodes) degree[node] = adj[node].size();
    std::deque<std::size_t> leaves;
    std::vector<bool> on_cycle(n + m, false);
    for (std::size_t node : nodes)
      if (degree[node] == 1) leaves.push_back(node);
    std::vector<bool> peeled(n + m, false);
    while (!leaves.empty()) {
      std::size_t leaf = leaves.front();
      leaves.pop_front();
      peeled[leaf] = true;
      for (std::size_t next : adj[leaf])
        if (!peeled[next] && --degree[next] == 1) leaves.push_back(next);
    }
    for (std::size_t node : nodes) on_cycle[node] = !peeled[node];

    std::size_t cycle_item = n + m;
    for (std::size_t node : nodes)
      if (node >= n && on_cycle[node] && node < cycle_item) cycle_item = node;

    std::vector<std::size_t> cycle_agents;
    for (std::size_t next : adj[cycle_item])
      if (on_cycle[next]) cycle_agents.push_back(next);
    // Cycle neighbors are exactly two agents; pick the one valuing the item
    // more (ties to the lower index, and the list is ascending already).
    std::size_t receiver = cycle_agents[0];
    std::size_t loser = cycle_agents[1];
    if (instance.value(loser, cycle_item - n) > instance.value(receiver, cycle_item - n))
      std::swap(receiver, loser);

    bundles[receiver].push_back(cycle_item - n);
    removed[cycle_item] = true;
    visited[cycle_item] = true;

    // The piece holding both cycle agents is rooted at the loser, so the
    // loser's only loss is the granted cycle item; every other piece hangs
    // off one further neighbor of that item and is rooted there.
    assign_tree_items(adj, n, loser, removed, bundles, visited);
    for (std::size_t next : adj[cycle_item])
      if (!visited[next]) assign_tree_items(adj, n, next, removed, bundles, visited);
  }

  return Allocation::of(n, m, std::move(bundles));
}

std::vector<RoundingCertificate> rounding_certificates(const Instance& instance,
                                                       const Allocation& allocation) {
  std::vector<RoundingCertificate> certs;
  certs.reserve(instance.agent_count());
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    RoundingCertificate cert;
    cert.proportional_share = instance.entitlement(i) * instance.total_value(i);
    cert.max_item = Rat(0);
    for (std::size_t j = 0; j < instance.item_count(); ++j)
      if (instance.value(i, j) > cert.max_item) cert.max_item = instance.value(i, j);
    cert.received = bundle_value(instance, i, allocation, i);
    certs.push_back(std::move(cert));
  }
  return certs;
}

}  // namespace wmms
