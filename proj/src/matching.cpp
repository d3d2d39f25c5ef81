#include "parset/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace parset {

namespace {
constexpr double kFlowEps = 1e-15;
}  // namespace

BipartiteMatching hopcroft_karp(const std::vector<std::vector<int>>& adjacency, int right_count) {
  const int n = static_cast<int>(adjacency.size());
  constexpr int kInf = std::numeric_limits<int>::max();
  BipartiteMatching m;
  m.match_left.assign(n, -1);
  m.match_right.assign(right_count, -1);
  std::vector<int> dist(n);

  auto bfs = [&]() {
    std::queue<int> q;
    bool found = false;
    for (int u = 0; u < n; ++u) {
      if (m.match_left[u] < 0) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : adjacency[u]) {
        const int w = m.match_right[v];
        if (w < 0) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  std::vector<std::size_t> next(n);
  // Iterative DFS along the layered graph; stack holds left vertices.
  auto augment = [&](int root) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int u = stack.back();
      if (next[u] == adjacency[u].size()) {
        dist[u] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++next[stack.back()];
        continue;
      }
      const int v = adjacency[u][next[u]];
      const int w = m.match_right[v];
      if (w < 0) {
        for (const int left : stack) {
          const int right = adjacency[left][next[left]];
          m.match_left[left] = right;
          m.match_right[right] = left;
        }
        return true;
      }
      if (dist[w] == dist[u] + 1) {
        stack.push_back(w);
      } else {
        ++next[u];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(next.begin(), next.end(), 0);
    for (int u = 0; u < n; ++u) {
      if (m.match_left[u] < 0 && augment(u)) ++m.size;
    }
  }
  return m;
}

MaxFlow::MaxFlow(int nodes) : graph_(nodes), level_(nodes), iter_(nodes) {}

int MaxFlow::add_edge(int from, int to, double capacity) {
  if (capacity < 0.0) throw std::invalid_argument("MaxFlow: negative capacity");
  graph_[from].push_back({to, static_cast<int>(graph_[to].size()), capacity, capacity});
  graph_[to].push_back({from, static_cast<int>(graph_[from].size()) - 1, 0.0, 0.0});
  edge_index_.emplace_back(from, static_cast<int>(graph_[from].size()) - 1);
  return static_cast<int>(edge_index_.size()) - 1;
}

double MaxFlow::flow_on(int edge_id) const {
  const auto [from, pos] = edge_index_.at(edge_id);
  const auto& e = graph_[from][pos];
  return e.original - e.cap;
}

bool MaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> q;
  level_[s] = 0;
  q.push(s);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const auto& e : graph_[v]) {
      if (e.cap > kFlowEps && level_[e.to] < 0) {
        level_[e.to] = level_[v] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::dfs(int v, int t, double pushed) {
  if (v == t) return pushed;
  for (auto& i = iter_[v]; i < graph_[v].size(); ++i) {
    auto& e = graph_[v][i];
    if (e.cap <= kFlowEps || level_[e.to] != level_[v] + 1) continue;
    const double got = dfs(e.to, t, std::min(pushed, e.cap));
    if (got > kFlowEps) {
      e.cap -= got;
      graph_[e.to][e.rev].cap += got;
      return got;
    }
  }
  return 0.0;
}

double MaxFlow::solve(int source, int sink) {
  double total = 0.0;
  while (bfs(source, sink)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    while (true) {
      const double f = dfs(source, sink, std::numeric_limits<double>::infinity());
      if (f <= kFlowEps) break;
      total += f;
    }
  }
  return total;
}

}  // namespace parset
