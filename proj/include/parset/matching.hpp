#pragma once

#include <vector>

namespace parset {

/// Maximum bipartite matching by Hopcroft-Karp (layered BFS + DFS augment),
/// O(E sqrt(V)). adjacency[i] lists the right vertices adjacent to left i.
struct BipartiteMatching {
  std::vector<int> match_left;   // right partner of each left vertex, or -1
  std::vector<int> match_right;  // left partner of each right vertex, or -1
  int size = 0;
};

BipartiteMatching hopcroft_karp(const std::vector<std::vector<int>>& adjacency, int right_count);

/// Dinic max-flow over real capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  /// Returns the edge id, usable with flow_on().
  int add_edge(int from, int to, double capacity);
  double solve(int source, int sink);
  double flow_on(int edge_id) const;

 private:
  struct Edge {
    int to;
    int rev;
    double cap;
    double original;
  };
  bool bfs(int s, int t);
  double dfs(int v, int t, double pushed);

  std::vector<std::vector<Edge>> graph_;
  std::vector<std::pair<int, int>> edge_index_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace parset
