#include "parset/transport.hpp"

#include <limits>
#include <stdexcept>

namespace parset {

namespace {
constexpr double kMassEps = 1e-14;
}

TransportSolution solve_transport(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                                  const Eigen::VectorXd& demand) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (supply.size() != n || demand.size() != m) throw std::invalid_argument("solve_transport: shape mismatch");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, m);
  Eigen::VectorXd left = supply, right = demand;
  // Node potentials: sources 0..n-1, sinks n..n+m-1. Keeping
  // cost(i,j) + pot[i] - pot[n+j] >= 0 on every residual edge.
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(n + m);
  for (int j = 0; j < m; ++j) pot[n + j] = cost.col(j).minCoeff();

  std::vector<double> dist(n + m);
  std::vector<int> pred(n + m);
  std::vector<char> done(n + m);

  while (true) {
    bool any_supply = false, any_demand = false;
    for (int i = 0; i < n; ++i) any_supply |= left[i] > kMassEps;
    for (int j = 0; j < m; ++j) any_demand |= right[j] > kMassEps;
    if (!any_supply || !any_demand) break;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred.begin(), pred.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (int i = 0; i < n; ++i) {
      if (left[i] > kMassEps) dist[i] = 0.0;
    }
    // Dense Dijkstra.
    for (int step = 0; step < n + m; ++step) {
      int u = -1;
      for (int v = 0; v < n + m; ++v) {
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      }
      if (u < 0) break;
      done[u] = 1;
      if (u < n) {
        for (int j = 0; j < m; ++j) {
          const int v = n + j;
          if (done[v]) continue;
          const double nd = dist[u] + cost(u, j) + pot[u] - pot[v];
          if (nd < dist[v]) {
            dist[v] = nd;
            pred[v] = u;
          }
        }
      } else {
        const int j = u - n;
        for (int i = 0; i < n; ++i) {
          if (done[i] || left[i] > kMassEps || flow(i, j) <= kMassEps) continue;
          const double nd = dist[u] - cost(i, j) + pot[u] - pot[i];
          if (nd < dist[i]) {
            dist[i] = nd;
            pred[i] = u;
          }
        }
      }
    }

    int sink = -1;
    for (int j = 0; j < m; ++j) {
      if (right[j] > kMassEps && dist[n + j] < kInf && (sink < 0 || dist[n + j] < dist[n + sink])) sink = j;
    }
    if (sink < 0) throw std::runtime_error("solve_transport: unbalanced problem");
    const double reach = dist[n + sink];
    for (int v = 0; v < n + m; ++v) pot[v] += std::min(dist[v], reach);

    // Bottleneck along the path.
    double push = right[sink];
    int v = n + sink;
    while (pred[v] >= 0) {
      const int u = pred[v];
      if (u >= n) push = std::min(push, flow(v, u - n));  // backward edge sink u -> source v
      v = u;
    }
    push = std::min(push, left[v]);

    v = n + sink;
    while (pred[v] >= 0) {
      const int u = pred[v];
      if (u < n) {
        flow(u, v - n) += push;
      } else {
        flow(v, u - n) -= push;
      }
      v = u;
    }
    left[v] -= push;
    right[sink] -= push;
  }

  TransportSolution out;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      if (flow(i, j) > kMassEps) {
        out.plan.push_back({i, j, flow(i, j)});
        out.cost += flow(i, j) * cost(i, j);
      }
    }
  }
  return out;
}

}  // namespace parset
