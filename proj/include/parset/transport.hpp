#pragma once

#include <Eigen/Dense>

#include <vector>

namespace parset {

struct PlanEntry {
  int source;
  int target;
  double mass;
};

struct TransportSolution {
  double cost = 0.0;
  std::vector<PlanEntry> plan;
};

/// Exact balanced transportation problem (supply and demand both sum to
/// one) by successive shortest paths with Johnson potentials on the dense
/// bipartite residual graph. Intended for a few hundred atoms per side.
TransportSolution solve_transport(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                                  const Eigen::VectorXd& demand);

}  // namespace parset
