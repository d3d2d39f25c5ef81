#include "parset/core.hpp"

#include <limits>

namespace parset {

std::string to_string(NormKind norm) { return norm == NormKind::L2 ? "L2" : "Linf"; }

NormKind norm_from_string(const std::string& name) {
  if (name == "L2" || name == "l2" || name == "ball" || name == "B") return NormKind::L2;
  if (name == "Linf" || name == "linf" || name == "cube" || name == "C") return NormKind::Linf;
  throw std::invalid_argument("unknown norm '" + name + "' (expected L2 or Linf)");
}

PointSet::PointSet(Eigen::MatrixXd coords) : coords_(std::move(coords)) {
  if (coords_.rows() < 1) throw std::invalid_argument("PointSet: dimension must be positive");
  if (coords_.cols() < 1) throw std::invalid_argument("PointSet: empty point set");
  if (!coords_.allFinite()) throw std::invalid_argument("PointSet: non-finite coordinate");
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("PointSet: empty point set");
  const auto d = rows.front().size();
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != d) {
      throw std::invalid_argument("PointSet: ragged row " + std::to_string(j) + " has " +
                                  std::to_string(rows[j].size()) + " coordinates, expected " +
                                  std::to_string(d));
    }
    for (std::size_t k = 0; k < d; ++k) coords(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = rows[j][k];
  }
  return PointSet(std::move(coords));
}

ParallelSetSpec::ParallelSetSpec(PointSet base_points, NormKind norm_kind, double r)
    : base(std::move(base_points)), norm(norm_kind), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ParallelSetSpec: radius must be positive and finite");
  }
}

double distance_to_set(const Eigen::Ref<const Eigen::VectorXd>& x, const PointSet& a, NormKind norm) {
  if (x.size() != a.dim()) {
    throw std::invalid_argument("distance_to_set: point has dimension " + std::to_string(x.size()) +
                                ", set has " + std::to_string(a.dim()));
  }
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    best = std::min(best, norm_of(x - a.point(i), norm));
  }
  return best;
}

bool contains_dilated(const ParallelSetSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                      double extra) {
  if (x.size() != spec.dim()) {
    throw std::invalid_argument("contains: dimension mismatch");
  }
  const double reach = spec.radius + extra;
  const auto& pts = spec.base.coords();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    if (norm_of(x - pts.col(i), spec.norm) <= reach) return true;
  }
  return false;
}

bool contains(const ParallelSetSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return contains_dilated(spec, x, 0.0);
}

double log_unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  const double half = 0.5 * d;
  return half * std::log(M_PI) - std::lgamma(1.0 + half);
}

DimensionConstants dimension_constants(int d) {
  const double omega = std::exp(log_unit_ball_volume(d));
  return {d, omega, d * omega};
}

PackingResult greedy_packing(const PointSet& a, double r, NormKind norm) {
  if (!(r > 0.0)) throw std::invalid_argument("greedy_packing: radius must be positive");
  std::vector<Eigen::Index> chosen;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    bool separated = true;
    for (auto j : chosen) {
      if (!(norm_of(a.point(i) - a.point(j), norm) > r)) {
        separated = false;
        break;
      }
    }
    if (separated) chosen.push_back(i);
  }
  Eigen::MatrixXd reps(a.dim(), static_cast<Eigen::Index>(chosen.size()));
  for (std::size_t k = 0; k < chosen.size(); ++k) reps.col(static_cast<Eigen::Index>(k)) = a.point(chosen[k]);
  const auto count = static_cast<Eigen::Index>(chosen.size());
  return {PointSet(std::move(reps)), std::move(chosen), count, r, norm};
}

}  // namespace parset
