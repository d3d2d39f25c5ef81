#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace parset {

/// The two norm bodies a parallel set can be built from: the Euclidean
/// unit ball B and the unit cube C = [-1, 1]^d.
enum class NormKind { L2, Linf };

std::string to_string(NormKind norm);
NormKind norm_from_string(const std::string& name);

template <typename Derived>
double norm_of(const Eigen::MatrixBase<Derived>& v, NormKind norm) {
  return norm == NormKind::L2 ? v.norm() : v.template lpNorm<Eigen::Infinity>();
}

/// Finite, nonempty set of points in R^d. Points are stored as the columns of
/// a dim x size matrix.
class PointSet {
 public:
  explicit PointSet(Eigen::MatrixXd coords);

  /// One inner vector per point; rejects ragged input.
  static PointSet from_rows(const std::vector<std::vector<double>>& rows);

  Eigen::Index dim() const { return coords_.rows(); }
  Eigen::Index size() const { return coords_.cols(); }

  auto point(Eigen::Index i) const { return coords_.col(i); }
  const Eigen::MatrixXd& coords() const { return coords_; }

  Eigen::VectorXd min_corner() const { return coords_.rowwise().minCoeff(); }
  Eigen::VectorXd max_corner() const { return coords_.rowwise().maxCoeff(); }

 private:
  Eigen::MatrixXd coords_;
};

/// A r-parallel set base + radius * K.
struct ParallelSetSpec {
  ParallelSetSpec(PointSet base_points, NormKind norm_kind, double r);

  PointSet base;
  NormKind norm;
  double radius;

  Eigen::Index dim() const { return base.dim(); }
};

struct DimensionConstants {
  int dim;
  double omega_d;      // volume of the unit ball
  double big_omega_d;  // surface area of the unit sphere, dim * omega_d
};

struct PackingResult {
  PointSet representatives;
  std::vector<Eigen::Index> indices;  // positions in the input set
  Eigen::Index count;
  double radius;
  NormKind norm;
};

/// min over a of |x - a| in the chosen norm.
double distance_to_set(const Eigen::Ref<const Eigen::VectorXd>& x, const PointSet& a, NormKind norm);

/// Closed-set membership: distance_to_set(x) <= radius.
bool contains(const ParallelSetSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Membership in base + (radius + extra) K, used for shells and dilations.
bool contains_dilated(const ParallelSetSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                      double extra);

/// omega_d = pi^{d/2} / Gamma(1 + d/2), evaluated through lgamma.
DimensionConstants dimension_constants(int d);

/// Log of the unit-ball volume; stays finite where omega_d underflows.
double log_unit_ball_volume(int d);

/// First-fit maximal packing: a point is accepted iff it is strictly farther
/// than r from every previously accepted representative. The result is a
/// maximal r-packing, so its count witnesses the packing-number bounds, but it
/// need not be optimal.
PackingResult greedy_packing(const PointSet& a, double r, NormKind norm);

}  // namespace parset
