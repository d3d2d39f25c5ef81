#pragma once

#include "parset/core.hpp"

#include <optional>
#include <variant>

namespace parset {

/// {x : normal . x <= offset}; normal need not be unit length.
struct HalfSpace {
  Eigen::VectorXd normal;
  double offset;
};

/// Closed Euclidean ball.
struct Ball {
  Eigen::VectorXd center;
  double radius;
};

struct FullSpace {
  Eigen::Index dim;
};

struct EmptySet {
  Eigen::Index dim;
};

/// Closed-set membership oracle with an exact dilation rule. ParallelSetSpec
/// regions dilate in their own norm; the others dilate by Euclidean balls.
using Region = std::variant<HalfSpace, Ball, FullSpace, EmptySet, ParallelSetSpec>;

Eigen::Index region_dim(const Region& region);

/// Membership in region (+) dilation * K. A negative dilation is an erosion
/// and is only supported where it is exact (half-spaces, balls, full/empty).
bool region_contains(const Region& region, const Eigen::Ref<const Eigen::VectorXd>& x,
                     double dilation = 0.0);

/// Membership in the closed r-dilation of the complement, (R^c)_r.
bool complement_dilation_contains(const Region& region, const Eigen::Ref<const Eigen::VectorXd>& x,
                                  double r);

/// L2 radius of a ball about the origin that contains the region, if bounded.
std::optional<double> bounding_radius(const Region& region);

}  // namespace parset
