#pragma once

#include "parset/core.hpp"

#include <optional>
#include <vector>

namespace parset::exact2d {

/// Exposed arc of circle(center_index, r), counterclockwise from theta_start
/// to theta_end. theta_start lies in [0, 2pi); theta_end may exceed 2pi when
/// the arc wraps through angle zero.
struct Arc {
  Eigen::Index center_index;
  double theta_start;
  double theta_end;

  double measure() const { return theta_end - theta_start; }
};

struct ArcDecomposition {
  std::vector<Arc> arcs;
  PointSet centers;  // as given, before deduplication
  double radius;
};

enum class Orientation { Horizontal, Vertical };

/// Exposed piece of a square edge. A horizontal segment lies on y =
/// fixed_coord and spans x in [span_start, span_end]; outward_sign is the sign
/// of the outward normal along the fixed axis.
struct Segment {
  Eigen::Index center_index;
  Orientation orientation;
  double fixed_coord;
  double span_start;
  double span_end;
  int outward_sign;

  double length() const { return span_end - span_start; }
};

struct SegmentDecomposition {
  std::vector<Segment> segments;
  PointSet centers;
  double radius;
};

/// Centers closer than this (per coordinate, L-infinity) are merged.
inline constexpr double kDedupTolerance = 1e-12;
/// Exposed arcs shorter than this (radians) are treated as tangency points.
inline constexpr double kMinArc = 1e-12;

ArcDecomposition disk_union_boundary(const PointSet& centers, double r);
double disk_union_perimeter(const PointSet& centers, double r);
double disk_union_perimeter(const ArcDecomposition& boundary);
/// Area by Green's theorem over the exposed arcs.
double disk_union_area(const PointSet& centers, double r);
double disk_union_area(const ArcDecomposition& boundary);

SegmentDecomposition square_union_boundary(const PointSet& centers, double r);
double square_union_perimeter(const PointSet& centers, double r);
double square_union_perimeter(const SegmentDecomposition& boundary);
double square_union_area(const SegmentDecomposition& boundary);

struct StarShapedResult {
  bool star_shaped;
  std::optional<double> violating_angle;
};

/// Casts num_rays equally spaced rays from x0 and checks that on each ray the
/// disk union restricted to the ray is a single interval starting at x0.
/// Every center must lie within distance r of x0.
StarShapedResult star_shaped_check(const PointSet& centers, double r,
                                   const Eigen::Vector2d& x0, int num_rays = 4096);

/// Number of crossings of the square-union boundary by the horizontal line
/// y = level (vertical segments whose span strictly contains level).
int horizontal_line_crossings(const SegmentDecomposition& boundary, double level);
int vertical_line_crossings(const SegmentDecomposition& boundary, double level);

}  // namespace parset::exact2d
