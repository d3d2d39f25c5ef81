#include "parset/exact2d.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace parset::exact2d {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

using Interval = std::pair<double, double>;

void require_planar(const PointSet& centers, double r) {
  if (centers.dim() != 2) throw std::invalid_argument("exact2d: centers must be 2-dimensional");
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("exact2d: radius must be positive");
}

// Indices of the first occurrence of each distinct center.
std::vector<Eigen::Index> unique_centers(const PointSet& centers) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < centers.size(); ++i) {
    const bool dup = std::any_of(keep.begin(), keep.end(), [&](Eigen::Index j) {
      return (centers.point(i) - centers.point(j)).lpNorm<Eigen::Infinity>() <= kDedupTolerance;
    });
    if (!dup) keep.push_back(i);
  }
  return keep;
}

std::vector<Interval> merge_sorted(std::vector<Interval> v) {
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

// Complement of the open intervals in [lo, hi].
std::vector<Interval> gaps(const std::vector<Interval>& merged, double lo, double hi) {
  std::vector<Interval> out;
  double cur = lo;
  for (const auto& [s, e] : merged) {
    if (s > cur) out.emplace_back(cur, std::min(s, hi));
    cur = std::max(cur, e);
    if (cur >= hi) break;
  }
  if (cur < hi) out.emplace_back(cur, hi);
  return out;
}

std::vector<Arc> exposed_arcs(const PointSet& centers, const std::vector<Eigen::Index>& ids,
                              std::size_t which, double r) {
  const Eigen::Index i = ids[which];
  const Eigen::Vector2d ci = centers.point(i);
  std::vector<Interval> covered;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k == which) continue;
    const Eigen::Vector2d diff = centers.point(ids[k]) - ci;
    const double dist = diff.norm();
    if (!(dist < 2.0 * r)) continue;  // disjoint or tangent: covers at most one point
    const double half = std::acos(dist / (2.0 * r));
    double start = std::atan2(diff.y(), diff.x()) - half;
    start = std::fmod(start, kTwoPi);
    if (start < 0.0) start += kTwoPi;
    const double end = start + 2.0 * half;
    if (end > kTwoPi) {
      covered.emplace_back(start, kTwoPi);
      covered.emplace_back(0.0, end - kTwoPi);
    } else {
      covered.emplace_back(start, end);
    }
  }

  std::vector<Arc> arcs;
  if (covered.empty()) {
    arcs.push_back({i, 0.0, kTwoPi});
    return arcs;
  }
  auto open = gaps(merge_sorted(std::move(covered)), 0.0, kTwoPi);
  if (open.size() >= 2 && open.front().first == 0.0 && open.back().second == kTwoPi) {
    open.back().second = kTwoPi + open.front().second;
    open.erase(open.begin());
  }
  for (const auto& [s, e] : open) {
    if (e - s > kMinArc) arcs.push_back({i, s, e});
  }
  return arcs;
}

}  // namespace

ArcDecomposition disk_union_boundary(const PointSet& centers, double r) {
  require_planar(centers, r);
  const auto ids = unique_centers(centers);
  ArcDecomposition out{{}, centers, r};
  for (std::size_t k = 0; k < ids.size(); ++k) {
    auto arcs = exposed_arcs(centers, ids, k, r);
    out.arcs.insert(out.arcs.end(), arcs.begin(), arcs.end());
  }
  return out;
}

double disk_union_perimeter(const ArcDecomposition& boundary) {
  double total = 0.0;
  for (const auto& a : boundary.arcs) total += a.measure();
  return boundary.radius * total;
}

double disk_union_perimeter(const PointSet& centers, double r) {
  return disk_union_perimeter(disk_union_boundary(centers, r));
}

double disk_union_area(const ArcDecomposition& boundary) {
  // Each arc is traversed counterclockwise about its own center, which keeps
  // the union on the left for outer boundaries and hole boundaries alike.
  const double r = boundary.radius;
  double twice_area = 0.0;
  for (const auto& a : boundary.arcs) {
    const double cx = boundary.centers.coords()(0, a.center_index);
    const double cy = boundary.centers.coords()(1, a.center_index);
    twice_area += r * r * a.measure() + r * cx * (std::sin(a.theta_end) - std::sin(a.theta_start)) -
                  r * cy * (std::cos(a.theta_end) - std::cos(a.theta_start));
  }
  return 0.5 * twice_area;
}

double disk_union_area(const PointSet& centers, double r) {
  return disk_union_area(disk_union_boundary(centers, r));
}

SegmentDecomposition square_union_boundary(const PointSet& centers, double r) {
  require_planar(centers, r);
  const auto ids = unique_centers(centers);
  SegmentDecomposition out{{}, centers, r};
  const double min_length = 1e-12 * r;

  for (std::size_t k = 0; k < ids.size(); ++k) {
    const Eigen::Index i = ids[k];
    const double cx = centers.coords()(0, i), cy = centers.coords()(1, i);
    struct Edge {
      Orientation orientation;
      double fixed, lo, hi;
      int sign;
    };
    const Edge edges[4] = {
        {Orientation::Horizontal, cy - r, cx - r, cx + r, -1},
        {Orientation::Horizontal, cy + r, cx - r, cx + r, +1},
        {Orientation::Vertical, cx - r, cy - r, cy + r, -1},
        {Orientation::Vertical, cx + r, cy - r, cy + r, +1},
    };
    for (const auto& edge : edges) {
      const int fixed_axis = edge.orientation == Orientation::Horizontal ? 1 : 0;
      const int span_axis = 1 - fixed_axis;
      std::vector<Interval> covered;
      for (std::size_t m = 0; m < ids.size(); ++m) {
        if (m == k) continue;
        const double jf = centers.coords()(fixed_axis, ids[m]);
        const double js = centers.coords()(span_axis, ids[m]);
        // The edge is hidden where a point just outside it, along the outward
        // normal, lies in the other (closed) square.
        const bool steps_inside = edge.sign > 0 ? (jf - r <= edge.fixed && edge.fixed < jf + r)
                                                : (jf - r < edge.fixed && edge.fixed <= jf + r);
        // Collinear edges facing the same way belong to the lower index.
        const bool shared_face = m < k && edge.fixed == jf + edge.sign * r;
        if (steps_inside || shared_face) {
          const double lo = std::max(edge.lo, js - r), hi = std::min(edge.hi, js + r);
          if (hi > lo) covered.emplace_back(lo, hi);
        }
      }
      for (const auto& [s, e] : gaps(merge_sorted(std::move(covered)), edge.lo, edge.hi)) {
        if (e - s > min_length) out.segments.push_back({i, edge.orientation, edge.fixed, s, e, edge.sign});
      }
    }
  }
  return out;
}

double square_union_perimeter(const SegmentDecomposition& boundary) {
  double total = 0.0;
  for (const auto& s : boundary.segments) total += s.length();
  return total;
}

double square_union_perimeter(const PointSet& centers, double r) {
  return square_union_perimeter(square_union_boundary(centers, r));
}

double square_union_area(const SegmentDecomposition& boundary) {
  double twice_area = 0.0;
  for (const auto& s : boundary.segments) twice_area += s.outward_sign * s.fixed_coord * s.length();
  return 0.5 * twice_area;
}

StarShapedResult star_shaped_check(const PointSet& centers, double r, const Eigen::Vector2d& x0,
                                   int num_rays) {
  require_planar(centers, r);
  if (num_rays < 1) throw std::invalid_argument("star_shaped_check: num_rays must be positive");
  for (Eigen::Index i = 0; i < centers.size(); ++i) {
    if ((centers.point(i) - x0).norm() > r * (1.0 + 1e-12)) {
      throw std::invalid_argument("star_shaped_check: center " + std::to_string(i) +
                                  " lies outside B(x0; r)");
    }
  }
  const double join_tol = 1e-12 * r;
  for (int k = 0; k < num_rays; ++k) {
    const double theta = kTwoPi * k / num_rays;
    const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
    std::vector<Interval> hits;
    for (Eigen::Index i = 0; i < centers.size(); ++i) {
      const Eigen::Vector2d w = x0 - centers.point(i);
      const double b = w.dot(u);
      const double disc = b * b - (w.squaredNorm() - r * r);
      if (disc < 0.0) continue;
      const double root = std::sqrt(disc);
      const double hi = -b + root;
      if (hi < 0.0) continue;
      hits.emplace_back(std::max(0.0, -b - root), hi);
    }
    auto merged = merge_sorted(std::move(hits));
    // Join pieces separated only by rounding.
    std::vector<Interval> joined;
    for (const auto& iv : merged) {
      if (!joined.empty() && iv.first <= joined.back().second + join_tol) {
        joined.back().second = std::max(joined.back().second, iv.second);
      } else {
        joined.push_back(iv);
      }
    }
    const bool prefix = joined.size() == 1 && joined.front().first <= join_tol;
    if (!prefix) return {false, theta};
  }
  return {true, std::nullopt};
}

int horizontal_line_crossings(const SegmentDecomposition& boundary, double level) {
  int n = 0;
  for (const auto& s : boundary.segments) {
    if (s.orientation == Orientation::Vertical && s.span_start < level && level < s.span_end) ++n;
  }
  return n;
}

int vertical_line_crossings(const SegmentDecomposition& boundary, double level) {
  int n = 0;
  for (const auto& s : boundary.segments) {
    if (s.orientation == Orientation::Horizontal && s.span_start < level && level < s.span_end) ++n;
  }
  return n;
}

}  // namespace parset::exact2d
