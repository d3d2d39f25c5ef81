#include "parset/region.hpp"

namespace parset {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Eigen::Index region_dim(const Region& region) {
  return std::visit(overloaded{
                        [](const HalfSpace& h) { return h.normal.size(); },
                        [](const Ball& b) { return b.center.size(); },
                        [](const FullSpace& f) { return f.dim; },
                        [](const EmptySet& e) { return e.dim; },
                        [](const ParallelSetSpec& s) { return s.dim(); },
                    },
                    region);
}

bool region_contains(const Region& region, const Eigen::Ref<const Eigen::VectorXd>& x, double dilation) {
  if (x.size() != region_dim(region)) throw std::invalid_argument("region: dimension mismatch");
  return std::visit(
      overloaded{
          [&](const HalfSpace& h) { return h.normal.dot(x) <= h.offset + dilation * h.normal.norm(); },
          [&](const Ball& b) { return (x - b.center).norm() <= b.radius + dilation; },
          [](const FullSpace&) { return true; },
          [](const EmptySet&) { return false; },
          [&](const ParallelSetSpec& s) {
            if (dilation < 0.0) {
              throw std::invalid_argument("region: erosion of a parallel set is not supported");
            }
            return contains_dilated(s, x, dilation);
          },
      },
      region);
}

bool complement_dilation_contains(const Region& region, const Eigen::Ref<const Eigen::VectorXd>& x,
                                  double r) {
  if (x.size() != region_dim(region)) throw std::invalid_argument("region: dimension mismatch");
  return std::visit(
      overloaded{
          [&](const HalfSpace& h) { return h.normal.dot(x) >= h.offset - r * h.normal.norm(); },
          [&](const Ball& b) { return (x - b.center).norm() >= b.radius - r; },
          [](const FullSpace&) { return false; },
          [](const EmptySet&) { return true; },
          [](const ParallelSetSpec&) -> bool {
            throw std::invalid_argument(
                "decision region: complement dilation of a union of balls has no exact form");
          },
      },
      region);
}

std::optional<double> bounding_radius(const Region& region) {
  return std::visit(overloaded{
                        [](const HalfSpace&) -> std::optional<double> { return std::nullopt; },
                        [](const Ball& b) -> std::optional<double> { return b.center.norm() + b.radius; },
                        [](const FullSpace&) -> std::optional<double> { return std::nullopt; },
                        [](const EmptySet&) -> std::optional<double> { return 0.0; },
                        [](const ParallelSetSpec& s) -> std::optional<double> {
                          double far = 0.0;
                          for (Eigen::Index i = 0; i < s.base.size(); ++i) far = std::max(far, s.base.point(i).norm());
                          const double reach = s.norm == NormKind::L2 ? s.radius : s.radius * std::sqrt(double(s.dim()));
                          return far + reach;
                        },
                    },
                    region);
}

}  // namespace parset
