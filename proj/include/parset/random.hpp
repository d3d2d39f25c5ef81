#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace parset {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag + 0x9E3779B97F4A7C15ULL));
}

/// Counter-based generator: output k of stream s under key is a pure
/// function of (key, s, k). Each Monte Carlo sample owns one stream, so the
/// sample set does not depend on how samples are split across workers.
class CounterRng {
 public:
  CounterRng(std::uint64_t key, std::uint64_t stream)
      : base_(mix64(key ^ mix64(stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t next_u64() { return mix64(base_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open0() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the spare variate is kept.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = uniform_open0();
    const double v = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u));
    spare_ = rad * std::sin(2.0 * M_PI * v);
    has_spare_ = true;
    return rad * std::cos(2.0 * M_PI * v);
  }

  void fill_normal(Eigen::Ref<Eigen::VectorXd> out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal();
  }

  void fill_uniform(Eigen::Ref<Eigen::VectorXd> out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = uniform();
  }

  /// Uniform direction on the unit sphere S^{d-1}.
  void fill_direction(Eigen::Ref<Eigen::VectorXd> out) {
    double n = 0.0;
    do {
      fill_normal(out);
      n = out.norm();
    } while (n == 0.0);
    out /= n;
  }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Running count / mean / M2 with Chan's pairwise merge.
struct MomentAccumulator {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const MomentAccumulator& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

inline constexpr std::uint64_t kSampleBlock = 4096;

/// Runs block_fn(begin, end) -> Acc over fixed-size sample blocks on up to
/// `workers` threads, then merges block results pairwise in block order.
/// Block boundaries never depend on the worker count, so the result is
/// bit-identical for any `workers`.
template <typename Acc, typename BlockFn>
Acc parallel_reduce_blocks(std::uint64_t samples, unsigned workers, BlockFn block_fn) {
  const std::uint64_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<Acc> partial(blocks);
  auto run_range = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t b = first; b < blocks; b += stride) {
      const std::uint64_t begin = b * kSampleBlock;
      const std::uint64_t end = std::min(samples, begin + kSampleBlock);
      partial[b] = block_fn(begin, end);
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::uint64_t>(blocks, 1))));
  if (w == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) pool.emplace_back(run_range, t, w);
  }
  if (partial.empty()) return Acc{};
  for (std::size_t width = 1; width < partial.size(); width *= 2) {
    for (std::size_t i = 0; i + width < partial.size(); i += 2 * width) partial[i].merge(partial[i + width]);
  }
  return partial.front();
}

struct HitCounter {
  std::uint64_t n = 0;
  std::uint64_t hits = 0;
  void merge(const HitCounter& o) {
    n += o.n;
    hits += o.hits;
  }
};

}  // namespace parset
