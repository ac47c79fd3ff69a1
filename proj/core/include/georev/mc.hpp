#pragma once

#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

#include "georev/rng.hpp"

namespace georev::mc {

/// Fixed chunk size for all Monte Carlo estimators. The sample budget is cut
/// into chunks, chunk i runs on a generator seeded with derive_seed(seed, i),
/// and per-chunk partial sums are reduced in chunk-index order. The result is
/// therefore bit-identical for any worker count or scheduling.
inline constexpr std::size_t kChunkSize = 8192;

/// Running sums for K jointly sampled components.
template <std::size_t K>
struct Moments {
  std::array<double, K> sum{};
  std::array<double, K> sum_sq{};
  std::size_t count = 0;

  void add(const std::array<double, K>& x) {
    for (std::size_t i = 0; i < K; ++i) {
      sum[i] += x[i];
      sum_sq[i] += x[i] * x[i];
    }
    ++count;
  }

  // Merge must be applied in a fixed order; see run_chunked.
  void merge(const Moments& other) {
    for (std::size_t i = 0; i < K; ++i) {
      sum[i] += other.sum[i];
      sum_sq[i] += other.sum_sq[i];
    }
    count += other.count;
  }

  double mean(std::size_t i) const { return sum[i] / static_cast<double>(count); }

  double variance(std::size_t i) const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double centered = sum_sq[i] - sum[i] * sum[i] / n;
    return centered > 0.0 ? centered / (n - 1.0) : 0.0;
  }

  double std_err(std::size_t i) const {
    return std::sqrt(variance(i) / static_cast<double>(count));
  }
};

inline unsigned resolve_workers(unsigned requested, std::size_t chunks) {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned w = requested == 0 ? hw : requested;
  if (static_cast<std::size_t>(w) > chunks) w = static_cast<unsigned>(chunks);
  return w == 0 ? 1 : w;
}

/// Chunked deterministic Monte Carlo driver.
/// `chunk_fn(rng, count, out)` must draw `count` samples from `rng` and
/// accumulate them into `out`. Chunks may run on any number of workers; the
/// reduction happens sequentially in chunk order afterwards.
template <std::size_t K, typename ChunkFn>
Moments<K> run_chunked(std::size_t budget, std::uint64_t seed, unsigned workers,
                       ChunkFn&& chunk_fn) {
  const std::size_t chunks = (budget + kChunkSize - 1) / kChunkSize;
  std::vector<Moments<K>> partial(chunks);

  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = c * kChunkSize;
    const std::size_t count = std::min(kChunkSize, budget - begin);
    Rng rng(derive_seed(seed, c));
    chunk_fn(rng, count, partial[c]);
  };

  const unsigned w = resolve_workers(workers, chunks);
  if (w <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (unsigned t = 0; t < w; ++t) {
      pool.emplace_back([&] {
        for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
          run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }

  Moments<K> total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace georev::mc
