#pragma once

// Deterministic parallel reduction: items are grouped into fixed-size
// blocks, each block is summed sequentially in index order, and block sums
// are combined by a fixed pairwise tree. The result is bit-identical for
// any worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace dimtrunc {

inline unsigned default_worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Pairwise sum of rows[lo, hi), each row of length width, into out.
inline void pairwise_reduce(const std::vector<double>& rows, std::size_t width, std::size_t lo,
                            std::size_t hi, std::span<double> out) {
  if (hi - lo == 1) {
    std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(lo * width), width, out.begin());
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  std::vector<double> right(width);
  pairwise_reduce(rows, width, lo, mid, out);
  pairwise_reduce(rows, width, mid, hi, right);
  for (std::size_t k = 0; k < width; ++k) out[k] += right[k];
}

inline constexpr std::size_t kReductionBlock = 64;

/// Sum over items i < count of a width-vector produced by a per-worker
/// callable. make_worker() is invoked once per thread and must return an
/// object callable as worker(i, span<double> item_out).
template <class MakeWorker>
std::vector<double> parallel_block_sums(std::size_t count, std::size_t width, unsigned workers,
                                        MakeWorker&& make_worker) {
  std::vector<double> total(width, 0.0);
  if (count == 0) return total;
  const std::size_t blocks = (count + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> block_sums(blocks * width, 0.0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto body = [&] {
    try {
      auto worker = make_worker();
      std::vector<double> item(width);
      for (std::size_t blk = next++; blk < blocks; blk = next++) {
        double* acc = block_sums.data() + blk * width;
        const std::size_t end = std::min(count, (blk + 1) * kReductionBlock);
        for (std::size_t i = blk * kReductionBlock; i < end; ++i) {
          worker(i, std::span<double>(item));
          for (std::size_t k = 0; k < width; ++k) acc[k] += item[k];
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    body();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
  pairwise_reduce(block_sums, width, 0, blocks, total);
  return total;
}

}  // namespace dimtrunc
