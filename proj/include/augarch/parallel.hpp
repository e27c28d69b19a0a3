#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace augarch {

/// Worker count resolution: explicit value, else AUGARCH_WORKERS, else
/// hardware concurrency.
inline unsigned resolve_workers(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AUGARCH_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

template <typename F>
void parallel_replicates(std::uint64_t reps, unsigned workers, F&& fn);

/// Deterministic replicate aggregation: replicates are grouped into a fixed
/// number of chunks, each chunk accumulates sequentially, and chunk results
/// combine in index order. Output bytes are then identical for any worker
/// count or schedule.
template <typename Acc, typename RepFn, typename CombineFn>
Acc chunked_replicates(std::uint64_t reps, unsigned workers, std::size_t chunks, const Acc& init,
                       RepFn&& per_rep, CombineFn&& combine) {
  if (chunks < 1) chunks = 1;
  if (reps > 0 && chunks > reps) chunks = static_cast<std::size_t>(reps);
  std::vector<Acc> slots(chunks, init);
  parallel_replicates(chunks, workers, [&](std::uint64_t ci) {
    const std::uint64_t lo = reps * ci / chunks;
    const std::uint64_t hi = reps * (ci + 1) / chunks;
    for (std::uint64_t r = lo; r < hi; ++r) per_rep(r, slots[static_cast<std::size_t>(ci)]);
  });
  Acc total = init;
  for (const Acc& s : slots) combine(total, s);
  return total;
}

/// Runs fn(rep) for rep in [0, reps) across workers. Each replicate must
/// derive its randomness from (seed, rep) and write only to its own slot;
/// results are then independent of the worker count and schedule.
template <typename F>
void parallel_replicates(std::uint64_t reps, unsigned workers, F&& fn) {
  workers = resolve_workers(workers);
  if (workers <= 1 || reps < 2) {
    for (std::uint64_t r = 0; r < reps; ++r) fn(r);
    return;
  }
  if (workers > reps) workers = static_cast<unsigned>(reps);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < workers; ++t) {
    const std::uint64_t lo = reps * t / workers;
    const std::uint64_t hi = reps * (t + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::uint64_t r = lo; r < hi; ++r) fn(r);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace augarch
