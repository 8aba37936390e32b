#pragma once

#include <thread>
#include <utility>
#include <vector>

namespace mlakit {

/// Splits [0, n) into at most `threads` contiguous chunks, runs
/// `fn(lo, hi) -> R` on each (concurrently when threads > 1), and returns the
/// per-chunk results in chunk order.  Callers fold the vector left-to-right,
/// so the merged result is identical for every thread count.
template <class R, class Fn>
std::vector<R> run_chunked(int n, int threads, Fn fn) {
  if (threads < 1) threads = 1;
  if (n < 0) n = 0;
  if (threads > n) threads = n > 0 ? n : 1;
  if (threads <= 1) {
    std::vector<R> out;
    out.push_back(fn(0, n));
    return out;
  }
  std::vector<R> out(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int base = n / threads;
  const int extra = n % threads;
  int lo = 0;
  for (int t = 0; t < threads; ++t) {
    const int hi = lo + base + (t < extra ? 1 : 0);
    pool.emplace_back([&out, &fn, t, lo, hi] { out[t] = fn(lo, hi); });
    lo = hi;
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace mlakit
