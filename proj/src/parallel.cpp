#include "inradius/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace inradius {

namespace {

std::atomic<int> g_threads{1};

constexpr std::ptrdiff_t kBlock = 4096;

double pairwise(std::span<const double> v) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return v[0];
  const auto half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

int thread_count() { return g_threads.load(); }

void parallel_for(std::ptrdiff_t n, const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& body) {
  if (n <= 0) return;
  const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(thread_count(), n);
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    const std::ptrdiff_t begin = w * chunk;
    const std::ptrdiff_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

double deterministic_sum(std::ptrdiff_t n, const std::function<double(std::ptrdiff_t)>& term) {
  if (n <= 0) return 0.0;
  const std::ptrdiff_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  parallel_for(blocks, [&](std::ptrdiff_t b0, std::ptrdiff_t b1) {
    for (std::ptrdiff_t b = b0; b < b1; ++b) {
      double s = 0.0;
      const std::ptrdiff_t end = std::min(n, (b + 1) * kBlock);
      for (std::ptrdiff_t i = b * kBlock; i < end; ++i) s += term(i);
      partial[static_cast<std::size_t>(b)] = s;
    }
  });
  return pairwise(partial);
}

double deterministic_sum(std::span<const double> values) {
  return deterministic_sum(static_cast<std::ptrdiff_t>(values.size()),
                           [values](std::ptrdiff_t i) { return values[static_cast<std::size_t>(i)]; });
}

}  // namespace inradius
