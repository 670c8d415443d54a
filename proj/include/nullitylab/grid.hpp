#pragma once

// Deterministic sample grids over parameter boxes and a small worker pool.
// Results are written into preallocated slots so a fixed seed reproduces
// byte-identical reports regardless of the thread count.

#include <cstdlib>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nlab {

struct SampleGrid {
  std::vector<int> counts;
  std::vector<std::pair<double, double>> ranges;
  std::uint64_t seed = 0;
  double jitter = 0.0;  // fraction of a cell, applied deterministically

  int dims() const { return static_cast<int>(counts.size()); }

  int total() const {
    int t = 1;
    for (int c : counts) t *= c;
    return t;
  }

  std::vector<double> point(int linear) const {
    std::vector<double> p(dims());
    int rest = linear;
    std::mt19937_64 gen(seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(linear));
    std::uniform_real_distribution<double> uni(-0.5, 0.5);
    for (int d = 0; d < dims(); ++d) {
      const int i = rest % counts[d];
      rest /= counts[d];
      const auto& r = ranges[d];
      const double span = r.second - r.first;
      const double cell = counts[d] > 1 ? span / (counts[d] - 1) : 0.0;
      double x = counts[d] > 1 ? r.first + cell * i : 0.5 * (r.first + r.second);
      if (jitter > 0.0 && counts[d] > 1) {
        double offset = jitter * cell * uni(gen);
        // keep jittered points inside the range
        x = std::min(r.second, std::max(r.first, x + offset));
      }
      p[d] = x;
    }
    return p;
  }

  std::vector<std::vector<double>> points() const {
    std::vector<std::vector<double>> out;
    out.reserve(total());
    for (int i = 0; i < total(); ++i) out.push_back(point(i));
    return out;
  }
};

inline int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("NULLITYLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) hw = std::min(hw, v);
  }
  return hw;
}

template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int workers = std::min(worker_count(), std::max(1, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace nlab
