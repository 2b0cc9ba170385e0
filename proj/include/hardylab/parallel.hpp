#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace hardylab {

// Worker count: HARDYLAB_THREADS if set and positive, else the hardware
// concurrency (at least 1).
std::size_t thread_count();

// Runs body(i) for i in [0, n). Iterations are split into contiguous
// blocks; body must only write to storage owned by index i. Calls made
// from inside a worker run serially on that worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise (tree) summation. Result depends only on the input order.
double pairwise_sum(std::span<const double> values);

// Compensated accumulator.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace hardylab
