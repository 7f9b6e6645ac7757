// util.hpp
//
// Small numeric helpers shared across modules: compensated summation and a
// deterministic block-parallel map. Parallel results are merged in block
// order, so output never depends on the worker count.

#ifndef EULERPROD_UTIL_HPP
#define EULERPROD_UTIL_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace eulerprod {

// Neumaier variant of Kahan summation.
class CompensatedSum {
 public:
  void add(long double x) {
    long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

// Applies fn to every block index in [0, n_blocks) using at most `jobs`
// threads. Each block writes only its own slot; callers reduce the slots in
// ascending block order afterwards.
inline void run_blocks(std::size_t n_blocks, unsigned jobs,
                       const std::function<void(std::size_t)>& fn) {
  if (n_blocks == 0) return;
  if (jobs <= 1 || n_blocks == 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t n_threads = std::min<std::size_t>(jobs, n_blocks);
  std::vector<std::exception_ptr> errors(n_threads);
  for (std::size_t w = 0; w < n_threads; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::size_t b = w; b < n_blocks; b += n_threads) fn(b);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace eulerprod

#endif  // EULERPROD_UTIL_HPP
