#pragma once

// Bounded worker pool over independent jobs. Results come back in job
// order; the first failing job (by index) rethrows its exception.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace combspec {

/// COMB_SPECTRA_THREADS if set to a positive integer, else detected cores
/// (at least 1). Throws std::invalid_argument on a malformed variable.
std::size_t default_thread_count();

/// Flag value if given, else default_thread_count().
std::size_t resolve_thread_count(std::optional<std::size_t> flag);

template <class F>
auto parallel_map(std::size_t jobs, std::size_t threads, F&& f)
    -> std::vector<std::invoke_result_t<F&, std::size_t>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<std::optional<R>> slots(jobs);
  std::vector<std::exception_ptr> errors(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n = std::max<std::size_t>(1, std::min(threads, jobs));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(jobs);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace combspec
