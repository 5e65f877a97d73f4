#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace commutant {

inline constexpr const char* kVersion = "1.0.0";

// Thrown when an enumeration would exceed its step budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an exact identity that must hold is found to fail.
class PropertyViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Limits {
  std::uint64_t budget = 1'000'000'000ULL;
  unsigned threads = 1;
};

// Default worker count: COMMUTANT_THREADS if set, otherwise 1.
inline unsigned default_threads() {
  if (const char* env = std::getenv("COMMUTANT_THREADS")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

inline std::uint64_t checked_pow(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base)
      throw BudgetError("integer power " + std::to_string(base) + "^" + std::to_string(exp) +
                        " overflows 64 bits");
    r *= base;
  }
  return r;
}

inline void require_budget(std::uint64_t steps, const Limits& limits, const std::string& what) {
  if (steps > limits.budget)
    throw BudgetError(what + ": " + std::to_string(steps) + " steps exceeds budget " +
                      std::to_string(limits.budget));
}

// Shared step counter for enumerations whose size is only known while running.
// Outcome is independent of scheduling: it fails iff the total exceeds the budget.
class StepMeter {
 public:
  explicit StepMeter(std::uint64_t budget) : budget_(budget) {}
  void add(std::uint64_t steps, const char* what) {
    auto total = used_.fetch_add(steps, std::memory_order_relaxed) + steps;
    if (total > budget_)
      throw BudgetError(std::string(what) + ": enumeration exceeds budget " +
                        std::to_string(budget_));
  }
  std::uint64_t used() const { return used_.load(); }

 private:
  std::uint64_t budget_;
  std::atomic<std::uint64_t> used_{0};
};

// Splits [0, total) into contiguous chunks, runs `work(begin, end)` on each and
// folds the partial results in chunk order with `merge`. The chunking depends only
// on `total`, so the folded result does not depend on the number of threads.
template <class Result, class Work, class Merge>
Result parallel_reduce(std::uint64_t total, unsigned threads, Result init, Work work, Merge merge) {
  if (total == 0) return init;
  const std::uint64_t chunks = std::min<std::uint64_t>(total, 64);
  const std::uint64_t step = (total + chunks - 1) / chunks;
  const std::uint64_t n_chunks = (total + step - 1) / step;
  std::vector<Result> partial(n_chunks, init);
  std::vector<std::exception_ptr> errors(n_chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        std::uint64_t b = c * step;
        partial[c] = work(b, std::min(total, b + step));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_chunks)));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Result acc = std::move(init);
  for (auto& r : partial) acc = merge(std::move(acc), std::move(r));
  return acc;
}

}  // namespace commutant
