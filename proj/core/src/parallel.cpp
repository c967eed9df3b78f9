#include "msreg/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace msreg {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned max_threads) {
  if (count == 0) return;

  unsigned hw = max_threads ? max_threads : std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned n_threads = static_cast<unsigned>(
      count < static_cast<std::size_t>(hw) ? count : hw);

  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace msreg
