#include "caplab/common.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>

namespace caplab {

double unit_ball_volume(int k) {
  if (k < 0) throw domain_error("unit_ball_volume: negative dimension");
  // pi^{k/2} / Gamma(k/2 + 1)
  return std::pow(kPi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int jobs) {
  if (count == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned workers = jobs > 0 ? unsigned(jobs) : hw;
  workers = std::min<std::size_t>(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr eptr;
  std::mutex guard;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count || failed.load()) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(guard);
          if (!failed.exchange(true)) eptr = std::current_exception();
          break;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (eptr) std::rethrow_exception(eptr);
}

}  // namespace caplab
