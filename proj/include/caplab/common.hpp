#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace caplab {

inline constexpr double kPi = 3.14159265358979323846;

// Lebesgue measure of the unit ball in R^k (omega_k); omega_0 = 1.
double unit_ball_volume(int k);

// ---------------------------------------------------------------------------
// Error taxonomy. Exit-code mapping lives in the CLI:
//   theorem_violation -> 2, precondition/domain/resource -> 3, io -> 4.
// ---------------------------------------------------------------------------

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid mathematical input (parameter out of range, zero volume, ...).
struct domain_error : error {
  using error::error;
};

// A gate or contract the caller must satisfy first (normalize, deficit gate).
struct precondition_error : error {
  using error::error;
};

// Exceeded a configured budget (cell count, iteration budget).
struct resource_error : error {
  using error::error;
};

// Solver stagnation or a numeric identity that should hold but does not.
struct numeric_error : error {
  using error::error;
};

// A paper inequality failed beyond tolerance: always an implementation bug.
struct theorem_violation : error {
  using error::error;
};

struct io_error : error {
  using error::error;
};

// ---------------------------------------------------------------------------
// Shortest round-trip formatting for doubles. All file output goes through
// this so reruns are byte-identical.
// ---------------------------------------------------------------------------

std::string fmt_double(double x);

// FNV-1a 64-bit, used for the output manifest.
std::uint64_t fnv1a64(const void* data, std::size_t len);

// ---------------------------------------------------------------------------
// Deterministic RNG. std::mt19937_64 is portable, but the std distributions
// are not; we draw uniforms by hand so corpora are identical everywhere.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
  }

  // Independent substream, detached from this generator's future draws.
  Rng split() { return Rng(next_u64() ^ 0xd1b54a32d192ed03ull); }

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Index-chunked parallel for. Results must be written to disjoint slots so
// reductions stay deterministic; `jobs <= 0` means hardware concurrency.
// ---------------------------------------------------------------------------

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  int jobs = 0);

inline double sq(double x) { return x * x; }

}  // namespace caplab
