#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace lattice {

// Thrown when a guarded computation would exceed its configured budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

bool is_prime(std::int64_t n);

// Effective worker count: hardware concurrency capped by the
// LATTICE_APPROX_THREADS environment variable (values < 1 mean 1).
int max_threads();

// Chunked parallel loop over [begin, end). fn(i) must be safe to run
// concurrently for distinct i; results written to distinct slots stay
// deterministic regardless of the thread count.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

// FNV-1a over a byte string; used to fingerprint weight configurations.
std::uint64_t fnv1a64(const std::string& bytes);

// Shortest round-trip decimal for a double ("%.17g").
std::string format_double(double v);

}  // namespace lattice
