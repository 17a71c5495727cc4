#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "proxtext/rng.hpp"

namespace proxtext::bootstrap {

class BootstrapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Number of worker threads for replicate loops; 0 means hardware concurrency.
struct Parallelism {
  unsigned threads = 1;
};

/// Linear-interpolated percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);

/// Row indices drawn with replacement from [0, n).
std::vector<std::size_t> resample_rows(std::size_t n, Rng& rng);

/// Fisher-Yates permutation of [0, n).
std::vector<std::size_t> shuffled_rows(std::size_t n, Rng& rng);

/// Runs `replicate(b, rng_b)` for b in [0, count) where rng_b is seeded from
/// derive_seed(seed, b). Results land in slot b whatever the thread count,
/// so output is identical under any parallelism. A replicate returns nullopt
/// to mark itself failed.
std::vector<std::optional<double>> run_replicates(
    std::size_t count, std::uint64_t seed, const Parallelism& par,
    const std::function<std::optional<double>(std::size_t, Rng&)>& replicate);

struct PercentileInterval {
  double low = 0.0;
  double high = 0.0;
  std::size_t used = 0;
  std::size_t failed = 0;
};

/// 2.5/97.5 percentile interval over successful replicates. Throws when more
/// than `max_failed_fraction` of replicates failed.
PercentileInterval percentile_interval(const std::vector<std::optional<double>>& replicates,
                                       double max_failed_fraction = 0.10);

}  // namespace proxtext::bootstrap
