#include "proxtext/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace proxtext::bootstrap {

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw BootstrapError("percentile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw BootstrapError("percentile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<std::size_t> resample_rows(std::size_t n, Rng& rng) {
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = rng.index(n);
  return rows;
}

std::vector<std::size_t> shuffled_rows(std::size_t n, Rng& rng) {
  std::vector<std::size_t> rows(n);
  for (std::size_t i = 0; i < n; ++i) rows[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(rows[i - 1], rows[rng.index(i)]);
  return rows;
}

std::vector<std::optional<double>> run_replicates(
    std::size_t count, std::uint64_t seed, const Parallelism& par,
    const std::function<std::optional<double>(std::size_t, Rng&)>& replicate) {
  std::vector<std::optional<double>> results(count);
  unsigned threads = par.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : par.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));

  auto run_one = [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    results[b] = replicate(b, rng);
  };
  if (threads <= 1) {
    for (std::size_t b = 0; b < count; ++b) run_one(b);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t b = next++; b < count; b = next++) {
        try {
          run_one(b);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (error) std::rethrow_exception(error);
  return results;
}

PercentileInterval percentile_interval(const std::vector<std::optional<double>>& replicates,
                                       double max_failed_fraction) {
  PercentileInterval out;
  std::vector<double> values;
  for (const auto& r : replicates) {
    if (r) values.push_back(*r);
    else ++out.failed;
  }
  out.used = values.size();
  if (values.empty() ||
      static_cast<double>(out.failed) > max_failed_fraction * static_cast<double>(replicates.size())) {
    throw BootstrapError("bootstrap aborted: " + std::to_string(out.failed) + " of " +
                         std::to_string(replicates.size()) + " replicates failed");
  }
  out.low = percentile(values, 0.025);
  out.high = percentile(values, 0.975);
  return out;
}

}  // namespace proxtext::bootstrap
