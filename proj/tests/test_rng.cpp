#include <doctest.h>

#include "proxtext/bootstrap.hpp"
#include "proxtext/rng.hpp"

#include <cmath>
#include <set>

using proxtext::Rng;

TEST_CASE("streams are reproducible and distinct") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double va = a.uniform();
    CHECK(va == b.uniform());
    CHECK(va >= 0.0);
    CHECK(va < 1.0);
  }
  Rng d(42);
  bool differs = false;
  for (int i = 0; i < 10; ++i) differs |= d.uniform() != c.uniform();
  CHECK(differs);
  CHECK(proxtext::derive_seed(1, 0) != proxtext::derive_seed(1, 1));
  CHECK(proxtext::derive_seed(1, 0) != proxtext::derive_seed(2, 0));
}

TEST_CASE("normal draws have unit moments") {
  Rng rng(3);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.01);
}

TEST_CASE("index stays in range and covers it") {
  Rng rng(9);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto k = rng.index(7);
    CHECK(k < 7);
    seen.insert(k);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS(rng.index(0));
}

TEST_CASE("percentile interpolates linearly") {
  using proxtext::bootstrap::percentile;
  CHECK(percentile({3.0, 1.0, 2.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(percentile({1.0, 2.0}, 0.0) == 1.0);
  CHECK(percentile({1.0, 2.0}, 1.0) == 2.0);
  // numpy.percentile(range(1, 201), 2.5) == 5.975
  std::vector<double> v;
  for (int i = 1; i <= 200; ++i) v.push_back(i);
  CHECK(percentile(v, 0.025) == doctest::Approx(5.975));
  CHECK(percentile(v, 0.975) == doctest::Approx(195.025));
}

TEST_CASE("replicates are identical regardless of thread count") {
  auto body = [](std::size_t b, Rng& rng) -> std::optional<double> {
    if (b == 3) return std::nullopt;
    return rng.uniform();
  };
  const auto serial = proxtext::bootstrap::run_replicates(50, 11, {1}, body);
  const auto parallel = proxtext::bootstrap::run_replicates(50, 11, {4}, body);
  CHECK(serial == parallel);
  const auto interval = proxtext::bootstrap::percentile_interval(serial);
  CHECK(interval.failed == 1);
  CHECK(interval.used == 49);
}

TEST_CASE("too many failed replicates abort") {
  std::vector<std::optional<double>> reps(20, 1.0);
  reps[0] = reps[1] = std::nullopt;
  CHECK_NOTHROW(proxtext::bootstrap::percentile_interval(reps));
  reps[2] = std::nullopt;
  CHECK_THROWS_AS(proxtext::bootstrap::percentile_interval(reps), proxtext::bootstrap::BootstrapError);
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(5);
  auto rows = proxtext::bootstrap::shuffled_rows(100, rng);
  std::set<std::size_t> s(rows.begin(), rows.end());
  CHECK(s.size() == 100);
  CHECK(*s.rbegin() == 99);
}
