#include <doctest.h>

#include "proxtext/regress.hpp"
#include "proxtext/rng.hpp"
#include "proxtext/synth.hpp"

#include <cmath>
#include <numeric>

using namespace proxtext;

namespace {

double mean_of(const BinaryColumn& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

regress::LinearModel regress_y(const Dataset& d, const std::vector<std::string>& cols) {
  std::vector<RealColumn> storage;
  for (const auto& c : cols) storage.push_back(d.numeric_column(c));
  std::vector<std::span<const double>> spans(storage.begin(), storage.end());
  return regress::ols_fit(regress::DesignMatrix::from_columns(cols, spans), d.y);
}

}  // namespace

TEST_CASE("fully synthetic generator") {
  synth::SynthParams p;
  p.n = 100000;
  p.seed = 31;
  const auto d = synth::generate_fully_synthetic(p);

  SUBCASE("oracle prevalence") { CHECK(std::abs(mean_of(*d.u) - 0.48) < 0.01); }

  SUBCASE("outcome equation is recovered by oracle regression") {
    const auto m = regress_y(d, {"A", "U", "C"});
    CHECK(std::abs(m.coefficient("A") - 1.3) < 0.03);
    CHECK(std::abs(m.coefficient("U") - 0.8) < 0.03);
    CHECK(std::abs(m.coefficient("C") - 1.0) < 0.03);
  }

  SUBCASE("confounding through U is real") {
    const auto m = regress_y(d, {"A", "C"});
    CHECK(m.coefficient("A") - 1.3 > 0.1);
  }

  SUBCASE("block schema") {
    CHECK(d.blocks.size() == 4);
    for (const auto& name : standard_block_names()) {
      REQUIRE(d.blocks.count(name));
      CHECK(d.blocks.at(name).names == std::vector<std::string>{"X1", "X2", "X3", "X4"});
      CHECK(d.blocks.at(name).values.rows() == 100000);
    }
    CHECK(d.blocks.at("inf1").values != d.blocks.at("inf2").values);
  }

  SUBCASE("realisations are independent given U and C") {
    // X1 of train2 regressed on X1 of train1 plus U and C: partial slope ~ 0.
    Dataset view = d;
    view.extra["X1_a"] = d.blocks.at("train1").column("X1");
    view.extra["X1_b"] = d.blocks.at("train2").column("X1");
    std::vector<RealColumn> storage{view.extra["X1_a"], to_real(*d.u), d.covariate("C")};
    std::vector<std::span<const double>> spans(storage.begin(), storage.end());
    const auto x = regress::DesignMatrix::from_columns({"X1_a", "U", "C"}, spans);
    const auto& target = view.extra["X1_b"];
    const auto m = regress::ols_fit(x, target);
    // Standard error of the slope, computed from the residual variance.
    const Eigen::Map<const Eigen::VectorXd> yv(target.data(), target.size());
    const Eigen::VectorXd resid = yv - m.predict(x);
    const double sigma2 = resid.squaredNorm() / (target.size() - 4.0);
    Eigen::MatrixXd aug(x.rows(), 4);
    aug.col(0).setOnes();
    aug.rightCols(3) = x.values();
    const Eigen::MatrixXd cov = sigma2 * (aug.transpose() * aug).inverse();
    const double se = std::sqrt(cov(1, 1));
    CHECK(std::abs(m.coefficient("X1_a")) < 3 * se);
  }
}

TEST_CASE("generator determinism") {
  synth::SynthParams p;
  p.n = 500;
  p.seed = 5;
  const auto a = synth::generate_fully_synthetic(p);
  const auto b = synth::generate_fully_synthetic(p);
  CHECK(a.y == b.y);
  CHECK(a.a == b.a);
  CHECK(*a.u == *b.u);
  CHECK(a.blocks.at("inf2").values == b.blocks.at("inf2").values);
  p.seed = 6;
  const auto c = synth::generate_fully_synthetic(p);
  CHECK(a.y != c.y);
}

TEST_CASE("generator parameter validation") {
  synth::SynthParams p;
  p.n = 99;
  CHECK_THROWS_AS(synth::generate_fully_synthetic(p), DataError);
  p.n = 200;
  p.x1_u = std::nan("");
  CHECK_THROWS_AS(synth::generate_fully_synthetic(p), DataError);
}

TEST_CASE("semi-synthetic overlay") {
  SUBCASE("treatment probability matches the structural equation") {
    CHECK(regress::expit(1.0 * 1 + 0.9 * 1 + 0.9 * 0) == doctest::Approx(0.8698915256370021).epsilon(1e-12));
    CHECK(regress::expit(0.0) == 0.5);
  }

  Rng rng(8);
  const std::size_t n = 100000;
  RealColumn gender(n), age_raw(n);
  BinaryColumn u(n);
  for (std::size_t i = 0; i < n; ++i) {
    gender[i] = rng.bernoulli(0.45) ? 1.0 : 0.0;
    age_raw[i] = 64.0 + 15.0 * rng.normal();
    u[i] = rng.bernoulli(0.3) ? 1 : 0;
  }
  const auto age = regress::standardize(age_raw);

  SUBCASE("oracle regression recovers the effect") {
    synth::OverlayParams params;
    params.seed = 3;
    const auto d = synth::overlay_semi_synthetic({{"Gender", gender}, {"Age", age}}, u, params);
    const auto m = regress_y(d, {"A", "U", "Gender", "Age"});
    CHECK(std::abs(m.coefficient("A") - 1.3) < 0.03);
    CHECK(std::abs(m.coefficient("Gender") - 0.9) < 0.03);
    CHECK(*d.u == u);
  }

  SUBCASE("zero covariates and U=0 give a fair coin") {
    synth::OverlayParams params;
    params.seed = 1;
    const std::size_t m = 40000;
    const auto d = synth::overlay_semi_synthetic({{"Zero", RealColumn(m, 0.0)}}, BinaryColumn(m, 0), params);
    CHECK(std::abs(mean_of(d.a) - 0.5) < 0.01);
  }

  SUBCASE("unstandardized continuous covariates are rejected") {
    CHECK_THROWS_AS(synth::overlay_semi_synthetic({{"Age", age_raw}}, u, {}), DataError);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(synth::overlay_semi_synthetic({{"Gender", RealColumn(10, 1.0)}}, u, {}), DataError);
  }
}
