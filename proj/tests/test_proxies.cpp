#include <doctest.h>

#include "proxtext/proxies.hpp"
#include "proxtext/synth.hpp"
#include "support/fixtures.hpp"

#include <filesystem>
#include <fstream>

using namespace proxtext;

namespace {

Dataset tiny_with_block(const std::vector<double>& x1) {
  Dataset d;
  d.a.assign(x1.size(), 0);
  d.y.assign(x1.size(), 0.0);
  FeatureBlock fb;
  fb.names = {"X1"};
  fb.values = Eigen::Map<const Eigen::VectorXd>(x1.data(), static_cast<Eigen::Index>(x1.size()));
  d.blocks["inf1"] = fb;
  return d;
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("threshold heuristic is strict") {
  const auto d = tiny_with_block({1.0, 1.1, std::nextafter(1.1, 2.0), 2.0, -5.0});
  const auto labels = proxies::predict(proxies::Threshold{"X1", 1.1}, d, "inf1");
  CHECK(labels == BinaryColumn{0, 0, 1, 1, 0});
  CHECK_THROWS_AS(proxies::predict(proxies::Threshold{"X9", 1.1}, d, "inf1"), DataError);
  CHECK_THROWS_AS(proxies::predict(proxies::Threshold{"X1", 1.1}, d, "inf2"), DataError);
}

TEST_CASE("external predictions pass through") {
  auto d = tiny_with_block({0, 0, 0});
  d.extra["flan"] = {1, 0, 1};
  CHECK(proxies::predict(proxies::External{"flan"}, d, "") == BinaryColumn{1, 0, 1});
  d.extra["bad"] = {1, 0, 0.5};
  CHECK_THROWS_AS(proxies::predict(proxies::External{"bad"}, d, ""), DataError);
}

TEST_CASE("loading external prediction files") {
  const auto good = write_temp("proxtext_preds_good.csv", "w,z\n1,0\n0,1\n1,1\n");
  const auto [w, z] = proxies::load_external_predictions(good, "w", "z", 3);
  CHECK(w == BinaryColumn{1, 0, 1});
  CHECK(z == BinaryColumn{0, 1, 1});
  CHECK_THROWS_AS(proxies::load_external_predictions(good, "w", "z", 4), DataError);
  CHECK_THROWS_AS(proxies::load_external_predictions(good, "w", "q", 3), DataError);

  const auto nonbinary = write_temp("proxtext_preds_two.csv", "w,z\n2,0\n0,1\n");
  CHECK_THROWS_AS(proxies::load_external_predictions(nonbinary, "w", "z"), DataError);

  const auto constant = write_temp("proxtext_preds_const.csv", "w,z\n1,0\n1,1\n");
  CHECK_THROWS_AS(proxies::load_external_predictions(constant, "w", "z"), DegenerateProxyError);

  for (const auto& p : {good, nonbinary, constant}) std::filesystem::remove(p);
}

TEST_CASE("classification scores") {
  const BinaryColumn truth{1, 1, 1, 0, 0, 0, 0, 1};
  const BinaryColumn pred{1, 1, 0, 1, 0, 0, 0, 0};
  const auto s = proxies::score_against(pred, truth);
  // tp=2 fp=1 fn=2 tn=3
  CHECK(s.accuracy == doctest::Approx(5.0 / 8.0));
  CHECK(s.precision == doctest::Approx(2.0 / 3.0));
  CHECK(s.recall == doctest::Approx(2.0 / 4.0));
  CHECK(s.positivity == doctest::Approx(3.0 / 8.0));
  const auto none = proxies::score_against(BinaryColumn{0, 0}, BinaryColumn{1, 0});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
}

TEST_CASE("diagnostics identities") {
  synth::SynthParams p;
  p.n = 3000;
  p.seed = 2;
  auto d = synth::generate_fully_synthetic(p);

  SUBCASE("perfect proxies") {
    d.w = *d.u;
    BinaryColumn flipped(d.u->size());
    for (std::size_t i = 0; i < flipped.size(); ++i) flipped[i] = 1 - (*d.u)[i];
    d.z = flipped;
    const auto r = proxies::proxy_diagnostics(d);
    CHECK(r.w.accuracy == 1.0);
    CHECK(r.w.precision == 1.0);
    CHECK(r.w.recall == 1.0);
    CHECK(r.z.accuracy == 0.0);
    CHECK(r.agreement == 0.0);
    CHECK(r.gamma_wu_separation);
  }

  SUBCASE("missing oracle") {
    d.w = *d.u;
    d.z = *d.u;
    d.u.reset();
    CHECK_THROWS_AS(proxies::proxy_diagnostics(d), DataError);
  }
}

TEST_CASE("trained proxy quality on the synthetic generator") {
  const auto d = fixture::with_logistic_proxies(20000, 14, false);
  const auto r = proxies::proxy_diagnostics(d);
  // X carries 3C, which the classifier cannot see; about 0.63 is the ceiling.
  CHECK(r.w.accuracy > 0.6);
  CHECK(r.z.accuracy > 0.6);
  CHECK(r.gamma_wu_c > 1.0);
  CHECK(r.gamma_zu_c > 1.0);
  CHECK(r.agreement < 1.0);

  const auto again = fixture::with_logistic_proxies(20000, 14, false);
  CHECK(*again.w == *d.w);
  CHECK(*again.z == *d.z);
}

TEST_CASE("training needs matching blocks and the oracle") {
  synth::SynthParams p;
  p.n = 200;
  auto d = synth::generate_fully_synthetic(p);
  CHECK_THROWS_AS(proxies::train_logistic_proxy(d, "train1", "nope"), DataError);
  d.u.reset();
  CHECK_THROWS_AS(proxies::train_logistic_proxy(d, "train1", "train2"), DataError);
}
