#pragma once

#include "proxtext/proxies.hpp"
#include "proxtext/synth.hpp"

#include <cstdint>

namespace fixture {

// Synthetic data whose proxies come from a logistic classifier trained on a
// separate draw. `same_text` makes W and Z read the same inference block.
inline proxtext::Dataset with_logistic_proxies(std::size_t n, std::uint64_t seed, bool same_text) {
  using namespace proxtext;
  synth::SynthParams p;
  p.n = n;
  p.seed = seed;
  auto data = synth::generate_fully_synthetic(p);
  const auto model = proxies::train_logistic_proxy(data, "train1", "train2");
  data.z = proxies::predict(model, data, "inf1");
  data.w = proxies::predict(model, data, same_text ? "inf1" : "inf2");
  return data;
}

}  // namespace fixture
