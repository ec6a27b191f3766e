#ifndef NERFORGE_TESTS_GENERATORS_HPP
#define NERFORGE_TESTS_GENERATORS_HPP

// Random instance generators shared by the property tests and the
// acceptance suite. Everything is driven by an explicit seed.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nerforge/conll.hpp"
#include "nerforge/label.hpp"

namespace nerforge::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

inline std::string random_surface(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "а", "б", "в", "Г", "д", "ё", "Ж", "я", "a", "B", "c", "z",
      "-", ".", ",", "«", "»", "1", "7", "x", "Щ", "ю"};
  std::string s;
  const std::size_t n = pick(rng, 1, 6);
  for (std::size_t i = 0; i < n; ++i) s += pieces[pick(rng, 0, pieces.size() - 1)];
  return s;
}

inline Label random_label(Rng& rng) {
  return Label::from_index(pick(rng, 0, Label::kCount - 1));
}

// Arbitrary tags, IOB validity not guaranteed.
inline std::vector<Label> random_tags(Rng& rng, std::size_t n) {
  std::vector<Label> tags;
  for (std::size_t i = 0; i < n; ++i) {
    tags.push_back(coin(rng, 0.4) ? Label::outside() : random_label(rng));
  }
  return tags;
}

// IOB-valid tags built from random non-overlapping spans.
inline std::vector<Label> random_valid_tags(Rng& rng, std::size_t n,
                                            double span_rate = 0.3) {
  std::vector<Label> tags(n, Label::outside());
  std::size_t i = 0;
  while (i < n) {
    if (!coin(rng, span_rate)) {
      ++i;
      continue;
    }
    const auto type = kEntityTypes[pick(rng, 0, 3)];
    const std::size_t len = pick(rng, 1, std::min<std::size_t>(4, n - i));
    tags[i] = Label::begin(type);
    for (std::size_t k = 1; k < len; ++k) tags[i + k] = Label::inside(type);
    i += len;
  }
  return tags;
}

inline Dataset random_dataset(Rng& rng, std::size_t sentences,
                              std::size_t max_len = 12) {
  Dataset ds;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t n = pick(rng, 1, max_len);
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < n; ++i) tokens.emplace_back(random_surface(rng));
    ds.add(TaggedSentence(std::move(tokens), random_tags(rng, n)));
  }
  return ds;
}

}  // namespace nerforge::testing

#endif  // NERFORGE_TESTS_GENERATORS_HPP
