#ifndef NERFORGE_ASSEMBLE_HPP
#define NERFORGE_ASSEMBLE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nerforge/conll.hpp"
#include "nerforge/error.hpp"

namespace nerforge {

struct DedupReport {
  Dataset dataset;
  std::size_t removed = 0;
  // Removed copies whose tags differed from the kept occurrence.
  std::size_t tag_conflicts = 0;
};

// Keeps the first sentence of every distinct token-surface sequence.
inline DedupReport deduplicate(const Dataset& ds) {
  DedupReport report;
  std::map<std::vector<std::string>, std::size_t> first_seen;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    auto [it, inserted] = first_seen.try_emplace(ds[i].surfaces(), i);
    if (inserted) {
      report.dataset.add(ds[i], ds.provenance(i));
      continue;
    }
    ++report.removed;
    if (ds[it->second].tags() != ds[i].tags()) ++report.tag_conflicts;
  }
  return report;
}

inline Dataset drop_all_outside(const Dataset& ds) {
  Dataset out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!ds[i].all_outside()) out.add(ds[i], ds.provenance(i));
  }
  return out;
}

inline Dataset concat(const Dataset& a, const Dataset& b) {
  Dataset out;
  for (std::size_t i = 0; i < a.size(); ++i) out.add(a[i], a.provenance(i));
  for (std::size_t i = 0; i < b.size(); ++i) out.add(b[i], b.provenance(i));
  return out;
}

// Uniform integer in [0, bound) from a 64-bit engine by rejection, so the
// result depends only on the engine's output sequence.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

// Fisher-Yates over [0, n) driven by mt19937_64 seeded with `seed`.
inline std::vector<std::size_t> seeded_permutation(std::size_t n,
                                                   std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

struct SplitSizes {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
};

// Dev and test get their nearest-integer share; the remainder goes to train.
inline SplitSizes split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  double sum = 0;
  for (double r : ratios) {
    if (!(r > 0) || !std::isfinite(r)) throw Error("split ratios must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
  SplitSizes sizes;
  sizes.dev = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios[1]));
  sizes.test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratios[2]));
  sizes.dev = std::min(sizes.dev, n);
  sizes.test = std::min(sizes.test, n - sizes.dev);
  sizes.train = n - sizes.dev - sizes.test;
  return sizes;
}

struct Split {
  Dataset train;
  Dataset dev;
  Dataset test;
};

inline Split split(const Dataset& ds, const std::array<double, 3>& ratios,
                   std::uint64_t seed) {
  const SplitSizes sizes = split_sizes(ds.size(), ratios);
  const auto perm = seeded_permutation(ds.size(), seed);
  Split out;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    Dataset& target = k < sizes.train              ? out.train
                      : k < sizes.train + sizes.dev ? out.dev
                                                    : out.test;
    target.add(ds[perm[k]], ds.provenance(perm[k]));
  }
  return out;
}

}  // namespace nerforge

#endif  // NERFORGE_ASSEMBLE_HPP
