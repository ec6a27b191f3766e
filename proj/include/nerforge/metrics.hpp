#ifndef NERFORGE_METRICS_HPP
#define NERFORGE_METRICS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nerforge/conll.hpp"
#include "nerforge/error.hpp"
#include "nerforge/label.hpp"
#include "nerforge/parallel.hpp"

namespace nerforge {

struct Scores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct LabelScores : Scores {
  std::uint64_t support = 0;         // gold tokens with this label
  std::uint64_t predicted = 0;       // predicted tokens with this label
  std::uint64_t true_positives = 0;
};

struct EvalReport {
  // Every label occurring in gold or prediction, in tag order.
  std::map<Label, LabelScores> per_label;
  Scores weighted_avg;
  std::uint64_t total_support = 0;
};

struct WeightedValue {
  double value;
  std::uint64_t support;
};

// sum(support * value) / sum(support); 0 when the total support is 0.
inline double weighted_average(std::span<const WeightedValue> values) {
  double num = 0;
  std::uint64_t total = 0;
  for (const auto& v : values) {
    num += static_cast<double>(v.support) * v.value;
    total += v.support;
  }
  return total == 0 ? 0.0 : num / static_cast<double>(total);
}

// Empty denominators yield 0.
inline Scores scores_from_counts(std::uint64_t tp, std::uint64_t predicted,
                                 std::uint64_t support) {
  Scores s;
  s.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
  s.recall = support == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(support);
  const double denom = s.precision + s.recall;
  s.f1 = denom == 0 ? 0.0 : 2 * s.precision * s.recall / denom;
  return s;
}

namespace detail {

struct Counts {
  std::array<std::uint64_t, Label::kCount> gold{};
  std::array<std::uint64_t, Label::kCount> pred{};
  std::array<std::uint64_t, Label::kCount> tp{};
};

}  // namespace detail

// Token-level per-label precision/recall/F1 with support-weighted averages.
inline EvalReport evaluate(const Dataset& gold, const Dataset& pred,
                           unsigned threads = 1) {
  if (gold.size() != pred.size()) {
    throw Error("sentence count mismatch: gold has " +
                std::to_string(gold.size()) + ", prediction has " +
                std::to_string(pred.size()));
  }
  const auto partial = parallel_map(gold.size(), threads, [&](std::size_t s) {
    const auto& g = gold[s];
    const auto& p = pred[s];
    if (g.size() != p.size()) {
      throw Error("sentence " + std::to_string(s) + ": gold has " +
                  std::to_string(g.size()) + " tokens, prediction has " +
                  std::to_string(p.size()));
    }
    detail::Counts c;
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (g.tokens()[t].surface() != p.tokens()[t].surface()) {
        throw Error("token mismatch at sentence " + std::to_string(s) +
                    ", token " + std::to_string(t));
      }
      const auto gi = g.tags()[t].index();
      const auto pi = p.tags()[t].index();
      ++c.gold[gi];
      ++c.pred[pi];
      if (gi == pi) ++c.tp[gi];
    }
    return c;
  });
  detail::Counts total;
  for (const auto& c : partial) {
    for (std::size_t i = 0; i < Label::kCount; ++i) {
      total.gold[i] += c.gold[i];
      total.pred[i] += c.pred[i];
      total.tp[i] += c.tp[i];
    }
  }

  EvalReport report;
  std::vector<WeightedValue> p, r, f;
  for (std::size_t i = 0; i < Label::kCount; ++i) {
    if (total.gold[i] == 0 && total.pred[i] == 0) continue;
    LabelScores ls;
    static_cast<Scores&>(ls) = scores_from_counts(total.tp[i], total.pred[i], total.gold[i]);
    ls.support = total.gold[i];
    ls.predicted = total.pred[i];
    ls.true_positives = total.tp[i];
    report.per_label.emplace(Label::from_index(i), ls);
    report.total_support += ls.support;
    p.push_back({ls.precision, ls.support});
    r.push_back({ls.recall, ls.support});
    f.push_back({ls.f1, ls.support});
  }
  report.weighted_avg = {weighted_average(p), weighted_average(r),
                         weighted_average(f)};
  return report;
}

// Collapses every entity type to MISC, leaving B-MISC, I-MISC and O.
inline Dataset unify_labels(const Dataset& ds) {
  Dataset out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::vector<Label> tags;
    tags.reserve(ds[i].size());
    for (Label t : ds[i].tags()) {
      tags.push_back(t.is_outside() ? t
                     : t.is_begin() ? Label::begin(EntityType::MISC)
                                    : Label::inside(EntityType::MISC));
    }
    out.add(ds[i].with_tags(std::move(tags)), ds.provenance(i));
  }
  return out;
}

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

inline nlohmann::ordered_json to_json(const EvalReport& report) {
  auto scores_json = [](const Scores& s) {
    nlohmann::ordered_json j;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    j["f1"] = s.f1;
    j["rounded"] = {{"precision", round2(s.precision)},
                    {"recall", round2(s.recall)},
                    {"f1", round2(s.f1)}};
    return j;
  };
  nlohmann::ordered_json out;
  nlohmann::ordered_json per_label = nlohmann::ordered_json::object();
  for (const auto& [label, ls] : report.per_label) {
    auto j = scores_json(ls);
    j["support"] = ls.support;
    j["predicted"] = ls.predicted;
    j["true_positives"] = ls.true_positives;
    per_label[label.str()] = std::move(j);
  }
  out["per_label"] = std::move(per_label);
  out["weighted_avg"] = scores_json(report.weighted_avg);
  out["total_support"] = report.total_support;
  return out;
}

}  // namespace nerforge

#endif  // NERFORGE_METRICS_HPP
