#ifndef NERFORGE_UNIFY_HPP
#define NERFORGE_UNIFY_HPP

#include <cstddef>
#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nerforge/conll.hpp"
#include "nerforge/error.hpp"
#include "nerforge/gazetteer.hpp"
#include "nerforge/parallel.hpp"

namespace nerforge {

// Merges the general-domain layer with the dictionary layer. General spans
// are kept as they are; a dictionary span survives only if it shares no token
// with any general span.
inline TaggedSentence unify(std::span<const Token> tokens,
                            const AnnotationLayer& general,
                            const AnnotationLayer& dictionary) {
  if (general.origin() != LayerOrigin::General ||
      dictionary.origin() != LayerOrigin::Dictionary) {
    throw Error("unify expects a general layer and a dictionary layer");
  }
  if (general.size() != tokens.size() || dictionary.size() != tokens.size()) {
    throw Error("layer length mismatch: " + std::to_string(tokens.size()) +
                " tokens, general " + std::to_string(general.size()) +
                ", dictionary " + std::to_string(dictionary.size()));
  }
  std::vector<Span> spans = spans_of(general.tags());
  const std::size_t general_count = spans.size();
  for (const Span& d : spans_of(dictionary.tags())) {
    bool clash = false;
    for (std::size_t g = 0; g < general_count && !clash; ++g) {
      clash = d.intersects(spans[g]);
    }
    if (!clash) spans.push_back(d);
  }
  std::vector<Label> tags = tags_from_spans(tokens.size(), spans);
  if (repair_iob(tags) != tags) {
    throw std::logic_error("unified tags are not IOB-valid");
  }
  return TaggedSentence({tokens.begin(), tokens.end()}, std::move(tags));
}

struct UnifyReport {
  Dataset dataset;
  // Sentences whose input tags needed repair_iob before unification.
  std::vector<std::size_t> repaired_general;
  std::vector<std::size_t> repaired_dictionary;
};

// Sentence-by-sentence unification of two token-identical datasets.
inline UnifyReport unify_datasets(const Dataset& general,
                                  const Dataset& dictionary,
                                  unsigned threads = 1) {
  if (general.size() != dictionary.size()) {
    throw Error("sentence count mismatch: general has " +
                std::to_string(general.size()) + ", dictionary has " +
                std::to_string(dictionary.size()));
  }
  for (std::size_t s = 0; s < general.size(); ++s) {
    const auto& g = general[s].tokens();
    const auto& d = dictionary[s].tokens();
    for (std::size_t t = 0; t < std::max(g.size(), d.size()); ++t) {
      if (t >= g.size() || t >= d.size() || g[t].surface() != d[t].surface()) {
        throw Error("token mismatch at sentence " + std::to_string(s) +
                    ", token " + std::to_string(t));
      }
    }
  }

  struct Row {
    TaggedSentence sentence;
    bool repaired_general;
    bool repaired_dictionary;
  };
  auto rows = parallel_map(general.size(), threads, [&](std::size_t s) {
    const TaggedSentence& g = general[s];
    const TaggedSentence& d = dictionary[s];
    auto g_tags = repair_iob(g.tags());
    auto d_tags = repair_iob(d.tags());
    const bool g_fixed = g_tags != g.tags();
    const bool d_fixed = d_tags != d.tags();
    return Row{unify(g.tokens(),
                     AnnotationLayer(std::move(g_tags), LayerOrigin::General),
                     AnnotationLayer(std::move(d_tags), LayerOrigin::Dictionary)),
               g_fixed, d_fixed};
  });

  UnifyReport report;
  for (std::size_t s = 0; s < rows.size(); ++s) {
    report.dataset.add(std::move(rows[s].sentence), general.provenance(s));
    if (rows[s].repaired_general) report.repaired_general.push_back(s);
    if (rows[s].repaired_dictionary) report.repaired_dictionary.push_back(s);
  }
  return report;
}

}  // namespace nerforge

#endif  // NERFORGE_UNIFY_HPP
