#ifndef NERFORGE_GAZETTEER_HPP
#define NERFORGE_GAZETTEER_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nerforge/conll.hpp"
#include "nerforge/error.hpp"
#include "nerforge/label.hpp"
#include "nerforge/textproc.hpp"
#include "nerforge/wiki_vocab.hpp"

namespace nerforge {

enum class LayerOrigin { General, Dictionary };

// One annotator's IOB tags for a sentence.
class AnnotationLayer {
 public:
  AnnotationLayer(std::vector<Label> tags, LayerOrigin origin)
      : tags_(std::move(tags)), origin_(origin) {
    if (!is_iob_valid(tags_)) throw Error("annotation layer is not IOB-valid");
  }

  static AnnotationLayer outside(std::size_t length, LayerOrigin origin) {
    return AnnotationLayer(std::vector<Label>(length, Label::outside()), origin);
  }

  const std::vector<Label>& tags() const { return tags_; }
  LayerOrigin origin() const { return origin_; }
  std::size_t size() const { return tags_.size(); }

  friend bool operator==(const AnnotationLayer&, const AnnotationLayer&) = default;

 private:
  std::vector<Label> tags_;
  LayerOrigin origin_;
};

// Prefix tree over lemma sequences. Lemmas are interned to integer ids so a
// node's outgoing edges are keyed by a single integer.
class MatchIndex {
 public:
  struct Payload {
    std::string surface;
    std::optional<std::vector<Label>> labels;
  };

  struct Collision {
    std::string kept;
    std::string rejected;
  };

  struct Match {
    std::size_t begin;
    std::size_t length;
    std::size_t payload;
  };

  MatchIndex() : nodes_(1) {}

  // Inserts a pattern. Returns the index of an existing payload if the
  // sequence is already present (the new payload is then discarded).
  std::optional<std::size_t> insert(const std::vector<std::string>& lemmas,
                                    Payload payload) {
    if (lemmas.empty()) throw Error("cannot index an empty lemma sequence");
    std::uint32_t node = 0;
    for (const auto& lemma : lemmas) {
      const std::uint32_t id = intern(lemma);
      const auto it = nodes_[node].children.find(id);
      if (it != nodes_[node].children.end()) {
        node = it->second;
      } else {
        const auto child = static_cast<std::uint32_t>(nodes_.size());
        nodes_[node].children.emplace(id, child);
        nodes_.emplace_back();
        node = child;
      }
    }
    if (nodes_[node].payload) return nodes_[node].payload;
    nodes_[node].payload = payloads_.size();
    payloads_.push_back(std::move(payload));
    ++patterns_;
    return std::nullopt;
  }

  // Exact lookup of a whole lemma sequence.
  const Payload* find(const std::vector<std::string>& lemmas) const {
    std::uint32_t node = 0;
    for (const auto& lemma : lemmas) {
      const auto id = lemma_ids_.find(lemma);
      if (id == lemma_ids_.end()) return nullptr;
      const auto it = nodes_[node].children.find(id->second);
      if (it == nodes_[node].children.end()) return nullptr;
      node = it->second;
    }
    const auto& p = nodes_[node].payload;
    return p ? &payloads_[*p] : nullptr;
  }

  // Longest pattern that starts at `begin`, if any.
  template <typename LemmaAt>
  std::optional<Match> longest_at(std::size_t begin, std::size_t size,
                                  LemmaAt&& lemma_at) const {
    std::optional<Match> best;
    std::uint32_t node = 0;
    for (std::size_t i = begin; i < size; ++i) {
      const auto id = lemma_ids_.find(lemma_at(i));
      if (id == lemma_ids_.end()) break;
      const auto it = nodes_[node].children.find(id->second);
      if (it == nodes_[node].children.end()) break;
      node = it->second;
      if (nodes_[node].payload) {
        best = Match{begin, i - begin + 1, *nodes_[node].payload};
      }
    }
    return best;
  }

  const Payload& payload(std::size_t i) const { return payloads_[i]; }
  std::size_t pattern_count() const { return patterns_; }

  // Build reports.
  std::vector<Collision> collisions;
  std::vector<std::string> skipped;

 private:
  struct Node {
    std::unordered_map<std::uint32_t, std::uint32_t> children;
    std::optional<std::size_t> payload;
  };

  std::uint32_t intern(const std::string& lemma) {
    return lemma_ids_
        .try_emplace(lemma, static_cast<std::uint32_t>(lemma_ids_.size()))
        .first->second;
  }

  std::vector<Node> nodes_;
  std::vector<Payload> payloads_;
  std::unordered_map<std::string, std::uint32_t> lemma_ids_;
  std::size_t patterns_ = 0;
};

// Tokenizes and lemmatizes every vocabulary surface and indexes the lemma
// sequence. Entries that reduce to nothing are skipped; a lemma sequence
// already claimed by an earlier entry is reported as a collision.
inline MatchIndex build_index(const Vocabulary& vocab,
                              const Lemmatizer& lemmatizer) {
  MatchIndex index;
  for (const VocabEntry& entry : vocab) {
    std::vector<std::string> lemmas;
    for (const Token& t : tokenize(entry.surface)) {
      lemmas.push_back(lemmatizer.lemma(t.surface()));
    }
    if (lemmas.empty()) {
      index.skipped.push_back(entry.surface);
      continue;
    }
    if (entry.labels) {
      if (entry.labels->size() != lemmas.size()) {
        throw Error("entry '" + entry.surface + "' has " +
                    std::to_string(entry.labels->size()) + " labels for " +
                    std::to_string(lemmas.size()) + " tokens");
      }
      if (!is_iob_valid(*entry.labels)) {
        throw Error("entry '" + entry.surface + "' labels are not IOB-valid");
      }
    }
    const auto existing =
        index.insert(lemmas, {entry.surface, entry.labels});
    if (existing) {
      index.collisions.push_back({index.payload(*existing).surface, entry.surface});
    }
  }
  return index;
}

struct AnnotateOptions {
  // Use an entry's own label sequence instead of B-MISC/I-MISC.
  bool predefined_labels = false;
};

// Leftmost-longest dictionary matching over token lemmas.
inline AnnotationLayer annotate(std::span<const Token> tokens,
                                const MatchIndex& index,
                                const AnnotateOptions& options = {}) {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].lemma()) {
      throw Error("token " + std::to_string(i) + " ('" + tokens[i].surface() +
                  "') has no lemma");
    }
  }
  std::vector<Label> tags(tokens.size(), Label::outside());
  auto lemma_at = [&](std::size_t i) -> const std::string& {
    return *tokens[i].lemma();
  };
  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto match = index.longest_at(i, tokens.size(), lemma_at);
    if (!match) {
      ++i;
      continue;
    }
    const auto& payload = index.payload(match->payload);
    if (options.predefined_labels && payload.labels) {
      std::copy(payload.labels->begin(), payload.labels->end(),
                tags.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      tags[i] = Label::begin(EntityType::MISC);
      for (std::size_t k = 1; k < match->length; ++k) {
        tags[i + k] = Label::inside(EntityType::MISC);
      }
    }
    i += match->length;
  }
  return AnnotationLayer(std::move(tags), LayerOrigin::Dictionary);
}

}  // namespace nerforge

#endif  // NERFORGE_GAZETTEER_HPP
