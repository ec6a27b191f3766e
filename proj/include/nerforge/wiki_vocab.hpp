#ifndef NERFORGE_WIKI_VOCAB_HPP
#define NERFORGE_WIKI_VOCAB_HPP

#include <algorithm>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nerforge/conll.hpp"
#include "nerforge/error.hpp"
#include "nerforge/io.hpp"
#include "nerforge/label.hpp"
#include "nerforge/textproc.hpp"
#include "nerforge/utf8.hpp"

namespace nerforge {

struct CategoryNode {
  std::vector<std::string> subcategories;
  std::vector<std::string> articles;
};

struct ArticleNode {
  std::string summary;
  std::string body;
  std::vector<std::string> categories;
  // One element per interlink occurrence in the body, so titles may repeat.
  std::vector<std::string> interlinks;
};

struct DanglingRef {
  enum class Kind { Subcategory, Article, Interlink };
  Kind kind;
  std::string from;
  std::string target;

  friend bool operator==(const DanglingRef&, const DanglingRef&) = default;
};

inline std::string_view to_string(DanglingRef::Kind kind) {
  switch (kind) {
    case DanglingRef::Kind::Subcategory: return "subcategory";
    case DanglingRef::Kind::Article: return "article";
    case DanglingRef::Kind::Interlink: return "interlink";
  }
  return "";
}

// Snapshot of a category graph: categories with subcategory and article
// membership edges, and articles with their interlinks.
class ArticleGraph {
 public:
  void add_category(std::string name, CategoryNode node) {
    if (!categories_.try_emplace(name, std::move(node)).second) {
      throw Error("duplicate category '" + name + "'");
    }
  }
  void add_article(std::string title, ArticleNode node) {
    if (!articles_.try_emplace(title, std::move(node)).second) {
      throw Error("duplicate article '" + title + "'");
    }
  }

  const std::map<std::string, CategoryNode>& categories() const {
    return categories_;
  }
  const std::map<std::string, ArticleNode>& articles() const {
    return articles_;
  }
  const CategoryNode* category(const std::string& name) const {
    const auto it = categories_.find(name);
    return it == categories_.end() ? nullptr : &it->second;
  }
  const ArticleNode* article(const std::string& title) const {
    const auto it = articles_.find(title);
    return it == articles_.end() ? nullptr : &it->second;
  }

  // References that do not resolve inside the snapshot, in a stable order.
  std::vector<DanglingRef> dangling() const {
    std::vector<DanglingRef> out;
    for (const auto& [name, node] : categories_) {
      for (const auto& sub : node.subcategories) {
        if (!categories_.contains(sub)) {
          out.push_back({DanglingRef::Kind::Subcategory, name, sub});
        }
      }
      for (const auto& title : node.articles) {
        if (!articles_.contains(title)) {
          out.push_back({DanglingRef::Kind::Article, name, title});
        }
      }
    }
    for (const auto& [title, node] : articles_) {
      std::set<std::string> seen;
      for (const auto& link : node.interlinks) {
        if (!articles_.contains(link) && seen.insert(link).second) {
          out.push_back({DanglingRef::Kind::Interlink, title, link});
        }
      }
    }
    return out;
  }

 private:
  std::map<std::string, CategoryNode> categories_;
  std::map<std::string, ArticleNode> articles_;
};

namespace detail {

inline std::vector<std::string> string_list(const nlohmann::json& record,
                                            const char* key,
                                            std::size_t line_no) {
  std::vector<std::string> out;
  const auto it = record.find(key);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) {
    throw ParseError(line_no, std::string("'") + key + "' must be an array");
  }
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw ParseError(line_no,
                       std::string("'") + key + "' must hold strings only");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

inline std::string required_string(const nlohmann::json& record,
                                   const char* key, std::size_t line_no) {
  const auto it = record.find(key);
  if (it == record.end() || !it->is_string() ||
      it->get_ref<const std::string&>().empty()) {
    throw ParseError(line_no,
                     std::string("missing or empty string field '") + key + "'");
  }
  return it->get<std::string>();
}

inline std::string optional_string(const nlohmann::json& record,
                                   const char* key, std::size_t line_no) {
  const auto it = record.find(key);
  if (it == record.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw ParseError(line_no, std::string("'") + key + "' must be a string");
  }
  return it->get<std::string>();
}

// Calls fn(line_no, json) for every non-blank JSON Lines record.
template <typename Fn>
void for_each_json_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "record is not an object");
    fn(line_no, record);
  }
}

}  // namespace detail

// Reads a JSON Lines snapshot of category and article records.
inline ArticleGraph parse_snapshot(std::string_view text) {
  ArticleGraph graph;
  detail::for_each_json_line(text, [&](std::size_t line_no,
                                       const nlohmann::json& record) {
    const auto kind = record.find("kind");
    if (kind == record.end() || !kind->is_string()) {
      throw ParseError(line_no, "missing 'kind'");
    }
    try {
      if (*kind == "category") {
        CategoryNode node;
        node.subcategories = detail::string_list(record, "subcategories", line_no);
        node.articles = detail::string_list(record, "articles", line_no);
        graph.add_category(detail::required_string(record, "name", line_no),
                           std::move(node));
      } else if (*kind == "article") {
        ArticleNode node;
        node.summary = detail::optional_string(record, "summary", line_no);
        node.body = detail::optional_string(record, "body", line_no);
        node.categories = detail::string_list(record, "categories", line_no);
        node.interlinks = detail::string_list(record, "interlinks", line_no);
        graph.add_article(detail::required_string(record, "title", line_no),
                          std::move(node));
      } else {
        throw ParseError(line_no, "unknown kind '" +
                                      kind->get<std::string>() + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  });
  return graph;
}

inline ArticleGraph load_snapshot(const std::filesystem::path& path) {
  try {
    return parse_snapshot(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path.string());
  }
}

struct TraversalResult {
  std::vector<std::string> articles;  // sorted, unique
  std::vector<std::string> missing_seeds;
};

// Breadth-first expansion over subcategory edges only. Every category within
// `depth` hops of a seed contributes its member articles that exist in the
// snapshot.
inline TraversalResult traverse(const ArticleGraph& graph,
                                const std::vector<std::string>& seeds,
                                int depth) {
  if (depth < 0) throw Error("traversal depth must be >= 0");
  if (seeds.empty()) throw Error("no seed categories given");

  TraversalResult result;
  std::set<std::string> visited;
  std::deque<std::pair<std::string, int>> frontier;
  for (const auto& seed : seeds) {
    if (!graph.category(seed)) {
      result.missing_seeds.push_back(seed);
    } else if (visited.insert(seed).second) {
      frontier.emplace_back(seed, 0);
    }
  }
  if (frontier.empty()) throw Error("none of the seed categories is in the snapshot");

  std::set<std::string> articles;
  while (!frontier.empty()) {
    auto [name, distance] = std::move(frontier.front());
    frontier.pop_front();
    const CategoryNode& node = *graph.category(name);
    for (const auto& title : node.articles) {
      if (graph.article(title)) articles.insert(title);
    }
    if (distance == depth) continue;
    for (const auto& sub : node.subcategories) {
      if (graph.category(sub) && visited.insert(sub).second) {
        frontier.emplace_back(sub, distance + 1);
      }
    }
  }
  result.articles.assign(articles.begin(), articles.end());
  return result;
}

struct RawEntity {
  std::string title;
  std::uint64_t interlink_freq = 0;
  std::vector<std::string> categories;

  friend bool operator==(const RawEntity&, const RawEntity&) = default;
};

// One entity per traversed title and per interlink target seen in a traversed
// article. interlink_freq counts occurrences across the traversed articles.
inline std::vector<RawEntity> harvest_entities(
    const ArticleGraph& graph, const std::vector<std::string>& articles) {
  std::map<std::string, std::uint64_t> freq;
  std::set<std::string> traversed;
  for (const auto& title : articles) {
    const ArticleNode* node = graph.article(title);
    if (!node) throw Error("article '" + title + "' is not in the snapshot");
    if (!traversed.insert(title).second) continue;
    freq.try_emplace(title, 0);
    for (const auto& link : node->interlinks) ++freq[link];
  }
  std::vector<RawEntity> out;
  out.reserve(freq.size());
  for (auto& [title, count] : freq) {
    RawEntity e{title, count, {}};
    if (const ArticleNode* own = graph.article(title)) e.categories = own->categories;
    out.push_back(std::move(e));
  }
  return out;
}

enum class EntrySource { Wiki, External };

struct VocabEntry {
  std::string surface;
  std::vector<std::string> lemmas;
  // Unset for externally merged entries, which bypass frequency filters.
  std::optional<std::uint64_t> interlink_freq;
  std::vector<std::string> categories;
  EntrySource source = EntrySource::Wiki;
  // Optional fixed tag sequence, one label per surface token.
  std::optional<std::vector<Label>> labels;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

// Entries unique by surface, kept in insertion order.
class Vocabulary {
 public:
  // Returns false (and leaves the vocabulary unchanged) on a duplicate surface.
  bool add(VocabEntry entry) {
    if (!index_.try_emplace(entry.surface, entries_.size()).second) return false;
    entries_.push_back(std::move(entry));
    return true;
  }

  bool contains(const std::string& surface) const {
    return index_.contains(surface);
  }
  const VocabEntry* find(const std::string& surface) const {
    const auto it = index_.find(surface);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const VocabEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<VocabEntry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Global category frequency: how many entities list each category.
inline std::map<std::string, std::uint64_t> category_frequencies(
    const std::vector<RawEntity>& raw) {
  std::map<std::string, std::uint64_t> table;
  for (const auto& e : raw) {
    std::set<std::string> own(e.categories.begin(), e.categories.end());
    for (const auto& c : own) ++table[c];
  }
  return table;
}

// An entity's category frequency is the largest global frequency among its
// categories, 0 when it has none.
inline std::uint64_t entity_category_frequency(
    const std::vector<std::string>& categories,
    const std::map<std::string, std::uint64_t>& table) {
  std::uint64_t best = 0;
  for (const auto& c : categories) {
    const auto it = table.find(c);
    if (it != table.end()) best = std::max(best, it->second);
  }
  return best;
}

struct FilterOptions {
  std::uint64_t min_interlink = 2;
  std::uint64_t min_category = 3;
  // Case-insensitive substrings, at least one of which must occur in one of
  // the entity's category names. Empty disables the check.
  std::vector<std::string> seed_words;
};

inline bool matches_seed_words(const std::vector<std::string>& categories,
                               const std::vector<std::string>& folded_seeds) {
  if (folded_seeds.empty()) return true;
  for (const auto& c : categories) {
    const std::string folded = utf8::fold_case(c);
    for (const auto& w : folded_seeds) {
      if (folded.find(w) != std::string::npos) return true;
    }
  }
  return false;
}

inline Vocabulary filter_vocabulary(const std::vector<RawEntity>& raw,
                                    const FilterOptions& options = {}) {
  const auto table = category_frequencies(raw);
  std::vector<std::string> seeds;
  for (const auto& w : options.seed_words) {
    if (!w.empty()) seeds.push_back(utf8::fold_case(w));
  }

  std::map<std::string, const RawEntity*> kept;
  for (const auto& e : raw) {
    if (e.title.empty()) continue;
    if (e.interlink_freq < options.min_interlink) continue;
    if (entity_category_frequency(e.categories, table) < options.min_category) {
      continue;
    }
    if (!matches_seed_words(e.categories, seeds)) continue;
    kept.try_emplace(e.title, &e);
  }

  Vocabulary vocab;
  for (const auto& [title, e] : kept) {
    vocab.add({title, {}, e->interlink_freq, e->categories, EntrySource::Wiki,
               std::nullopt});
  }
  return vocab;
}

struct MergeResult {
  Vocabulary vocabulary;
  std::vector<std::string> duplicates;
};

// Appends glossary-style entries not already present. Existing entries are
// never modified.
inline MergeResult merge_external_entities(Vocabulary vocab,
                                           const std::vector<std::string>& extra) {
  MergeResult result;
  for (const auto& surface : extra) {
    if (surface.empty()) continue;
    VocabEntry entry{surface, {}, std::nullopt, {}, EntrySource::External,
                     std::nullopt};
    if (!vocab.add(std::move(entry))) result.duplicates.push_back(surface);
  }
  result.vocabulary = std::move(vocab);
  return result;
}

// Tokenizes each surface with the canonical tokenizer and stores its lemmas.
inline Vocabulary fill_lemmas(const Vocabulary& vocab,
                              const Lemmatizer& lemmatizer) {
  Vocabulary out;
  for (VocabEntry entry : vocab) {
    entry.lemmas.clear();
    for (const Token& t : tokenize(entry.surface)) {
      entry.lemmas.push_back(lemmatizer.lemma(t.surface()));
    }
    out.add(std::move(entry));
  }
  return out;
}

inline std::string_view to_string(EntrySource source) {
  return source == EntrySource::Wiki ? "wiki" : "external";
}

inline Vocabulary parse_vocabulary(std::string_view text) {
  Vocabulary vocab;
  detail::for_each_json_line(text, [&](std::size_t line_no,
                                       const nlohmann::json& record) {
    VocabEntry entry;
    entry.surface = detail::required_string(record, "surface", line_no);
    entry.lemmas = detail::string_list(record, "lemmas", line_no);
    entry.categories = detail::string_list(record, "categories", line_no);

    const auto freq = record.find("interlink_freq");
    if (freq != record.end() && !freq->is_null()) {
      if (!freq->is_number_unsigned() && !freq->is_number_integer()) {
        throw ParseError(line_no, "'interlink_freq' must be an integer or null");
      }
      if (freq->is_number_integer() && freq->get<std::int64_t>() < 0) {
        throw ParseError(line_no, "'interlink_freq' must be >= 0");
      }
      entry.interlink_freq = freq->get<std::uint64_t>();
    }

    const std::string source = detail::optional_string(record, "source", line_no);
    if (source.empty() || source == "wiki") {
      entry.source = EntrySource::Wiki;
    } else if (source == "external") {
      entry.source = EntrySource::External;
    } else {
      throw ParseError(line_no, "unknown source '" + source + "'");
    }

    if (record.contains("labels") && !record["labels"].is_null()) {
      std::vector<Label> labels;
      for (const auto& s : detail::string_list(record, "labels", line_no)) {
        const auto label = Label::parse(s);
        if (!label) throw ParseError(line_no, "unknown tag '" + s + "'");
        labels.push_back(*label);
      }
      entry.labels = std::move(labels);
    }

    if (!vocab.add(std::move(entry))) {
      throw ParseError(line_no, "duplicate surface '" +
                                    record["surface"].get<std::string>() + "'");
    }
  });
  return vocab;
}

inline Vocabulary load_vocabulary(const std::filesystem::path& path) {
  try {
    return parse_vocabulary(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path.string());
  }
}

inline std::string write_vocabulary(const Vocabulary& vocab) {
  std::string out;
  for (const auto& e : vocab) {
    nlohmann::ordered_json record;
    record["surface"] = e.surface;
    record["lemmas"] = e.lemmas;
    if (e.interlink_freq) {
      record["interlink_freq"] = *e.interlink_freq;
    } else {
      record["interlink_freq"] = nullptr;
    }
    record["categories"] = e.categories;
    record["source"] = std::string(to_string(e.source));
    if (e.labels) {
      std::vector<std::string> labels;
      for (Label l : *e.labels) labels.push_back(l.str());
      record["labels"] = labels;
    }
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace nerforge

#endif  // NERFORGE_WIKI_VOCAB_HPP
