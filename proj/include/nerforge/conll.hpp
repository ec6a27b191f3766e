#ifndef NERFORGE_CONLL_HPP
#define NERFORGE_CONLL_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nerforge/error.hpp"
#include "nerforge/io.hpp"
#include "nerforge/label.hpp"
#include "nerforge/utf8.hpp"

namespace nerforge {

// A surface token with an optional lemma. The surface is non-empty and
// contains no whitespace, so it always fits in one CoNLL column.
class Token {
 public:
  explicit Token(std::string surface,
                 std::optional<std::string> lemma = std::nullopt)
      : surface_(std::move(surface)), lemma_(std::move(lemma)) {
    if (surface_.empty()) throw Error("token surface is empty");
    if (utf8::contains_space(surface_)) {
      throw Error("token surface contains whitespace: '" + surface_ + "'");
    }
  }

  const std::string& surface() const { return surface_; }
  const std::optional<std::string>& lemma() const { return lemma_; }

  Token with_lemma(std::string lemma) const {
    Token out = *this;
    out.lemma_ = std::move(lemma);
    return out;
  }

  friend bool operator==(const Token&, const Token&) = default;

 private:
  std::string surface_;
  std::optional<std::string> lemma_;
};

// A contiguous entity mention [begin, end) of one type.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  EntityType type = EntityType::MISC;

  std::size_t length() const { return end - begin; }
  bool intersects(const Span& other) const {
    return begin < other.end && other.begin < end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// Every Inside(T) must follow Begin(T) or Inside(T).
inline bool is_iob_valid(std::span<const Label> tags) {
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!tags[i].is_inside()) continue;
    if (i == 0 || tags[i - 1].is_outside() ||
        tags[i - 1].type() != tags[i].type()) {
      return false;
    }
  }
  return true;
}

// Promotes every dangling Inside(T) to Begin(T). Nothing else changes.
inline std::vector<Label> repair_iob(std::span<const Label> tags) {
  std::vector<Label> out(tags.begin(), tags.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].is_inside()) continue;
    if (i == 0 || out[i - 1].is_outside() ||
        out[i - 1].type() != out[i].type()) {
      out[i] = Label::begin(out[i].type());
    }
  }
  return out;
}

// Decomposes a tag sequence into entity spans. A dangling Inside tag opens a
// new span, which is the reading repair_iob makes explicit.
inline std::vector<Span> spans_of(std::span<const Label> tags) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const Label tag = tags[i];
    if (tag.is_outside()) continue;
    const bool continues = tag.is_inside() && !spans.empty() &&
                           spans.back().end == i &&
                           spans.back().type == tag.type();
    if (continues) {
      spans.back().end = i + 1;
    } else {
      spans.push_back({i, i + 1, tag.type()});
    }
  }
  return spans;
}

// Writes spans as B-/I- tags over an all-O sequence of the given length.
inline std::vector<Label> tags_from_spans(std::size_t length,
                                          std::span<const Span> spans) {
  std::vector<Label> tags(length, Label::outside());
  for (const Span& s : spans) {
    tags[s.begin] = Label::begin(s.type);
    for (std::size_t i = s.begin + 1; i < s.end; ++i) {
      tags[i] = Label::inside(s.type);
    }
  }
  return tags;
}

class TaggedSentence {
 public:
  TaggedSentence() = default;
  TaggedSentence(std::vector<Token> tokens, std::vector<Label> tags)
      : tokens_(std::move(tokens)), tags_(std::move(tags)) {
    if (tokens_.size() != tags_.size()) {
      throw Error("sentence has " + std::to_string(tokens_.size()) +
                  " tokens but " + std::to_string(tags_.size()) + " tags");
    }
  }

  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<Label>& tags() const { return tags_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  bool iob_valid() const { return is_iob_valid(tags_); }
  bool all_outside() const {
    for (Label t : tags_) {
      if (!t.is_outside()) return false;
    }
    return true;
  }

  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens_.size());
    for (const Token& t : tokens_) out.push_back(t.surface());
    return out;
  }

  TaggedSentence with_tags(std::vector<Label> tags) const {
    return TaggedSentence(tokens_, std::move(tags));
  }

  friend bool operator==(const TaggedSentence&,
                         const TaggedSentence&) = default;

 private:
  std::vector<Token> tokens_;
  std::vector<Label> tags_;
};

// Ordered collection of non-empty sentences with an optional source tag each.
class Dataset {
 public:
  void add(TaggedSentence sentence,
           std::optional<std::string> provenance = std::nullopt) {
    if (sentence.empty()) throw Error("dataset sentences must be non-empty");
    sentences_.push_back(std::move(sentence));
    provenance_.push_back(std::move(provenance));
  }

  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const TaggedSentence& operator[](std::size_t i) const {
    return sentences_[i];
  }
  const std::optional<std::string>& provenance(std::size_t i) const {
    return provenance_[i];
  }
  const std::vector<TaggedSentence>& sentences() const { return sentences_; }

  auto begin() const { return sentences_.begin(); }
  auto end() const { return sentences_.end(); }

  std::size_t token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences_) n += s.size();
    return n;
  }

  // Equality of content; provenance is bookkeeping and is not compared.
  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.sentences_ == b.sentences_;
  }

 private:
  std::vector<TaggedSentence> sentences_;
  std::vector<std::optional<std::string>> provenance_;
};

struct ConllDiagnostics {
  // Indices of sentences whose tag sequence is not IOB-valid.
  std::vector<std::size_t> iob_invalid;
};

// Parses "token<TAB>tag" lines with blank lines between sentences. A leading
// byte-order mark, CR before LF, runs of blank lines and trailing blank lines
// are tolerated.
inline Dataset parse_conll(std::string_view text,
                           ConllDiagnostics* diagnostics = nullptr) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  Dataset ds;
  std::vector<Token> tokens;
  std::vector<Label> tags;
  auto flush = [&] {
    if (tokens.empty()) return;
    TaggedSentence sentence(std::move(tokens), std::move(tags));
    if (diagnostics && !sentence.iob_valid()) {
      diagnostics->iob_invalid.push_back(ds.size());
    }
    ds.add(std::move(sentence));
    tokens.clear();
    tags.clear();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.ends_with('\r')) line.remove_suffix(1);

    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      flush();
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != line.npos) {
      throw ParseError(line_no, "expected exactly 2 tab-separated columns");
    }
    const std::string_view surface = line.substr(0, tab);
    const std::string_view tag_text = line.substr(tab + 1);
    const auto tag = Label::parse(tag_text);
    if (!tag) {
      throw ParseError(line_no, "unknown tag '" + std::string(tag_text) + "'");
    }
    try {
      tokens.emplace_back(std::string(surface));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    tags.push_back(*tag);
  }
  flush();
  return ds;
}

inline void write_conll(std::ostream& out, const Dataset& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i > 0) out << '\n';
    const TaggedSentence& s = ds[i];
    for (std::size_t j = 0; j < s.size(); ++j) {
      out << s.tokens()[j].surface() << '\t' << s.tags()[j].str() << '\n';
    }
  }
}

inline std::string write_conll(const Dataset& ds) {
  std::ostringstream out;
  write_conll(out, ds);
  return out.str();
}

inline Dataset read_conll_file(const std::filesystem::path& path,
                               ConllDiagnostics* diagnostics = nullptr) {
  const std::string text = read_file(path);
  try {
    return parse_conll(text, diagnostics);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path.string());
  }
}

}  // namespace nerforge

#endif  // NERFORGE_CONLL_HPP
