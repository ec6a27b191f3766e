#ifndef NERFORGE_TEXTPROC_HPP
#define NERFORGE_TEXTPROC_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nerforge/conll.hpp"
#include "nerforge/error.hpp"
#include "nerforge/io.hpp"
#include "nerforge/utf8.hpp"

namespace nerforge {

namespace detail {

inline constexpr bool is_sentence_final(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'…';
}

// Closing quotes and brackets that may trail sentence-final punctuation.
inline constexpr bool is_closing(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == U')' || cp == U']' ||
         cp == U'»' || cp == U'”' || cp == U'’';
}

// Openers allowed between a boundary and the capital letter that follows.
inline constexpr bool is_opening(char32_t cp) {
  return cp == U'"' || cp == U'\'' || cp == U'(' || cp == U'[' ||
         cp == U'«' || cp == U'“' || cp == U'„' ||
         cp == U'—' || cp == U'-';
}

inline std::string_view trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size()) {
    const auto d = utf8::decode(s, b);
    if (!utf8::is_space(d.cp)) break;
    b += d.length;
  }
  std::size_t e = b;
  for (std::size_t pos = b; pos < s.size();) {
    const auto d = utf8::decode(s, pos);
    pos += d.length;
    if (!utf8::is_space(d.cp)) e = pos;
  }
  return s.substr(b, e - b);
}

}  // namespace detail

// Rule-based sentence splitter. A boundary follows a run of . ! ? or an
// ellipsis (plus any closing quotes) when the run is followed by whitespace
// and an uppercase letter, or by the end of the input. A single period after
// a listed abbreviation never ends a sentence.
class SentenceSegmenter {
 public:
  SentenceSegmenter() = default;
  explicit SentenceSegmenter(const std::vector<std::string>& abbreviations) {
    for (const auto& a : abbreviations) abbreviations_.insert(utf8::fold_case(a));
  }

  std::vector<std::string> segment(std::string_view text) const {
    std::vector<std::string> out;
    std::size_t start = 0;
    std::size_t pos = 0;
    auto emit = [&](std::size_t end) {
      const auto piece = detail::trim(text.substr(start, end - start));
      if (!piece.empty()) out.emplace_back(piece);
    };
    while (pos < text.size()) {
      const auto d = utf8::decode(text, pos);
      if (!detail::is_sentence_final(d.cp)) {
        pos += d.length;
        continue;
      }
      const std::size_t run_begin = pos;
      std::size_t run_end = pos;
      std::size_t finals = 0;
      while (run_end < text.size()) {
        const auto r = utf8::decode(text, run_end);
        if (detail::is_sentence_final(r.cp)) {
          ++finals;
        } else if (!detail::is_closing(r.cp)) {
          break;
        }
        run_end += r.length;
      }
      pos = run_end;
      if (finals == 1 && text[run_begin] == '.' &&
          follows_abbreviation(text, start, run_begin)) {
        continue;
      }
      if (run_end == text.size()) {
        emit(run_end);
        start = run_end;
        continue;
      }
      const auto next = utf8::decode(text, run_end);
      if (!utf8::is_space(next.cp)) continue;
      std::size_t k = run_end;
      while (k < text.size()) {
        const auto w = utf8::decode(text, k);
        if (!utf8::is_space(w.cp)) break;
        k += w.length;
      }
      if (k == text.size() || starts_with_capital(text, k)) {
        emit(run_end);
        start = k;
        pos = k;
      }
    }
    emit(text.size());
    return out;
  }

 private:
  static bool starts_with_capital(std::string_view text, std::size_t pos) {
    while (pos < text.size()) {
      const auto d = utf8::decode(text, pos);
      if (detail::is_opening(d.cp)) {
        pos += d.length;
        continue;
      }
      return utf8::is_upper(d.cp);
    }
    return false;
  }

  // The word ending right before the period at `dot`, minus leading
  // punctuation, is a known abbreviation.
  bool follows_abbreviation(std::string_view text, std::size_t start,
                            std::size_t dot) const {
    if (abbreviations_.empty()) return false;
    std::size_t word_begin = start;
    for (std::size_t pos = start; pos < dot;) {
      const auto d = utf8::decode(text, pos);
      pos += d.length;
      if (utf8::is_space(d.cp)) word_begin = pos;
    }
    while (word_begin < dot) {
      const auto d = utf8::decode(text, word_begin);
      if (!utf8::is_punct(d.cp)) break;
      word_begin += d.length;
    }
    if (word_begin == dot) return false;
    return abbreviations_.contains(
        utf8::fold_case(text.substr(word_begin, dot - word_begin)));
  }

  std::unordered_set<std::string> abbreviations_;
};

inline std::vector<std::string> segment_sentences(
    std::string_view text,
    const std::vector<std::string>& abbreviations = {}) {
  return SentenceSegmenter(abbreviations).segment(text);
}

// Splits on whitespace, then peels leading and trailing punctuation off each
// word one code point at a time. Word-internal punctuation such as hyphens
// stays in place.
inline std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> out;
  auto emit_word = [&out](std::string_view word) {
    std::vector<std::string> trailing;
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e) {
      const auto d = utf8::decode(word, b);
      if (!utf8::is_punct(d.cp)) break;
      out.emplace_back(std::string(word.substr(b, d.length)));
      b += d.length;
    }
    while (b < e) {
      // Step back to the start of the last code point.
      std::size_t last = e - 1;
      while (last > b && (static_cast<unsigned char>(word[last]) & 0xC0) == 0x80) {
        --last;
      }
      const auto d = utf8::decode(word, last);
      if (!utf8::is_punct(d.cp) || last + d.length != e) break;
      trailing.emplace_back(word.substr(last, e - last));
      e = last;
    }
    if (b < e) out.emplace_back(std::string(word.substr(b, e - b)));
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
      out.emplace_back(std::move(*it));
    }
  };

  std::size_t word_begin = std::string_view::npos;
  for (std::size_t pos = 0; pos < sentence.size();) {
    const auto d = utf8::decode(sentence, pos);
    if (utf8::is_space(d.cp)) {
      if (word_begin != std::string_view::npos) {
        emit_word(sentence.substr(word_begin, pos - word_begin));
        word_begin = std::string_view::npos;
      }
    } else if (word_begin == std::string_view::npos) {
      word_begin = pos;
    }
    pos += d.length;
  }
  if (word_begin != std::string_view::npos) {
    emit_word(sentence.substr(word_begin));
  }
  return out;
}

// Total, deterministic map from a surface token to a case-normalized lemma.
class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(std::string_view surface) const = 0;
};

// Lemma = case-folded surface.
class CaseFoldLemmatizer final : public Lemmatizer {
 public:
  std::string lemma(std::string_view surface) const override {
    return utf8::fold_case(surface);
  }
};

// Table lookup keyed by case-folded surface; misses fall back to case folding.
class LemmaTable final : public Lemmatizer {
 public:
  LemmaTable() = default;

  // Returns false if the surface already had an entry (first entry wins).
  bool add(std::string_view surface, std::string_view lemma) {
    return entries_
        .try_emplace(utf8::fold_case(surface), utf8::fold_case(lemma))
        .second;
  }

  std::string lemma(std::string_view surface) const override {
    std::string key = utf8::fold_case(surface);
    const auto it = entries_.find(key);
    return it == entries_.end() ? key : it->second;
  }

  std::size_t size() const { return entries_.size(); }
  std::size_t ignored_duplicates() const { return ignored_duplicates_; }

  // "surface<TAB>lemma" per line; blank lines skipped.
  static LemmaTable parse(std::string_view text) {
    LemmaTable table;
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      ++line_no;
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string_view line = text.substr(pos, eol - pos);
      pos = eol + 1;
      if (line.ends_with('\r')) line.remove_suffix(1);
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string_view::npos || tab == 0 ||
          tab + 1 == line.size() || line.find('\t', tab + 1) != line.npos) {
        throw ParseError(line_no, "expected 'surface<TAB>lemma'");
      }
      if (!table.add(line.substr(0, tab), line.substr(tab + 1))) {
        ++table.ignored_duplicates_;
      }
    }
    return table;
  }

  static LemmaTable load(const std::filesystem::path& path) {
    try {
      return parse(read_file(path));
    } catch (const ParseError& e) {
      throw ParseError(e.line(), e.message(), path.string());
    }
  }

 private:
  std::unordered_map<std::string, std::string> entries_;
  std::size_t ignored_duplicates_ = 0;
};

inline std::vector<Token> lemmatize(const std::vector<Token>& tokens,
                                    const Lemmatizer& lemmatizer) {
  std::vector<Token> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) {
    out.push_back(t.with_lemma(lemmatizer.lemma(t.surface())));
  }
  return out;
}

}  // namespace nerforge

#endif  // NERFORGE_TEXTPROC_HPP
