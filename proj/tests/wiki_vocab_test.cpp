#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "generators.hpp"
#include "nerforge/wiki_vocab.hpp"

namespace nerforge {
namespace {

const std::string kSmallSnapshot = R"(
{"kind":"category","name":"Wars","subcategories":["Battles"],"articles":["War A","War B","War C"]}
{"kind":"category","name":"Battles","subcategories":["Sieges"],"articles":["Battle A","Battle B","Battle C"]}
{"kind":"category","name":"Sieges","subcategories":[],"articles":["Siege A","Siege B","Siege C","Siege D"]}
{"kind":"article","title":"War A","summary":"s","body":"b","categories":["wars"],"interlinks":["Battle A","Battle A","War B"]}
{"kind":"article","title":"War B","summary":"s","body":"b","categories":["wars"],"interlinks":["Battle B"]}
{"kind":"article","title":"War C","summary":"s","body":"b","categories":["wars"],"interlinks":[]}
{"kind":"article","title":"Battle A","summary":"s","body":"b","categories":["battles"],"interlinks":["War A"]}
{"kind":"article","title":"Battle B","summary":"s","body":"b","categories":["battles"],"interlinks":["Siege A"]}
{"kind":"article","title":"Battle C","summary":"s","body":"b","categories":["battles"],"interlinks":[]}
{"kind":"article","title":"Siege A","summary":"s","body":"b","categories":["sieges"],"interlinks":[]}
{"kind":"article","title":"Siege B","summary":"s","body":"b","categories":["sieges"],"interlinks":[]}
{"kind":"article","title":"Siege C","summary":"s","body":"b","categories":["sieges"],"interlinks":[]}
{"kind":"article","title":"Siege D","summary":"s","body":"b","categories":["sieges"],"interlinks":[]}
)";

std::string article_line(const std::string& title,
                         const std::vector<std::string>& categories,
                         const std::vector<std::string>& interlinks) {
  nlohmann::json j;
  j["kind"] = "article";
  j["title"] = title;
  j["categories"] = categories;
  j["interlinks"] = interlinks;
  return j.dump() + "\n";
}

std::string category_line(const std::string& name,
                          const std::vector<std::string>& subcategories,
                          const std::vector<std::string>& articles) {
  nlohmann::json j;
  j["kind"] = "category";
  j["name"] = name;
  j["subcategories"] = subcategories;
  j["articles"] = articles;
  return j.dump() + "\n";
}

TEST(LoadSnapshot, CountsNodes) {
  const ArticleGraph g = parse_snapshot(kSmallSnapshot);
  EXPECT_EQ(g.categories().size(), 3u);
  EXPECT_EQ(g.articles().size(), 10u);
  EXPECT_TRUE(g.dangling().empty());
}

TEST(LoadSnapshot, Errors) {
  try {
    parse_snapshot(category_line("A", {}, {}) + R"({"kind":"template","name":"x"})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_snapshot(category_line("A", {}, {}) + "\n{\"kind\": \"category\",\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_snapshot(article_line("X", {}, {}) + article_line("X", {}, {})),
               ParseError);
  EXPECT_THROW(parse_snapshot(category_line("C", {}, {}) + category_line("C", {}, {})),
               ParseError);
  EXPECT_THROW(parse_snapshot(R"({"kind":"article","title":""})"), ParseError);
  EXPECT_THROW(parse_snapshot(R"({"kind":"article","title":"T","interlinks":"X"})"),
               ParseError);
  EXPECT_THROW(parse_snapshot("[1,2]"), ParseError);
}

TEST(LoadSnapshot, DanglingReferencesAreReported) {
  const ArticleGraph g = parse_snapshot(
      category_line("C", {"Missing category"}, {"A", "Ghost"}) +
      article_line("A", {}, {"X", "X", "A"}));
  const std::vector<DanglingRef> expected = {
      {DanglingRef::Kind::Subcategory, "C", "Missing category"},
      {DanglingRef::Kind::Article, "C", "Ghost"},
      {DanglingRef::Kind::Interlink, "A", "X"},
  };
  EXPECT_EQ(g.dangling(), expected);
}

TEST(Traverse, DepthZeroIsDirectMembers) {
  const ArticleGraph g = parse_snapshot(kSmallSnapshot);
  EXPECT_EQ(traverse(g, {"Battles"}, 0).articles,
            (std::vector<std::string>{"Battle A", "Battle B", "Battle C"}));
}

TEST(Traverse, ChainByDepth) {
  const ArticleGraph g = parse_snapshot(
      category_line("C", {"C1"}, {"a"}) + category_line("C1", {"C2"}, {"b"}) +
      category_line("C2", {}, {"c"}) + article_line("a", {}, {}) +
      article_line("b", {}, {}) + article_line("c", {}, {}));
  EXPECT_EQ(traverse(g, {"C"}, 1).articles.size(), 2u);
  EXPECT_EQ(traverse(g, {"C"}, 2).articles.size(), 3u);
  EXPECT_EQ(traverse(g, {"C"}, 7).articles.size(), 3u);
}

TEST(Traverse, MissingSeeds) {
  const ArticleGraph g = parse_snapshot(kSmallSnapshot);
  const auto r = traverse(g, {"Nope", "Sieges"}, 0);
  EXPECT_EQ(r.missing_seeds, std::vector<std::string>{"Nope"});
  EXPECT_EQ(r.articles.size(), 4u);
  EXPECT_THROW(traverse(g, {"Nope", "Nada"}, 1), Error);
  EXPECT_THROW(traverse(g, {}, 1), Error);
  EXPECT_THROW(traverse(g, {"Wars"}, -1), Error);
}

TEST(Traverse, CyclesTerminate) {
  const ArticleGraph g = parse_snapshot(
      category_line("A", {"B"}, {"x"}) + category_line("B", {"A"}, {"y"}) +
      article_line("x", {}, {}) + article_line("y", {}, {}));
  EXPECT_EQ(traverse(g, {"A"}, 100).articles.size(), 2u);
}

ArticleGraph random_graph(testing::Rng& rng) {
  const std::size_t n_cat = testing::pick(rng, 1, 8);
  const std::size_t n_art = testing::pick(rng, 0, 12);
  std::string text;
  for (std::size_t c = 0; c < n_cat; ++c) {
    std::vector<std::string> subs, arts;
    for (std::size_t k = testing::pick(rng, 0, 3); k > 0; --k) {
      subs.push_back("c" + std::to_string(testing::pick(rng, 0, n_cat)));
    }
    for (std::size_t k = testing::pick(rng, 0, 4); k > 0; --k) {
      arts.push_back("a" + std::to_string(testing::pick(rng, 0, n_art)));
    }
    text += category_line("c" + std::to_string(c), subs, arts);
  }
  for (std::size_t a = 0; a < n_art; ++a) {
    std::vector<std::string> links, cats;
    for (std::size_t k = testing::pick(rng, 0, 5); k > 0; --k) {
      links.push_back("a" + std::to_string(testing::pick(rng, 0, n_art + 2)));
    }
    for (std::size_t k = testing::pick(rng, 0, 3); k > 0; --k) {
      cats.push_back("k" + std::to_string(testing::pick(rng, 0, 4)));
    }
    text += article_line("a" + std::to_string(a), cats, links);
  }
  return parse_snapshot(text);
}

TEST(Traverse, MonotoneInDepthAndOrderIndependent) {
  testing::Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const ArticleGraph g = random_graph(rng);
    std::vector<std::string> seeds;
    for (const auto& [name, node] : g.categories()) {
      if (testing::coin(rng)) seeds.push_back(name);
    }
    if (seeds.empty()) seeds.push_back(g.categories().begin()->first);
    std::vector<std::string> previous;
    for (int depth = 0; depth < 5; ++depth) {
      const auto current = traverse(g, seeds, depth).articles;
      EXPECT_TRUE(std::is_sorted(current.begin(), current.end()));
      EXPECT_TRUE(std::includes(current.begin(), current.end(), previous.begin(),
                                previous.end()));
      auto reversed = seeds;
      std::reverse(reversed.begin(), reversed.end());
      EXPECT_EQ(traverse(g, reversed, depth).articles, current);
      previous = current;
    }
  }
}

TEST(HarvestEntities, InterlinkFrequencyTwoHundredTwo) {
  // Four citing articles with 50, 50, 50 and 52 occurrences.
  std::string text = article_line("Treaties of Tilsit", {"1807", "Napoleonic Wars treaties"}, {});
  std::vector<std::string> traversed = {"Treaties of Tilsit"};
  for (int a = 0; a < 4; ++a) {
    std::vector<std::string> links(a == 3 ? 52 : 50, "Treaties of Tilsit");
    const std::string title = "Article " + std::to_string(a);
    text += article_line(title, {}, links);
    traversed.push_back(title);
  }
  const auto raw = harvest_entities(parse_snapshot(text), traversed);
  const auto it = std::find_if(raw.begin(), raw.end(), [](const RawEntity& e) {
    return e.title == "Treaties of Tilsit";
  });
  ASSERT_NE(it, raw.end());
  EXPECT_EQ(it->interlink_freq, 202u);
  EXPECT_EQ(it->categories,
            (std::vector<std::string>{"1807", "Napoleonic Wars treaties"}));
}

TEST(HarvestEntities, NoInterlinks) {
  const ArticleGraph g = parse_snapshot(
      article_line("B", {"x"}, {}) + article_line("A", {}, {}));
  const auto raw = harvest_entities(g, {"A", "B"});
  ASSERT_EQ(raw.size(), 2u);
  EXPECT_EQ(raw[0], (RawEntity{"A", 0, {}}));
  EXPECT_EQ(raw[1], (RawEntity{"B", 0, {"x"}}));
}

TEST(HarvestEntities, CountsOccurrencesAcrossArticles) {
  const ArticleGraph g = parse_snapshot(
      article_line("P", {}, {"T", "T"}) + article_line("Q", {}, {"T", "U"}) +
      article_line("R", {}, {"T"}));
  const auto raw = harvest_entities(g, {"P", "Q"});
  std::map<std::string, std::uint64_t> freq;
  for (const auto& e : raw) freq[e.title] = e.interlink_freq;
  EXPECT_EQ(freq.at("T"), 3u);  // R is not traversed
  EXPECT_EQ(freq.at("U"), 1u);
  EXPECT_EQ(freq.at("P"), 0u);
  EXPECT_FALSE(freq.contains("R"));
  EXPECT_THROW(harvest_entities(g, {"Nope"}), Error);
}

TEST(HarvestEntities, FrequencySumEqualsOccurrenceCount) {
  testing::Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const ArticleGraph g = random_graph(rng);
    std::vector<std::string> traversed;
    std::size_t occurrences = 0;
    for (const auto& [title, node] : g.articles()) {
      if (testing::coin(rng)) {
        traversed.push_back(title);
        occurrences += node.interlinks.size();
      }
    }
    std::uint64_t sum = 0;
    for (const auto& e : harvest_entities(g, traversed)) sum += e.interlink_freq;
    EXPECT_EQ(sum, occurrences);
  }
}

TEST(FilterVocabulary, InterlinkFrequencyOneIsDiscarded) {
  std::vector<RawEntity> raw = {{"Low", 1, {"c"}}, {"B", 5, {"c"}},
                                {"C", 5, {"c"}}, {"D", 5, {"c"}}};
  const Vocabulary v = filter_vocabulary(raw);
  EXPECT_FALSE(v.contains("Low"));
  EXPECT_EQ(v.size(), 3u);
}

TEST(FilterVocabulary, CategoryFrequencyBoundary) {
  std::vector<RawEntity> raw = {{"A", 2, {"x", "y"}}, {"B", 9, {"x"}},
                                {"C", 9, {"y"}}};
  // x and y each have global frequency 2 < 3.
  EXPECT_TRUE(filter_vocabulary(raw).empty());
  raw.push_back({"D", 0, {"x"}});
  // Now x has frequency 3; D still fails the interlink threshold.
  const Vocabulary v = filter_vocabulary(raw);
  EXPECT_EQ(v.size(), 2u);
  EXPECT_TRUE(v.contains("A"));
  EXPECT_TRUE(v.contains("B"));
}

TEST(FilterVocabulary, SeedWordsOnSharedCategory) {
  std::vector<RawEntity> raw = {{"E1", 0, {"wars"}}, {"E2", 1, {"wars"}},
                                {"E3", 2, {"wars"}}, {"E4", 3, {"wars"}},
                                {"E5", 10, {"wars"}}};
  FilterOptions options;
  options.seed_words = {"war"};
  const Vocabulary v = filter_vocabulary(raw, options);
  std::vector<std::string> kept;
  for (const auto& e : v) kept.push_back(e.surface);
  EXPECT_EQ(kept, (std::vector<std::string>{"E3", "E4", "E5"}));

  options.seed_words = {"WAR"};
  EXPECT_EQ(filter_vocabulary(raw, options).size(), 3u);
  options.seed_words = {"battle"};
  EXPECT_TRUE(filter_vocabulary(raw, options).empty());
}

TEST(FilterVocabulary, CyrillicSeedWordsAreCaseInsensitive) {
  std::vector<RawEntity> raw = {{"A", 2, {"Войны России"}}, {"B", 2, {"Войны России"}},
                                {"C", 2, {"Войны России"}}};
  FilterOptions options;
  options.seed_words = {"войн"};
  EXPECT_EQ(filter_vocabulary(raw, options).size(), 3u);
}

TEST(FilterVocabulary, ZeroThresholdsAreIdentityModuloSort) {
  testing::Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<RawEntity> raw;
    std::set<std::string> titles;
    for (std::size_t k = testing::pick(rng, 0, 15); k > 0; --k) {
      RawEntity e{"t" + std::to_string(testing::pick(rng, 0, 30)),
                  testing::pick(rng, 0, 4), {}};
      if (testing::coin(rng)) e.categories.push_back("c");
      titles.insert(e.title);
      raw.push_back(e);
    }
    FilterOptions options{0, 0, {}};
    const Vocabulary v = filter_vocabulary(raw, options);
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(e.surface);
    EXPECT_EQ(out, std::vector<std::string>(titles.begin(), titles.end()));
  }
}

TEST(FilterVocabulary, EveryEntrySatisfiesThresholds) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RawEntity> raw;
    for (std::size_t k = testing::pick(rng, 0, 25); k > 0; --k) {
      RawEntity e{"t" + std::to_string(raw.size()), testing::pick(rng, 0, 5), {}};
      for (std::size_t c = testing::pick(rng, 0, 3); c > 0; --c) {
        e.categories.push_back("cat" + std::to_string(testing::pick(rng, 0, 6)));
      }
      raw.push_back(e);
    }
    const FilterOptions options{testing::pick(rng, 0, 3), testing::pick(rng, 0, 5), {}};
    const auto table = category_frequencies(raw);
    for (const auto& e : filter_vocabulary(raw, options)) {
      ASSERT_TRUE(e.interlink_freq.has_value());
      EXPECT_GE(*e.interlink_freq, options.min_interlink);
      EXPECT_GE(entity_category_frequency(e.categories, table), options.min_category);
    }
  }
}

TEST(MergeExternal, AppendsNewSurface) {
  Vocabulary v;
  v.add({"Streltsy", {}, 4, {"c"}, EntrySource::Wiki, std::nullopt});
  const auto merged = merge_external_entities(v, {"Oprichnina"});
  ASSERT_EQ(merged.vocabulary.size(), 2u);
  const VocabEntry& e = merged.vocabulary[1];
  EXPECT_EQ(e.surface, "Oprichnina");
  EXPECT_EQ(e.source, EntrySource::External);
  EXPECT_FALSE(e.interlink_freq.has_value());
  EXPECT_TRUE(e.categories.empty());
  EXPECT_TRUE(merged.duplicates.empty());
}

TEST(MergeExternal, EmptyAndDuplicate) {
  Vocabulary v;
  v.add({"Streltsy", {}, 4, {"c"}, EntrySource::Wiki, std::nullopt});
  EXPECT_EQ(merge_external_entities(v, {}).vocabulary, v);
  const auto merged = merge_external_entities(v, {"Streltsy"});
  EXPECT_EQ(merged.vocabulary, v);
  EXPECT_EQ(merged.duplicates, std::vector<std::string>{"Streltsy"});
}

TEST(VocabularyJsonl, RoundTrip) {
  Vocabulary v;
  v.add({"Битва за Москву", {"битва", "за", "москва"}, 12, {"Сражения России"},
         EntrySource::Wiki, std::nullopt});
  v.add({"Иван Грозный", {"иван", "грозный"}, std::nullopt, {}, EntrySource::External,
         std::vector<Label>{Label::begin(EntityType::PER), Label::inside(EntityType::PER)}});
  const std::string text = write_vocabulary(v);
  EXPECT_NE(text.find("\"interlink_freq\":null"), std::string::npos);
  EXPECT_NE(text.find("Битва за Москву"), std::string::npos);
  EXPECT_EQ(parse_vocabulary(text), v);
  EXPECT_EQ(write_vocabulary(parse_vocabulary(text)), text);
}

TEST(VocabularyJsonl, Errors) {
  EXPECT_THROW(parse_vocabulary(R"({"surface":"a"})" "\n" R"({"surface":"a"})"), ParseError);
  EXPECT_THROW(parse_vocabulary(R"({"surface":"a","source":"mystery"})"), ParseError);
  EXPECT_THROW(parse_vocabulary(R"({"surface":"a","interlink_freq":-1})"), ParseError);
  EXPECT_THROW(parse_vocabulary(R"({"surface":"a","labels":["B-XYZ"]})"), ParseError);
}

TEST(FillLemmas, LengthMatchesTokenization) {
  Vocabulary v;
  v.add({"Отечественная война 1812 года", {}, 2, {}, EntrySource::Wiki, std::nullopt});
  v.add({"«Слово о полку Игореве»", {}, 2, {}, EntrySource::Wiki, std::nullopt});
  const Vocabulary filled = fill_lemmas(v, CaseFoldLemmatizer{});
  for (const auto& e : filled) {
    EXPECT_EQ(e.lemmas.size(), tokenize(e.surface).size());
  }
  EXPECT_EQ(filled[0].lemmas,
            (std::vector<std::string>{"отечественная", "война", "1812", "года"}));
}

TEST(MiniFixture, BuildsTwentyEntryVocabulary) {
  const ArticleGraph g = load_snapshot(NERFORGE_TEST_DATA "/mini/snapshot.jsonl");
  const auto seeds = read_lines(NERFORGE_TEST_DATA "/mini/seeds.txt");
  const auto traversal = traverse(g, seeds, 1);
  // 2 + 3 + 2 + 1 under История России, 3 + 4 under Войны России, minus the
  // shared Отечественная война 1812 года.
  EXPECT_EQ(traversal.articles.size(), 14u);
  const auto raw = harvest_entities(g, traversal.articles);
  FilterOptions options;
  options.seed_words = read_lines(NERFORGE_TEST_DATA "/mini/seed_words.txt");
  const Vocabulary filtered = filter_vocabulary(raw, options);
  EXPECT_EQ(filtered.size(), 18u);
  // Filtered by interlink frequency (1), category frequency (Москва),
  // and seed words (Пруссия).
  EXPECT_FALSE(filtered.contains("Филёвский совет"));
  EXPECT_FALSE(filtered.contains("Москва"));
  EXPECT_FALSE(filtered.contains("Пруссия"));
  const auto merged = merge_external_entities(
      filtered, read_lines(NERFORGE_TEST_DATA "/mini/extra_entities.txt"));
  EXPECT_EQ(merged.vocabulary.size(), 20u);
  EXPECT_EQ(merged.duplicates, std::vector<std::string>{"Опричнина"});
  // Depth 2 reaches the sub-subcategories.
  EXPECT_GT(traverse(g, seeds, 2).articles.size(), traversal.articles.size());
}

}  // namespace
}  // namespace nerforge
