// nerforge: command-line front end for the dataset construction pipeline.
//
// Every stage reads and writes files in the documented formats (CoNLL,
// JSON Lines, plain word lists), so any stage can be swapped out.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "fetch_snapshot.hpp"
#include "nerforge/nerforge.hpp"

namespace fs = std::filesystem;
using namespace nerforge;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_st("nerforge");
  logger->set_pattern("nerforge: %l: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("NERFORGE_LOG")) {
    const std::string level(env);
    if (level == "error") spdlog::set_level(spdlog::level::err);
    else if (level == "warn") spdlog::set_level(spdlog::level::warn);
    else if (level == "info") spdlog::set_level(spdlog::level::info);
    else if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else spdlog::warn("ignoring NERFORGE_LOG='{}'", level);
  }
}

// Writes to `path`, or to standard output when the path is empty or "-".
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_file(path, content);
  }
}

Dataset load_conll(const std::string& path) {
  ConllDiagnostics diag;
  Dataset ds = read_conll_file(path, &diag);
  if (!diag.iob_invalid.empty()) {
    spdlog::warn("{}: {} sentence(s) are not IOB-valid (first: sentence {})",
                 path, diag.iob_invalid.size(), diag.iob_invalid.front());
  }
  return ds;
}

std::unique_ptr<Lemmatizer> make_lemmatizer(const std::string& path) {
  if (path.empty()) return std::make_unique<CaseFoldLemmatizer>();
  auto table = std::make_unique<LemmaTable>(LemmaTable::load(path));
  if (table->ignored_duplicates() > 0) {
    spdlog::warn("{}: {} duplicate surface(s) ignored", path,
                 table->ignored_duplicates());
  }
  spdlog::info("loaded {} lemma entries from {}", table->size(), path);
  return table;
}

// ---------------------------------------------------------------- build-vocab

struct BuildVocabArgs {
  std::string snapshot;
  std::string seeds;
  int depth = 1;
  std::uint64_t min_interlink = 2;
  std::uint64_t min_category = 3;
  std::string seed_words;
  std::string extra_entities;
  std::string lemmas;
  std::string output;
};

void run_build_vocab(const BuildVocabArgs& args) {
  const ArticleGraph graph = load_snapshot(args.snapshot);
  spdlog::info("snapshot: {} categories, {} articles", graph.categories().size(),
               graph.articles().size());
  for (const auto& ref : graph.dangling()) {
    spdlog::debug("dangling {} reference from '{}' to '{}'", to_string(ref.kind),
                  ref.from, ref.target);
  }

  const auto traversal = traverse(graph, read_lines(args.seeds), args.depth);
  for (const auto& seed : traversal.missing_seeds) {
    spdlog::warn("seed category '{}' is not in the snapshot, skipped", seed);
  }
  spdlog::info("traversal at depth {}: {} articles", args.depth,
               traversal.articles.size());

  const auto raw = harvest_entities(graph, traversal.articles);
  FilterOptions options;
  options.min_interlink = args.min_interlink;
  options.min_category = args.min_category;
  if (!args.seed_words.empty()) options.seed_words = read_lines(args.seed_words);
  Vocabulary vocab = filter_vocabulary(raw, options);
  spdlog::info("{} raw entities, {} kept by filters", raw.size(), vocab.size());

  if (!args.extra_entities.empty()) {
    auto merged = merge_external_entities(std::move(vocab),
                                          read_lines(args.extra_entities));
    for (const auto& dup : merged.duplicates) {
      spdlog::warn("external entity '{}' already in vocabulary", dup);
    }
    vocab = std::move(merged.vocabulary);
  }

  const auto lemmatizer = make_lemmatizer(args.lemmas);
  emit(args.output, write_vocabulary(fill_lemmas(vocab, *lemmatizer)));
}

// ------------------------------------------------------------------- annotate

struct AnnotateArgs {
  std::string vocab;
  std::string lemmas;
  std::string abbrev;
  std::string input;
  std::string format = "auto";
  std::string output;
  bool predefined_labels = false;
  unsigned threads = 1;
};

void run_annotate(const AnnotateArgs& args) {
  const Vocabulary vocab = load_vocabulary(args.vocab);
  const auto lemmatizer = make_lemmatizer(args.lemmas);
  const MatchIndex index = build_index(vocab, *lemmatizer);
  for (const auto& s : index.skipped) {
    spdlog::warn("vocabulary entry '{}' has no tokens, skipped", s);
  }
  for (const auto& c : index.collisions) {
    spdlog::warn("vocabulary entries '{}' and '{}' share a lemma sequence; "
                 "keeping the first", c.kept, c.rejected);
  }
  spdlog::info("index: {} patterns", index.pattern_count());

  std::string format = args.format;
  if (format == "auto") {
    format = fs::path(args.input).extension() == ".conll" ? "conll" : "text";
  }
  std::vector<std::vector<Token>> sentences;
  if (format == "conll") {
    for (const auto& s : load_conll(args.input)) sentences.push_back(s.tokens());
  } else {
    std::vector<std::string> abbreviations;
    if (!args.abbrev.empty()) abbreviations = read_lines(args.abbrev);
    const SentenceSegmenter segmenter(abbreviations);
    for (const auto& text : segmenter.segment(read_file(args.input))) {
      auto tokens = tokenize(text);
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
    }
  }

  AnnotateOptions options;
  options.predefined_labels = args.predefined_labels;
  auto tagged = parallel_map(sentences.size(), args.threads, [&](std::size_t i) {
    const auto lemmatized = lemmatize(sentences[i], *lemmatizer);
    return TaggedSentence(sentences[i], annotate(lemmatized, index, options).tags());
  });
  Dataset out;
  for (auto& s : tagged) out.add(std::move(s));
  spdlog::info("annotated {} sentences", out.size());
  emit(args.output, write_conll(out));
}

// ---------------------------------------------------------------------- unify

void run_unify(const std::string& general, const std::string& dictionary,
               const std::string& output, unsigned threads) {
  const Dataset g = load_conll(general);
  const Dataset d = load_conll(dictionary);
  auto report = unify_datasets(g, d, threads);
  if (!report.repaired_general.empty()) {
    spdlog::warn("{}: repaired dangling I- tags in {} sentence(s)", general,
                 report.repaired_general.size());
  }
  if (!report.repaired_dictionary.empty()) {
    spdlog::warn("{}: repaired dangling I- tags in {} sentence(s)", dictionary,
                 report.repaired_dictionary.size());
  }
  emit(output, write_conll(report.dataset));
}

// ------------------------------------------------------------------- assemble

struct AssembleArgs {
  std::vector<std::string> inputs;
  bool dedup = false;
  bool drop_all_o = false;
  std::string split;
  std::uint64_t seed = 0;
  std::string output;
};

std::array<double, 3> parse_ratios(const std::string& text) {
  std::array<double, 3> ratios{};
  std::stringstream in(text);
  std::string item;
  std::size_t n = 0;
  while (std::getline(in, item, ',')) {
    if (n == 3) throw Error("--split expects exactly three ratios");
    std::size_t used = 0;
    try {
      ratios[n] = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw Error("--split: cannot parse ratio '" + item + "'");
    }
    ++n;
  }
  if (n != 3) throw Error("--split expects exactly three ratios");
  return ratios;
}

void run_assemble(const AssembleArgs& args) {
  Dataset ds;
  for (const auto& path : args.inputs) {
    for (const auto& s : load_conll(path)) ds.add(s, path);
  }
  spdlog::info("{} sentences from {} file(s)", ds.size(), args.inputs.size());
  if (args.dedup) {
    auto report = deduplicate(ds);
    spdlog::info("dedup: removed {} sentence(s), {} with conflicting tags",
                 report.removed, report.tag_conflicts);
    ds = std::move(report.dataset);
  }
  if (args.drop_all_o) {
    const std::size_t before = ds.size();
    ds = drop_all_outside(ds);
    spdlog::info("dropped {} all-O sentence(s)", before - ds.size());
  }
  if (args.split.empty()) {
    emit(args.output, write_conll(ds));
    return;
  }
  if (args.output.empty() || args.output == "-") {
    throw Error("--split requires -o <directory>");
  }
  const auto parts = split(ds, parse_ratios(args.split), args.seed);
  fs::create_directories(args.output);
  const fs::path dir(args.output);
  write_file(dir / "train.conll", write_conll(parts.train));
  write_file(dir / "dev.conll", write_conll(parts.dev));
  write_file(dir / "test.conll", write_conll(parts.test));
  spdlog::info("split: {} / {} / {}", parts.train.size(), parts.dev.size(),
               parts.test.size());
}

// ----------------------------------------------------------------- eval/stats

void run_eval(const std::string& gold_path, const std::string& pred_path,
              bool unify, const std::string& output, unsigned threads) {
  Dataset gold = load_conll(gold_path);
  Dataset pred = load_conll(pred_path);
  if (unify) {
    gold = unify_labels(gold);
    pred = unify_labels(pred);
  }
  const EvalReport report = evaluate(gold, pred, threads);
  emit(output, to_json(report).dump(2) + "\n");
}

void run_stats(const std::string& path) {
  ConllDiagnostics diag;
  const Dataset ds = read_conll_file(path, &diag);
  std::array<std::size_t, Label::kCount> counts{};
  std::size_t all_o = 0;
  for (const auto& s : ds) {
    for (Label t : s.tags()) ++counts[t.index()];
    if (s.all_outside()) ++all_o;
  }
  std::cout << "sentences\t" << ds.size() << '\n'
            << "tokens\t" << ds.token_count() << '\n'
            << "all_o_sentences\t" << all_o << '\n'
            << "iob_invalid_sentences\t" << diag.iob_invalid.size() << '\n';
  for (Label l : all_labels()) {
    std::cout << l.str() << '\t' << counts[l.index()] << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"nerforge: weakly supervised NER dataset construction"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  BuildVocabArgs bv;
  auto* build_vocab = app.add_subcommand("build-vocab",
      "Mine an entity vocabulary from a category-graph snapshot");
  build_vocab->add_option("--snapshot", bv.snapshot, "Snapshot (JSON Lines)")
      ->required()->check(CLI::ExistingFile);
  build_vocab->add_option("--seeds", bv.seeds, "Seed categories, one per line")
      ->required()->check(CLI::ExistingFile);
  build_vocab->add_option("--depth", bv.depth, "Traversal depth")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  build_vocab->add_option("--min-interlink", bv.min_interlink,
                          "Minimum interlink frequency")->capture_default_str();
  build_vocab->add_option("--min-category", bv.min_category,
                          "Minimum category frequency")->capture_default_str();
  build_vocab->add_option("--seed-words", bv.seed_words,
                          "Category-name seed words, one per line")
      ->check(CLI::ExistingFile);
  build_vocab->add_option("--extra-entities", bv.extra_entities,
                          "Extra surface forms to merge, one per line")
      ->check(CLI::ExistingFile);
  build_vocab->add_option("--lemmas", bv.lemmas, "Lemma table (TSV)")
      ->check(CLI::ExistingFile);
  build_vocab->add_option("-o,--output", bv.output, "Output vocabulary (JSON Lines)");

  AnnotateArgs an;
  auto* annotate_cmd = app.add_subcommand("annotate",
      "Tag vocabulary mentions in text as MISC spans");
  annotate_cmd->add_option("--vocab", an.vocab, "Vocabulary (JSON Lines)")
      ->required()->check(CLI::ExistingFile);
  annotate_cmd->add_option("--lemmas", an.lemmas, "Lemma table (TSV)")
      ->check(CLI::ExistingFile);
  annotate_cmd->add_option("--abbrev", an.abbrev, "Abbreviations, one per line")
      ->check(CLI::ExistingFile);
  annotate_cmd->add_option("input", an.input, "Plain text or CoNLL tokens file")
      ->required()->check(CLI::ExistingFile);
  annotate_cmd->add_option("--format", an.format, "Input format")
      ->check(CLI::IsMember({"auto", "text", "conll"}))->capture_default_str();
  annotate_cmd->add_option("-o,--output", an.output, "Output CoNLL");
  annotate_cmd->add_flag("--predefined-labels", an.predefined_labels,
                         "Use per-entry label sequences when present");
  annotate_cmd->add_option("--threads", an.threads)->check(CLI::PositiveNumber);

  std::string un_general, un_dict, un_output;
  unsigned un_threads = 1;
  auto* unify_cmd = app.add_subcommand("unify",
      "Merge a general-domain layer with a dictionary layer");
  unify_cmd->add_option("general", un_general, "General-domain CoNLL")
      ->required()->check(CLI::ExistingFile);
  unify_cmd->add_option("dictionary", un_dict, "Dictionary CoNLL")
      ->required()->check(CLI::ExistingFile);
  unify_cmd->add_option("-o,--output", un_output, "Output CoNLL");
  unify_cmd->add_option("--threads", un_threads)->check(CLI::PositiveNumber);

  AssembleArgs as;
  auto* assemble_cmd = app.add_subcommand("assemble",
      "Concatenate, filter and split CoNLL datasets");
  assemble_cmd->add_option("inputs", as.inputs, "CoNLL files, in order")
      ->required()->check(CLI::ExistingFile);
  assemble_cmd->add_flag("--dedup", as.dedup, "Drop repeated token sequences");
  assemble_cmd->add_flag("--drop-all-o", as.drop_all_o,
                         "Drop sentences tagged only O");
  assemble_cmd->add_option("--split", as.split, "Train,dev,test ratios");
  assemble_cmd->add_option("--seed", as.seed, "Shuffle seed")->capture_default_str();
  assemble_cmd->add_option("-o,--output", as.output,
                           "Output file, or directory with --split");

  std::string ev_gold, ev_pred, ev_output;
  bool ev_unify = false;
  unsigned ev_threads = 1;
  auto* eval_cmd = app.add_subcommand("eval",
      "Token-level per-label precision/recall/F1");
  eval_cmd->add_option("gold", ev_gold)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("pred", ev_pred)->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--unify-labels", ev_unify,
                     "Collapse entity types to MISC before scoring");
  eval_cmd->add_option("-o,--output", ev_output, "Report (JSON)");
  eval_cmd->add_option("--threads", ev_threads)->check(CLI::PositiveNumber);

  std::string st_input;
  auto* stats_cmd = app.add_subcommand("stats", "Sentence, token and label counts");
  stats_cmd->add_option("file", st_input)->required()->check(CLI::ExistingFile);

  tools::FetchArgs fa;
  auto* fetch_cmd = app.add_subcommand("fetch-snapshot",
      "Download a snapshot from a live MediaWiki API (network access)");
  fetch_cmd->add_option("--seeds", fa.seeds_file, "Seed categories, one per line")
      ->required()->check(CLI::ExistingFile);
  fetch_cmd->add_option("--depth", fa.depth)->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  fetch_cmd->add_option("--host", fa.host)->capture_default_str();
  fetch_cmd->add_option("--category-prefix", fa.category_prefix)
      ->capture_default_str();
  fetch_cmd->add_flag("--linked-articles", fa.fetch_linked,
                      "Also fetch records for interlinked articles");
  fetch_cmd->add_option("-o,--output", fa.output, "Snapshot (JSON Lines)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*build_vocab) {
      run_build_vocab(bv);
    } else if (*annotate_cmd) {
      run_annotate(an);
    } else if (*unify_cmd) {
      run_unify(un_general, un_dict, un_output, un_threads);
    } else if (*assemble_cmd) {
      run_assemble(as);
    } else if (*eval_cmd) {
      run_eval(ev_gold, ev_pred, ev_unify, ev_output, ev_threads);
    } else if (*stats_cmd) {
      run_stats(st_input);
    } else if (*fetch_cmd) {
      tools::fetch_snapshot(fa);
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
