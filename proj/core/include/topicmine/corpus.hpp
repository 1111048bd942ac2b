#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "topicmine/sparse.hpp"

namespace topicmine {

struct RawDocument {
  std::string id;
  std::string text;
  std::map<std::string, std::string> meta;

  bool operator==(const RawDocument&) const = default;
};

struct JsonlLoad {
  std::vector<RawDocument> docs;
  std::vector<std::string> warnings;
};

// One document per nonblank line, in file order. Missing ids become
// "doc-<line>"; every field other than the id and text field is kept in meta
// (non-string values as compact JSON).
JsonlLoad load_jsonl(const std::filesystem::path& path, std::string_view text_field = "narrative");

enum class Normalizer { none, suffix_stemmer, lemma_lexicon };

std::string_view to_string(Normalizer n);
Normalizer normalizer_from_string(std::string_view s);

struct PreprocessConfig {
  bool lowercase = true;
  std::string stopword_path;  // empty selects the built-in English list
  Normalizer normalizer = Normalizer::suffix_stemmer;
  std::string lexicon_path;  // required when normalizer == lemma_lexicon
  int min_token_len = 2;
  int min_df = 5;
  double max_df_ratio = 0.5;

  // Throws UsageError naming the violated constraint.
  void validate() const;

  bool operator==(const PreprocessConfig&) const = default;
};

using StopwordSet = std::unordered_set<std::string>;
using LemmaLexicon = std::unordered_map<std::string, std::string>;

// One lowercase word per line; '#' starts a comment.
StopwordSet load_stopwords(const std::filesystem::path& path);
const StopwordSet& default_stopwords();
// "surface<TAB>lemma" per line.
LemmaLexicon load_lexicon(const std::filesystem::path& path);

// Splits on ASCII non-alphanumeric boundaries (bytes >= 0x80 are kept inside
// tokens so UTF-8 words stay whole), optionally lowercases, drops stopwords
// and short tokens, then applies the normalizer. Order is preserved.
std::vector<std::string> preprocess(std::string_view text, const PreprocessConfig& config,
                                    const StopwordSet& stopwords, const LemmaLexicon* lexicon = nullptr);

struct Vocabulary {
  std::vector<std::string> terms;  // sorted
  std::unordered_map<std::string, std::uint32_t> index;

  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> sorted_terms);

  std::size_t size() const { return terms.size(); }
  // Index of term, or -1 when absent.
  std::int64_t find(std::string_view term) const;

  bool operator==(const Vocabulary& o) const { return terms == o.terms; }
};

using TokenSeqs = std::vector<std::vector<std::string>>;

// Terms whose document frequency lies in [min_df, max_df_ratio * N].
Vocabulary build_vocabulary(const TokenSeqs& token_seqs, const PreprocessConfig& config);

struct DocTermMatrix {
  CountMatrix counts;
  std::vector<std::uint8_t> kept_mask;  // 0 for all-zero rows
};

DocTermMatrix build_doc_term_matrix(const TokenSeqs& token_seqs, const Vocabulary& vocab);

struct Corpus {
  std::vector<RawDocument> docs;
  TokenSeqs token_seqs;
  Vocabulary vocab;
  CountMatrix counts;
  std::vector<std::uint8_t> kept_mask;
  std::string text_field = "narrative";
  PreprocessConfig config;
  std::vector<std::string> warnings;

  std::size_t n_docs() const { return docs.size(); }
  std::size_t n_kept() const;

  bool operator==(const Corpus& o) const {
    return docs == o.docs && token_seqs == o.token_seqs && vocab == o.vocab && counts == o.counts &&
           kept_mask == o.kept_mask && text_field == o.text_field && config == o.config;
  }
};

// Preprocesses every document (in parallel blocks, assembled in input order),
// then builds the vocabulary and count matrix.
Corpus build_corpus(std::vector<RawDocument> docs, const PreprocessConfig& config, unsigned threads = 1,
                    std::string text_field = "narrative");

// Loads stopwords/lexicon named by the config and builds the corpus.
Corpus build_corpus_from_jsonl(const std::filesystem::path& path, std::string_view text_field,
                               const PreprocessConfig& config, unsigned threads = 1);

// FNV-1a 64 over vocabulary, counts and token sequences, as 16 hex digits.
std::string corpus_fingerprint(const Corpus& corpus);

// Versioned binary snapshot ("TMCORPUS", version 1). Layout is documented in
// docs/formats.md.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace topicmine
