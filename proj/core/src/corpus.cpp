#include "topicmine/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "topicmine/error.hpp"
#include "topicmine/parallel.hpp"
#include "topicmine/porter_stemmer.hpp"

namespace topicmine {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::ifstream open_text(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + std::string(what) + " file: " + path.string());
  return in;
}

}  // namespace

JsonlLoad load_jsonl(const std::filesystem::path& path, std::string_view text_field) {
  auto in = open_text(path, "corpus");
  JsonlLoad out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(path.string() + ": malformed JSON on line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object())
      throw DataError(path.string() + ": line " + std::to_string(line_no) + " is not a JSON object");

    RawDocument doc;
    auto as_string = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    for (const auto& [key, value] : obj.items()) {
      if (key == "id") {
        doc.id = as_string(value);
      } else if (key == text_field) {
        doc.text = as_string(value);
      } else {
        doc.meta.emplace(key, as_string(value));
      }
    }
    if (doc.id.empty()) doc.id = "doc-" + std::to_string(line_no);
    if (!obj.contains(text_field)) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": missing field \"" + std::string(text_field) +
                             "\"; using empty text");
    }
    if (!seen.insert(doc.id).second)
      throw DataError(path.string() + ": duplicate document id \"" + doc.id + "\" on line " +
                      std::to_string(line_no));
    out.docs.push_back(std::move(doc));
  }
  return out;
}

std::string_view to_string(Normalizer n) {
  switch (n) {
    case Normalizer::none: return "none";
    case Normalizer::suffix_stemmer: return "suffix_stemmer";
    case Normalizer::lemma_lexicon: return "lemma_lexicon";
  }
  return "none";
}

Normalizer normalizer_from_string(std::string_view s) {
  if (s == "none") return Normalizer::none;
  if (s == "suffix_stemmer") return Normalizer::suffix_stemmer;
  if (s == "lemma_lexicon") return Normalizer::lemma_lexicon;
  throw UsageError("unknown normalizer \"" + std::string(s) + "\" (none|suffix_stemmer|lemma_lexicon)");
}

void PreprocessConfig::validate() const {
  if (min_df < 1) throw UsageError("preprocess: min_df must satisfy min_df >= 1");
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0))
    throw UsageError("preprocess: max_df_ratio must satisfy 0 < max_df_ratio <= 1");
  if (min_token_len < 1) throw UsageError("preprocess: min_token_len must satisfy min_token_len >= 1");
  if (normalizer == Normalizer::lemma_lexicon && lexicon_path.empty())
    throw UsageError("preprocess: normalizer lemma_lexicon requires lexicon_path");
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  auto in = open_text(path, "stopword");
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto w = trim(line);
    if (!w.empty()) words.insert(std::move(w));
  }
  return words;
}

const StopwordSet& default_stopwords() {
  // The common English function-word list used by most NLP toolkits.
  static const StopwordSet words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
      "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that",
      "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
      "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because", "as",
      "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into", "through",
      "during", "before", "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
      "over", "under", "again", "further", "then", "once", "here", "there", "when", "where", "why", "how",
      "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor", "not",
      "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will", "just", "don", "should",
      "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn", "hadn",
      "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn", "wasn", "weren", "won",
      "wouldn"};
  return words;
}

LemmaLexicon load_lexicon(const std::filesystem::path& path) {
  auto in = open_text(path, "lemma lexicon");
  LemmaLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path.string() + ": line " + std::to_string(line_no) + " is not surface<TAB>lemma");
    lex[trim(std::string_view(line).substr(0, tab))] = trim(std::string_view(line).substr(tab + 1));
  }
  return lex;
}

std::vector<std::string> preprocess(std::string_view text, const PreprocessConfig& config,
                                    const StopwordSet& stopwords, const LemmaLexicon* lexicon) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i) continue;

    std::string tok(text.substr(start, i - start));
    if (config.lowercase)
      for (char& c : tok)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (stopwords.contains(tok)) continue;
    if (static_cast<int>(tok.size()) < config.min_token_len) continue;

    switch (config.normalizer) {
      case Normalizer::none:
        break;
      case Normalizer::suffix_stemmer:
        tok = porter_stem(tok);
        break;
      case Normalizer::lemma_lexicon:
        if (lexicon) {
          if (auto it = lexicon->find(tok); it != lexicon->end()) tok = it->second;
        }
        break;
    }
    out.push_back(std::move(tok));
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> sorted_terms) : terms(std::move(sorted_terms)) {
  index.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) index.emplace(terms[i], static_cast<std::uint32_t>(i));
}

std::int64_t Vocabulary::find(std::string_view term) const {
  auto it = index.find(std::string(term));
  return it == index.end() ? -1 : static_cast<std::int64_t>(it->second);
}

Vocabulary build_vocabulary(const TokenSeqs& token_seqs, const PreprocessConfig& config) {
  config.validate();
  if (token_seqs.empty()) throw DataError("cannot build a vocabulary from zero documents");

  std::map<std::string, std::size_t> df;
  for (const auto& seq : token_seqs) {
    std::vector<std::string_view> uniq(seq.begin(), seq.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto t : uniq) ++df[std::string(t)];
  }

  const double max_df = config.max_df_ratio * static_cast<double>(token_seqs.size());
  std::vector<std::string> terms;
  for (const auto& [term, f] : df)
    if (f >= static_cast<std::size_t>(config.min_df) && static_cast<double>(f) <= max_df) terms.push_back(term);

  if (terms.empty()) {
    std::ostringstream msg;
    msg << "vocabulary is empty after document-frequency filtering (min_df=" << config.min_df
        << ", max_df_ratio=" << config.max_df_ratio << ", " << token_seqs.size()
        << " documents); relax the thresholds";
    throw DataError(msg.str());
  }
  return Vocabulary(std::move(terms));
}

DocTermMatrix build_doc_term_matrix(const TokenSeqs& token_seqs, const Vocabulary& vocab) {
  DocTermMatrix out;
  auto& m = out.counts;
  m.n_rows = token_seqs.size();
  m.n_cols = vocab.size();
  out.kept_mask.reserve(token_seqs.size());
  std::vector<std::uint32_t> ids;
  for (const auto& seq : token_seqs) {
    ids.clear();
    for (const auto& tok : seq)
      if (auto it = vocab.index.find(tok); it != vocab.index.end()) ids.push_back(it->second);
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size();) {
      std::size_t j = i;
      while (j < ids.size() && ids[j] == ids[i]) ++j;
      m.col_idx.push_back(ids[i]);
      m.values.push_back(static_cast<std::uint32_t>(j - i));
      i = j;
    }
    m.row_ptr.push_back(m.values.size());
    out.kept_mask.push_back(ids.empty() ? 0 : 1);
  }
  return out;
}

std::size_t Corpus::n_kept() const { return static_cast<std::size_t>(std::count(kept_mask.begin(), kept_mask.end(), 1)); }

Corpus build_corpus(std::vector<RawDocument> docs, const PreprocessConfig& config, unsigned threads,
                    std::string text_field) {
  config.validate();
  const StopwordSet custom = config.stopword_path.empty() ? StopwordSet{} : load_stopwords(config.stopword_path);
  const StopwordSet& stopwords = config.stopword_path.empty() ? default_stopwords() : custom;
  LemmaLexicon lexicon;
  if (config.normalizer == Normalizer::lemma_lexicon) lexicon = load_lexicon(config.lexicon_path);

  Corpus corpus;
  corpus.config = config;
  corpus.text_field = std::move(text_field);
  corpus.token_seqs.resize(docs.size());
  parallel_blocks(docs.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d)
      corpus.token_seqs[d] = preprocess(docs[d].text, config, stopwords, &lexicon);
  });
  corpus.docs = std::move(docs);
  corpus.vocab = build_vocabulary(corpus.token_seqs, config);
  auto dtm = build_doc_term_matrix(corpus.token_seqs, corpus.vocab);
  corpus.counts = std::move(dtm.counts);
  corpus.kept_mask = std::move(dtm.kept_mask);
  for (std::size_t d = 0; d < corpus.n_docs(); ++d)
    if (!corpus.kept_mask[d])
      corpus.warnings.push_back("document \"" + corpus.docs[d].id + "\" is empty after preprocessing");
  return corpus;
}

Corpus build_corpus_from_jsonl(const std::filesystem::path& path, std::string_view text_field,
                               const PreprocessConfig& config, unsigned threads) {
  auto loaded = load_jsonl(path, text_field);
  auto corpus = build_corpus(std::move(loaded.docs), config, threads, std::string(text_field));
  corpus.warnings.insert(corpus.warnings.begin(), loaded.warnings.begin(), loaded.warnings.end());
  return corpus;
}

std::string corpus_fingerprint(const Corpus& corpus) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_u64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      const unsigned char b = static_cast<unsigned char>(v >> (8 * i));
      mix_bytes(&b, 1);
    }
  };
  auto mix_str = [&](const std::string& s) {
    mix_u64(s.size());
    mix_bytes(s.data(), s.size());
  };
  mix_u64(corpus.n_docs());
  for (const auto& t : corpus.vocab.terms) mix_str(t);
  for (auto p : corpus.counts.row_ptr) mix_u64(p);
  for (auto c : corpus.counts.col_idx) mix_u64(c);
  for (auto v : corpus.counts.values) mix_u64(v);
  for (const auto& seq : corpus.token_seqs) {
    mix_u64(seq.size());
    for (const auto& t : seq) mix_str(t);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace topicmine
