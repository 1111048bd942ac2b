#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "topicmine/corpus.hpp"
#include "topicmine/linalg.hpp"

namespace topicmine {

struct PlsaConfig {
  int k = 6;
  int max_iters = 200;
  double tol = 1e-6;  // relative log-likelihood improvement
  std::uint64_t seed = 0;
  int restarts = 1;
  unsigned threads = 1;

  void validate() const;
  bool operator==(const PlsaConfig&) const = default;
};

// Asymmetric PLSA parameters. Rows of word_given_topic (K x V) and
// topic_given_doc (N x K) are distributions; doc_prior is proportional to
// document token mass (zero for empty documents).
struct PlsaModel {
  RowMatrix word_given_topic;
  RowMatrix topic_given_doc;
  Vector doc_prior;
  std::vector<double> ll_trace;
  PlsaConfig config;

  int n_topics() const { return static_cast<int>(word_given_topic.rows()); }
  std::size_t n_docs() const { return static_cast<std::size_t>(topic_given_doc.rows()); }
  std::size_t vocab_size() const { return static_cast<std::size_t>(word_given_topic.cols()); }
};

// Floor added to degenerate accumulators before normalisation.
inline constexpr double kPlsaFloor = 1e-12;

PlsaModel plsa_init(const PlsaConfig& config, std::size_t n_docs, std::size_t vocab_size, const CountMatrix& counts);

// One EM sweep; returns the updated model and the log-likelihood of the
// updated parameters, sum_{d,w} n(d,w) log(P(d) sum_z P(z|d) P(w|z)).
std::pair<PlsaModel, double> plsa_iterate(const PlsaModel& model, const CountMatrix& counts, unsigned threads = 1);

double plsa_log_likelihood(const PlsaModel& model, const CountMatrix& counts);

PlsaModel plsa_fit(const CountMatrix& counts, const PlsaConfig& config);

struct ScoredTerm {
  std::string term;
  double score = 0.0;
  bool operator==(const ScoredTerm&) const = default;
};

// n most probable terms of a topic, ties broken lexicographically.
std::vector<ScoredTerm> plsa_top_words(const PlsaModel& model, int topic, std::size_t n, const Vocabulary& vocab);

// Argmax topic histogram over documents with nonzero prior (lowest index wins ties).
std::vector<std::size_t> plsa_dominant_topics(const PlsaModel& model);

// Per-document argmax topic, -1 for empty documents.
std::vector<int> plsa_document_topics(const PlsaModel& model);

// Versioned binary snapshot ("TMPLSA01"), float64 little-endian payload.
void save_plsa_model(const PlsaModel& model, const std::filesystem::path& path);
PlsaModel load_plsa_model(const std::filesystem::path& path);

}  // namespace topicmine
