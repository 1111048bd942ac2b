#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "topicmine/corpus.hpp"
#include "topicmine/topic_set.hpp"

namespace topicmine {

struct CoherenceConfig {
  int window = 110;
  int top_n = 10;
  double epsilon = 1e-12;

  void validate() const;
  bool operator==(const CoherenceConfig&) const = default;
};

// Boolean sliding-window counts restricted to a set of target terms.
struct WindowStats {
  std::uint64_t n_windows = 0;
  std::map<std::string, std::uint64_t> occur;
  std::map<std::pair<std::string, std::string>, std::uint64_t> cooccur;  // key.first < key.second

  std::uint64_t occurrences(const std::string& t) const;
  std::uint64_t cooccurrences(const std::string& a, const std::string& b) const;
};

// Windows of `window` consecutive tokens, stride 1; a document shorter than
// the window is one window, an empty document contributes none. Each term and
// each unordered pair counts at most once per window.
WindowStats window_stats(const TokenSeqs& token_seqs, const std::set<std::string>& topic_terms,
                         const CoherenceConfig& config, unsigned threads = 1);

// NPMI = log((P(x,y) + eps) / (P(x) P(y))) / -log(P(x,y) + eps), clamped to
// [-1, 1]. Identical terms and pairs that always co-occur score 1; a term
// that never occurs scores 0 and appends a warning.
double npmi(const std::string& x, const std::string& y, const WindowStats& stats, double epsilon,
            std::vector<std::string>* warnings = nullptr);

struct TopicCoherence {
  std::vector<std::string> words;  // corpus-present words actually scored
  std::optional<double> score;     // empty when fewer than two words are present
  std::vector<std::vector<double>> npmi;
  bool operator==(const TopicCoherence&) const = default;
};

struct CoherenceReport {
  std::vector<TopicCoherence> topics;
  std::optional<double> mean;  // over scored topics
  CoherenceConfig config;
  std::vector<std::string> warnings;

  std::vector<std::optional<double>> per_topic() const;
  bool operator==(const CoherenceReport&) const = default;
};

// C_v: one-set segmentation, NPMI context vectors, cosine against the topic
// vector, averaged per topic.
CoherenceReport cv_coherence(const std::vector<std::vector<std::string>>& topics, const TokenSeqs& token_seqs,
                             const CoherenceConfig& config, unsigned threads = 1);
CoherenceReport cv_coherence(const TopicSet& topics, const TokenSeqs& token_seqs, const CoherenceConfig& config,
                             unsigned threads = 1);

// {metric:"c_v", window, top_n, epsilon, per_topic:[...], mean, topics:[{words, npmi}]}
nlohmann::json to_json(const CoherenceReport& report);
CoherenceReport coherence_report_from_json(const nlohmann::json& j);

}  // namespace topicmine
