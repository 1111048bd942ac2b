#pragma once

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "topicmine/cluster.hpp"
#include "topicmine/coherence.hpp"
#include "topicmine/corpus.hpp"
#include "topicmine/intertopic.hpp"
#include "topicmine/plsa.hpp"
#include "topicmine/topic_set.hpp"

namespace topicmine {

inline constexpr int kReportSchemaVersion = 1;

// Documents per dominant topic, plus token mass for PLSA or the noise count
// for the clustering pipeline.
struct TopicHistogram {
  std::vector<std::size_t> documents;
  std::vector<double> token_mass;  // PLSA only: sum_d n_d P(z|d)
  std::size_t noise = 0;           // clustering only

  bool operator==(const TopicHistogram&) const = default;
};

TopicHistogram dominant_topic_histogram(const PlsaModel& model, const CountMatrix& counts);
TopicHistogram dominant_topic_histogram(const ClusterAssignment& assignment, const std::vector<std::uint8_t>& kept_mask);

struct CorpusSummary {
  std::size_t n_docs = 0;
  std::size_t n_kept = 0;
  std::size_t vocab_size = 0;
  std::size_t total_tokens = 0;
  std::string content_hash;
  std::string text_field;
  nlohmann::json preprocess;

  bool operator==(const CorpusSummary&) const = default;
};

CorpusSummary summarize_corpus(const Corpus& corpus);

struct RunRecord {
  std::string model;  // "plsa" | "clusterpipe"
  double wall_time_seconds = 0.0;
  std::vector<std::pair<std::string, double>> stage_seconds;
  nlohmann::json config;
  CorpusSummary corpus;

  bool operator==(const RunRecord&) const = default;
};

struct MapData {
  std::string metric;
  std::vector<std::vector<double>> distances;
  std::vector<std::vector<double>> coords;

  bool operator==(const MapData&) const = default;
};

MapData to_map_data(const IntertopicMap& map);

struct ModelReport {
  TopicSet topics;
  CoherenceReport coherence;
  RunRecord run;
  int n_topics = 0;
  std::optional<double> outlier_fraction;  // clustering pipeline only
  TopicHistogram histogram;
  MapData intertopic;

  bool operator==(const ModelReport&) const = default;
};

struct ComparisonReport {
  int schema_version = kReportSchemaVersion;
  CorpusSummary corpus;
  CoherenceConfig coherence_config;
  ModelReport plsa;
  ModelReport clusterpipe;
  std::vector<std::string> notes;

  bool operator==(const ComparisonReport&) const = default;
};

nlohmann::json to_json(const ComparisonReport& report);
ComparisonReport comparison_report_from_json(const nlohmann::json& j);

// Fixed-width plain-text tables: top words per model, the summary table,
// dominant-topic histograms and intertopic coordinates.
std::string render_text(const ComparisonReport& report);

// Writes report.json, report.txt and per-model CSVs (intertopic_<model>.csv,
// histogram_<model>.csv). Files are staged and renamed only after all of them
// were written successfully.
void write_comparison(const ComparisonReport& report, const std::filesystem::path& out_dir);

enum class EmbeddingMode { lsa, external };

struct CompareOptions {
  PlsaConfig plsa;
  ClusterParams cluster;
  CoherenceConfig coherence;
  EmbeddingMode embedding = EmbeddingMode::lsa;
  std::filesystem::path embedding_path;
  int lsa_dim = 50;
  int pca_dim = 5;
  std::size_t top_words = 10;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

nlohmann::json to_json(const PlsaConfig& c);
nlohmann::json to_json(const ClusterParams& c);
nlohmann::json to_json(const CoherenceConfig& c);
nlohmann::json to_json(const PreprocessConfig& c);

// Runs PLSA and the embed/cluster/c-TF-IDF pipeline sequentially, timing each
// stage, and scores both with the same coherence configuration. Stage errors
// are rethrown prefixed with the stage name.
ComparisonReport compare(const Corpus& corpus, const CompareOptions& options);

}  // namespace topicmine
