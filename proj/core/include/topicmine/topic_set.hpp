#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "topicmine/plsa.hpp"

namespace topicmine {

enum class TopicProvenance { ctfidf, plsa };

std::string_view to_string(TopicProvenance p);

struct Topic {
  int id = 0;
  std::size_t size = 0;  // member documents (clusters) or dominant-topic count (PLSA)
  std::vector<ScoredTerm> words;  // nonincreasing weight

  bool operator==(const Topic&) const = default;
};

// Ranked term lists per topic; ids are dense from 0.
struct TopicSet {
  std::vector<Topic> topics;
  double outlier_fraction = 0.0;
  TopicProvenance provenance = TopicProvenance::ctfidf;

  // Word lists only, in topic order.
  std::vector<std::vector<std::string>> word_lists(std::size_t top_n) const;

  bool operator==(const TopicSet&) const = default;
};

// {provenance, outlier_fraction, topics:[{id, size, words:[{term, weight}]}]}
nlohmann::json to_json(const TopicSet& topics);
TopicSet topic_set_from_json(const nlohmann::json& j);
void save_topic_set(const TopicSet& topics, const std::filesystem::path& path);
TopicSet load_topic_set(const std::filesystem::path& path);

TopicSet plsa_topic_set(const PlsaModel& model, const Vocabulary& vocab, std::size_t n);

}  // namespace topicmine
