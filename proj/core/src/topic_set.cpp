#include "topicmine/topic_set.hpp"

#include <fstream>

#include "topicmine/error.hpp"

namespace topicmine {

std::string_view to_string(TopicProvenance p) { return p == TopicProvenance::plsa ? "plsa" : "ctfidf"; }

std::vector<std::vector<std::string>> TopicSet::word_lists(std::size_t top_n) const {
  std::vector<std::vector<std::string>> out;
  out.reserve(topics.size());
  for (const auto& t : topics) {
    auto& list = out.emplace_back();
    for (std::size_t i = 0; i < t.words.size() && i < top_n; ++i) list.push_back(t.words[i].term);
  }
  return out;
}

nlohmann::json to_json(const TopicSet& topics) {
  nlohmann::json j;
  j["provenance"] = to_string(topics.provenance);
  j["outlier_fraction"] = topics.outlier_fraction;
  j["topics"] = nlohmann::json::array();
  for (const auto& t : topics.topics) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& w : t.words) words.push_back({{"term", w.term}, {"weight", w.score}});
    j["topics"].push_back({{"id", t.id}, {"size", t.size}, {"words", std::move(words)}});
  }
  return j;
}

TopicSet topic_set_from_json(const nlohmann::json& j) {
  try {
    TopicSet ts;
    const auto prov = j.at("provenance").get<std::string>();
    if (prov == "plsa") ts.provenance = TopicProvenance::plsa;
    else if (prov == "ctfidf") ts.provenance = TopicProvenance::ctfidf;
    else throw DataError("unknown topic provenance \"" + prov + "\"");
    ts.outlier_fraction = j.at("outlier_fraction").get<double>();
    for (const auto& jt : j.at("topics")) {
      Topic t;
      t.id = jt.at("id").get<int>();
      t.size = jt.at("size").get<std::size_t>();
      for (const auto& jw : jt.at("words")) t.words.push_back({jw.at("term").get<std::string>(), jw.at("weight").get<double>()});
      ts.topics.push_back(std::move(t));
    }
    return ts;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed topics JSON: ") + e.what());
  }
}

void save_topic_set(const TopicSet& topics, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot write topics file: " + path.string());
  os << to_json(topics).dump(2) << '\n';
}

TopicSet load_topic_set(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open topics file: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed topics file " + path.string() + ": " + e.what());
  }
  return topic_set_from_json(j);
}

TopicSet plsa_topic_set(const PlsaModel& model, const Vocabulary& vocab, std::size_t n) {
  TopicSet ts;
  ts.provenance = TopicProvenance::plsa;
  const auto hist = plsa_dominant_topics(model);
  for (int z = 0; z < model.n_topics(); ++z)
    ts.topics.push_back({z, hist[static_cast<std::size_t>(z)], plsa_top_words(model, z, n, vocab)});
  return ts;
}

}  // namespace topicmine
