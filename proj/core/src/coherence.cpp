#include "topicmine/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "topicmine/error.hpp"
#include "topicmine/parallel.hpp"

namespace topicmine {
namespace {

struct LocalCounts {
  std::uint64_t windows = 0;
  std::vector<std::uint64_t> occur;
  std::vector<std::uint64_t> pair;  // t x t, upper triangle used

  explicit LocalCounts(std::size_t t) : occur(t, 0), pair(t * t, 0) {}
};

// Tracks which target ids are inside the current window.
class WindowSet {
 public:
  explicit WindowSet(std::size_t t) : count_(t, 0), pos_(t, 0) {}
  void add(int id) {
    if (id < 0) return;
    if (count_[static_cast<std::size_t>(id)]++ == 0) {
      pos_[static_cast<std::size_t>(id)] = present_.size();
      present_.push_back(id);
    }
  }
  void remove(int id) {
    if (id < 0) return;
    if (--count_[static_cast<std::size_t>(id)] == 0) {
      const auto p = pos_[static_cast<std::size_t>(id)];
      present_[p] = present_.back();
      pos_[static_cast<std::size_t>(present_[p])] = p;
      present_.pop_back();
    }
  }
  const std::vector<int>& present() const { return present_; }

 private:
  std::vector<std::uint32_t> count_;
  std::vector<std::size_t> pos_;
  std::vector<int> present_;
};

void count_window(const std::vector<int>& present, LocalCounts& acc, std::size_t t) {
  ++acc.windows;
  for (std::size_t i = 0; i < present.size(); ++i) {
    const auto a = static_cast<std::size_t>(present[i]);
    ++acc.occur[a];
    for (std::size_t j = i + 1; j < present.size(); ++j) {
      const auto b = static_cast<std::size_t>(present[j]);
      ++acc.pair[std::min(a, b) * t + std::max(a, b)];
    }
  }
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

}  // namespace

void CoherenceConfig::validate() const {
  if (window < 1) throw UsageError("coherence: window must satisfy window >= 1");
  if (top_n < 2) throw UsageError("coherence: top_n must satisfy top_n >= 2");
  if (!(epsilon > 0.0)) throw UsageError("coherence: epsilon must satisfy epsilon > 0");
}

std::uint64_t WindowStats::occurrences(const std::string& t) const {
  auto it = occur.find(t);
  return it == occur.end() ? 0 : it->second;
}

std::uint64_t WindowStats::cooccurrences(const std::string& a, const std::string& b) const {
  if (a == b) return occurrences(a);
  auto it = cooccur.find(a < b ? std::pair(a, b) : std::pair(b, a));
  return it == cooccur.end() ? 0 : it->second;
}

WindowStats window_stats(const TokenSeqs& token_seqs, const std::set<std::string>& topic_terms,
                         const CoherenceConfig& config, unsigned threads) {
  config.validate();
  const std::vector<std::string> terms(topic_terms.begin(), topic_terms.end());
  const std::size_t t = terms.size();
  std::map<std::string_view, int> id_of;
  for (std::size_t i = 0; i < t; ++i) id_of.emplace(terms[i], static_cast<int>(i));

  const std::size_t w = static_cast<std::size_t>(config.window);
  const std::size_t blocks = block_count(token_seqs.size(), threads);
  std::vector<LocalCounts> partial(blocks, LocalCounts(t));
  parallel_blocks(token_seqs.size(), threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
    auto& acc = partial[b];
    std::vector<int> ids;
    for (std::size_t d = begin; d < end; ++d) {
      const auto& seq = token_seqs[d];
      if (seq.empty()) continue;
      ids.resize(seq.size());
      for (std::size_t i = 0; i < seq.size(); ++i) {
        auto it = id_of.find(seq[i]);
        ids[i] = it == id_of.end() ? -1 : it->second;
      }
      WindowSet win(t);
      const std::size_t first = std::min(w, ids.size());
      for (std::size_t i = 0; i < first; ++i) win.add(ids[i]);
      count_window(win.present(), acc, t);
      for (std::size_t i = first; i < ids.size(); ++i) {
        win.remove(ids[i - w]);
        win.add(ids[i]);
        count_window(win.present(), acc, t);
      }
    }
  });

  WindowStats stats;
  std::vector<std::uint64_t> occur(t, 0), pair(t * t, 0);
  for (const auto& p : partial) {
    stats.n_windows += p.windows;
    for (std::size_t i = 0; i < t; ++i) occur[i] += p.occur[i];
    for (std::size_t i = 0; i < t * t; ++i) pair[i] += p.pair[i];
  }
  for (std::size_t i = 0; i < t; ++i) {
    stats.occur.emplace(terms[i], occur[i]);
    for (std::size_t j = i + 1; j < t; ++j)
      if (pair[i * t + j] > 0) stats.cooccur.emplace(std::pair(terms[i], terms[j]), pair[i * t + j]);
  }
  return stats;
}

double npmi(const std::string& x, const std::string& y, const WindowStats& stats, double epsilon,
            std::vector<std::string>* warnings) {
  const auto ox = stats.occurrences(x);
  const auto oy = stats.occurrences(y);
  if (ox == 0 || oy == 0 || stats.n_windows == 0) {
    if (warnings) warnings->push_back("term \"" + (ox == 0 ? x : y) + "\" never occurs in the corpus; NPMI set to 0");
    return 0.0;
  }
  if (x == y) return 1.0;
  const auto oxy = stats.cooccurrences(x, y);
  if (oxy == ox && oxy == oy) return 1.0;
  const double n = static_cast<double>(stats.n_windows);
  const double px = static_cast<double>(ox) / n;
  const double py = static_cast<double>(oy) / n;
  const double pxy = static_cast<double>(oxy) / n + epsilon;
  const double value = std::log(pxy / (px * py)) / -std::log(pxy);
  return std::clamp(value, -1.0, 1.0);
}

std::vector<std::optional<double>> CoherenceReport::per_topic() const {
  std::vector<std::optional<double>> out;
  for (const auto& t : topics) out.push_back(t.score);
  return out;
}

CoherenceReport cv_coherence(const std::vector<std::vector<std::string>>& topics, const TokenSeqs& token_seqs,
                             const CoherenceConfig& config, unsigned threads) {
  config.validate();
  std::vector<std::vector<std::string>> word_sets;
  std::set<std::string> all_terms;
  for (const auto& topic : topics) {
    auto& ws = word_sets.emplace_back();
    for (const auto& w : topic) {
      if (ws.size() >= static_cast<std::size_t>(config.top_n)) break;
      if (std::find(ws.begin(), ws.end(), w) == ws.end()) ws.push_back(w);
    }
    all_terms.insert(ws.begin(), ws.end());
  }
  const auto stats = window_stats(token_seqs, all_terms, config, threads);

  CoherenceReport report;
  report.config = config;
  double sum = 0.0;
  std::size_t scored = 0;
  for (std::size_t k = 0; k < word_sets.size(); ++k) {
    TopicCoherence tc;
    for (const auto& w : word_sets[k]) {
      if (stats.occurrences(w) > 0) tc.words.push_back(w);
      else report.warnings.push_back("topic " + std::to_string(k) + ": term \"" + w + "\" is absent from the corpus");
    }
    const std::size_t n = tc.words.size();
    if (n < 2) {
      tc.npmi.clear();
      report.warnings.push_back("topic " + std::to_string(k) + " has fewer than 2 corpus-present terms; not scored");
      report.topics.push_back(std::move(tc));
      continue;
    }
    tc.npmi.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) tc.npmi[i][j] = npmi(tc.words[i], tc.words[j], stats, config.epsilon);

    std::vector<double> topic_vec(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) topic_vec[j] += tc.npmi[i][j];
    double score = 0.0;
    for (std::size_t i = 0; i < n; ++i) score += cosine(tc.npmi[i], topic_vec);
    tc.score = score / static_cast<double>(n);
    sum += *tc.score;
    ++scored;
    report.topics.push_back(std::move(tc));
  }
  if (scored > 0) report.mean = sum / static_cast<double>(scored);
  return report;
}

CoherenceReport cv_coherence(const TopicSet& topics, const TokenSeqs& token_seqs, const CoherenceConfig& config,
                             unsigned threads) {
  return cv_coherence(topics.word_lists(static_cast<std::size_t>(config.top_n)), token_seqs, config, threads);
}

nlohmann::json to_json(const CoherenceReport& report) {
  nlohmann::json j;
  j["metric"] = "c_v";
  j["window"] = report.config.window;
  j["top_n"] = report.config.top_n;
  j["epsilon"] = report.config.epsilon;
  j["per_topic"] = nlohmann::json::array();
  j["topics"] = nlohmann::json::array();
  for (const auto& t : report.topics) {
    j["per_topic"].push_back(t.score ? nlohmann::json(*t.score) : nlohmann::json(nullptr));
    j["topics"].push_back({{"words", t.words}, {"npmi", t.npmi}});
  }
  j["mean"] = report.mean ? nlohmann::json(*report.mean) : nlohmann::json(nullptr);
  j["warnings"] = report.warnings;
  return j;
}

CoherenceReport coherence_report_from_json(const nlohmann::json& j) {
  try {
    CoherenceReport r;
    r.config.window = j.at("window").get<int>();
    r.config.top_n = j.at("top_n").get<int>();
    r.config.epsilon = j.at("epsilon").get<double>();
    const auto& per = j.at("per_topic");
    const auto& topics = j.at("topics");
    for (std::size_t i = 0; i < per.size(); ++i) {
      TopicCoherence tc;
      if (!per[i].is_null()) tc.score = per[i].get<double>();
      tc.words = topics.at(i).at("words").get<std::vector<std::string>>();
      tc.npmi = topics.at(i).at("npmi").get<std::vector<std::vector<double>>>();
      r.topics.push_back(std::move(tc));
    }
    if (!j.at("mean").is_null()) r.mean = j.at("mean").get<double>();
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed coherence report: ") + e.what());
  }
}

}  // namespace topicmine
