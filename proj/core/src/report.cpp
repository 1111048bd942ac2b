#include "topicmine/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "topicmine/error.hpp"

namespace topicmine {

TopicHistogram dominant_topic_histogram(const PlsaModel& model, const CountMatrix& counts) {
  if (counts.n_rows != model.n_docs()) throw UsageError("histogram: count matrix does not match the model");
  TopicHistogram h;
  h.documents = plsa_dominant_topics(model);
  h.token_mass.assign(static_cast<std::size_t>(model.n_topics()), 0.0);
  for (std::size_t d = 0; d < counts.n_rows; ++d) {
    const double n_d = counts.row_sum(d);
    if (n_d == 0.0) continue;
    for (int z = 0; z < model.n_topics(); ++z)
      h.token_mass[static_cast<std::size_t>(z)] += n_d * model.topic_given_doc(static_cast<Eigen::Index>(d), z);
  }
  return h;
}

TopicHistogram dominant_topic_histogram(const ClusterAssignment& assignment, const std::vector<std::uint8_t>& kept_mask) {
  TopicHistogram h;
  h.documents = assignment.cluster_sizes();
  for (std::size_t d = 0; d < assignment.labels.size(); ++d)
    if (assignment.labels[d] < 0 && (kept_mask.empty() || kept_mask[d])) ++h.noise;
  return h;
}

CorpusSummary summarize_corpus(const Corpus& corpus) {
  CorpusSummary s;
  s.n_docs = corpus.n_docs();
  s.n_kept = corpus.n_kept();
  s.vocab_size = corpus.vocab.size();
  s.total_tokens = corpus.counts.total();
  s.content_hash = corpus_fingerprint(corpus);
  s.text_field = corpus.text_field;
  s.preprocess = to_json(corpus.config);
  return s;
}

MapData to_map_data(const IntertopicMap& map) {
  MapData m;
  m.metric = std::string(to_string(map.metric));
  for (Eigen::Index i = 0; i < map.distances.rows(); ++i) {
    m.distances.emplace_back(map.distances.row(i).begin(), map.distances.row(i).end());
    m.coords.emplace_back(map.coords.row(i).begin(), map.coords.row(i).end());
  }
  return m;
}

nlohmann::json to_json(const PlsaConfig& c) {
  return {{"k", c.k}, {"max_iters", c.max_iters}, {"tol", c.tol}, {"seed", c.seed}, {"restarts", c.restarts}};
}

nlohmann::json to_json(const ClusterParams& c) {
  return {{"min_cluster_size", c.min_cluster_size},
          {"min_samples", c.effective_min_samples()},
          {"metric", "euclidean"},
          {"selection", "excess_of_mass"}};
}

nlohmann::json to_json(const CoherenceConfig& c) {
  return {{"metric", "c_v"}, {"window", c.window}, {"top_n", c.top_n}, {"epsilon", c.epsilon}};
}

nlohmann::json to_json(const PreprocessConfig& c) {
  return {{"lowercase", c.lowercase},         {"stopword_path", c.stopword_path},
          {"normalizer", to_string(c.normalizer)}, {"lexicon_path", c.lexicon_path},
          {"min_token_len", c.min_token_len}, {"min_df", c.min_df},
          {"max_df_ratio", c.max_df_ratio}};
}

namespace {

nlohmann::json corpus_json(const CorpusSummary& s) {
  return {{"n_docs", s.n_docs},         {"n_kept", s.n_kept},   {"vocab_size", s.vocab_size},
          {"total_tokens", s.total_tokens}, {"content_hash", s.content_hash}, {"text_field", s.text_field},
          {"preprocess", s.preprocess}};
}

CorpusSummary corpus_from_json(const nlohmann::json& j) {
  CorpusSummary s;
  s.n_docs = j.at("n_docs").get<std::size_t>();
  s.n_kept = j.at("n_kept").get<std::size_t>();
  s.vocab_size = j.at("vocab_size").get<std::size_t>();
  s.total_tokens = j.at("total_tokens").get<std::size_t>();
  s.content_hash = j.at("content_hash").get<std::string>();
  s.text_field = j.at("text_field").get<std::string>();
  s.preprocess = j.at("preprocess");
  return s;
}

nlohmann::json model_json(const ModelReport& m) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& [name, secs] : m.run.stage_seconds) stages.push_back({{"stage", name}, {"wall_time_seconds", secs}});
  return {
      {"topics", to_json(m.topics)},
      {"coherence", to_json(m.coherence)},
      {"run",
       {{"model", m.run.model},
        {"wall_time_seconds", m.run.wall_time_seconds},
        {"stage_seconds", stages},
        {"config", m.run.config},
        {"corpus", corpus_json(m.run.corpus)}}},
      {"n_topics", m.n_topics},
      {"outlier_fraction", m.outlier_fraction ? nlohmann::json(*m.outlier_fraction) : nlohmann::json(nullptr)},
      {"histogram", {{"documents", m.histogram.documents}, {"token_mass", m.histogram.token_mass}, {"noise", m.histogram.noise}}},
      {"intertopic", {{"metric", m.intertopic.metric}, {"distances", m.intertopic.distances}, {"coords", m.intertopic.coords}}},
  };
}

ModelReport model_from_json(const nlohmann::json& j) {
  ModelReport m;
  m.topics = topic_set_from_json(j.at("topics"));
  m.coherence = coherence_report_from_json(j.at("coherence"));
  const auto& run = j.at("run");
  m.run.model = run.at("model").get<std::string>();
  m.run.wall_time_seconds = run.at("wall_time_seconds").get<double>();
  for (const auto& s : run.at("stage_seconds"))
    m.run.stage_seconds.emplace_back(s.at("stage").get<std::string>(), s.at("wall_time_seconds").get<double>());
  m.run.config = run.at("config");
  m.run.corpus = corpus_from_json(run.at("corpus"));
  m.n_topics = j.at("n_topics").get<int>();
  if (!j.at("outlier_fraction").is_null()) m.outlier_fraction = j.at("outlier_fraction").get<double>();
  const auto& h = j.at("histogram");
  m.histogram.documents = h.at("documents").get<std::vector<std::size_t>>();
  m.histogram.token_mass = h.at("token_mass").get<std::vector<double>>();
  m.histogram.noise = h.at("noise").get<std::size_t>();
  const auto& it = j.at("intertopic");
  m.intertopic.metric = it.at("metric").get<std::string>();
  m.intertopic.distances = it.at("distances").get<std::vector<std::vector<double>>>();
  m.intertopic.coords = it.at("coords").get<std::vector<std::vector<double>>>();
  return m;
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(prec) << v;
  return os.str();
}

std::string fmt(const std::optional<double>& v, int prec = 4) { return v ? fmt(*v, prec) : "n/a"; }

std::string join_words(const Topic& t, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < t.words.size() && i < n; ++i) {
    if (i) s += ", ";
    s += t.words[i].term;
  }
  return s;
}

void topic_table(std::ostream& os, const std::string& title, const ModelReport& m, std::size_t top_n) {
  os << title << "\n";
  os << std::left << std::setw(10) << "Topic ID" << std::setw(8) << "Size" << std::setw(9) << "C_v"
     << "Top " << top_n << " Words\n";
  os << std::string(100, '-') << "\n";
  for (std::size_t i = 0; i < m.topics.topics.size(); ++i) {
    const auto& t = m.topics.topics[i];
    std::optional<double> score;
    if (i < m.coherence.topics.size()) score = m.coherence.topics[i].score;
    os << std::left << std::setw(10) << ("Topic " + std::to_string(t.id + 1)) << std::setw(8) << t.size
       << std::setw(9) << fmt(score, 3) << join_words(t, top_n) << "\n";
  }
  os << "\n";
}

std::string csv_path_name(const std::string& prefix, const std::string& model) { return prefix + "_" + model + ".csv"; }

}  // namespace

nlohmann::json to_json(const ComparisonReport& report) {
  return {{"schema", "topicmine.report"},
          {"schema_version", report.schema_version},
          {"corpus", corpus_json(report.corpus)},
          {"coherence_config", to_json(report.coherence_config)},
          {"models", {{"plsa", model_json(report.plsa)}, {"clusterpipe", model_json(report.clusterpipe)}}},
          {"notes", report.notes}};
}

ComparisonReport comparison_report_from_json(const nlohmann::json& j) {
  try {
    ComparisonReport r;
    if (j.at("schema").get<std::string>() != "topicmine.report") throw DataError("not a topicmine report");
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw DataError("unsupported report schema version " + std::to_string(r.schema_version));
    r.corpus = corpus_from_json(j.at("corpus"));
    const auto& cc = j.at("coherence_config");
    r.coherence_config.window = cc.at("window").get<int>();
    r.coherence_config.top_n = cc.at("top_n").get<int>();
    r.coherence_config.epsilon = cc.at("epsilon").get<double>();
    r.plsa = model_from_json(j.at("models").at("plsa"));
    r.clusterpipe = model_from_json(j.at("models").at("clusterpipe"));
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string render_text(const ComparisonReport& r) {
  std::ostringstream os;
  const auto top_n = static_cast<std::size_t>(r.coherence_config.top_n);
  os << "TOPIC MODEL COMPARISON: CLUSTERING PIPELINE VS. PLSA\n";
  os << "corpus: " << r.corpus.n_docs << " documents (" << r.corpus.n_kept << " non-empty), " << r.corpus.vocab_size
     << " terms, " << r.corpus.total_tokens << " tokens, hash " << r.corpus.content_hash << "\n\n";

  topic_table(os, "CLUSTERING PIPELINE (embeddings + density clustering + c-TF-IDF): TOP WORDS PER TOPIC", r.clusterpipe, top_n);
  topic_table(os, "PLSA (EM): TOP WORDS PER TOPIC", r.plsa, top_n);

  os << "COMPARISON SUMMARY\n";
  os << std::left << std::setw(28) << "Aspect" << std::setw(18) << "Clustering" << "PLSA\n";
  os << std::string(64, '-') << "\n";
  auto row = [&](const std::string& name, const std::string& a, const std::string& b) {
    os << std::left << std::setw(28) << name << std::setw(18) << a << b << "\n";
  };
  row("Mean C_v coherence", fmt(r.clusterpipe.coherence.mean), fmt(r.plsa.coherence.mean));
  row("Topics", std::to_string(r.clusterpipe.n_topics), std::to_string(r.plsa.n_topics) + " (fixed K)");
  row("Outlier fraction", fmt(r.clusterpipe.outlier_fraction), "n/a");
  row("Runtime (s)", fmt(r.clusterpipe.run.wall_time_seconds, 3), fmt(r.plsa.run.wall_time_seconds, 3));
  row("Documents processed", std::to_string(r.corpus.n_kept), std::to_string(r.corpus.n_kept));
  os << "\n";

  os << "RUNTIME BY STAGE (s)\n";
  for (const auto* m : {&r.clusterpipe, &r.plsa})
    for (const auto& [stage, secs] : m->run.stage_seconds)
      os << "  " << std::left << std::setw(14) << m->run.model << std::setw(12) << stage << fmt(secs, 4) << "\n";
  os << "\n";

  os << "DOMINANT-TOPIC HISTOGRAM\n";
  os << "  clustering: ";
  for (std::size_t i = 0; i < r.clusterpipe.histogram.documents.size(); ++i)
    os << "T" << i + 1 << "=" << r.clusterpipe.histogram.documents[i] << " ";
  os << "noise=" << r.clusterpipe.histogram.noise << "\n";
  os << "  plsa:       ";
  for (std::size_t i = 0; i < r.plsa.histogram.documents.size(); ++i)
    os << "T" << i + 1 << "=" << r.plsa.histogram.documents[i] << " ";
  os << "\n  plsa token mass: ";
  for (std::size_t i = 0; i < r.plsa.histogram.token_mass.size(); ++i)
    os << "T" << i + 1 << "=" << fmt(r.plsa.histogram.token_mass[i], 1) << " ";
  os << "\n\n";

  os << "INTERTOPIC MAP COORDINATES\n";
  for (const auto* m : {&r.clusterpipe, &r.plsa}) {
    os << "  " << m->run.model << " (" << m->intertopic.metric << ")\n";
    for (std::size_t i = 0; i < m->intertopic.coords.size(); ++i)
      os << "    Topic " << std::left << std::setw(4) << i + 1 << std::right << std::setw(10)
         << fmt(m->intertopic.coords[i][0]) << std::setw(10) << fmt(m->intertopic.coords[i][1]) << "\n";
  }
  if (!r.notes.empty()) {
    os << "\nNOTES\n";
    for (const auto& n : r.notes) os << "  - " << n << "\n";
  }
  return os.str();
}

void write_comparison(const ComparisonReport& report, const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw DataError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("report.json", to_json(report).dump(2) + "\n");
  files.emplace_back("report.txt", render_text(report));
  for (const auto* m : {&report.plsa, &report.clusterpipe}) {
    std::ostringstream map_csv;
    map_csv << std::setprecision(17) << "topic,x,y\n";
    for (std::size_t i = 0; i < m->intertopic.coords.size(); ++i)
      map_csv << i << "," << m->intertopic.coords[i][0] << "," << m->intertopic.coords[i][1] << "\n";
    files.emplace_back(csv_path_name("intertopic", m->run.model), map_csv.str());

    std::ostringstream hist_csv;
    hist_csv << std::setprecision(17) << "topic,documents,token_mass\n";
    for (std::size_t i = 0; i < m->histogram.documents.size(); ++i) {
      hist_csv << i << "," << m->histogram.documents[i] << ",";
      if (i < m->histogram.token_mass.size()) hist_csv << m->histogram.token_mass[i];
      hist_csv << "\n";
    }
    if (m->outlier_fraction) hist_csv << "noise," << m->histogram.noise << ",\n";
    files.emplace_back(csv_path_name("histogram", m->run.model), hist_csv.str());
  }

  std::vector<fs::path> staged;
  try {
    for (const auto& [name, body] : files) {
      auto tmp = out_dir / (name + ".partial");
      std::ofstream os(tmp, std::ios::trunc | std::ios::binary);
      if (!os) throw DataError("cannot write " + tmp.string());
      staged.push_back(tmp);
      os << body;
      if (!os.flush()) throw DataError("failed writing " + tmp.string());
    }
  } catch (...) {
    for (const auto& p : staged) fs::remove(p, ec);
    throw;
  }
  for (std::size_t i = 0; i < files.size(); ++i) fs::rename(staged[i], out_dir / files[i].first);
}

}  // namespace topicmine
