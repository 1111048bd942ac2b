#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>

#include "topicmine/cluster.hpp"
#include "topicmine/coherence.hpp"
#include "topicmine/corpus.hpp"
#include "topicmine/embed.hpp"
#include "topicmine/error.hpp"
#include "topicmine/intertopic.hpp"
#include "topicmine/plsa.hpp"
#include "topicmine/report.hpp"
#include "topicmine/topic_set.hpp"

namespace topicmine::cli {
namespace {

namespace fs = std::filesystem;

struct Settings {
  PreprocessConfig preprocess;
  std::string text_field = "narrative";
  CompareOptions run;
};

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    T out{};
    if constexpr (std::is_same_v<T, int>) out = std::stoi(value, &used);
    else if constexpr (std::is_same_v<T, double>) out = std::stod(value, &used);
    else if constexpr (std::is_same_v<T, std::size_t>) out = std::stoul(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw UsageError("--config " + key + ": cannot parse \"" + value + "\"");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw UsageError("--config " + key + ": expected true/false, got \"" + value + "\"");
}

void apply_override(Settings& s, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw UsageError("--config expects key=value, got \"" + kv + "\"");
  const std::string key = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);

  using Setter = std::function<void(Settings&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"text_field", [](Settings& x, const std::string& v) { x.text_field = v; }},
      {"preprocess.lowercase", [](Settings& x, const std::string& v) { x.preprocess.lowercase = parse_bool("preprocess.lowercase", v); }},
      {"preprocess.stopword_path", [](Settings& x, const std::string& v) { x.preprocess.stopword_path = v; }},
      {"preprocess.lexicon_path", [](Settings& x, const std::string& v) { x.preprocess.lexicon_path = v; }},
      {"preprocess.normalizer", [](Settings& x, const std::string& v) { x.preprocess.normalizer = normalizer_from_string(v); }},
      {"preprocess.min_token_len", [](Settings& x, const std::string& v) { x.preprocess.min_token_len = parse_value<int>("preprocess.min_token_len", v); }},
      {"preprocess.min_df", [](Settings& x, const std::string& v) { x.preprocess.min_df = parse_value<int>("preprocess.min_df", v); }},
      {"preprocess.max_df_ratio", [](Settings& x, const std::string& v) { x.preprocess.max_df_ratio = parse_value<double>("preprocess.max_df_ratio", v); }},
      {"plsa.k", [](Settings& x, const std::string& v) { x.run.plsa.k = parse_value<int>("plsa.k", v); }},
      {"plsa.max_iters", [](Settings& x, const std::string& v) { x.run.plsa.max_iters = parse_value<int>("plsa.max_iters", v); }},
      {"plsa.tol", [](Settings& x, const std::string& v) { x.run.plsa.tol = parse_value<double>("plsa.tol", v); }},
      {"plsa.restarts", [](Settings& x, const std::string& v) { x.run.plsa.restarts = parse_value<int>("plsa.restarts", v); }},
      {"cluster.min_cluster_size", [](Settings& x, const std::string& v) { x.run.cluster.min_cluster_size = parse_value<int>("cluster.min_cluster_size", v); }},
      {"cluster.min_samples", [](Settings& x, const std::string& v) { x.run.cluster.min_samples = parse_value<int>("cluster.min_samples", v); }},
      {"embed.lsa_dim", [](Settings& x, const std::string& v) { x.run.lsa_dim = parse_value<int>("embed.lsa_dim", v); }},
      {"embed.pca_dim", [](Settings& x, const std::string& v) { x.run.pca_dim = parse_value<int>("embed.pca_dim", v); }},
      {"coherence.window", [](Settings& x, const std::string& v) { x.run.coherence.window = parse_value<int>("coherence.window", v); }},
      {"coherence.top_n", [](Settings& x, const std::string& v) { x.run.coherence.top_n = parse_value<int>("coherence.top_n", v); }},
      {"coherence.epsilon", [](Settings& x, const std::string& v) { x.run.coherence.epsilon = parse_value<double>("coherence.epsilon", v); }},
      {"report.top_words", [](Settings& x, const std::string& v) { x.run.top_words = parse_value<std::size_t>("report.top_words", v); }},
  };
  auto it = setters.find(key);
  if (it == setters.end()) throw UsageError("--config: unknown key \"" + key + "\"");
  it->second(s, value);
}

Corpus open_corpus(const std::string& path, const Settings& s) {
  if (path.empty()) throw UsageError("--corpus is required");
  if (fs::path(path).extension() == ".tmc") return load_corpus(path);
  return build_corpus_from_jsonl(path, s.text_field, s.preprocess, s.run.threads);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw DataError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

EmbeddingMatrix corpus_embeddings(const Corpus& corpus, const std::string& path, const Settings& s) {
  if (!path.empty()) {
    auto emb = load_embeddings(path, corpus.n_docs());
    apply_mask(emb, corpus.kept_mask);
    return emb;
  }
  const int limit = static_cast<int>(std::min(corpus.counts.n_rows, corpus.counts.n_cols));
  return lsa_embed(corpus.counts, std::min(s.run.lsa_dim, limit), s.run.seed, s.run.threads);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"topicmine: PLSA and embedding/density-clustering topic models with C_v scoring", "topicmine"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  app.add_option("--seed", seed, "Random seed for every stochastic stage");
  app.add_option("--threads", threads, "Worker threads for parallel stages")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", out_dir, "Directory for output artifacts");
  app.add_option("--config", overrides, "key=value override (repeatable), e.g. plsa.k=8");

  std::string corpus_path;
  std::string text_field;

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Preprocess a JSONL corpus into a corpus cache (corpus.tmc)");
  std::string ingest_input;
  std::optional<std::string> stopwords, lexicon, normalizer;
  std::optional<int> min_df, min_token_len;
  std::optional<double> max_df_ratio;
  ingest->add_option("--input", ingest_input, "JSONL file, one object per line")->required();
  ingest->add_option("--text-field", text_field, "Field holding the narrative text");
  ingest->add_option("--stopwords", stopwords, "Stopword file (default: built-in English list)");
  ingest->add_option("--lexicon", lexicon, "Lemma lexicon (surface<TAB>lemma)");
  ingest->add_option("--normalizer", normalizer, "none | suffix_stemmer | lemma_lexicon");
  ingest->add_option("--min-df", min_df, "Minimum document frequency");
  ingest->add_option("--max-df-ratio", max_df_ratio, "Maximum document frequency ratio");
  ingest->add_option("--min-token-len", min_token_len, "Minimum token length");

  // plsa
  auto* plsa = app.add_subcommand("plsa", "Fit PLSA by EM; writes plsa.model and plsa_topics.json");
  std::optional<int> k, max_iters, restarts, top_n;
  std::optional<double> tol;
  plsa->add_option("--corpus", corpus_path, "Corpus cache (.tmc) or JSONL");
  plsa->add_option("--k", k, "Number of topics");
  plsa->add_option("--max-iters", max_iters, "EM iteration cap");
  plsa->add_option("--tol", tol, "Relative log-likelihood tolerance");
  plsa->add_option("--restarts", restarts, "Random restarts (best log-likelihood wins)");
  plsa->add_option("--top-n", top_n, "Words per topic in plsa_topics.json");

  // embed
  auto* embed = app.add_subcommand("embed", "Build LSA embeddings or validate an EMB1/CSV file; writes embeddings.emb1");
  std::string embed_input;
  std::optional<int> dim;
  embed->add_option("--corpus", corpus_path, "Corpus cache (.tmc) or JSONL");
  embed->add_option("--input", embed_input, "External EMB1 or CSV embeddings (omit for LSA)");
  embed->add_option("--dim", dim, "LSA dimension");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Density clustering + c-TF-IDF; writes cluster_topics.json, labels.csv");
  std::string cluster_emb;
  std::optional<int> min_cluster_size, min_samples, pca_dim;
  cluster->add_option("--corpus", corpus_path, "Corpus cache (.tmc) or JSONL");
  cluster->add_option("--embeddings", cluster_emb, "EMB1/CSV embeddings (omit for built-in LSA)");
  cluster->add_option("--min-cluster-size", min_cluster_size, "Smallest cluster kept");
  cluster->add_option("--min-samples", min_samples, "Neighbour count for core distances");
  cluster->add_option("--pca-dim", pca_dim, "PCA dimension before clustering");
  cluster->add_option("--top-n", top_n, "Words per topic");

  // coherence
  auto* coherence = app.add_subcommand("coherence", "Score a topics JSON with C_v; writes coherence.json");
  std::string topics_path;
  std::optional<int> window;
  coherence->add_option("--topics", topics_path, "Topics JSON (plsa_topics.json or cluster_topics.json)")->required();
  coherence->add_option("--corpus", corpus_path, "Corpus cache (.tmc) or JSONL");
  coherence->add_option("--window", window, "Sliding window length");
  coherence->add_option("--top-n", top_n, "Words per topic to score");

  // map
  auto* map = app.add_subcommand("map", "Intertopic distances and 2-D coordinates; writes intertopic.json");
  std::string plsa_model_path, labels_path;
  std::optional<std::string> metric;
  map->add_option("--plsa-model", plsa_model_path, "PLSA snapshot (Jensen-Shannon over P(w|z))");
  map->add_option("--corpus", corpus_path, "Corpus for c-TF-IDF rows (with --labels)");
  map->add_option("--labels", labels_path, "labels.csv from `cluster` (cosine over c-TF-IDF rows)");
  map->add_option("--metric", metric, "cosine | jensen_shannon");

  // compare
  auto* cmp = app.add_subcommand("compare", "Run both pipelines; writes report.json, report.txt and CSVs");
  std::string cmp_emb;
  cmp->add_option("--corpus", corpus_path, "Corpus cache (.tmc) or JSONL")->required();
  cmp->add_option("--embeddings", cmp_emb, "EMB1/CSV embeddings (omit for built-in LSA)");
  cmp->add_option("--text-field", text_field, "Field holding the narrative text");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    for (const auto& kv : overrides) apply_override(s, kv);
    s.run.seed = seed;
    s.run.threads = threads;
    if (!text_field.empty()) s.text_field = text_field;
    if (stopwords) s.preprocess.stopword_path = *stopwords;
    if (lexicon) {
      s.preprocess.lexicon_path = *lexicon;
      if (!normalizer) s.preprocess.normalizer = Normalizer::lemma_lexicon;
    }
    if (normalizer) s.preprocess.normalizer = normalizer_from_string(*normalizer);
    if (min_df) s.preprocess.min_df = *min_df;
    if (max_df_ratio) s.preprocess.max_df_ratio = *max_df_ratio;
    if (min_token_len) s.preprocess.min_token_len = *min_token_len;
    if (k) s.run.plsa.k = *k;
    if (max_iters) s.run.plsa.max_iters = *max_iters;
    if (tol) s.run.plsa.tol = *tol;
    if (restarts) s.run.plsa.restarts = *restarts;
    if (dim) s.run.lsa_dim = *dim;
    if (min_cluster_size) s.run.cluster.min_cluster_size = *min_cluster_size;
    if (min_samples) s.run.cluster.min_samples = *min_samples;
    if (pca_dim) s.run.pca_dim = *pca_dim;
    if (window) s.run.coherence.window = *window;
    if (top_n) {
      s.run.top_words = static_cast<std::size_t>(std::max(*top_n, 0));
      s.run.coherence.top_n = *top_n;
    }
    s.preprocess.validate();
    s.run.plsa.validate();
    s.run.cluster.validate();
    s.run.coherence.validate();
    if (s.run.lsa_dim < 1) throw UsageError("embed: dim must satisfy dim >= 1");
    if (s.run.pca_dim < 1) throw UsageError("cluster: pca_dim must satisfy pca_dim >= 1");
    s.run.plsa.seed = seed;
    s.run.plsa.threads = threads;

    if (ingest->parsed()) {
      const auto corpus = build_corpus_from_jsonl(ingest_input, s.text_field, s.preprocess, threads);
      const auto dir = ensure_dir(out_dir);
      save_corpus(corpus, dir / "corpus.tmc");
      for (const auto& w : corpus.warnings) err << "warning: " << w << "\n";
      out << "corpus: " << corpus.n_docs() << " documents (" << corpus.n_kept() << " non-empty), "
          << corpus.vocab.size() << " terms -> " << (dir / "corpus.tmc").string() << "\n";
    } else if (plsa->parsed()) {
      const auto corpus = open_corpus(corpus_path, s);
      const auto model = plsa_fit(corpus.counts, s.run.plsa);
      const auto dir = ensure_dir(out_dir);
      save_plsa_model(model, dir / "plsa.model");
      save_topic_set(plsa_topic_set(model, corpus.vocab, s.run.top_words), dir / "plsa_topics.json");
      out << "plsa: k=" << model.n_topics() << ", " << model.ll_trace.size() << " iterations, log-likelihood "
          << model.ll_trace.back() << "\n";
    } else if (embed->parsed()) {
      const auto corpus = open_corpus(corpus_path, s);
      const auto emb = corpus_embeddings(corpus, embed_input, s);
      const auto dir = ensure_dir(out_dir);
      save_embeddings_emb1(emb, dir / "embeddings.emb1");
      out << "embed: " << emb.n_docs() << " x " << emb.dim() << " (" << emb.provenance << ")\n";
    } else if (cluster->parsed()) {
      const auto corpus = open_corpus(corpus_path, s);
      const auto emb = corpus_embeddings(corpus, cluster_emb, s);
      const auto reduced = reduce_pca(emb, std::min<int>(s.run.pca_dim, static_cast<int>(emb.dim())), seed, threads);
      auto params = s.run.cluster;
      params.threads = threads;
      const auto assignment = hdbscan_fit(reduced, params);
      const auto ct = c_tf_idf(corpus.counts, assignment);
      const auto topics = top_words_per_cluster(ct.weights, corpus.vocab, s.run.top_words, assignment, reduced.n_active());
      const auto dir = ensure_dir(out_dir);
      save_topic_set(topics, dir / "cluster_topics.json");
      std::ofstream labels(dir / "labels.csv", std::ios::trunc);
      labels << "id,label\n";
      for (std::size_t d = 0; d < corpus.n_docs(); ++d) labels << corpus.docs[d].id << "," << assignment.labels[d] << "\n";
      for (const auto& w : assignment.warnings) err << "warning: " << w << "\n";
      out << "cluster: " << assignment.n_clusters << " clusters, outlier fraction " << topics.outlier_fraction << "\n";
    } else if (coherence->parsed()) {
      const auto topics = load_topic_set(topics_path);
      const auto corpus = open_corpus(corpus_path, s);
      const auto report = cv_coherence(topics, corpus.token_seqs, s.run.coherence, threads);
      const auto dir = ensure_dir(out_dir);
      write_json(dir / "coherence.json", to_json(report));
      out << "coherence: mean C_v " << (report.mean ? std::to_string(*report.mean) : "n/a") << "\n";
    } else if (map->parsed()) {
      IntertopicMap result;
      if (!plsa_model_path.empty()) {
        const auto model = load_plsa_model(plsa_model_path);
        result = intertopic_map(model.word_given_topic,
                                metric ? distance_metric_from_string(*metric) : DistanceMetric::jensen_shannon);
      } else if (!labels_path.empty()) {
        const auto corpus = open_corpus(corpus_path, s);
        std::ifstream in(labels_path);
        if (!in) throw DataError("cannot open labels file: " + labels_path);
        ClusterAssignment assignment;
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
          const auto comma = line.rfind(',');
          if (comma == std::string::npos) throw DataError("malformed labels line: " + line);
          const int label = std::stoi(line.substr(comma + 1));
          assignment.labels.push_back(label);
          assignment.n_clusters = std::max(assignment.n_clusters, label + 1);
        }
        const auto ct = c_tf_idf(corpus.counts, assignment);
        result = intertopic_map(ct.weights, metric ? distance_metric_from_string(*metric) : DistanceMetric::cosine);
      } else {
        throw UsageError("map needs --plsa-model, or --corpus with --labels");
      }
      const auto data = to_map_data(result);
      const auto dir = ensure_dir(out_dir);
      write_json(dir / "intertopic.json", {{"metric", data.metric}, {"distances", data.distances}, {"coords", data.coords}});
      out << "map: " << data.coords.size() << " topics (" << data.metric << ")\n";
    } else if (cmp->parsed()) {
      const auto corpus = open_corpus(corpus_path, s);
      if (!cmp_emb.empty()) {
        s.run.embedding = EmbeddingMode::external;
        s.run.embedding_path = cmp_emb;
      }
      const auto report = compare(corpus, s.run);
      write_comparison(report, out_dir);
      out << render_text(report);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, out, err);
}

}  // namespace topicmine::cli
