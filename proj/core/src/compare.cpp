#include <chrono>

#include "topicmine/embed.hpp"
#include "topicmine/error.hpp"
#include "topicmine/report.hpp"

namespace topicmine {
namespace {

class StageTimer {
 public:
  explicit StageTimer(RunRecord& run) : run_(run) {}

  template <typename Fn>
  auto operator()(const std::string& stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto finish = [&] {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      run_.stage_seconds.emplace_back(stage, secs);
      run_.wall_time_seconds += secs;
    };
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        finish();
      } else {
        auto result = fn();
        finish();
        return result;
      }
    } catch (const UsageError& e) {
      throw UsageError(run_.model + " stage '" + stage + "': " + e.what());
    } catch (const DataError& e) {
      throw DataError(run_.model + " stage '" + stage + "': " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(run_.model + " stage '" + stage + "': " + e.what());
    }
  }

 private:
  RunRecord& run_;
};

ModelReport run_plsa(const Corpus& corpus, const CompareOptions& opt, const CorpusSummary& summary) {
  ModelReport m;
  m.run.model = "plsa";
  m.run.corpus = summary;
  PlsaConfig cfg = opt.plsa;
  cfg.seed = opt.seed;
  cfg.threads = opt.threads;
  m.run.config = to_json(cfg);
  StageTimer stage(m.run);

  const auto model = stage("fit", [&] { return plsa_fit(corpus.counts, cfg); });
  stage("topics", [&] {
    m.topics = plsa_topic_set(model, corpus.vocab, opt.top_words);
    m.histogram = dominant_topic_histogram(model, corpus.counts);
  });
  m.n_topics = model.n_topics();
  stage("coherence", [&] { m.coherence = cv_coherence(m.topics, corpus.token_seqs, opt.coherence, opt.threads); });
  stage("map", [&] { m.intertopic = to_map_data(intertopic_map(model.word_given_topic, DistanceMetric::jensen_shannon)); });
  return m;
}

ModelReport run_clusterpipe(const Corpus& corpus, const CompareOptions& opt, const CorpusSummary& summary,
                            std::vector<std::string>& notes) {
  ModelReport m;
  m.run.model = "clusterpipe";
  m.run.corpus = summary;
  ClusterParams params = opt.cluster;
  params.threads = opt.threads;
  StageTimer stage(m.run);

  const int max_lsa = static_cast<int>(std::min(corpus.counts.n_rows, corpus.counts.n_cols));
  const int lsa_dim = std::min(opt.lsa_dim, max_lsa);
  EmbeddingMatrix emb = stage("embed", [&] {
    if (opt.embedding == EmbeddingMode::external) {
      auto e = load_embeddings(opt.embedding_path, corpus.n_docs());
      apply_mask(e, corpus.kept_mask);
      return e;
    }
    return lsa_embed(corpus.counts, lsa_dim, opt.seed, opt.threads);
  });
  if (opt.embedding == EmbeddingMode::lsa && lsa_dim != opt.lsa_dim)
    notes.push_back("LSA dimension reduced from " + std::to_string(opt.lsa_dim) + " to " + std::to_string(lsa_dim) +
                    " (bounded by min(documents, vocabulary))");
  const int pca_dim = std::min<int>(opt.pca_dim, static_cast<int>(emb.dim()));
  const auto reduced = stage("reduce", [&] { return reduce_pca(emb, pca_dim, opt.seed, opt.threads); });
  const auto assignment = stage("cluster", [&] { return hdbscan_fit(reduced, params); });
  const auto weights = stage("ctfidf", [&] {
    auto ct = c_tf_idf(corpus.counts, assignment);
    m.topics = top_words_per_cluster(ct.weights, corpus.vocab, opt.top_words, assignment, reduced.n_active());
    return ct.weights;
  });
  m.n_topics = assignment.n_clusters;
  m.outlier_fraction = m.topics.outlier_fraction;
  m.histogram = dominant_topic_histogram(assignment, corpus.kept_mask);
  stage("coherence", [&] { m.coherence = cv_coherence(m.topics, corpus.token_seqs, opt.coherence, opt.threads); });
  if (assignment.n_clusters > 0) {
    stage("map", [&] { m.intertopic = to_map_data(intertopic_map(weights, DistanceMetric::cosine)); });
  } else {
    m.intertopic.metric = "cosine";
    notes.push_back("clustering found no clusters; intertopic map is empty");
  }

  m.run.config = {{"embedding", {{"source", to_string(emb.source)}, {"provenance", emb.provenance}, {"dim", emb.dim()}}},
                  {"reducer", {{"method", "pca"}, {"dim", pca_dim}}},
                  {"cluster", to_json(params)},
                  {"seed", opt.seed}};
  for (const auto& w : assignment.warnings) notes.push_back("cluster: " + w);
  return m;
}

}  // namespace

ComparisonReport compare(const Corpus& corpus, const CompareOptions& options) {
  options.plsa.validate();
  options.cluster.validate();
  options.coherence.validate();
  if (options.lsa_dim < 1) throw UsageError("embed: lsa_dim must satisfy lsa_dim >= 1");
  if (options.pca_dim < 1) throw UsageError("embed: pca_dim must satisfy pca_dim >= 1");
  if (options.top_words < 1) throw UsageError("report: top_words must be >= 1");

  ComparisonReport report;
  report.corpus = summarize_corpus(corpus);
  report.coherence_config = options.coherence;
  report.notes.push_back("dimensionality reduction before clustering is PCA (not a nonlinear manifold method)");
  report.notes.push_back("document-frequency filter: min_df=" + std::to_string(corpus.config.min_df) +
                         ", max_df_ratio=" + nlohmann::json(corpus.config.max_df_ratio).dump());
  // Sequential on purpose: each pipeline gets the machine to itself while timed.
  report.plsa = run_plsa(corpus, options, report.corpus);
  report.clusterpipe = run_clusterpipe(corpus, options, report.corpus, report.notes);
  report.notes.push_back("PLSA topic count is fixed (k=" + std::to_string(options.plsa.k) +
                         "); the clustering pipeline's count is emergent (" +
                         std::to_string(report.clusterpipe.n_topics) + ")");
  return report;
}

}  // namespace topicmine
