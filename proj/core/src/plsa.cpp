#include "topicmine/plsa.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "topicmine/binary_io.hpp"
#include "topicmine/error.hpp"
#include "topicmine/parallel.hpp"

namespace topicmine {
namespace {

constexpr std::string_view kMagic = "TMPLSA01";
constexpr std::uint32_t kVersion = 1;

// Normalises a row in place. Rows whose mass is zero (or too small to divide
// safely) receive the additive floor first, which makes them uniform.
template <typename Row>
void normalize_row(Row&& row) {
  double sum = row.sum();
  if (!(sum >= std::numeric_limits<double>::min())) {
    row.array() += kPlsaFloor;
    sum = row.sum();
  }
  row /= sum;
}

void check_dims(const PlsaModel& model, const CountMatrix& counts) {
  if (model.n_docs() != counts.n_rows || model.vocab_size() != counts.n_cols)
    throw UsageError("plsa: model dimensions do not match the count matrix");
}

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  if (restart == 0) return seed;
  // splitmix64 step
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(restart);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

void PlsaConfig::validate() const {
  if (k < 1) throw UsageError("plsa: topic count must satisfy k >= 1 (got " + std::to_string(k) + ")");
  if (max_iters < 1) throw UsageError("plsa: max_iters must satisfy max_iters >= 1");
  if (!(tol > 0.0)) throw UsageError("plsa: tol must satisfy tol > 0");
  if (restarts < 1) throw UsageError("plsa: restarts must satisfy restarts >= 1");
}

PlsaModel plsa_init(const PlsaConfig& config, std::size_t n_docs, std::size_t vocab_size, const CountMatrix& counts) {
  config.validate();
  if (counts.n_rows != n_docs || counts.n_cols != vocab_size)
    throw UsageError("plsa: count matrix shape does not match n_docs x vocab_size");
  const double total = static_cast<double>(counts.total());
  if (total <= 0.0) throw DataError("plsa: count matrix has no nonzero entries");

  const auto k = static_cast<Eigen::Index>(config.k);
  PlsaModel model;
  model.config = config;
  model.word_given_topic.resize(k, static_cast<Eigen::Index>(vocab_size));
  model.topic_given_doc.resize(static_cast<Eigen::Index>(n_docs), k);
  model.doc_prior.resize(static_cast<Eigen::Index>(n_docs));

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index z = 0; z < k; ++z) {
    for (Eigen::Index w = 0; w < model.word_given_topic.cols(); ++w) model.word_given_topic(z, w) = unif(rng);
    normalize_row(model.word_given_topic.row(z));
  }
  for (Eigen::Index d = 0; d < model.topic_given_doc.rows(); ++d) {
    for (Eigen::Index z = 0; z < k; ++z) model.topic_given_doc(d, z) = unif(rng);
    normalize_row(model.topic_given_doc.row(d));
  }
  for (std::size_t d = 0; d < n_docs; ++d)
    model.doc_prior[static_cast<Eigen::Index>(d)] = static_cast<double>(counts.row_sum(d)) / total;
  return model;
}

double plsa_log_likelihood(const PlsaModel& model, const CountMatrix& counts) {
  check_dims(model, counts);
  const auto k = model.word_given_topic.rows();
  double ll = 0.0;
  for (std::size_t d = 0; d < counts.n_rows; ++d) {
    const auto cols = counts.row_cols(d);
    if (cols.empty()) continue;
    const auto vals = counts.row_values(d);
    const auto di = static_cast<Eigen::Index>(d);
    double doc_ll = 0.0;
    double doc_n = 0.0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      double p = 0.0;
      for (Eigen::Index z = 0; z < k; ++z) p += model.topic_given_doc(di, z) * model.word_given_topic(z, cols[i]);
      doc_ll += vals[i] * std::log(p);
      doc_n += vals[i];
    }
    ll += doc_ll + doc_n * std::log(model.doc_prior[di]);
  }
  return ll;
}

std::pair<PlsaModel, double> plsa_iterate(const PlsaModel& model, const CountMatrix& counts, unsigned threads) {
  check_dims(model, counts);
  const auto k = model.word_given_topic.rows();
  const auto v = model.word_given_topic.cols();

  PlsaModel next;
  next.config = model.config;
  next.doc_prior = model.doc_prior;
  next.ll_trace = model.ll_trace;
  next.topic_given_doc = RowMatrix::Zero(model.topic_given_doc.rows(), k);

  const std::size_t blocks = block_count(counts.n_rows, threads);
  std::vector<RowMatrix> word_acc(blocks, RowMatrix::Zero(k, v));

  parallel_blocks(counts.n_rows, threads, [&](std::size_t b, std::size_t begin, std::size_t end) {
    RowMatrix& acc = word_acc[b];
    Vector joint(k);
    for (std::size_t d = begin; d < end; ++d) {
      const auto di = static_cast<Eigen::Index>(d);
      const auto cols = counts.row_cols(d);
      const auto vals = counts.row_values(d);
      for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto w = static_cast<Eigen::Index>(cols[i]);
        double denom = 0.0;
        for (Eigen::Index z = 0; z < k; ++z) {
          joint[z] = model.word_given_topic(z, w) * model.topic_given_doc(di, z);
          denom += joint[z];
        }
        const double n = vals[i];
        for (Eigen::Index z = 0; z < k; ++z) {
          // All-zero responsibilities at a cell fall back to the floored (uniform) split.
          const double r = denom >= std::numeric_limits<double>::min() ? joint[z] / denom : 1.0 / static_cast<double>(k);
          acc(z, w) += n * r;
          next.topic_given_doc(di, z) += n * r;
        }
      }
      normalize_row(next.topic_given_doc.row(di));
    }
  });

  next.word_given_topic = std::move(word_acc[0]);
  for (std::size_t b = 1; b < blocks; ++b) next.word_given_topic += word_acc[b];
  for (Eigen::Index z = 0; z < k; ++z) normalize_row(next.word_given_topic.row(z));

  const double ll = plsa_log_likelihood(next, counts);
  return {std::move(next), ll};
}

PlsaModel plsa_fit(const CountMatrix& counts, const PlsaConfig& config) {
  config.validate();
  PlsaModel best;
  bool have_best = false;
  for (int r = 0; r < config.restarts; ++r) {
    PlsaConfig run_cfg = config;
    run_cfg.seed = restart_seed(config.seed, r);
    PlsaModel model = plsa_init(run_cfg, counts.n_rows, counts.n_cols, counts);
    model.config = config;
    double prev = plsa_log_likelihood(model, counts);
    for (int it = 0; it < config.max_iters; ++it) {
      auto [next, ll] = plsa_iterate(model, counts, config.threads);
      next.ll_trace.push_back(ll);
      model = std::move(next);
      const double rel = (ll - prev) / std::max(std::abs(prev), std::numeric_limits<double>::min());
      prev = ll;
      if (rel < config.tol) break;
    }
    if (!have_best || model.ll_trace.back() > best.ll_trace.back()) {
      best = std::move(model);
      have_best = true;
    }
  }
  return best;
}

std::vector<ScoredTerm> plsa_top_words(const PlsaModel& model, int topic, std::size_t n, const Vocabulary& vocab) {
  if (topic < 0 || topic >= model.n_topics())
    throw UsageError("plsa: topic index " + std::to_string(topic) + " out of range");
  if (vocab.size() != model.vocab_size()) throw UsageError("plsa: vocabulary size does not match model");
  std::vector<std::uint32_t> idx(vocab.size());
  std::iota(idx.begin(), idx.end(), 0u);
  n = std::min(n, idx.size());
  const auto row = model.word_given_topic.row(topic);
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return vocab.terms[a] < vocab.terms[b];
                    });
  std::vector<ScoredTerm> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({vocab.terms[idx[i]], row[idx[i]]});
  return out;
}

std::vector<int> plsa_document_topics(const PlsaModel& model) {
  std::vector<int> out(model.n_docs(), -1);
  for (std::size_t d = 0; d < out.size(); ++d) {
    const auto di = static_cast<Eigen::Index>(d);
    if (!(model.doc_prior[di] > 0.0)) continue;
    Eigen::Index best = 0;
    for (Eigen::Index z = 1; z < model.topic_given_doc.cols(); ++z)
      if (model.topic_given_doc(di, z) > model.topic_given_doc(di, best)) best = z;
    out[d] = static_cast<int>(best);
  }
  return out;
}

std::vector<std::size_t> plsa_dominant_topics(const PlsaModel& model) {
  std::vector<std::size_t> hist(static_cast<std::size_t>(model.n_topics()), 0);
  for (int z : plsa_document_topics(model))
    if (z >= 0) ++hist[static_cast<std::size_t>(z)];
  return hist;
}

void save_plsa_model(const PlsaModel& model, const std::filesystem::path& path) {
  using namespace binio;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write PLSA snapshot: " + path.string());
  write_magic(os, kMagic);
  write_u32(os, kVersion);
  write_u32(os, static_cast<std::uint32_t>(model.n_topics()));
  write_u64(os, model.n_docs());
  write_u64(os, model.vocab_size());
  write_u64(os, model.config.seed);
  write_u32(os, static_cast<std::uint32_t>(model.config.max_iters));
  write_f64(os, model.config.tol);
  write_u32(os, static_cast<std::uint32_t>(model.config.restarts));
  for (Eigen::Index i = 0; i < model.word_given_topic.size(); ++i) write_f64(os, model.word_given_topic.data()[i]);
  for (Eigen::Index i = 0; i < model.topic_given_doc.size(); ++i) write_f64(os, model.topic_given_doc.data()[i]);
  for (Eigen::Index i = 0; i < model.doc_prior.size(); ++i) write_f64(os, model.doc_prior[i]);
  write_u64(os, model.ll_trace.size());
  for (double ll : model.ll_trace) write_f64(os, ll);
  if (!os) throw DataError("failed writing PLSA snapshot: " + path.string());
}

PlsaModel load_plsa_model(const std::filesystem::path& path) {
  using namespace binio;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open PLSA snapshot: " + path.string());
  expect_magic(is, kMagic);
  if (auto v = read_u32(is, "version"); v != kVersion)
    throw DataError("unsupported PLSA snapshot version " + std::to_string(v));
  PlsaModel m;
  m.config.k = static_cast<int>(read_u32(is, "header"));
  const auto n = static_cast<Eigen::Index>(read_u64(is, "header"));
  const auto v = static_cast<Eigen::Index>(read_u64(is, "header"));
  m.config.seed = read_u64(is, "header");
  m.config.max_iters = static_cast<int>(read_u32(is, "header"));
  m.config.tol = read_f64(is, "header");
  m.config.restarts = static_cast<int>(read_u32(is, "header"));
  m.word_given_topic.resize(m.config.k, v);
  m.topic_given_doc.resize(n, m.config.k);
  m.doc_prior.resize(n);
  for (Eigen::Index i = 0; i < m.word_given_topic.size(); ++i) m.word_given_topic.data()[i] = read_f64(is, "P(w|z)");
  for (Eigen::Index i = 0; i < m.topic_given_doc.size(); ++i) m.topic_given_doc.data()[i] = read_f64(is, "P(z|d)");
  for (Eigen::Index i = 0; i < n; ++i) m.doc_prior[i] = read_f64(is, "P(d)");
  m.ll_trace.resize(read_u64(is, "trace length"));
  for (double& ll : m.ll_trace) ll = read_f64(is, "trace");
  return m;
}

}  // namespace topicmine
