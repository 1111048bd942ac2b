#include <algorithm>
#include <cmath>
#include <numeric>

#include "topicmine/cluster.hpp"
#include "topicmine/error.hpp"

namespace topicmine {

CtfidfResult c_tf_idf(const CountMatrix& counts, const ClusterAssignment& labels) {
  if (labels.labels.size() != counts.n_rows)
    throw UsageError("c-tf-idf: label count does not match the count matrix rows");
  const auto n_classes = static_cast<Eigen::Index>(labels.n_clusters);
  const auto v = static_cast<Eigen::Index>(counts.n_cols);

  CtfidfResult out;
  RowMatrix tf = RowMatrix::Zero(n_classes, v);
  for (std::size_t d = 0; d < counts.n_rows; ++d) {
    const int c = labels.labels[d];
    if (c < 0) continue;
    const auto cols = counts.row_cols(d);
    const auto vals = counts.row_values(d);
    for (std::size_t i = 0; i < cols.size(); ++i) tf(c, cols[i]) += vals[i];
  }

  out.weights = RowMatrix::Zero(n_classes, v);
  if (n_classes == 0) return out;
  const Eigen::RowVectorXd term_totals = tf.colwise().sum();
  const Vector class_totals = tf.rowwise().sum();
  const double avg_class_size = class_totals.sum() / static_cast<double>(n_classes);

  for (Eigen::Index c = 0; c < n_classes; ++c) {
    if (class_totals[c] <= 0.0) {
      out.warnings.push_back("class " + std::to_string(c) + " has no tokens; its c-TF-IDF row is zero");
      continue;
    }
    for (Eigen::Index t = 0; t < v; ++t) {
      if (tf(c, t) == 0.0) continue;
      out.weights(c, t) = tf(c, t) / class_totals[c] * std::log(1.0 + avg_class_size / term_totals[t]);
    }
  }
  return out;
}

TopicSet top_words_per_cluster(const RowMatrix& weights, const Vocabulary& vocab, std::size_t n,
                               const ClusterAssignment& assignment, std::size_t n_active) {
  if (static_cast<std::size_t>(weights.cols()) != vocab.size())
    throw UsageError("c-tf-idf: weight matrix width does not match vocabulary");
  TopicSet ts;
  ts.provenance = TopicProvenance::ctfidf;
  ts.outlier_fraction = 0.0;
  if (n_active > 0) {
    std::size_t noise = 0;
    for (int l : assignment.labels) noise += l < 0 ? 1 : 0;
    // Masked documents are labelled noise too but are not part of the clusterable set.
    noise -= std::min(noise, assignment.labels.size() - n_active);
    ts.outlier_fraction = static_cast<double>(noise) / static_cast<double>(n_active);
  }
  const auto sizes = assignment.cluster_sizes();
  for (Eigen::Index c = 0; c < weights.rows(); ++c) {
    std::vector<std::uint32_t> idx;
    for (Eigen::Index t = 0; t < weights.cols(); ++t)
      if (weights(c, t) > 0.0) idx.push_back(static_cast<std::uint32_t>(t));
    const std::size_t k = std::min(n, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                        if (weights(c, a) != weights(c, b)) return weights(c, a) > weights(c, b);
                        return vocab.terms[a] < vocab.terms[b];
                      });
    Topic topic;
    topic.id = static_cast<int>(c);
    topic.size = static_cast<std::size_t>(c) < sizes.size() ? sizes[static_cast<std::size_t>(c)] : 0;
    for (std::size_t i = 0; i < k; ++i) topic.words.push_back({vocab.terms[idx[i]], weights(c, idx[i])});
    ts.topics.push_back(std::move(topic));
  }
  return ts;
}

}  // namespace topicmine
