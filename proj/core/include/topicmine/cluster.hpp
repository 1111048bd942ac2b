#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topicmine/corpus.hpp"
#include "topicmine/embed.hpp"
#include "topicmine/linalg.hpp"
#include "topicmine/topic_set.hpp"

namespace topicmine {

struct ClusterParams {
  int min_cluster_size = 10;
  int min_samples = 0;  // 0 means "same as min_cluster_size"
  unsigned threads = 1;

  int effective_min_samples() const { return min_samples > 0 ? min_samples : min_cluster_size; }
  void validate() const;
  bool operator==(const ClusterParams&) const = default;
};

// labels[i] == -1 marks noise; clusters are numbered 0..C-1 by decreasing size.
struct ClusterAssignment {
  std::vector<int> labels;
  int n_clusters = 0;
  std::vector<double> stability;
  std::vector<std::string> warnings;

  std::vector<std::size_t> cluster_sizes() const;
  std::size_t noise_count() const;
};

struct MstEdge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  double weight = 0.0;
};

// Distance from each row to its min_samples-th nearest neighbour, counting the
// point itself as the first neighbour.
std::vector<double> core_distances(const RowMatrix& points, int min_samples, unsigned threads = 1);

// Prim's algorithm over mutual reachability max(core_a, core_b, |a - b|). Equal
// weights are resolved by the (min index, max index) pair of the edge.
std::vector<MstEdge> mutual_reachability_mst(const RowMatrix& points, const std::vector<double>& core);

// Density-based hierarchical clustering of the active (mask == 1) rows:
// mutual-reachability MST, single-linkage hierarchy, condensed tree with
// min_cluster_size, excess-of-mass selection (the root is eligible).
ClusterAssignment hdbscan_fit(const EmbeddingMatrix& emb, const ClusterParams& params);
ClusterAssignment hdbscan_fit(const RowMatrix& points, const ClusterParams& params);

struct CtfidfResult {
  RowMatrix weights;  // C x V
  std::vector<std::string> warnings;
};

// Class-based TF-IDF: W[c,t] = tf[c,t] / sum_t tf[c,t] * log(1 + A / f[t]),
// with f[t] the total count of t over all classes and A the mean class size
// in tokens. Noise documents are excluded.
CtfidfResult c_tf_idf(const CountMatrix& counts, const ClusterAssignment& labels);

// n highest positive weights per cluster (lexicographic tie-break).
TopicSet top_words_per_cluster(const RowMatrix& weights, const Vocabulary& vocab, std::size_t n,
                               const ClusterAssignment& assignment, std::size_t n_active);

}  // namespace topicmine
