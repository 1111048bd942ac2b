#pragma once

// Reference implementations written with plain loops and std containers only.
// They share no code with the library and exist to cross-check it.

#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

struct PlsaState {
  Dense word_given_topic;  // K x V
  Dense topic_given_doc;   // N x K
};

// One EM sweep of asymmetric PLSA over dense counts; returns the updated state
// and writes the log-likelihood of the updated parameters to *ll.
PlsaState plsa_sweep(const PlsaState& s, const Dense& counts, double* ll);
double plsa_log_likelihood(const PlsaState& s, const Dense& counts);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
std::vector<double> jacobi_eigenvalues(Dense a);

// Total weight of a minimum spanning tree over a complete graph given by a
// symmetric weight matrix (Kruskal with every edge).
double kruskal_mst_weight(const Dense& w);

// Mutual reachability distances with core distance = k-th nearest neighbour
// counting the point itself.
Dense mutual_reachability(const Dense& points, int k);

// C_v coherence by direct enumeration of windows.
struct CvResult {
  std::vector<double> scores;  // NaN for topics with fewer than two present words
};
CvResult cv(const std::vector<std::vector<std::string>>& topics, const std::vector<std::vector<std::string>>& docs,
            int window, int top_n, double eps);

// Best-permutation accuracy of predicted labels against truth (both 0..k-1).
double purity(const std::vector<int>& truth, const std::vector<int>& predicted, int k);

// Base-2 Jensen-Shannon distance.
double js_distance(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace oracle
