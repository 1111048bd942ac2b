#pragma once

#include <string_view>

#include "topicmine/linalg.hpp"

namespace topicmine {

enum class DistanceMetric { cosine, jensen_shannon };

std::string_view to_string(DistanceMetric m);
DistanceMetric distance_metric_from_string(std::string_view s);

struct IntertopicMap {
  DistanceMetric metric = DistanceMetric::cosine;
  RowMatrix distances;  // C x C, symmetric, zero diagonal
  RowMatrix coords;     // C x 2
};

// sqrt of the base-2 Jensen-Shannon divergence; a metric bounded by 1.
double jensen_shannon_distance(const Eigen::Ref<const Eigen::RowVectorXd>& p,
                               const Eigen::Ref<const Eigen::RowVectorXd>& q);
// 1 - cosine similarity; a zero row is at distance 1 from any other row.
double cosine_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b);

// Classical (Torgerson) scaling: double-centre the squared distances, keep the
// top `dims` eigenpairs scaled by sqrt(max(eigenvalue, 0)). Eigenvector signs
// follow flip_signs.
RowMatrix classical_mds(const RowMatrix& distances, int dims = 2);

// Pairwise topic distances plus 2-D coordinates. Jensen-Shannon requires each
// row to be a probability distribution.
IntertopicMap intertopic_map(const RowMatrix& topic_vectors, DistanceMetric metric);

}  // namespace topicmine
