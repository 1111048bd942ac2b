#include "topicmine/intertopic.hpp"

#include <algorithm>
#include <cmath>

#include "topicmine/error.hpp"

namespace topicmine {

std::string_view to_string(DistanceMetric m) {
  return m == DistanceMetric::jensen_shannon ? "jensen_shannon" : "cosine";
}

DistanceMetric distance_metric_from_string(std::string_view s) {
  if (s == "cosine") return DistanceMetric::cosine;
  if (s == "jensen_shannon" || s == "js") return DistanceMetric::jensen_shannon;
  throw UsageError("unknown distance metric \"" + std::string(s) + "\" (cosine|jensen_shannon)");
}

double jensen_shannon_distance(const Eigen::Ref<const Eigen::RowVectorXd>& p,
                               const Eigen::Ref<const Eigen::RowVectorXd>& q) {
  double div = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) div += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0.0) div += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::sqrt(std::max(div, 0.0));
}

double cosine_distance(const Eigen::Ref<const Eigen::RowVectorXd>& a, const Eigen::Ref<const Eigen::RowVectorXd>& b) {
  if (a == b) return 0.0;
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  return std::max(0.0, 1.0 - std::clamp(a.dot(b) / (na * nb), -1.0, 1.0));
}

RowMatrix classical_mds(const RowMatrix& distances, int dims) {
  const auto c = distances.rows();
  RowMatrix coords = RowMatrix::Zero(c, dims);
  if (c <= 1) return coords;

  const Eigen::MatrixXd sq = distances.array().square().matrix();
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(c, c) - Eigen::MatrixXd::Constant(c, c, 1.0 / static_cast<double>(c));
  Eigen::MatrixXd b = -0.5 * centering * sq * centering;
  b = 0.5 * (b + b.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  const auto& vals = eig.eigenvalues();  // ascending
  RowMatrix vecs(c, dims);
  vecs.setZero();
  const int keep = static_cast<int>(std::min<Eigen::Index>(dims, c));
  for (int k = 0; k < keep; ++k) vecs.col(k) = eig.eigenvectors().col(c - 1 - k);
  flip_signs(vecs);
  for (int k = 0; k < keep; ++k) coords.col(k) = vecs.col(k) * std::sqrt(std::max(vals[c - 1 - k], 0.0));
  return coords;
}

IntertopicMap intertopic_map(const RowMatrix& topic_vectors, DistanceMetric metric) {
  const auto c = topic_vectors.rows();
  if (c < 1) throw UsageError("intertopic map needs at least one topic");
  if (metric == DistanceMetric::jensen_shannon) {
    for (Eigen::Index r = 0; r < c; ++r) {
      const auto row = topic_vectors.row(r);
      if ((row.array() < 0.0).any() || std::abs(row.sum() - 1.0) > 1e-6)
        throw DataError("jensen_shannon distance requires probability rows; row " + std::to_string(r) +
                        " is not a distribution");
    }
  }
  IntertopicMap map;
  map.metric = metric;
  map.distances = RowMatrix::Zero(c, c);
  for (Eigen::Index i = 0; i < c; ++i) {
    for (Eigen::Index j = i + 1; j < c; ++j) {
      const double d = metric == DistanceMetric::jensen_shannon
                           ? jensen_shannon_distance(topic_vectors.row(i), topic_vectors.row(j))
                           : cosine_distance(topic_vectors.row(i), topic_vectors.row(j));
      map.distances(i, j) = d;
      map.distances(j, i) = d;
    }
  }
  map.coords = classical_mds(map.distances, 2);
  return map;
}

}  // namespace topicmine
