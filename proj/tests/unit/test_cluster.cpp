#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "oracles.hpp"
#include "synthetic.hpp"
#include "topicmine/cluster.hpp"
#include "topicmine/error.hpp"

using namespace topicmine;

namespace {

oracle::Dense to_dense(const RowMatrix& m) {
  oracle::Dense out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
  return out;
}

std::set<std::set<std::size_t>> membership(const std::vector<int>& labels, const std::vector<std::size_t>& ids) {
  std::map<int, std::set<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) groups[labels[i]].insert(ids[i]);
  std::set<std::set<std::size_t>> out;
  for (auto& [l, g] : groups) out.insert(g);
  return out;
}

void check_assignment_invariants(const ClusterAssignment& a, int min_cluster_size) {
  for (int l : a.labels) CHECK((l >= -1 && l < a.n_clusters));
  const auto sizes = a.cluster_sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    CHECK(sizes[c] >= static_cast<std::size_t>(min_cluster_size));
    if (c > 0) CHECK(sizes[c - 1] >= sizes[c]);
  }
  CHECK(a.stability.size() == static_cast<std::size_t>(a.n_clusters));
}

// Hand example: class 0 has {engine:4, fuel:2}, class 1 has {runway:3, engine:1};
// vocabulary [engine, fuel, runway]; the third document is noise.
const std::vector<std::vector<std::uint32_t>> kHandCounts = {{3, 2, 0}, {0, 0, 3}, {1, 0, 0}, {1, 0, 0}, {7, 7, 7}};
const std::vector<int> kHandLabels = {0, 1, 1, 0, -1};

}  // namespace

TEST_SUITE("cluster") {
  TEST_CASE("params validation") {
    ClusterParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.effective_min_samples() == 10);
    p.min_cluster_size = 1;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p = {};
    p.min_samples = -1;
    CHECK_THROWS_AS(p.validate(), UsageError);
    p.min_samples = 3;
    CHECK(p.effective_min_samples() == 3);
  }

  TEST_CASE("core distance counts the point itself") {
    RowMatrix pts(3, 1);
    pts << 0.0, 1.0, 3.0;
    CHECK(core_distances(pts, 1) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(core_distances(pts, 2) == std::vector<double>{1.0, 1.0, 2.0});
    CHECK(core_distances(pts, 3) == std::vector<double>{3.0, 2.0, 3.0});
  }

  TEST_CASE("Prim MST matches brute-force Kruskal") {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<int> npts(2, 12), kk(1, 4);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int set = 0; set < 30; ++set) {
      const int n = npts(rng);
      RowMatrix pts(n, 3);
      for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = std::round(u(rng));  // integer grid forces ties
      const int k = std::min(kk(rng), n);
      const auto core = core_distances(pts, k);
      const auto mst = mutual_reachability_mst(pts, core);
      CHECK(mst.size() == static_cast<std::size_t>(n - 1));
      double total = 0.0;
      for (const auto& e : mst) total += e.weight;
      CHECK(std::abs(total - oracle::kruskal_mst_weight(oracle::mutual_reachability(to_dense(pts), k))) <= 1e-9);
    }
  }

  TEST_CASE("two separated blobs give two clusters") {
    const auto pts = synth::two_blobs(2024, 2, 100, 10.0);
    ClusterParams p;
    const auto a = hdbscan_fit(pts, p);
    CHECK(a.n_clusters == 2);
    CHECK(static_cast<double>(a.noise_count()) / 200.0 < 0.05);
    check_assignment_invariants(a, p.min_cluster_size);
    // Cross-check against nearest-centroid labels.
    const Eigen::RowVectorXd c0 = pts.topRows(100).colwise().mean(), c1 = pts.bottomRows(100).colwise().mean();
    std::map<int, std::set<int>> label_to_blob;
    for (Eigen::Index i = 0; i < 200; ++i) {
      if (a.labels[static_cast<std::size_t>(i)] < 0) continue;
      const int nearest = (pts.row(i) - c0).norm() < (pts.row(i) - c1).norm() ? 0 : 1;
      label_to_blob[a.labels[static_cast<std::size_t>(i)]].insert(nearest);
    }
    for (const auto& [l, blobs] : label_to_blob) CHECK(blobs.size() == 1);
  }

  TEST_CASE("too few points are all noise with a warning") {
    const RowMatrix pts = RowMatrix::Random(5, 2);
    const auto a = hdbscan_fit(pts, ClusterParams{});
    CHECK(a.n_clusters == 0);
    CHECK(std::all_of(a.labels.begin(), a.labels.end(), [](int l) { return l == -1; }));
    CHECK(!a.warnings.empty());
  }

  TEST_CASE("identical points collapse into one cluster") {
    const RowMatrix pts = RowMatrix::Constant(30, 3, 0.25);
    const auto a = hdbscan_fit(pts, ClusterParams{});
    CHECK(a.n_clusters == 1);
    CHECK(a.noise_count() == 0);
  }

  TEST_CASE("masked rows are always noise and excluded") {
    auto pts = synth::two_blobs(5, 2, 40, 12.0);
    EmbeddingMatrix e;
    e.vectors = pts;
    e.mask.assign(80, 1);
    e.mask[3] = 0;
    e.mask[60] = 0;
    ClusterParams p;
    p.min_cluster_size = 5;
    const auto a = hdbscan_fit(e, p);
    CHECK(a.labels.size() == 80);
    CHECK(a.labels[3] == -1);
    CHECK(a.labels[60] == -1);
    CHECK(a.n_clusters == 2);
  }

  TEST_CASE("permuting points relabels but keeps memberships") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
      RowMatrix pts(60, 2);
      std::normal_distribution<double> g;
      for (Eigen::Index i = 0; i < 60; ++i) {
        pts(i, 0) = g(rng) + 6.0 * static_cast<double>(i % 3);
        pts(i, 1) = g(rng) + (i % 3 == 1 ? 5.0 : 0.0);
      }
      ClusterParams p;
      p.min_cluster_size = 6;
      std::vector<std::size_t> ids(60);
      std::iota(ids.begin(), ids.end(), 0);
      const auto base = hdbscan_fit(pts, p);
      std::shuffle(ids.begin(), ids.end(), rng);
      RowMatrix shuffled(60, 2);
      for (std::size_t i = 0; i < 60; ++i) shuffled.row(static_cast<Eigen::Index>(i)) = pts.row(static_cast<Eigen::Index>(ids[i]));
      const auto moved = hdbscan_fit(shuffled, p);
      std::vector<std::size_t> identity(60);
      std::iota(identity.begin(), identity.end(), 0);
      CHECK(membership(base.labels, identity) == membership(moved.labels, ids));
      check_assignment_invariants(base, p.min_cluster_size);
    }
  }

  TEST_CASE("c-TF-IDF hand example") {
    const auto counts = synth::from_dense(kHandCounts, 3);
    ClusterAssignment a;
    a.labels = kHandLabels;
    a.n_clusters = 2;
    const auto r = c_tf_idf(counts.sparse, a);
    // Frozen from an independent script evaluating the formula directly.
    CHECK(std::abs(r.weights(0, 0) - 0.46209812037329684) <= 1e-9);
    CHECK(std::abs(r.weights(0, 1) - 0.41758765616512267) <= 1e-9);
    CHECK(r.weights(0, 2) == 0.0);
    CHECK(std::abs(r.weights(1, 0) - 0.17328679513998632) <= 1e-9);
    CHECK(r.weights(1, 1) == 0.0);
    CHECK(std::abs(r.weights(1, 2) - 0.7356219397587948) <= 1e-9);
    CHECK(std::abs(r.weights(0, 0) - 2.0 / 3.0 * std::log(2.0)) <= 1e-12);
    CHECK(r.warnings.empty());
  }

  TEST_CASE("c-TF-IDF symmetry, single class and empty class") {
    SUBCASE("equal share across classes gives equal weights") {
      const auto counts = synth::from_dense({{2, 1, 0}, {2, 0, 1}}, 3);
      ClusterAssignment a;
      a.labels = {0, 1};
      a.n_clusters = 2;
      const auto r = c_tf_idf(counts.sparse, a);
      CHECK(r.weights(0, 0) == r.weights(1, 0));
    }
    SUBCASE("single class") {
      const auto counts = synth::from_dense({{3, 1}, {1, 1}}, 2);
      ClusterAssignment a;
      a.labels = {0, 0};
      a.n_clusters = 1;
      const auto r = c_tf_idf(counts.sparse, a);
      CHECK(std::abs(r.weights(0, 0) - 4.0 / 6.0 * std::log(1.0 + 6.0 / 4.0)) <= 1e-12);
      CHECK(std::abs(r.weights(0, 1) - 2.0 / 6.0 * std::log(1.0 + 6.0 / 2.0)) <= 1e-12);
    }
    SUBCASE("a class with no tokens gives a zero row and a warning") {
      const auto counts = synth::from_dense({{3, 1}, {0, 0}}, 2);
      ClusterAssignment a;
      a.labels = {0, 1};
      a.n_clusters = 2;
      const auto r = c_tf_idf(counts.sparse, a);
      CHECK(r.weights.row(1).norm() == 0.0);
      CHECK(r.warnings.size() == 1);
    }
    SUBCASE("noise never contributes") {
      auto dense = kHandCounts;
      dense[4] = {100, 100, 100};
      ClusterAssignment a;
      a.labels = kHandLabels;
      a.n_clusters = 2;
      CHECK(c_tf_idf(synth::from_dense(dense, 3).sparse, a).weights ==
            c_tf_idf(synth::from_dense(kHandCounts, 3).sparse, a).weights);
    }
  }

  TEST_CASE("c-TF-IDF ranking is invariant to uniform count scaling") {
    std::mt19937_64 rng(55);
    for (int inst = 0; inst < 20; ++inst) {
      const auto counts = synth::random_counts(rng, 12, 10, 0.5, 6);
      ClusterAssignment a;
      a.n_clusters = 3;
      for (std::size_t d = 0; d < 12; ++d) a.labels.push_back(static_cast<int>(d % 4) - 1);
      std::vector<std::vector<std::uint32_t>> scaled(12, std::vector<std::uint32_t>(10));
      for (std::size_t d = 0; d < 12; ++d)
        for (std::size_t w = 0; w < 10; ++w) scaled[d][w] = 3u * static_cast<std::uint32_t>(counts.dense[d][w]);
      const auto w1 = c_tf_idf(counts.sparse, a).weights;
      const auto w2 = c_tf_idf(synth::from_dense(scaled, 10).sparse, a).weights;
      CHECK((w1 - w2).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("top words per cluster") {
    RowMatrix w(2, 3);
    w << 0.46, 0.23, 0.0, 0.1, 0.1, 0.5;
    const Vocabulary v({"engine", "fuel", "runway"});
    ClusterAssignment a;
    a.labels = {0, 0, 1, -1, -1};
    a.n_clusters = 2;
    const auto ts = top_words_per_cluster(w, v, 10, a, 4);
    REQUIRE(ts.topics.size() == 2);
    CHECK(ts.topics[0].words == std::vector<ScoredTerm>{{"engine", 0.46}, {"fuel", 0.23}});
    CHECK(ts.topics[1].words == std::vector<ScoredTerm>{{"runway", 0.5}, {"engine", 0.1}, {"fuel", 0.1}});
    CHECK(ts.topics[0].size == 2);
    CHECK(ts.topics[1].id == 1);
    CHECK(ts.provenance == TopicProvenance::ctfidf);
    // One of the two noise labels belongs to a masked document.
    CHECK(ts.outlier_fraction == doctest::Approx(0.25));
    CHECK(top_words_per_cluster(w, v, 1, a, 4).topics[1].words.size() == 1);
  }
}
