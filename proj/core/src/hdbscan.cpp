#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <tuple>

#include "topicmine/cluster.hpp"
#include "topicmine/error.hpp"
#include "topicmine/parallel.hpp"

namespace topicmine {
namespace {

// Zero-distance merges get a large finite lambda so stabilities stay finite.
constexpr double kMinDistance = 1e-300;

double lambda_of(double dist) { return 1.0 / std::max(dist, kMinDistance); }

struct Merge {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double distance = 0.0;
  std::uint32_t size = 0;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) {
    const auto id = static_cast<std::uint32_t>(parent_.size());
    parent_.push_back(id);
    size_.push_back(size_[a] + size_[b]);
    parent_[a] = id;
    parent_[b] = id;
    return id;
  }
  std::uint32_t size(std::uint32_t x) const { return size_[x]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

// Node ids: leaves 0..m-1, merge i is node m+i.
std::vector<Merge> single_linkage(std::vector<MstEdge> edges, std::size_t m) {
  std::sort(edges.begin(), edges.end(), [](const MstEdge& x, const MstEdge& y) {
    return std::tuple(x.weight, std::min(x.a, x.b), std::max(x.a, x.b)) <
           std::tuple(y.weight, std::min(y.a, y.b), std::max(y.a, y.b));
  });
  UnionFind uf(m);
  std::vector<Merge> merges;
  merges.reserve(edges.size());
  for (const auto& e : edges) {
    const auto ra = uf.find(e.a);
    const auto rb = uf.find(e.b);
    const auto node = uf.add(ra, rb);
    merges.push_back({ra, rb, e.weight, uf.size(node)});
  }
  return merges;
}

struct CondensedTree {
  std::vector<int> parent;          // per cluster, -1 for the root
  std::vector<double> birth;        // lambda at which the cluster appears
  std::vector<double> stability;
  std::vector<std::uint32_t> size;  // points at birth
  std::vector<int> point_cluster;   // cluster each point falls out of
};

CondensedTree condense(const std::vector<Merge>& merges, std::size_t m, std::size_t min_size) {
  CondensedTree tree;
  tree.point_cluster.assign(m, 0);
  tree.parent.push_back(-1);
  tree.birth.push_back(0.0);
  tree.stability.push_back(0.0);
  tree.size.push_back(static_cast<std::uint32_t>(m));
  if (merges.empty()) return tree;

  auto node_size = [&](std::uint32_t node) -> std::uint32_t { return node < m ? 1u : merges[node - m].size; };

  // All leaves below a node fall out of `cluster` at `lambda`.
  auto drop_subtree = [&](std::uint32_t node, int cluster, double lambda) {
    std::vector<std::uint32_t> stack{node};
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      if (x < m) {
        tree.point_cluster[x] = cluster;
        tree.stability[static_cast<std::size_t>(cluster)] += lambda - tree.birth[static_cast<std::size_t>(cluster)];
      } else {
        stack.push_back(merges[x - m].left);
        stack.push_back(merges[x - m].right);
      }
    }
  };

  auto new_cluster = [&](int parent, double lambda, std::uint32_t size) {
    tree.parent.push_back(parent);
    tree.birth.push_back(lambda);
    tree.stability.push_back(0.0);
    tree.size.push_back(size);
    tree.stability[static_cast<std::size_t>(parent)] += (lambda - tree.birth[static_cast<std::size_t>(parent)]) * size;
    return static_cast<int>(tree.parent.size() - 1);
  };

  const auto root = static_cast<std::uint32_t>(m + merges.size() - 1);
  std::deque<std::pair<std::uint32_t, int>> queue{{root, 0}};
  while (!queue.empty()) {
    const auto [node, cluster] = queue.front();
    queue.pop_front();
    if (node < m) {
      // A lone point can only reach here as the root of a one-point hierarchy.
      tree.point_cluster[node] = cluster;
      continue;
    }
    const auto& mg = merges[node - m];
    const double lambda = lambda_of(mg.distance);
    const auto ls = node_size(mg.left);
    const auto rs = node_size(mg.right);
    const bool left_big = ls >= min_size;
    const bool right_big = rs >= min_size;
    if (left_big && right_big) {
      queue.emplace_back(mg.left, new_cluster(cluster, lambda, ls));
      queue.emplace_back(mg.right, new_cluster(cluster, lambda, rs));
    } else if (!left_big && !right_big) {
      drop_subtree(mg.left, cluster, lambda);
      drop_subtree(mg.right, cluster, lambda);
    } else if (left_big) {
      drop_subtree(mg.right, cluster, lambda);
      queue.emplace_back(mg.left, cluster);
    } else {
      drop_subtree(mg.left, cluster, lambda);
      queue.emplace_back(mg.right, cluster);
    }
  }
  return tree;
}

// Excess-of-mass: a cluster is kept unless its children's best selections are
// strictly more stable. Children always have larger ids than their parent.
std::vector<bool> select_clusters(const CondensedTree& tree) {
  const std::size_t n = tree.parent.size();
  std::vector<std::vector<int>> children(n);
  for (std::size_t c = 1; c < n; ++c) children[static_cast<std::size_t>(tree.parent[c])].push_back(static_cast<int>(c));

  std::vector<bool> selected(n, false);
  std::vector<double> best(n, 0.0);
  for (std::size_t c = n; c-- > 0;) {
    if (children[c].empty()) {
      selected[c] = true;
      best[c] = tree.stability[c];
      continue;
    }
    double subtree = 0.0;
    for (int ch : children[c]) subtree += best[static_cast<std::size_t>(ch)];
    if (subtree > tree.stability[c]) {
      best[c] = subtree;
    } else {
      best[c] = tree.stability[c];
      selected[c] = true;
      std::vector<int> stack(children[c].begin(), children[c].end());
      while (!stack.empty()) {
        const auto x = static_cast<std::size_t>(stack.back());
        stack.pop_back();
        selected[x] = false;
        stack.insert(stack.end(), children[x].begin(), children[x].end());
      }
    }
  }
  return selected;
}

}  // namespace

void ClusterParams::validate() const {
  if (min_cluster_size < 2) throw UsageError("cluster: min_cluster_size must satisfy min_cluster_size >= 2");
  if (min_samples < 0) throw UsageError("cluster: min_samples must satisfy min_samples >= 1");
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(n_clusters), 0);
  for (int l : labels)
    if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

std::size_t ClusterAssignment::noise_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), -1));
}

std::vector<double> core_distances(const RowMatrix& points, int min_samples, unsigned threads) {
  const auto m = static_cast<std::size_t>(points.rows());
  std::vector<double> core(m, 0.0);
  if (m == 0) return core;
  const std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(min_samples, 1)), 1, m);
  parallel_blocks(m, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> dist(m);
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < m; ++j)
        dist[j] = (points.row(static_cast<Eigen::Index>(i)) - points.row(static_cast<Eigen::Index>(j))).norm();
      dist[i] = 0.0;
      std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
      core[i] = dist[k - 1];
    }
  });
  return core;
}

std::vector<MstEdge> mutual_reachability_mst(const RowMatrix& points, const std::vector<double>& core) {
  const auto m = static_cast<std::size_t>(points.rows());
  std::vector<MstEdge> edges;
  if (m < 2) return edges;
  edges.reserve(m - 1);

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> key(m, inf);
  std::vector<std::uint32_t> from(m, 0);
  std::vector<bool> in_tree(m, false);

  auto pair_less = [](double w1, std::uint32_t a1, std::uint32_t b1, double w2, std::uint32_t a2, std::uint32_t b2) {
    return std::tuple(w1, std::min(a1, b1), std::max(a1, b1)) < std::tuple(w2, std::min(a2, b2), std::max(a2, b2));
  };

  std::uint32_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < m; ++step) {
    const auto cur = points.row(current);
    std::uint32_t next = 0;
    bool have_next = false;
    for (std::uint32_t j = 0; j < m; ++j) {
      if (in_tree[j]) continue;
      const double d = (cur - points.row(j)).norm();
      const double w = std::max({core[current], core[j], d});
      if (key[j] == inf || pair_less(w, current, j, key[j], from[j], j)) {
        key[j] = w;
        from[j] = current;
      }
      if (!have_next || pair_less(key[j], from[j], j, key[next], from[next], next)) {
        next = j;
        have_next = true;
      }
    }
    in_tree[next] = true;
    edges.push_back({from[next], next, key[next]});
    current = next;
  }
  return edges;
}

ClusterAssignment hdbscan_fit(const RowMatrix& points, const ClusterParams& params) {
  EmbeddingMatrix emb;
  emb.vectors = points;
  emb.mask.assign(static_cast<std::size_t>(points.rows()), 1);
  return hdbscan_fit(emb, params);
}

ClusterAssignment hdbscan_fit(const EmbeddingMatrix& emb, const ClusterParams& params) {
  params.validate();
  ClusterAssignment out;
  out.labels.assign(emb.n_docs(), -1);

  std::vector<std::uint32_t> active;
  for (std::size_t d = 0; d < emb.n_docs(); ++d)
    if (emb.mask.empty() || emb.mask[d]) active.push_back(static_cast<std::uint32_t>(d));
  const std::size_t m = active.size();
  const auto min_size = static_cast<std::size_t>(params.min_cluster_size);
  if (m < min_size) {
    out.warnings.push_back("only " + std::to_string(m) + " clusterable points, fewer than min_cluster_size " +
                           std::to_string(min_size) + "; everything is noise");
    return out;
  }

  RowMatrix pts(static_cast<Eigen::Index>(m), emb.vectors.cols());
  for (std::size_t i = 0; i < m; ++i) pts.row(static_cast<Eigen::Index>(i)) = emb.vectors.row(active[i]);

  const auto core = core_distances(pts, params.effective_min_samples(), params.threads);
  const auto merges = single_linkage(mutual_reachability_mst(pts, core), m);
  const auto tree = condense(merges, m, min_size);
  const auto selected = select_clusters(tree);

  const std::size_t n_tree = tree.parent.size();
  std::vector<int> owner(n_tree, -1);
  for (std::size_t c = 0; c < n_tree; ++c) {
    if (selected[c]) owner[c] = static_cast<int>(c);
    else if (tree.parent[c] >= 0) owner[c] = owner[static_cast<std::size_t>(tree.parent[c])];
  }

  std::vector<int> raw(m, -1);
  for (std::size_t i = 0; i < m; ++i) raw[i] = owner[static_cast<std::size_t>(tree.point_cluster[i])];

  // Renumber by decreasing size, then by first member.
  struct Group {
    int tree_id;
    std::size_t size;
    std::size_t first;
  };
  std::vector<Group> groups;
  std::vector<int> group_of(n_tree, -1);
  for (std::size_t i = 0; i < m; ++i) {
    if (raw[i] < 0) continue;
    auto& g = group_of[static_cast<std::size_t>(raw[i])];
    if (g < 0) {
      g = static_cast<int>(groups.size());
      groups.push_back({raw[i], 0, i});
    }
    ++groups[static_cast<std::size_t>(g)].size;
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (groups[a].size != groups[b].size) return groups[a].size > groups[b].size;
    return groups[a].first < groups[b].first;
  });
  std::vector<int> final_label(groups.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    final_label[order[r]] = static_cast<int>(r);
    out.stability.push_back(tree.stability[static_cast<std::size_t>(groups[order[r]].tree_id)]);
  }
  out.n_clusters = static_cast<int>(groups.size());
  for (std::size_t i = 0; i < m; ++i)
    if (raw[i] >= 0) out.labels[active[i]] = final_label[static_cast<std::size_t>(group_of[static_cast<std::size_t>(raw[i])])];
  return out;
}

}  // namespace topicmine
