#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace oracle {

double plsa_log_likelihood(const PlsaState& s, const Dense& counts) {
  const std::size_t n = counts.size();
  double total = 0.0;
  for (const auto& row : counts)
    for (double c : row) total += c;
  double ll = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    double mass = 0.0;
    for (double c : counts[d]) mass += c;
    if (mass == 0.0) continue;
    const double prior = mass / total;
    double doc_ll = 0.0;
    for (std::size_t w = 0; w < counts[d].size(); ++w) {
      if (counts[d][w] == 0.0) continue;
      double p = 0.0;
      for (std::size_t z = 0; z < s.word_given_topic.size(); ++z)
        p += s.topic_given_doc[d][z] * s.word_given_topic[z][w];
      doc_ll += counts[d][w] * std::log(prior * p);
    }
    ll += doc_ll;
  }
  return ll;
}

PlsaState plsa_sweep(const PlsaState& s, const Dense& counts, double* ll) {
  const std::size_t k = s.word_given_topic.size();
  const std::size_t v = s.word_given_topic[0].size();
  const std::size_t n = counts.size();
  Dense phi(k, std::vector<double>(v, 0.0));
  Dense theta(n, std::vector<double>(k, 0.0));
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t w = 0; w < v; ++w) {
      if (counts[d][w] == 0.0) continue;
      double denom = 0.0;
      for (std::size_t z = 0; z < k; ++z) denom += s.word_given_topic[z][w] * s.topic_given_doc[d][z];
      for (std::size_t z = 0; z < k; ++z) {
        const double r = denom > 0.0 ? s.word_given_topic[z][w] * s.topic_given_doc[d][z] / denom : 1.0 / k;
        phi[z][w] += counts[d][w] * r;
        theta[d][z] += counts[d][w] * r;
      }
    }
  }
  auto normalise = [](std::vector<double>& row) {
    double sum = 0.0;
    for (double x : row) sum += x;
    if (sum <= 0.0) {
      std::fill(row.begin(), row.end(), 1.0 / row.size());
      return;
    }
    for (double& x : row) x /= sum;
  };
  for (auto& row : phi) normalise(row);
  for (auto& row : theta) normalise(row);
  PlsaState out{phi, theta};
  if (ll) *ll = plsa_log_likelihood(out, counts);
  return out;
}

std::vector<double> jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t r = 0; r < n; ++r) {
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = c * arp - s * arq;
          a[r][q] = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double apr = a[p][r], aqr = a[q][r];
          a[p][r] = c * apr - s * aqr;
          a[q][r] = s * apr + c * aqr;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

double kruskal_mst_weight(const Dense& w) {
  const std::size_t n = w.size();
  struct Edge {
    double w;
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) edges.push_back({w[a][b], a, b});
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.w < y.w; });
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  double total = 0.0;
  for (const auto& e : edges) {
    const auto ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    total += e.w;
  }
  return total;
}

Dense mutual_reachability(const Dense& points, int k) {
  const std::size_t n = points.size();
  Dense dist(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < points[a].size(); ++j) s += (points[a][j] - points[b][j]) * (points[a][j] - points[b][j]);
      dist[a][b] = std::sqrt(s);
    }
  std::vector<double> core(n);
  for (std::size_t a = 0; a < n; ++a) {
    auto row = dist[a];
    std::sort(row.begin(), row.end());
    core[a] = row[std::min<std::size_t>(static_cast<std::size_t>(k), n) - 1];
  }
  Dense mr(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) mr[a][b] = std::max({core[a], core[b], dist[a][b]});
  return mr;
}

CvResult cv(const std::vector<std::vector<std::string>>& topics, const std::vector<std::vector<std::string>>& docs,
            int window, int top_n, double eps) {
  std::vector<std::set<std::string>> windows;
  for (const auto& doc : docs) {
    if (doc.empty()) continue;
    const std::size_t w = static_cast<std::size_t>(window);
    if (doc.size() <= w) {
      windows.emplace_back(doc.begin(), doc.end());
      continue;
    }
    for (std::size_t start = 0; start + w <= doc.size(); ++start)
      windows.emplace_back(doc.begin() + start, doc.begin() + start + w);
  }
  const double nw = static_cast<double>(windows.size());
  auto count1 = [&](const std::string& x) {
    double c = 0;
    for (const auto& s : windows) c += s.count(x) ? 1 : 0;
    return c;
  };
  auto count2 = [&](const std::string& x, const std::string& y) {
    double c = 0;
    for (const auto& s : windows) c += (s.count(x) && s.count(y)) ? 1 : 0;
    return c;
  };
  auto npmi = [&](const std::string& x, const std::string& y) {
    if (x == y) return 1.0;
    const double cx = count1(x), cy = count1(y), cxy = count2(x, y);
    if (cx == 0 || cy == 0) return 0.0;
    if (cxy == cx && cxy == cy) return 1.0;
    const double px = cx / nw, py = cy / nw, pxy = cxy / nw;
    const double v = std::log((pxy + eps) / (px * py)) / -std::log(pxy + eps);
    return std::clamp(v, -1.0, 1.0);
  };

  CvResult out;
  for (const auto& topic : topics) {
    std::vector<std::string> head;
    for (const auto& w : topic) {
      if (static_cast<int>(head.size()) == top_n) break;
      if (std::find(head.begin(), head.end(), w) == head.end()) head.push_back(w);
    }
    std::vector<std::string> words;
    for (const auto& w : head)
      if (count1(w) > 0) words.push_back(w);
    if (words.size() < 2) {
      out.scores.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const std::size_t m = words.size();
    Dense v(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) v[i][j] = npmi(words[i], words[j]);
    std::vector<double> total(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) total[j] += v[i][j];
    double score = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double dot = 0, na = 0, nb = 0;
      for (std::size_t j = 0; j < m; ++j) {
        dot += v[i][j] * total[j];
        na += v[i][j] * v[i][j];
        nb += total[j] * total[j];
      }
      score += (na > 0 && nb > 0) ? dot / std::sqrt(na * nb) : 0.0;
    }
    out.scores.push_back(score / static_cast<double>(m));
  }
  return out;
}

double purity(const std::vector<int>& truth, const std::vector<int>& predicted, int k) {
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (predicted[i] >= 0 && perm[static_cast<std::size_t>(predicted[i])] == truth[i]) ++hits;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(truth.size());
}

double js_distance(const std::vector<double>& p, const std::vector<double>& q) {
  double js = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0) js += 0.5 * p[i] * std::log2(p[i] / m);
    if (q[i] > 0) js += 0.5 * q[i] * std::log2(q[i] / m);
  }
  return std::sqrt(std::max(js, 0.0));
}

}  // namespace oracle
