#include "topicmine/embed.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "topicmine/binary_io.hpp"
#include "topicmine/error.hpp"

namespace topicmine {
namespace {

constexpr std::string_view kMagic = "EMB1";

void check_finite(const RowMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    if (!m.row(r).allFinite()) throw DataError("non-finite value in embedding row " + std::to_string(r));
}

RowMatrix read_emb1(const std::filesystem::path& path, std::size_t expected_n) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open embedding file: " + path.string());
  binio::expect_magic(is, kMagic);
  const auto n = binio::read_u32(is, "EMB1 header");
  const auto dim = binio::read_u32(is, "EMB1 header");
  if (n != expected_n)
    throw DataError("embedding count " + std::to_string(n) + " ≠ corpus " + std::to_string(expected_n));
  RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  const std::uint64_t expected = std::uint64_t{n} * dim;
  for (std::uint64_t i = 0; i < expected; ++i) {
    std::array<unsigned char, 4> buf;
    if (!is.read(reinterpret_cast<char*>(buf.data()), 4))
      throw DataError("truncated EMB1 payload: expected " + std::to_string(expected) + " floats, got " +
                      std::to_string(i));
    std::uint32_t bits = buf[0] | (buf[1] << 8) | (buf[2] << 16) | (std::uint32_t{buf[3]} << 24);
    m.data()[i] = static_cast<double>(std::bit_cast<float>(bits));
  }
  if (is.peek() != std::char_traits<char>::eof())
    throw DataError("EMB1 payload has trailing bytes beyond " + std::to_string(expected) + " floats");
  return m;
}

RowMatrix read_csv(const std::filesystem::path& path, std::size_t expected_n) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open embedding file: " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw DataError("embedding CSV row " + std::to_string(rows.size()) + ": cannot parse \"" + cell + "\"");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw DataError("embedding CSV row " + std::to_string(rows.size()) + " has " + std::to_string(row.size()) +
                      " columns, expected " + std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.size() != expected_n)
    throw DataError("embedding count " + std::to_string(rows.size()) + " ≠ corpus " + std::to_string(expected_n));
  const auto dim = rows.empty() ? 0 : rows.front().size();
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

}  // namespace

std::string_view to_string(EmbeddingSource s) { return s == EmbeddingSource::lsa ? "lsa" : "external"; }

std::size_t EmbeddingMatrix::n_active() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, std::size_t expected_n) {
  EmbeddingMatrix emb;
  emb.source = EmbeddingSource::external;
  emb.vectors = path.extension() == ".csv" ? read_csv(path, expected_n) : read_emb1(path, expected_n);
  check_finite(emb.vectors);
  emb.mask.assign(emb.n_docs(), 1);
  emb.provenance = "external:" + path.filename().string();

  auto manifest = path;
  manifest += ".manifest.json";
  if (std::ifstream ms(manifest); ms) {
    try {
      auto j = nlohmann::json::parse(ms);
      if (j.contains("model_name") && j["model_name"].is_string())
        emb.provenance = "external:" + j["model_name"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw DataError("malformed embedding manifest " + manifest.string() + ": " + e.what());
    }
  }
  return emb;
}

void save_embeddings_emb1(const EmbeddingMatrix& emb, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write embedding file: " + path.string());
  binio::write_magic(os, kMagic);
  binio::write_u32(os, static_cast<std::uint32_t>(emb.n_docs()));
  binio::write_u32(os, static_cast<std::uint32_t>(emb.dim()));
  for (Eigen::Index i = 0; i < emb.vectors.size(); ++i) binio::write_f32(os, static_cast<float>(emb.vectors.data()[i]));
  if (!os) throw DataError("failed writing embedding file: " + path.string());
}

void apply_mask(EmbeddingMatrix& emb, const std::vector<std::uint8_t>& kept_mask) {
  if (kept_mask.size() != emb.n_docs())
    throw DataError("embedding count " + std::to_string(emb.n_docs()) + " ≠ corpus " +
                    std::to_string(kept_mask.size()));
  emb.mask = kept_mask;
  for (std::size_t d = 0; d < kept_mask.size(); ++d)
    if (!kept_mask[d]) emb.vectors.row(static_cast<Eigen::Index>(d)).setZero();
}

CsrMatrix<double> tfidf_weight(const CountMatrix& counts) {
  std::vector<std::size_t> df(counts.n_cols, 0);
  for (auto c : counts.col_idx) ++df[c];
  const double n = static_cast<double>(counts.n_rows);
  CsrMatrix<double> out;
  out.n_rows = counts.n_rows;
  out.n_cols = counts.n_cols;
  for (std::size_t r = 0; r < counts.n_rows; ++r) {
    const auto cols = counts.row_cols(r);
    const auto vals = counts.row_values(r);
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const double w = vals[i] * std::log(n / static_cast<double>(df[cols[i]]));
      if (w != 0.0) {
        out.col_idx.push_back(cols[i]);
        out.values.push_back(w);
      }
    }
    out.row_ptr.push_back(out.values.size());
  }
  return out;
}

EmbeddingMatrix lsa_embed(const CountMatrix& counts, int dim, std::uint64_t seed, unsigned threads) {
  if (counts.nnz() == 0) throw DataError("lsa: count matrix is empty");
  const auto limit = std::min(counts.n_rows, counts.n_cols);
  if (dim < 1 || static_cast<std::size_t>(dim) > limit)
    throw UsageError("lsa: dim must satisfy 1 <= dim <= min(N, V) = " + std::to_string(limit));

  const auto tfidf = tfidf_weight(counts);
  SvdOptions opts;
  opts.rank = dim;
  opts.seed = seed;
  opts.power_iters = 4;
  opts.threads = threads;
  const auto svd = truncated_svd(tfidf, opts);

  EmbeddingMatrix emb;
  emb.source = EmbeddingSource::lsa;
  emb.provenance = "lsa:tfidf-svd dim=" + std::to_string(dim);
  // tfidf * V equals U * S but keeps rows with no weighted terms exactly zero.
  emb.vectors = RowMatrix::Zero(static_cast<Eigen::Index>(tfidf.n_rows), dim);
  for (std::size_t d = 0; d < tfidf.n_rows; ++d) {
    const auto cols = tfidf.row_cols(d);
    const auto vals = tfidf.row_values(d);
    for (std::size_t i = 0; i < cols.size(); ++i)
      emb.vectors.row(static_cast<Eigen::Index>(d)) += vals[i] * svd.v.row(cols[i]);
  }
  emb.mask.assign(emb.n_docs(), 0);
  for (std::size_t d = 0; d < counts.n_rows; ++d) emb.mask[d] = counts.row_cols(d).empty() ? 0 : 1;
  for (Eigen::Index r = 0; r < emb.vectors.rows(); ++r) {
    const double norm = emb.vectors.row(r).norm();
    if (norm > 0.0) emb.vectors.row(r) /= norm;
  }
  emb.normalized = true;
  return emb;
}

EmbeddingMatrix reduce_pca(const EmbeddingMatrix& emb, int r, std::uint64_t seed, unsigned threads) {
  if (r < 1 || static_cast<std::size_t>(r) > emb.dim())
    throw UsageError("pca: target dimension must satisfy 1 <= r <= " + std::to_string(emb.dim()));

  std::vector<Eigen::Index> active;
  for (std::size_t d = 0; d < emb.n_docs(); ++d)
    if (emb.mask.empty() || emb.mask[d]) active.push_back(static_cast<Eigen::Index>(d));

  EmbeddingMatrix out;
  out.source = emb.source;
  out.provenance = emb.provenance + " | pca r=" + std::to_string(r);
  out.mask = emb.mask.empty() ? std::vector<std::uint8_t>(emb.n_docs(), 1) : emb.mask;
  out.vectors = RowMatrix::Zero(emb.vectors.rows(), r);
  if (active.empty()) return out;

  RowMatrix centered(static_cast<Eigen::Index>(active.size()), emb.vectors.cols());
  for (std::size_t i = 0; i < active.size(); ++i) centered.row(static_cast<Eigen::Index>(i)) = emb.vectors.row(active[i]);
  const Eigen::RowVectorXd mean = centered.colwise().mean();
  centered.rowwise() -= mean;

  SvdOptions opts;
  opts.rank = std::min<int>(r, static_cast<int>(std::min(centered.rows(), centered.cols())));
  opts.seed = seed;
  opts.power_iters = 4;
  opts.threads = threads;
  const auto svd = truncated_svd(centered, opts);

  const RowMatrix projected = centered * svd.v;
  for (std::size_t i = 0; i < active.size(); ++i)
    out.vectors.row(active[i]).head(opts.rank) = projected.row(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace topicmine
