#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "topicmine/linalg.hpp"
#include "topicmine/sparse.hpp"

namespace topicmine {

enum class EmbeddingSource { external, lsa };

std::string_view to_string(EmbeddingSource s);

// Per-document dense vectors in corpus order. Rows with mask == 0 are zero and
// excluded from PCA mean estimation and from clustering.
struct EmbeddingMatrix {
  RowMatrix vectors;
  EmbeddingSource source = EmbeddingSource::external;
  std::vector<std::uint8_t> mask;
  bool normalized = false;
  std::string provenance;

  std::size_t n_docs() const { return static_cast<std::size_t>(vectors.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors.cols()); }
  std::size_t n_active() const;
};

// EMB1: "EMB1", u32 n_docs, u32 dim, n_docs*dim float32, all little-endian,
// row-major, no padding. Files ending in ".csv" are read as header-free CSV.
// A sidecar "<path>.manifest.json" with a "model_name" field, when present,
// becomes the provenance string.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path, std::size_t expected_n);
void save_embeddings_emb1(const EmbeddingMatrix& emb, const std::filesystem::path& path);

// Zeroes rows whose corpus document is empty and records them in the mask.
void apply_mask(EmbeddingMatrix& emb, const std::vector<std::uint8_t>& kept_mask);

// tf * log(N / df); terms present in every document get weight zero and are
// dropped from the sparse result.
CsrMatrix<double> tfidf_weight(const CountMatrix& counts);

// TF-IDF, rank-`dim` randomized truncated SVD (4 power iterations), rows
// tfidf * V (= U * S) L2-normalised.
EmbeddingMatrix lsa_embed(const CountMatrix& counts, int dim, std::uint64_t seed, unsigned threads = 1);

// Centres active rows and projects them onto the top-r principal directions.
EmbeddingMatrix reduce_pca(const EmbeddingMatrix& emb, int r, std::uint64_t seed = 0, unsigned threads = 1);

}  // namespace topicmine
