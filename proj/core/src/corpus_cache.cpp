#include <fstream>

#include "topicmine/binary_io.hpp"
#include "topicmine/corpus.hpp"
#include "topicmine/error.hpp"

namespace topicmine {
namespace {

constexpr std::string_view kMagic = "TMCORPUS";
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  using namespace binio;
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write corpus cache: " + path.string());

  write_magic(os, kMagic);
  write_u32(os, kVersion);

  write_string(os, corpus.text_field);
  const auto& c = corpus.config;
  write_u32(os, c.lowercase ? 1 : 0);
  write_string(os, c.stopword_path);
  write_string(os, to_string(c.normalizer));
  write_string(os, c.lexicon_path);
  write_u32(os, static_cast<std::uint32_t>(c.min_token_len));
  write_u32(os, static_cast<std::uint32_t>(c.min_df));
  write_f64(os, c.max_df_ratio);

  write_u64(os, corpus.docs.size());
  for (const auto& d : corpus.docs) {
    write_string(os, d.id);
    write_string(os, d.text);
    write_u64(os, d.meta.size());
    for (const auto& [k, v] : d.meta) {
      write_string(os, k);
      write_string(os, v);
    }
  }

  write_u64(os, corpus.vocab.size());
  for (const auto& t : corpus.vocab.terms) write_string(os, t);

  const auto& m = corpus.counts;
  write_u64(os, m.n_rows);
  write_u64(os, m.n_cols);
  write_u64(os, m.nnz());
  for (auto p : m.row_ptr) write_u64(os, p);
  for (auto ci : m.col_idx) write_u32(os, ci);
  for (auto v : m.values) write_u32(os, v);
  for (auto k : corpus.kept_mask) write_u32(os, k);

  for (const auto& seq : corpus.token_seqs) {
    write_u64(os, seq.size());
    for (const auto& t : seq) write_string(os, t);
  }
  if (!os) throw DataError("failed writing corpus cache: " + path.string());
}

Corpus load_corpus(const std::filesystem::path& path) {
  using namespace binio;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open corpus cache: " + path.string());

  expect_magic(is, kMagic);
  if (auto v = read_u32(is, "version"); v != kVersion)
    throw DataError("unsupported corpus cache version " + std::to_string(v));

  Corpus corpus;
  corpus.text_field = read_string(is, "text field");
  auto& c = corpus.config;
  c.lowercase = read_u32(is, "config") != 0;
  c.stopword_path = read_string(is, "config");
  c.normalizer = normalizer_from_string(read_string(is, "config"));
  c.lexicon_path = read_string(is, "config");
  c.min_token_len = static_cast<int>(read_u32(is, "config"));
  c.min_df = static_cast<int>(read_u32(is, "config"));
  c.max_df_ratio = read_f64(is, "config");

  const auto n_docs = read_u64(is, "document count");
  corpus.docs.resize(n_docs);
  for (auto& d : corpus.docs) {
    d.id = read_string(is, "document id");
    d.text = read_string(is, "document text");
    const auto n_meta = read_u64(is, "metadata");
    for (std::uint64_t i = 0; i < n_meta; ++i) {
      auto k = read_string(is, "metadata");
      d.meta.emplace(std::move(k), read_string(is, "metadata"));
    }
  }

  std::vector<std::string> terms(read_u64(is, "vocabulary size"));
  for (auto& t : terms) t = read_string(is, "vocabulary");
  corpus.vocab = Vocabulary(std::move(terms));

  auto& m = corpus.counts;
  m.n_rows = read_u64(is, "matrix shape");
  m.n_cols = read_u64(is, "matrix shape");
  const auto nnz = read_u64(is, "matrix nnz");
  if (m.n_rows != n_docs || m.n_cols != corpus.vocab.size())
    throw DataError("corpus cache matrix shape does not match documents/vocabulary");
  m.row_ptr.resize(m.n_rows + 1);
  for (auto& p : m.row_ptr) p = read_u64(is, "row pointers");
  m.col_idx.resize(nnz);
  for (auto& ci : m.col_idx) ci = read_u32(is, "column indices");
  m.values.resize(nnz);
  for (auto& v : m.values) v = read_u32(is, "values");
  corpus.kept_mask.resize(n_docs);
  for (auto& k : corpus.kept_mask) k = static_cast<std::uint8_t>(read_u32(is, "kept mask"));
  if (m.row_ptr.front() != 0 || m.row_ptr.back() != nnz)
    throw DataError("corpus cache row pointers are inconsistent");
  for (auto ci : m.col_idx)
    if (ci >= m.n_cols) throw DataError("corpus cache column index out of range");

  corpus.token_seqs.resize(n_docs);
  for (auto& seq : corpus.token_seqs) {
    seq.resize(read_u64(is, "token sequence"));
    for (auto& t : seq) t = read_string(is, "token");
  }
  return corpus;
}

}  // namespace topicmine
