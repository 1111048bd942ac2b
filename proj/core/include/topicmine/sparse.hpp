#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace topicmine {

// Compressed sparse row matrix. Column indices within a row are strictly
// increasing and values are nonzero.
template <typename T>
struct CsrMatrix {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col_idx;
  std::vector<T> values;

  std::size_t nnz() const { return values.size(); }

  std::span<const std::uint32_t> row_cols(std::size_t r) const {
    return {col_idx.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  std::span<const T> row_values(std::size_t r) const {
    return {values.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }

  T row_sum(std::size_t r) const {
    T s{};
    for (T v : row_values(r)) s += v;
    return s;
  }

  T total() const {
    T s{};
    for (T v : values) s += v;
    return s;
  }

  T at(std::size_t r, std::size_t c) const {
    auto cols = row_cols(r);
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == c) return values[row_ptr[r] + i];
    return T{};
  }

  bool operator==(const CsrMatrix&) const = default;
};

using CountMatrix = CsrMatrix<std::uint32_t>;

// Builds a CSR matrix from dense rows, dropping zeros.
template <typename T>
CsrMatrix<T> csr_from_dense(const std::vector<std::vector<T>>& rows, std::size_t n_cols) {
  CsrMatrix<T> m;
  m.n_rows = rows.size();
  m.n_cols = n_cols;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != T{}) {
        m.col_idx.push_back(static_cast<std::uint32_t>(c));
        m.values.push_back(row[c]);
      }
    }
    m.row_ptr.push_back(m.values.size());
  }
  return m;
}

}  // namespace topicmine
