#pragma once

// Reduced K-theory by brute force: the free GF(2) space on all n-tuples of nonzero
// elements modulo slot multiplicativity and Steinberg tuples. Uses its own
// elimination so it shares nothing with the library's linear algebra.

#include <cstdint>
#include <map>
#include <vector>

#include "hyperqf/multiring.hpp"

namespace oracle {

class RowSpace {
 public:
  explicit RowSpace(std::size_t cols) : cols_(cols), words_((cols + 63) / 64) {}

  void insert(std::vector<std::uint64_t> row) {
    for (const auto& [pivot, basis] : rows_) {
      if ((row[pivot / 64] >> (pivot % 64)) & 1U) {
        for (std::size_t w = 0; w < words_; ++w) row[w] ^= basis[w];
      }
    }
    for (std::size_t c = 0; c < cols_; ++c) {
      if ((row[c / 64] >> (c % 64)) & 1U) {
        // keep existing rows reduced at the new pivot
        for (auto& [p, basis] : rows_) {
          if ((basis[c / 64] >> (c % 64)) & 1U) {
            for (std::size_t w = 0; w < words_; ++w) basis[w] ^= row[w];
          }
        }
        rows_.emplace(c, std::move(row));
        return;
      }
    }
  }

  std::vector<std::uint64_t> blank() const { return std::vector<std::uint64_t>(words_, 0); }
  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t cols_;
  std::size_t words_;
  std::map<std::size_t, std::vector<std::uint64_t>> rows_;
};

inline void toggle(std::vector<std::uint64_t>& row, std::size_t c) { row[c / 64] ^= std::uint64_t{1} << (c % 64); }

inline std::size_t k_dimension(const hyperqf::Multiring& f, int n) {
  if (n == 0) return 1;
  const std::vector<int> units = f.nonzero();
  const std::size_t g = units.size();
  std::size_t cols = 1;
  for (int i = 0; i < n; ++i) cols *= g;
  std::vector<int> pos(static_cast<std::size_t>(f.size()), -1);
  for (std::size_t i = 0; i < g; ++i) pos[units[i]] = static_cast<int>(i);
  std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * g;

  RowSpace space(cols);
  for (std::size_t c = 0; c < cols; ++c) {
    std::vector<std::size_t> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[i] = (c / stride[i]) % g;
    for (int slot = 0; slot < n; ++slot) {
      for (std::size_t b = 0; b < g; ++b) {
        auto row = space.blank();
        const std::size_t ab = static_cast<std::size_t>(pos[f.times(units[t[slot]], units[b])]);
        toggle(row, c);
        toggle(row, c - t[slot] * stride[slot] + b * stride[slot]);
        toggle(row, c - t[slot] * stride[slot] + ab * stride[slot]);
        space.insert(std::move(row));
      }
    }
    for (int i = 0; i + 1 < n; ++i) {
      const int a = units[t[i]];
      if (hyperqf::in_set(f.plus(f.one, f.negate(a)), units[t[i + 1]])) {
        auto row = space.blank();
        toggle(row, c);
        space.insert(std::move(row));
        break;
      }
    }
  }
  return cols - space.rank();
}

}  // namespace oracle
