#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace hyperqf {

// Finitely generated abelian group Z^cols / (row span), as Z^free x prod Z/d_i.
struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<std::int64_t> torsion;  // invariant factors > 1, each dividing the next
};

namespace detail {

inline std::int64_t checked_mul_sub(std::int64_t a, std::int64_t q, std::int64_t b) {
  std::int64_t prod = 0;
  std::int64_t out = 0;
  if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out)) {
    throw std::overflow_error("integer elimination overflowed 64 bits");
  }
  return out;
}

}  // namespace detail

inline AbelianInvariants smith_invariants(std::vector<std::vector<std::int64_t>> m, std::size_t cols) {
  const std::size_t rows = m.size();
  for (const auto& r : m) {
    if (r.size() != cols) throw std::invalid_argument("smith_invariants: ragged matrix");
  }
  std::vector<std::int64_t> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // smallest nonzero entry in the lower-right block
    std::size_t pr = rows;
    std::size_t pc = cols;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (m[i][j] != 0 && (pr == rows || std::llabs(m[i][j]) < std::llabs(m[pr][pc]))) {
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == rows) break;
    std::swap(m[t], m[pr]);
    for (auto& r : m) std::swap(r[t], r[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        const std::int64_t q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] = detail::checked_mul_sub(m[i][j], q, m[t][j]);
        if (m[i][t] != 0) {
          std::swap(m[t], m[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        const std::int64_t q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] = detail::checked_mul_sub(m[i][j], q, m[i][t]);
        if (m[t][j] != 0) {
          for (auto& r : m) std::swap(r[t], r[j]);
          clean = false;
        }
      }
      if (!clean) continue;
      // the pivot must divide the remaining block
      for (std::size_t i = t + 1; i < rows && clean; ++i) {
        for (std::size_t j = t + 1; j < cols; ++j) {
          if (m[i][j] % m[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) {
              std::int64_t s = 0;
              if (__builtin_add_overflow(m[t][k], m[i][k], &s)) throw std::overflow_error("integer elimination overflowed");
              m[t][k] = s;
            }
            clean = false;
            break;
          }
        }
      }
    }
    diag.push_back(std::llabs(m[t][t]));
    ++t;
  }
  AbelianInvariants out;
  out.free_rank = cols - diag.size();
  for (std::int64_t d : diag) {
    if (d > 1) out.torsion.push_back(d);
  }
  return out;
}

}  // namespace hyperqf
