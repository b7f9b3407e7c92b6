#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hyperqf {

// Dense vector over GF(2). Coordinate i lives in bit (i % 64) of word i / 64.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t length) : length_(length), words_((length + 63) / 64, 0) {}

  static BitVector unit(std::size_t length, std::size_t i) {
    BitVector v(length);
    v.set(i);
    return v;
  }

  // "0110" style, "_" denotes the empty vector.
  static BitVector from_string(std::string_view bits) {
    if (bits == "_") return BitVector(0);
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i);
      } else if (bits[i] != '0') {
        throw std::invalid_argument("bit string may contain only 0 and 1: " + std::string(bits));
      }
    }
    return v;
  }

  static BitVector from_u64(std::size_t length, std::uint64_t value) {
    if (length > 64) throw std::invalid_argument("from_u64 needs length <= 64");
    BitVector v(length);
    if (length > 0) v.words_[0] = length == 64 ? value : value & ((std::uint64_t{1} << length) - 1);
    return v;
  }

  std::size_t size() const { return length_; }

  bool get(std::size_t i) const {
    check_index(i);
    return (words_[i / 64] >> (i % 64)) & 1U;
  }

  void set(std::size_t i, bool value = true) {
    check_index(i);
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (value) {
      words_[i / 64] |= mask;
    } else {
      words_[i / 64] &= ~mask;
    }
  }

  void flip(std::size_t i) {
    check_index(i);
    words_[i / 64] ^= std::uint64_t{1} << (i % 64);
  }

  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  std::uint64_t to_u64() const {
    if (length_ > 64) throw std::logic_error("to_u64 on a vector longer than 64");
    return words_.empty() ? 0 : words_[0];
  }

  std::optional<std::size_t> first_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return std::nullopt;
  }

  BitVector& operator^=(const BitVector& other) {
    if (other.length_ != length_) throw std::invalid_argument("BitVector length mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }

  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator+(BitVector a, const BitVector& b) { return a ^= b; }

  bool dot(const BitVector& other) const {
    if (other.length_ != length_) throw std::invalid_argument("BitVector length mismatch");
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  BitVector slice(std::size_t offset, std::size_t length) const {
    if (offset + length > length_) throw std::out_of_range("BitVector slice out of range");
    BitVector out(length);
    for (std::size_t i = 0; i < length; ++i) {
      if (get(offset + i)) out.set(i);
    }
    return out;
  }

  BitVector concat(const BitVector& tail) const {
    BitVector out(length_ + tail.length_);
    for (std::size_t i = 0; i < length_; ++i) {
      if (get(i)) out.set(i);
    }
    for (std::size_t i = 0; i < tail.length_; ++i) {
      if (tail.get(i)) out.set(length_ + i);
    }
    return out;
  }

  // (a ⊗ b)[i * |b| + j] = a_i b_j
  static BitVector kron(const BitVector& a, const BitVector& b) {
    BitVector out(a.length_ * b.length_);
    for (std::size_t i = 0; i < a.length_; ++i) {
      if (!a.get(i)) continue;
      for (std::size_t j = 0; j < b.length_; ++j) {
        if (b.get(j)) out.set(i * b.length_ + j);
      }
    }
    return out;
  }

  std::string to_string() const {
    if (length_ == 0) return "_";
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const BitVector& a, const BitVector& b) {
    return a.length_ == b.length_ && a.words_ == b.words_;
  }

  // Lexicographic in coordinate order, shorter vectors first.
  friend bool operator<(const BitVector& a, const BitVector& b) {
    if (a.length_ != b.length_) return a.length_ < b.length_;
    for (std::size_t w = 0; w < a.words_.size(); ++w) {
      if (a.words_[w] == b.words_[w]) continue;
      const std::uint64_t diff = a.words_[w] ^ b.words_[w];
      const auto bit = std::countr_zero(diff);
      return ((b.words_[w] >> bit) & 1U) != 0;
    }
    return false;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check_index(std::size_t i) const {
    if (i >= length_) throw std::out_of_range("BitVector index " + std::to_string(i) + " >= " + std::to_string(length_));
  }

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), data_(rows, BitVector(cols)) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BitMatrix from_rows(std::size_t cols, std::vector<BitVector> rows) {
    for (const auto& r : rows) {
      if (r.size() != cols) throw std::invalid_argument("row length does not match column count");
    }
    BitMatrix m;
    m.cols_ = cols;
    m.data_ = std::move(rows);
    return m;
  }

  static BitMatrix from_columns(std::size_t rows, const std::vector<BitVector>& columns) {
    BitMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw std::invalid_argument("column length does not match row count");
      for (std::size_t i = 0; i < rows; ++i) {
        if (columns[j].get(i)) m.set(i, j);
      }
    }
    return m;
  }

  std::size_t rows() const { return data_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const { return row_at(r).get(c); }
  void set(std::size_t r, std::size_t c, bool value = true) {
    if (r >= data_.size()) throw std::out_of_range("BitMatrix row out of range");
    data_[r].set(c, value);
  }

  const BitVector& row(std::size_t r) const { return row_at(r); }
  BitVector column(std::size_t c) const {
    BitVector out(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
      if (data_[r].get(c)) out.set(r);
    }
    return out;
  }

  BitVector apply(const BitVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
    BitVector out(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
      if (data_[r].dot(v)) out.set(r);
    }
    return out;
  }

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r) {
      for (std::size_t c = 0; c < cols_; ++c) {
        if (data_[r].get(c)) t.set(c, r);
      }
    }
    return t;
  }

  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols_ != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    BitMatrix out(a.rows(), b.cols_);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a.data_[r].get(k)) out.data_[r] ^= b.data_[k];
      }
    }
    return out;
  }

  friend BitMatrix operator+(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows() != b.rows() || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum shape mismatch");
    BitMatrix out = a;
    for (std::size_t r = 0; r < a.rows(); ++r) out.data_[r] ^= b.data_[r];
    return out;
  }

  friend bool operator==(const BitMatrix& a, const BitMatrix& b) {
    return a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const BitVector& r) { return r.is_zero(); });
  }

  static BitMatrix kron(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix out(a.rows() * b.rows(), a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t k = 0; k < b.rows(); ++k) {
        out.data_[i * b.rows() + k] = BitVector::kron(a.data_[i], b.data_[k]);
      }
    }
    return out;
  }

  static BitMatrix block_diagonal(const std::vector<BitMatrix>& blocks) {
    std::size_t r = 0;
    std::size_t c = 0;
    for (const auto& b : blocks) {
      r += b.rows();
      c += b.cols();
    }
    BitMatrix out(r, c);
    std::size_t r0 = 0;
    std::size_t c0 = 0;
    for (const auto& b : blocks) {
      for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
          if (b.get(i, j)) out.set(r0 + i, c0 + j);
        }
      }
      r0 += b.rows();
      c0 += b.cols();
    }
    return out;
  }

  const std::vector<BitVector>& row_vectors() const { return data_; }

 private:
  const BitVector& row_at(std::size_t r) const {
    if (r >= data_.size()) throw std::out_of_range("BitMatrix row out of range");
    return data_[r];
  }

  std::size_t cols_ = 0;
  std::vector<BitVector> data_;
};

// Reduced row echelon basis of a subspace, kept canonical under insertion.
// Pivots are the leftmost set coordinate of each basis row; rows are sorted by pivot.
class Echelon {
 public:
  Echelon() = default;
  explicit Echelon(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<BitVector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  BitVector reduce(BitVector v) const {
    if (v.size() != ambient_) throw std::invalid_argument("vector does not live in the ambient space");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (v.get(pivots_[i])) v ^= basis_[i];
    }
    return v;
  }

  bool contains(const BitVector& v) const { return reduce(v).is_zero(); }

  // Returns true when v enlarged the span.
  bool insert(const BitVector& v) {
    BitVector r = reduce(v);
    const auto p = r.first_set();
    if (!p) return false;
    for (auto& b : basis_) {
      if (b.get(*p)) b ^= r;
    }
    const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), *p) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, *p);
    basis_.insert(basis_.begin() + pos, std::move(r));
    return true;
  }

  // Coefficients of v with respect to basis(); only meaningful when contains(v).
  BitVector coordinates(const BitVector& v) const {
    if (!contains(v)) throw std::invalid_argument("vector is not in the subspace");
    BitVector c(basis_.size());
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (v.get(pivots_[i])) c.set(i);
    }
    return c;
  }

  bool is_full() const { return basis_.size() == ambient_; }

  friend bool operator==(const Echelon& a, const Echelon& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_ = 0;
  std::vector<BitVector> basis_;
  std::vector<std::size_t> pivots_;
};

inline Echelon span_of(std::size_t ambient, const std::vector<BitVector>& vectors) {
  Echelon e(ambient);
  for (const auto& v : vectors) e.insert(v);
  return e;
}

inline std::size_t rank(const BitMatrix& m) { return span_of(m.cols(), m.row_vectors()).rank(); }

// Basis of {x : M x = 0}, one vector per free column in increasing column order.
inline std::vector<BitVector> kernel_basis(const BitMatrix& m) {
  const Echelon e = span_of(m.cols(), m.row_vectors());
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots()) is_pivot[p] = true;
  std::vector<BitVector> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVector x = BitVector::unit(m.cols(), f);
    for (std::size_t i = 0; i < e.rank(); ++i) {
      if (e.basis()[i].get(f)) x.set(e.pivots()[i]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

// Ambient / span(subspace). Quotient coordinates are the non-pivot coordinates of the
// canonical echelon basis, so the lift of quotient basis vector k is unit(lift_coordinate(k)).
struct QuotientStructure {
  Echelon subspace;
  BitMatrix projection;  // dim x ambient
  std::vector<std::size_t> lift_coordinates;

  std::size_t dim() const { return lift_coordinates.size(); }
  BitVector project(const BitVector& v) const { return projection.apply(v); }
  BitVector lift(std::size_t k) const { return BitVector::unit(subspace.ambient(), lift_coordinates.at(k)); }
  BitVector lift_vector(const BitVector& q) const {
    BitVector out(subspace.ambient());
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (q.get(k)) out.set(lift_coordinates[k]);
    }
    return out;
  }
};

inline QuotientStructure quotient_structure(const Echelon& subspace) {
  QuotientStructure q;
  q.subspace = subspace;
  const std::size_t n = subspace.ambient();
  std::vector<int> pivot_row(n, -1);
  for (std::size_t i = 0; i < subspace.rank(); ++i) pivot_row[subspace.pivots()[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (pivot_row[j] < 0) q.lift_coordinates.push_back(j);
  }
  q.projection = BitMatrix(q.lift_coordinates.size(), n);
  for (std::size_t k = 0; k < q.lift_coordinates.size(); ++k) {
    const std::size_t np = q.lift_coordinates[k];
    q.projection.set(k, np);
    for (std::size_t i = 0; i < subspace.rank(); ++i) {
      if (subspace.basis()[i].get(np)) q.projection.set(k, subspace.pivots()[i]);
    }
  }
  return q;
}

inline QuotientStructure quotient_structure(std::size_t ambient, const std::vector<BitVector>& subspace) {
  return quotient_structure(span_of(ambient, subspace));
}

// Some x with M x = b, free variables set to zero.
inline std::optional<BitVector> solve(const BitMatrix& m, const BitVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
  Echelon e(m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    BitVector aug = m.row(r).concat(BitVector::from_u64(1, b.get(r) ? 1 : 0));
    e.insert(aug);
  }
  BitVector x(m.cols());
  for (std::size_t i = 0; i < e.rank(); ++i) {
    const std::size_t p = e.pivots()[i];
    if (p == m.cols()) return std::nullopt;
    if (e.basis()[i].get(m.cols())) x.set(p);
  }
  return x;
}

inline std::optional<BitMatrix> inverse(const BitMatrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  if (rank(m) != m.rows()) return std::nullopt;
  std::vector<BitVector> cols;
  for (std::size_t j = 0; j < m.rows(); ++j) {
    auto x = solve(m, BitVector::unit(m.rows(), j));
    if (!x) return std::nullopt;
    cols.push_back(*x);
  }
  return BitMatrix::from_columns(m.rows(), cols);
}

inline bool is_injective(const BitMatrix& m) { return rank(m) == m.cols(); }
inline bool is_surjective(const BitMatrix& m) { return rank(m) == m.rows(); }
inline bool is_bijective(const BitMatrix& m) { return m.rows() == m.cols() && is_injective(m); }

// Bilinear map GF(2)^left x GF(2)^right -> GF(2)^out given on basis pairs.
class BilinearTable {
 public:
  BilinearTable() = default;
  BilinearTable(std::size_t left, std::size_t right, std::size_t out)
      : left_(left), right_(right), out_(out), entries_(left * right, BitVector(out)) {}

  std::size_t left_dim() const { return left_; }
  std::size_t right_dim() const { return right_; }
  std::size_t out_dim() const { return out_; }

  const BitVector& at(std::size_t i, std::size_t j) const {
    if (i >= left_ || j >= right_) throw std::out_of_range("bilinear table index out of range");
    return entries_[i * right_ + j];
  }

  void set(std::size_t i, std::size_t j, BitVector value) {
    if (i >= left_ || j >= right_) throw std::out_of_range("bilinear table index out of range");
    if (value.size() != out_) throw std::invalid_argument("bilinear table entry has wrong length");
    entries_[i * right_ + j] = std::move(value);
  }

  BitVector apply(const BitVector& u, const BitVector& v) const {
    if (u.size() != left_ || v.size() != right_) throw std::invalid_argument("bilinear_apply shape mismatch");
    BitVector out(out_);
    for (std::size_t i = 0; i < left_; ++i) {
      if (!u.get(i)) continue;
      for (std::size_t j = 0; j < right_; ++j) {
        if (v.get(j)) out ^= entries_[i * right_ + j];
      }
    }
    return out;
  }

  friend bool operator==(const BilinearTable& a, const BilinearTable& b) {
    return a.left_ == b.left_ && a.right_ == b.right_ && a.out_ == b.out_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t left_ = 0;
  std::size_t right_ = 0;
  std::size_t out_ = 0;
  std::vector<BitVector> entries_;
};

inline BitVector bilinear_apply(const BilinearTable& t, const BitVector& u, const BitVector& v) {
  return t.apply(u, v);
}

// All 2^n vectors of length n in increasing integer order; n must be small.
inline std::vector<BitVector> all_vectors(std::size_t n) {
  if (n > 24) throw std::length_error("all_vectors: dimension too large to enumerate");
  std::vector<BitVector> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) out.push_back(BitVector::from_u64(n, x));
  return out;
}

}  // namespace hyperqf
