#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperqf/gf2.hpp"
#include "hyperqf/verdict.hpp"

namespace hyperqf {

// Inductive graded ring truncated at level N: GF(2) spaces R_0..R_N with pointed tops,
// transitions h_n : R_n -> R_{n+1} (n < N) and products R_n x R_m -> R_{n+m} (n + m <= N).
struct TruncatedIgr {
  std::string name;
  int truncation = 0;
  std::vector<std::size_t> dims;
  std::vector<BitVector> tops;
  std::vector<BitMatrix> transitions;
  std::vector<BilinearTable> stars;  // slot n * (N + 1) + m, filled for n + m <= N

  std::size_t dim(int n) const { return dims.at(static_cast<std::size_t>(n)); }
  const BitVector& top(int n) const { return tops.at(static_cast<std::size_t>(n)); }
  const BitMatrix& transition(int n) const { return transitions.at(static_cast<std::size_t>(n)); }

  std::size_t slot(int n, int m) const {
    if (n < 0 || m < 0 || n + m > truncation) throw std::out_of_range("product level beyond truncation");
    return static_cast<std::size_t>(n) * (truncation + 1) + m;
  }
  const BilinearTable& star(int n, int m) const { return stars.at(slot(n, m)); }
  BilinearTable& star(int n, int m) { return stars.at(slot(n, m)); }

  BitVector multiply(int n, const BitVector& x, int m, const BitVector& y) const { return star(n, m).apply(x, y); }

  BitVector basis(int n, std::size_t i) const { return BitVector::unit(dim(n), i); }

  // h^to_from
  BitMatrix transition_power(int from, int to) const {
    if (from > to || to > truncation) throw std::out_of_range("transition power out of range");
    BitMatrix m = BitMatrix::identity(dim(from));
    for (int k = from; k < to; ++k) m = transition(k) * m;
    return m;
  }

  void validate_shapes() const {
    const int n_levels = truncation + 1;
    if (truncation < 0) throw std::invalid_argument(name + ": negative truncation");
    if (static_cast<int>(dims.size()) != n_levels || static_cast<int>(tops.size()) != n_levels) {
      throw std::invalid_argument(name + ": need one dimension and one top per level");
    }
    if (static_cast<int>(transitions.size()) != truncation) throw std::invalid_argument(name + ": need N transitions");
    if (stars.size() != static_cast<std::size_t>(n_levels) * n_levels) throw std::invalid_argument(name + ": product slots");
    for (int n = 0; n <= truncation; ++n) {
      if (tops[n].size() != dims[n]) throw std::invalid_argument(name + ": top has wrong length at level " + std::to_string(n));
      if (n < truncation && (transitions[n].rows() != dims[n + 1] || transitions[n].cols() != dims[n])) {
        throw std::invalid_argument(name + ": transition has wrong shape at level " + std::to_string(n));
      }
      for (int m = 0; n + m <= truncation; ++m) {
        const auto& t = star(n, m);
        if (t.left_dim() != dims[n] || t.right_dim() != dims[m] || t.out_dim() != dims[n + m]) {
          throw std::invalid_argument(name + ": product table has wrong shape at (" + std::to_string(n) + "," +
                                      std::to_string(m) + ")");
        }
      }
    }
  }
};

using LevelProduct = std::function<BitVector(int n, std::size_t i, int m, std::size_t j)>;

// Assembles an Igr from level data and a product on basis pairs for n, m >= 1.
// Products with level 0 are scalar multiplication.
inline TruncatedIgr assemble_igr(std::string name, int truncation, std::vector<std::size_t> dims,
                                 std::vector<BitVector> tops, std::vector<BitMatrix> transitions,
                                 const LevelProduct& product) {
  TruncatedIgr r;
  r.name = std::move(name);
  r.truncation = truncation;
  r.dims = std::move(dims);
  r.tops = std::move(tops);
  r.transitions = std::move(transitions);
  const std::size_t n_levels = static_cast<std::size_t>(truncation) + 1;
  if (r.dims.size() != n_levels) throw std::invalid_argument(r.name + ": need one dimension per level");
  r.stars.assign(n_levels * n_levels, BilinearTable());
  for (int n = 0; n <= truncation; ++n) {
    for (int m = 0; n + m <= truncation; ++m) {
      BilinearTable t(r.dims[n], r.dims[m], r.dims[n + m]);
      for (std::size_t i = 0; i < r.dims[n]; ++i) {
        for (std::size_t j = 0; j < r.dims[m]; ++j) {
          if (n == 0 && r.dims[0] == 1) {
            t.set(i, j, BitVector::unit(r.dims[m], j));
          } else if (m == 0 && r.dims[0] == 1) {
            t.set(i, j, BitVector::unit(r.dims[n], i));
          } else {
            t.set(i, j, product(n, i, m, j));
          }
        }
      }
      r.star(n, m) = std::move(t);
    }
  }
  r.validate_shapes();
  return r;
}

struct IgrReport {
  Verdict level_zero{"level_zero"};
  Verdict top_transition{"top_transition"};
  Verdict transition_is_product{"transition_is_product"};
  Verdict unit{"unit"};
  Verdict commutative{"commutative"};
  Verdict associative{"associative"};
  Verdict compatibility{"compatibility"};

  bool holds() const {
    return level_zero.holds && top_transition.holds && transition_is_product.holds && unit.holds && commutative.holds &&
           associative.holds && compatibility.holds;
  }
  std::vector<const Verdict*> verdicts() const {
    return {&level_zero, &top_transition, &transition_is_product, &unit, &commutative, &associative, &compatibility};
  }
};

inline IgrReport check_igr(const TruncatedIgr& r) {
  r.validate_shapes();
  IgrReport rep;
  const int N = r.truncation;
  if (r.dim(0) != 1 || !r.top(0).get(0)) rep.level_zero.fail("r0_is_f2", {0});
  for (int n = 0; n < N; ++n) {
    if (r.transition(n).apply(r.top(n)) != r.top(n + 1)) {
      rep.top_transition.fail("h_top", {n});
      break;
    }
  }
  for (int n = 0; n + 1 <= N && rep.transition_is_product.holds; ++n) {
    for (std::size_t i = 0; i < r.dim(n); ++i) {
      if (r.transition(n).apply(r.basis(n, i)) != r.multiply(1, r.top(1), n, r.basis(n, i))) {
        rep.transition_is_product.fail("h_is_top_times", {n, static_cast<int>(i)});
        break;
      }
    }
  }
  if (rep.level_zero.holds) {
    for (int n = 0; n <= N && rep.unit.holds; ++n) {
      for (std::size_t i = 0; i < r.dim(n); ++i) {
        const BitVector x = r.basis(n, i);
        if (r.multiply(0, r.top(0), n, x) != x || r.multiply(n, x, 0, r.top(0)) != x) {
          rep.unit.fail("top0_is_unit", {n, static_cast<int>(i)});
          break;
        }
      }
    }
  }
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; n + m <= N; ++m) {
      for (std::size_t i = 0; i < r.dim(n) && rep.commutative.holds; ++i) {
        for (std::size_t j = 0; j < r.dim(m); ++j) {
          if (r.star(n, m).at(i, j) != r.star(m, n).at(j, i)) {
            rep.commutative.fail("commutative", {n, m, static_cast<int>(i), static_cast<int>(j)});
            break;
          }
        }
      }
      for (int p = 0; n + m + p <= N && rep.associative.holds; ++p) {
        for (std::size_t i = 0; i < r.dim(n) && rep.associative.holds; ++i) {
          for (std::size_t j = 0; j < r.dim(m) && rep.associative.holds; ++j) {
            const BitVector xy = r.star(n, m).at(i, j);
            for (std::size_t k = 0; k < r.dim(p); ++k) {
              const BitVector left = r.multiply(n + m, xy, p, r.basis(p, k));
              const BitVector right = r.multiply(n, r.basis(n, i), m + p, r.star(m, p).at(j, k));
              if (left != right) {
                rep.associative.fail("associative",
                                     {n, m, p, static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
                break;
              }
            }
          }
        }
      }
      // h^p(x) * h^q(y) = h^{p+q}(x * y)
      for (int p = 0; n + m + p <= N && rep.compatibility.holds; ++p) {
        for (int q = 0; n + m + p + q <= N && rep.compatibility.holds; ++q) {
          const BitMatrix hp = r.transition_power(n, n + p);
          const BitMatrix hq = r.transition_power(m, m + q);
          const BitMatrix hpq = r.transition_power(n + m, n + m + p + q);
          for (std::size_t i = 0; i < r.dim(n) && rep.compatibility.holds; ++i) {
            for (std::size_t j = 0; j < r.dim(m); ++j) {
              const BitVector left = r.multiply(n + p, hp.apply(r.basis(n, i)), m + q, hq.apply(r.basis(m, j)));
              const BitVector right = hpq.apply(r.star(n, m).at(i, j));
              if (left != right) {
                rep.compatibility.fail("compatibility",
                                       {n, m, p, q, static_cast<int>(i), static_cast<int>(j)});
                break;
              }
            }
          }
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Morphisms.

struct IgrMorphism {
  std::vector<BitMatrix> maps;  // maps[n] : R_n -> S_n

  BitVector apply(int n, const BitVector& x) const { return maps.at(static_cast<std::size_t>(n)).apply(x); }
};

inline IgrMorphism identity_morphism(const TruncatedIgr& r) {
  IgrMorphism f;
  for (int n = 0; n <= r.truncation; ++n) f.maps.push_back(BitMatrix::identity(r.dim(n)));
  return f;
}

inline IgrMorphism compose(const IgrMorphism& g, const IgrMorphism& f) {
  if (g.maps.size() != f.maps.size()) throw std::invalid_argument("compose: truncations differ");
  IgrMorphism out;
  for (std::size_t n = 0; n < f.maps.size(); ++n) out.maps.push_back(g.maps[n] * f.maps[n]);
  return out;
}

struct IgrMorphismReport {
  Verdict shape{"shape"};
  Verdict level_zero{"level_zero"};
  Verdict tops{"tops"};
  Verdict transitions{"transitions"};
  Verdict products{"products"};

  bool holds() const {
    return shape.holds && level_zero.holds && tops.holds && transitions.holds && products.holds;
  }
  std::vector<const Verdict*> verdicts() const { return {&shape, &level_zero, &tops, &transitions, &products}; }
};

inline IgrMorphismReport check_igr_morphism(const IgrMorphism& f, const TruncatedIgr& r, const TruncatedIgr& s) {
  IgrMorphismReport rep;
  const int N = r.truncation;
  if (s.truncation != N || static_cast<int>(f.maps.size()) != N + 1) {
    rep.shape.fail("truncation", {N, s.truncation});
    return rep;
  }
  for (int n = 0; n <= N; ++n) {
    if (f.maps[n].rows() != s.dim(n) || f.maps[n].cols() != r.dim(n)) {
      rep.shape.fail("level_shape", {n});
      return rep;
    }
  }
  if (!(f.maps[0] == BitMatrix::identity(1)) || r.dim(0) != 1 || s.dim(0) != 1) rep.level_zero.fail("f0_identity", {0});
  for (int n = 0; n <= N; ++n) {
    if (f.apply(n, r.top(n)) != s.top(n)) {
      rep.tops.fail("top", {n});
      break;
    }
  }
  for (int n = 0; n < N; ++n) {
    if (!(f.maps[n + 1] * r.transition(n) == s.transition(n) * f.maps[n])) {
      rep.transitions.fail("square", {n});
      break;
    }
  }
  for (int n = 0; n <= N && rep.products.holds; ++n) {
    for (int m = 0; n + m <= N && rep.products.holds; ++m) {
      for (std::size_t i = 0; i < r.dim(n) && rep.products.holds; ++i) {
        for (std::size_t j = 0; j < r.dim(m); ++j) {
          const BitVector left = f.apply(n + m, r.star(n, m).at(i, j));
          const BitVector right = s.multiply(n, f.apply(n, r.basis(n, i)), m, f.apply(m, r.basis(m, j)));
          if (left != right) {
            rep.products.fail("multiplicative", {n, m, static_cast<int>(i), static_cast<int>(j)});
            break;
          }
        }
      }
    }
  }
  return rep;
}

inline bool levelwise_injective(const IgrMorphism& f) {
  return std::all_of(f.maps.begin(), f.maps.end(), [](const BitMatrix& m) { return is_injective(m); });
}
inline bool levelwise_surjective(const IgrMorphism& f) {
  return std::all_of(f.maps.begin(), f.maps.end(), [](const BitMatrix& m) { return is_surjective(m); });
}
inline bool levelwise_bijective(const IgrMorphism& f) {
  return std::all_of(f.maps.begin(), f.maps.end(), [](const BitMatrix& m) { return is_bijective(m); });
}

// ---------------------------------------------------------------------------
// Products and tensor products.

struct ProductResult {
  TruncatedIgr product;
  std::vector<IgrMorphism> projections;
};

inline int common_truncation(const std::vector<TruncatedIgr>& rs, std::optional<int> fallback) {
  if (rs.empty()) {
    if (!fallback) throw std::invalid_argument("empty family needs an explicit truncation");
    return *fallback;
  }
  for (const auto& r : rs) {
    if (r.truncation != rs.front().truncation) throw std::invalid_argument("family members have different truncations");
  }
  return rs.front().truncation;
}

inline ProductResult igr_product(const std::vector<TruncatedIgr>& factors, std::optional<int> truncation = {}) {
  const int N = common_truncation(factors, truncation);
  std::vector<std::size_t> dims{1};
  std::vector<std::vector<std::size_t>> offset(N + 1);
  for (int n = 1; n <= N; ++n) {
    std::size_t d = 0;
    for (const auto& f : factors) {
      offset[n].push_back(d);
      d += f.dim(n);
    }
    dims.push_back(d);
  }
  std::vector<BitVector> tops{BitVector::from_string("1")};
  for (int n = 1; n <= N; ++n) {
    BitVector t(0);
    for (const auto& f : factors) t = t.concat(f.top(n));
    tops.push_back(t);
  }
  std::vector<BitMatrix> hs;
  for (int n = 0; n < N; ++n) {
    if (n == 0) {
      hs.push_back(BitMatrix::from_columns(dims[1], {tops[1]}));
    } else {
      std::vector<BitMatrix> blocks;
      for (const auto& f : factors) blocks.push_back(f.transition(n));
      hs.push_back(BitMatrix::block_diagonal(blocks));
    }
  }
  const auto locate = [&](int n, std::size_t i) {
    std::size_t k = 0;
    while (k + 1 < factors.size() && offset[n][k + 1] <= i) ++k;
    return std::pair<std::size_t, std::size_t>{k, i - offset[n][k]};
  };
  ProductResult out;
  std::string name = "prod(";
  for (std::size_t k = 0; k < factors.size(); ++k) name += (k ? "," : "") + factors[k].name;
  out.product = assemble_igr(name + ")", N, dims, tops, hs, [&](int n, std::size_t i, int m, std::size_t j) {
    BitVector v(dims[n + m]);
    const auto [ki, ii] = locate(n, i);
    const auto [kj, jj] = locate(m, j);
    if (ki == kj) {
      const BitVector p = factors[ki].star(n, m).at(ii, jj);
      for (std::size_t b = 0; b < p.size(); ++b) {
        if (p.get(b)) v.set(offset[n + m][ki] + b);
      }
    }
    return v;
  });
  for (std::size_t k = 0; k < factors.size(); ++k) {
    IgrMorphism pi;
    pi.maps.push_back(BitMatrix::identity(1));
    for (int n = 1; n <= N; ++n) {
      BitMatrix m(factors[k].dim(n), dims[n]);
      for (std::size_t b = 0; b < factors[k].dim(n); ++b) m.set(b, offset[n][k] + b);
      pi.maps.push_back(m);
    }
    out.projections.push_back(pi);
  }
  return out;
}

// The unique map into a product with the given components.
inline IgrMorphism igr_pairing(const std::vector<IgrMorphism>& components, const ProductResult& p, int truncation) {
  IgrMorphism out;
  out.maps.push_back(BitMatrix::identity(1));
  for (int n = 1; n <= truncation; ++n) {
    std::vector<BitVector> rows;
    std::size_t cols = 0;
    for (const auto& c : components) {
      cols = c.maps.at(n).cols();
      for (const auto& row : c.maps[n].row_vectors()) rows.push_back(row);
    }
    if (components.empty()) cols = 1;
    out.maps.push_back(BitMatrix::from_rows(cols, rows));
  }
  (void)p;
  return out;
}

struct TensorResult {
  TruncatedIgr tensor;
  std::vector<IgrMorphism> injections;
};

inline TensorResult igr_tensor(const std::vector<TruncatedIgr>& factors, std::optional<int> truncation = {}) {
  const int N = common_truncation(factors, truncation);
  std::vector<std::size_t> dims{1};
  std::vector<BitVector> tops{BitVector::from_string("1")};
  for (int n = 1; n <= N; ++n) {
    if (factors.empty()) {
      dims.push_back(0);
      tops.emplace_back(0);
      continue;
    }
    BitVector t = BitVector::from_string("1");
    for (const auto& f : factors) t = BitVector::kron(t, f.top(n));
    dims.push_back(t.size());
    tops.push_back(t);
  }
  std::vector<BitMatrix> hs;
  for (int n = 0; n < N; ++n) {
    if (n == 0) {
      hs.push_back(BitMatrix::from_columns(dims[1], {tops[1]}));
    } else if (factors.empty()) {
      hs.emplace_back(0, 0);
    } else {
      BitMatrix m = BitMatrix::identity(1);
      for (const auto& f : factors) m = BitMatrix::kron(m, f.transition(n));
      hs.push_back(m);
    }
  }
  // Split a tensor coordinate into per-factor coordinates.
  const auto digits = [&](int n, std::size_t i) {
    std::vector<std::size_t> d(factors.size());
    for (std::size_t k = factors.size(); k-- > 0;) {
      d[k] = i % factors[k].dim(n);
      i /= factors[k].dim(n);
    }
    return d;
  };
  TensorResult out;
  std::string name = "tensor(";
  for (std::size_t k = 0; k < factors.size(); ++k) name += (k ? "," : "") + factors[k].name;
  out.tensor = assemble_igr(name + ")", N, dims, tops, hs, [&](int n, std::size_t i, int m, std::size_t j) {
    const auto di = digits(n, i);
    const auto dj = digits(m, j);
    BitVector v = BitVector::from_string("1");
    for (std::size_t k = 0; k < factors.size(); ++k) v = BitVector::kron(v, factors[k].star(n, m).at(di[k], dj[k]));
    return v;
  });
  for (std::size_t k = 0; k < factors.size(); ++k) {
    IgrMorphism inj;
    inj.maps.push_back(BitMatrix::identity(1));
    for (int n = 1; n <= N; ++n) {
      std::vector<BitVector> cols;
      for (std::size_t b = 0; b < factors[k].dim(n); ++b) {
        BitVector v = BitVector::from_string("1");
        for (std::size_t l = 0; l < factors.size(); ++l) {
          v = BitVector::kron(v, l == k ? factors[l].basis(n, b) : factors[l].top(n));
        }
        cols.push_back(v);
      }
      inj.maps.push_back(BitMatrix::from_columns(dims[n], cols));
    }
    out.injections.push_back(inj);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ideals, quotients, subrings.

struct GradedIdeal {
  std::vector<Echelon> levels;

  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (const auto& e : levels) d.push_back(e.rank());
    return d;
  }
};

inline GradedIdeal generate_ideal(const TruncatedIgr& r, const std::vector<std::vector<BitVector>>& generators) {
  const int N = r.truncation;
  GradedIdeal j;
  for (int n = 0; n <= N; ++n) {
    Echelon e(r.dim(n));
    if (static_cast<std::size_t>(n) < generators.size()) {
      for (const auto& g : generators[n]) e.insert(g);
    }
    for (int k = 0; k < n; ++k) {
      for (const auto& x : j.levels[k].basis()) {
        for (std::size_t b = 0; b < r.dim(n - k); ++b) e.insert(r.multiply(k, x, n - k, r.basis(n - k, b)));
      }
    }
    j.levels.push_back(std::move(e));
  }
  return j;
}

inline bool is_ideal(const TruncatedIgr& r, const GradedIdeal& j) {
  for (int n = 0; n <= r.truncation; ++n) {
    for (int m = 0; n + m <= r.truncation; ++m) {
      for (const auto& x : j.levels[n].basis()) {
        for (std::size_t b = 0; b < r.dim(m); ++b) {
          if (!j.levels[n + m].contains(r.multiply(n, x, m, r.basis(m, b)))) return false;
        }
      }
    }
  }
  return true;
}

struct QuotientResult {
  TruncatedIgr quotient;
  IgrMorphism projection;
  std::vector<QuotientStructure> levels;
};

inline QuotientResult igr_quotient(const TruncatedIgr& r, const GradedIdeal& j) {
  if (static_cast<int>(j.levels.size()) != r.truncation + 1 || !is_ideal(r, j)) {
    throw std::invalid_argument("igr_quotient: not a graded ideal of " + r.name);
  }
  QuotientResult out;
  const int N = r.truncation;
  std::vector<std::size_t> dims;
  std::vector<BitVector> tops;
  for (int n = 0; n <= N; ++n) {
    out.levels.push_back(quotient_structure(j.levels[n]));
    dims.push_back(out.levels[n].dim());
    tops.push_back(out.levels[n].project(r.top(n)));
  }
  std::vector<BitMatrix> hs;
  for (int n = 0; n < N; ++n) {
    std::vector<BitVector> cols;
    for (std::size_t k = 0; k < dims[n]; ++k) {
      cols.push_back(out.levels[n + 1].project(r.transition(n).apply(out.levels[n].lift(k))));
    }
    hs.push_back(BitMatrix::from_columns(dims[n + 1], cols));
  }
  // Level 0 may collapse when the ideal is everything; products then come from lifts too.
  TruncatedIgr q;
  q.name = r.name + "/J";
  q.truncation = N;
  q.dims = dims;
  q.tops = tops;
  q.transitions = hs;
  q.stars.assign(static_cast<std::size_t>(N + 1) * (N + 1), BilinearTable());
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; n + m <= N; ++m) {
      BilinearTable t(dims[n], dims[m], dims[n + m]);
      for (std::size_t i = 0; i < dims[n]; ++i)
        for (std::size_t k = 0; k < dims[m]; ++k)
          t.set(i, k, out.levels[n + m].project(r.multiply(n, out.levels[n].lift(i), m, out.levels[m].lift(k))));
      q.star(n, m) = std::move(t);
    }
  }
  q.validate_shapes();
  out.quotient = std::move(q);
  for (int n = 0; n <= N; ++n) out.projection.maps.push_back(out.levels[n].projection);
  return out;
}

struct IdealResult {
  GradedIdeal ideal;
  QuotientResult quotient;
};

inline IdealResult ideal_ops(const TruncatedIgr& r, const std::vector<std::vector<BitVector>>& generators) {
  IdealResult out;
  out.ideal = generate_ideal(r, generators);
  out.quotient = igr_quotient(r, out.ideal);
  return out;
}

inline GradedIdeal kernel_ideal(const IgrMorphism& f, const TruncatedIgr& r) {
  GradedIdeal j;
  for (int n = 0; n <= r.truncation; ++n) j.levels.push_back(span_of(r.dim(n), kernel_basis(f.maps.at(n))));
  return j;
}

struct Factorization {
  QuotientResult quotient;  // R -> R / ker f
  IgrMorphism induced;      // R / ker f -> S
  bool induced_injective = false;
  bool commutes = false;
};

inline Factorization factor_through_kernel(const IgrMorphism& f, const TruncatedIgr& r) {
  Factorization out;
  out.quotient = igr_quotient(r, kernel_ideal(f, r));
  for (int n = 0; n <= r.truncation; ++n) {
    std::vector<BitVector> cols;
    for (std::size_t k = 0; k < out.quotient.levels[n].dim(); ++k) {
      cols.push_back(f.apply(n, out.quotient.levels[n].lift(k)));
    }
    out.induced.maps.push_back(BitMatrix::from_columns(f.maps[n].rows(), cols));
  }
  out.induced_injective = levelwise_injective(out.induced);
  out.commutes = true;
  for (int n = 0; n <= r.truncation; ++n) {
    if (!(out.induced.maps[n] * out.quotient.projection.maps[n] == f.maps[n])) out.commutes = false;
  }
  return out;
}

inline QuotientResult coequalizer(const IgrMorphism& f, const IgrMorphism& g, const TruncatedIgr& r,
                                  const TruncatedIgr& s) {
  std::vector<std::vector<BitVector>> gens(static_cast<std::size_t>(s.truncation) + 1);
  for (int n = 0; n <= r.truncation; ++n) {
    for (std::size_t b = 0; b < r.dim(n); ++b) gens[n].push_back(f.apply(n, r.basis(n, b)) ^ g.apply(n, r.basis(n, b)));
  }
  return igr_quotient(s, generate_ideal(s, gens));
}

struct SubringResult {
  TruncatedIgr sub;
  IgrMorphism inclusion;
  std::vector<Echelon> spans;
};

inline SubringResult subring_from_spans(const TruncatedIgr& r, std::vector<Echelon> spans, std::string name) {
  const int N = r.truncation;
  SubringResult out;
  std::vector<std::size_t> dims;
  std::vector<BitVector> tops;
  for (int n = 0; n <= N; ++n) {
    if (!spans[n].contains(r.top(n))) throw std::logic_error("subring misses the top at level " + std::to_string(n));
    dims.push_back(spans[n].rank());
    tops.push_back(spans[n].coordinates(r.top(n)));
  }
  std::vector<BitMatrix> hs;
  for (int n = 0; n < N; ++n) {
    std::vector<BitVector> cols;
    for (const auto& b : spans[n].basis()) cols.push_back(spans[n + 1].coordinates(r.transition(n).apply(b)));
    hs.push_back(BitMatrix::from_columns(dims[n + 1], cols));
  }
  out.sub = assemble_igr(std::move(name), N, dims, tops, hs, [&](int n, std::size_t i, int m, std::size_t j) {
    return spans[n + m].coordinates(r.multiply(n, spans[n].basis()[i], m, spans[m].basis()[j]));
  });
  for (int n = 0; n <= N; ++n) out.inclusion.maps.push_back(BitMatrix::from_columns(r.dim(n), spans[n].basis()));
  out.spans = std::move(spans);
  return out;
}

// Smallest subring containing the given elements together with the tops.
inline SubringResult generated_subring(const TruncatedIgr& r, const std::vector<std::vector<BitVector>>& generators) {
  const int N = r.truncation;
  std::vector<Echelon> spans;
  for (int n = 0; n <= N; ++n) {
    Echelon e(r.dim(n));
    e.insert(r.top(n));
    if (static_cast<std::size_t>(n) < generators.size()) {
      for (const auto& g : generators[n]) e.insert(g);
    }
    for (int k = 1; k < n; ++k) {
      for (const auto& x : spans[k].basis())
        for (const auto& y : spans[n - k].basis()) e.insert(r.multiply(k, x, n - k, y));
    }
    spans.push_back(std::move(e));
  }
  return subring_from_spans(r, std::move(spans), "[" + r.name + "]");
}

struct Level1Result {
  SubringResult sub;
  bool in_igr1 = false;
};

inline Level1Result level1_subring(const TruncatedIgr& r) {
  std::vector<std::vector<BitVector>> gens(static_cast<std::size_t>(r.truncation) + 1);
  if (r.truncation >= 1) {
    for (std::size_t b = 0; b < r.dim(1); ++b) gens[1].push_back(r.basis(1, b));
  }
  Level1Result out;
  out.sub = generated_subring(r, gens);
  out.sub.sub.name = "1(" + r.name + ")";
  out.in_igr1 = true;
  for (int n = 0; n <= r.truncation; ++n) {
    if (out.sub.sub.dim(n) != r.dim(n)) out.in_igr1 = false;
  }
  return out;
}

inline std::vector<BitVector> level_elements(const TruncatedIgr& r, int n) {
  std::vector<BitVector> out;
  if (r.dim(n) <= 16) return all_vectors(r.dim(n));
  for (std::size_t b = 0; b < r.dim(n); ++b) out.push_back(r.basis(n, b));
  return out;
}

struct HyperbolicQuotient {
  IdealResult ideal;
  bool in_igr_h = false;
};

// Quotient by the ideal generated by (top_1 + a) * a, a in R_1.
inline HyperbolicQuotient hyperbolic_quotient(const TruncatedIgr& r) {
  std::vector<std::vector<BitVector>> gens(static_cast<std::size_t>(r.truncation) + 1);
  HyperbolicQuotient out;
  out.in_igr_h = true;
  if (r.truncation >= 2) {
    for (const auto& a : level_elements(r, 1)) {
      const BitVector g = r.multiply(1, r.top(1) ^ a, 1, a);
      if (!g.is_zero()) out.in_igr_h = false;
      gens[2].push_back(g);
    }
  }
  out.ideal = ideal_ops(r, gens);
  out.ideal.quotient.quotient.name = "Q(" + r.name + ")";
  return out;
}

inline bool in_igr_h(const TruncatedIgr& r) { return hyperbolic_quotient(r).in_igr_h; }
inline bool in_igr1(const TruncatedIgr& r) { return level1_subring(r).in_igr1; }
inline bool in_igr_plus(const TruncatedIgr& r) { return in_igr1(r) && in_igr_h(r); }

struct CanonicalComparison {
  IgrMorphism can;  // Q(1(R)) -> 1(Q(R))
  bool is_morphism = false;
  bool is_iso = false;
};

inline CanonicalComparison compare_q_and_level1(const TruncatedIgr& r) {
  const Level1Result one_r = level1_subring(r);
  const HyperbolicQuotient q_one = hyperbolic_quotient(one_r.sub.sub);
  const HyperbolicQuotient q_r = hyperbolic_quotient(r);
  const Level1Result one_q = level1_subring(q_r.ideal.quotient.quotient);
  const auto& source = q_one.ideal.quotient;
  CanonicalComparison out;
  for (int n = 0; n <= r.truncation; ++n) {
    std::vector<BitVector> cols;
    for (std::size_t k = 0; k < source.levels[n].dim(); ++k) {
      const BitVector in_one = source.levels[n].lift(k);
      const BitVector in_r = one_r.sub.inclusion.apply(n, in_one);
      const BitVector in_qr = q_r.ideal.quotient.projection.apply(n, in_r);
      cols.push_back(one_q.sub.spans[n].coordinates(in_qr));
    }
    out.can.maps.push_back(BitMatrix::from_columns(one_q.sub.sub.dim(n), cols));
  }
  out.is_morphism = check_igr_morphism(out.can, source.quotient, one_q.sub.sub).holds();
  out.is_iso = out.is_morphism && levelwise_bijective(out.can);
  return out;
}

// ---------------------------------------------------------------------------
// Commutative GF(2)-algebras and the trivial towers over them.

struct F2Algebra {
  std::size_t dim = 0;
  BitVector one;
  BilinearTable mul;

  BitVector times(const BitVector& a, const BitVector& b) const { return mul.apply(a, b); }
};

inline F2Algebra f2_power_algebra(std::size_t copies) {
  F2Algebra a;
  a.dim = copies;
  a.one = BitVector(copies);
  for (std::size_t i = 0; i < copies; ++i) a.one.set(i);
  a.mul = BilinearTable(copies, copies, copies);
  for (std::size_t i = 0; i < copies; ++i) a.mul.set(i, i, BitVector::unit(copies, i));
  return a;
}

// F2[x]/(x^k) on the basis 1, x, ..., x^{k-1}.
inline F2Algebra truncated_polynomial_algebra(std::size_t k) {
  F2Algebra a;
  a.dim = k;
  a.one = BitVector::unit(k, 0);
  a.mul = BilinearTable(k, k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i + j < k) a.mul.set(i, j, BitVector::unit(k, i + j));
  return a;
}

inline Verdict check_algebra(const F2Algebra& a) {
  Verdict v{"algebra"};
  const std::size_t d = a.dim;
  for (std::size_t i = 0; i < d && v.holds; ++i) {
    const BitVector x = BitVector::unit(d, i);
    if (a.times(a.one, x) != x) v.fail("unit", {static_cast<int>(i)});
    for (std::size_t j = 0; j < d && v.holds; ++j) {
      const BitVector y = BitVector::unit(d, j);
      if (a.times(x, y) != a.times(y, x)) v.fail("commutative", {static_cast<int>(i), static_cast<int>(j)});
      for (std::size_t k = 0; k < d && v.holds; ++k) {
        const BitVector z = BitVector::unit(d, k);
        if (a.times(a.times(x, y), z) != a.times(x, a.times(y, z))) {
          v.fail("associative", {static_cast<int>(i), static_cast<int>(j), static_cast<int>(k)});
        }
      }
    }
  }
  return v;
}

// x^2 = x everywhere; additive in characteristic 2 so the basis suffices.
inline bool is_boolean(const F2Algebra& a) {
  for (std::size_t i = 0; i < a.dim; ++i) {
    const BitVector x = BitVector::unit(a.dim, i);
    if (a.times(x, x) != x) return false;
  }
  return true;
}

inline std::vector<BitVector> algebra_homs_to_f2(const F2Algebra& a) {
  std::vector<BitVector> out;
  for (const auto& f : all_vectors(a.dim)) {
    if (!f.dot(a.one)) continue;
    bool ok = true;
    for (std::size_t i = 0; i < a.dim && ok; ++i)
      for (std::size_t j = 0; j < a.dim && ok; ++j) ok = f.dot(a.mul.at(i, j)) == (f.get(i) && f.get(j));
    if (ok) out.push_back(f);
  }
  return out;
}

inline TruncatedIgr trivial_T(const F2Algebra& a, int truncation, std::string name = "T(A)") {
  if (!check_algebra(a).holds) throw std::invalid_argument("trivial_T: not a commutative unital algebra");
  std::vector<std::size_t> dims{1};
  std::vector<BitVector> tops{BitVector::from_string("1")};
  std::vector<BitMatrix> hs;
  for (int n = 1; n <= truncation; ++n) {
    dims.push_back(a.dim);
    tops.push_back(a.one);
  }
  for (int n = 0; n < truncation; ++n) {
    hs.push_back(n == 0 ? BitMatrix::from_columns(a.dim, {a.one}) : BitMatrix::identity(a.dim));
  }
  return assemble_igr(std::move(name), truncation, dims, tops, hs,
                      [&](int, std::size_t i, int, std::size_t j) { return a.mul.at(i, j); });
}

struct StabilizedAlgebra {
  F2Algebra algebra;
  int stable_level = 0;
};

// Colimit of the transitions, read off at the first level from which every h_n is an iso.
inline StabilizedAlgebra algebra_A(const TruncatedIgr& r) {
  const int N = r.truncation;
  if (N < 1) throw std::invalid_argument("algebra_A: needs truncation >= 1 to witness stabilization");
  if (!is_bijective(r.transition(N - 1))) {
    throw std::invalid_argument("algebra_A: transitions have not stabilized by level " + std::to_string(N));
  }
  int s = N - 1;
  while (s > 0 && is_bijective(r.transition(s - 1))) --s;
  StabilizedAlgebra out;
  out.stable_level = s;
  F2Algebra& a = out.algebra;
  a.dim = r.dim(s);
  a.one = r.top(s);
  a.mul = BilinearTable(a.dim, a.dim, a.dim);
  if (a.dim > 0) {
    if (2 * s > N) throw std::invalid_argument("algebra_A: stable products lie beyond the truncation");
    const auto back = inverse(r.transition_power(s, 2 * s));
    if (!back) throw std::logic_error("algebra_A: stable transition not invertible");
    for (std::size_t i = 0; i < a.dim; ++i)
      for (std::size_t j = 0; j < a.dim; ++j) a.mul.set(i, j, back->apply(r.star(s, s).at(i, j)));
  }
  return out;
}

// Map R -> T(A(R)): h^s_n below the stable level, inverse transitions above it.
inline IgrMorphism canonical_to_trivial(const TruncatedIgr& r, const StabilizedAlgebra& a) {
  IgrMorphism f;
  f.maps.push_back(BitMatrix::identity(1));
  for (int n = 1; n <= r.truncation; ++n) {
    if (n <= a.stable_level) {
      f.maps.push_back(r.transition_power(n, a.stable_level));
    } else {
      auto inv = inverse(r.transition_power(a.stable_level, n));
      if (!inv) throw std::logic_error("canonical_to_trivial: transition not invertible above the stable level");
      f.maps.push_back(*inv);
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Morphisms out of towers generated in level 1.

// The unique extension of a level-1 map to a morphism, if one exists.
inline std::optional<IgrMorphism> extend_from_level1(const TruncatedIgr& s, const TruncatedIgr& r, const BitMatrix& f1) {
  const int N = s.truncation;
  if (r.truncation != N) throw std::invalid_argument("extend_from_level1: truncations differ");
  IgrMorphism f;
  f.maps.push_back(BitMatrix::identity(1));
  if (N >= 1) f.maps.push_back(f1);
  for (int n = 2; n <= N; ++n) {
    std::vector<BitVector> lhs;
    std::vector<BitVector> rhs;
    for (std::size_t i = 0; i < s.dim(n - 1); ++i) {
      for (std::size_t j = 0; j < s.dim(1); ++j) {
        lhs.push_back(s.star(n - 1, 1).at(i, j));
        rhs.push_back(r.multiply(n - 1, f.apply(n - 1, s.basis(n - 1, i)), 1, f.apply(1, s.basis(1, j))));
      }
    }
    const BitMatrix p = BitMatrix::from_rows(s.dim(n), lhs);
    BitMatrix fn(r.dim(n), s.dim(n));
    for (std::size_t row = 0; row < r.dim(n); ++row) {
      BitVector b(rhs.size());
      for (std::size_t k = 0; k < rhs.size(); ++k) {
        if (rhs[k].get(row)) b.set(k);
      }
      const auto sol = solve(p, b);
      if (!sol) return std::nullopt;
      for (std::size_t c = 0; c < s.dim(n); ++c) {
        if (sol->get(c)) fn.set(row, c);
      }
    }
    f.maps.push_back(fn);
  }
  if (!check_igr_morphism(f, s, r).holds()) return std::nullopt;
  return f;
}

inline std::vector<IgrMorphism> enumerate_morphisms_from_level1(const TruncatedIgr& s, const TruncatedIgr& r,
                                                                std::size_t cap = std::size_t{1} << 20) {
  if (!in_igr1(s)) throw std::invalid_argument("source is not generated in level 1");
  if (s.truncation < 1) return {identity_morphism(s)};
  const std::size_t entries = s.dim(1) * r.dim(1);
  if (entries >= 64 || (std::size_t{1} << entries) > cap) throw CapExceeded("too many level-1 maps to enumerate");
  std::vector<IgrMorphism> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << entries); ++code) {
    BitMatrix f1(r.dim(1), s.dim(1));
    for (std::size_t k = 0; k < entries; ++k) {
      if ((code >> k) & 1U) f1.set(k / s.dim(1), k % s.dim(1));
    }
    if (f1.apply(s.top(1)) != r.top(1)) continue;
    if (auto f = extend_from_level1(s, r, f1)) out.push_back(std::move(*f));
  }
  return out;
}

struct SpectralReport {
  std::vector<BitVector> orderings;          // level-1 functionals
  std::size_t hull_dim = 0;
  bool mc = false;
  std::vector<std::size_t> kernel_dims;      // dim ker h^N_n, n = 0..N-1
  std::vector<std::size_t> nil_dims;         // n = 1.. with 2n <= N
  std::vector<bool> plus_levels;             // x*x = top_n * x, n with 2n <= N
};

inline SpectralReport spectral_report(const TruncatedIgr& r) {
  if (!in_igr1(r)) throw std::invalid_argument("spectral_report: " + r.name + " is not generated in level 1");
  const int N = r.truncation;
  SpectralReport out;
  const TruncatedIgr t = trivial_T(f2_power_algebra(1), N, "T(F2)");
  for (const auto& f : enumerate_morphisms_from_level1(r, t)) {
    out.orderings.push_back(N >= 1 ? f.maps[1].row(0) : BitVector(0));
  }
  out.hull_dim = out.orderings.size();
  out.mc = true;
  for (int n = 0; n < N; ++n) {
    const std::size_t k = kernel_basis(r.transition_power(n, N)).size();
    out.kernel_dims.push_back(k);
    if (k != 0) out.mc = false;
  }
  for (int n = 1; 2 * n <= N; ++n) {
    const int reach = n * (N / n);
    out.nil_dims.push_back(kernel_basis(r.transition_power(n, reach)).size());
    bool plus = true;
    for (std::size_t b = 0; b < r.dim(n) && plus; ++b) {
      const BitVector x = r.basis(n, b);
      plus = r.multiply(n, x, n, x) == r.multiply(n, r.top(n), n, x);
    }
    out.plus_levels.push_back(plus);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Chain colimits R_0 -> R_1 -> ... -> R_k.

struct ColimitResult {
  TruncatedIgr colimit;
  std::vector<IgrMorphism> injections;
};

inline ColimitResult igr_chain_colimit(const std::vector<TruncatedIgr>& objects, const std::vector<IgrMorphism>& links) {
  if (objects.empty()) throw std::invalid_argument("chain colimit of an empty chain");
  if (links.size() + 1 != objects.size()) throw std::invalid_argument("chain needs one link between consecutive objects");
  const int N = common_truncation(objects, std::nullopt);
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (!check_igr_morphism(links[i], objects[i], objects[i + 1]).holds()) {
      throw std::invalid_argument("chain link " + std::to_string(i) + " is not a morphism");
    }
  }
  const std::size_t k = objects.size();
  std::vector<std::vector<std::size_t>> offset(N + 1);
  std::vector<std::size_t> total(N + 1, 0);
  for (int n = 0; n <= N; ++n) {
    for (const auto& o : objects) {
      offset[n].push_back(total[n]);
      total[n] += o.dim(n);
    }
  }
  const auto embed = [&](int n, std::size_t i, const BitVector& x) {
    BitVector v(total[n]);
    for (std::size_t b = 0; b < x.size(); ++b) {
      if (x.get(b)) v.set(offset[n][i] + b);
    }
    return v;
  };
  std::vector<QuotientStructure> qs;
  for (int n = 0; n <= N; ++n) {
    std::vector<BitVector> rel;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t b = 0; b < objects[i].dim(n); ++b) {
        rel.push_back(embed(n, i, objects[i].basis(n, b)) ^ embed(n, i + 1, links[i].apply(n, objects[i].basis(n, b))));
      }
    }
    qs.push_back(quotient_structure(total[n], rel));
  }
  // push a direct-sum coordinate to the last object
  const auto push = [&](int n, std::size_t coord) {
    std::size_t i = 0;
    while (i + 1 < k && offset[n][i + 1] <= coord) ++i;
    BitVector x = objects[i].basis(n, coord - offset[n][i]);
    for (std::size_t l = i; l + 1 < k; ++l) x = links[l].apply(n, x);
    return x;
  };
  const auto from_last = [&](int n, const BitVector& x) { return qs[n].project(embed(n, k - 1, x)); };
  std::vector<std::size_t> dims;
  std::vector<BitVector> tops;
  for (int n = 0; n <= N; ++n) {
    dims.push_back(qs[n].dim());
    tops.push_back(from_last(n, objects.back().top(n)));
  }
  std::vector<BitMatrix> hs;
  for (int n = 0; n < N; ++n) {
    std::vector<BitVector> cols;
    for (std::size_t c = 0; c < dims[n]; ++c) {
      cols.push_back(from_last(n + 1, objects.back().transition(n).apply(push(n, qs[n].lift_coordinates[c]))));
    }
    hs.push_back(BitMatrix::from_columns(dims[n + 1], cols));
  }
  ColimitResult out;
  out.colimit = assemble_igr("colim", N, dims, tops, hs, [&](int n, std::size_t i, int m, std::size_t j) {
    const BitVector x = push(n, qs[n].lift_coordinates[i]);
    const BitVector y = push(m, qs[m].lift_coordinates[j]);
    return from_last(n + m, objects.back().multiply(n, x, m, y));
  });
  for (std::size_t i = 0; i < k; ++i) {
    IgrMorphism inj;
    for (int n = 0; n <= N; ++n) {
      std::vector<BitVector> cols;
      for (std::size_t b = 0; b < objects[i].dim(n); ++b) cols.push_back(qs[n].project(embed(n, i, objects[i].basis(n, b))));
      inj.maps.push_back(BitMatrix::from_columns(dims[n], cols));
    }
    out.injections.push_back(inj);
  }
  return out;
}

}  // namespace hyperqf
