#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperqf/gf2.hpp"
#include "hyperqf/igr.hpp"
#include "hyperqf/intlinalg.hpp"
#include "hyperqf/multiring.hpp"
#include "hyperqf/special_group.hpp"
#include "hyperqf/verdict.hpp"

namespace hyperqf {

struct KOptions {
  std::uint64_t cap = std::uint64_t{1} << 20;  // bound on |F*|^N
  bool require_hyperbolic = true;
};

// Reduced K-theory k_*F truncated at N.
//
// Level 1 is F*/F*^2, the quotient of the free space on F* by [ab] + [a] + [b].
// Level n is the n-fold tensor power of level 1 modulo the Steinberg subspace
// spanned by rho(a) (x) rho(b), b in 1 - a, in any pair of adjacent slots.
struct KTheoryRing {
  Multiring base;
  TruncatedIgr igr;
  std::vector<int> units;               // nonzero elements of the base
  std::vector<BitVector> rho;           // level-1 vector per base element (empty for 0)
  std::vector<int> level1_lift;         // an element representing each level-1 basis vector
  std::vector<QuotientStructure> levels;  // level n: tensor coordinates -> k_n, n >= 1
  std::size_t rho_dim = 0;

  int truncation() const { return igr.truncation; }
  std::size_t dim(int n) const { return igr.dim(n); }

  std::size_t d1() const { return rho_dim; }

  // rho(a_1) ... rho(a_n) in k_n.
  BitVector symbol(const std::vector<int>& elements) const {
    const int n = static_cast<int>(elements.size());
    if (n > truncation()) throw std::out_of_range("symbol longer than the truncation");
    if (n == 0) return BitVector::from_string("1");
    BitVector t = BitVector::from_string("1");
    for (int a : elements) {
      if (a < 0 || a >= base.size() || a == base.zero) throw std::invalid_argument("symbol entries must be nonzero elements");
      t = BitVector::kron(t, rho[a]);
    }
    return levels[n].project(t);
  }

  // Element tuple whose symbol is the k-th basis vector of level n.
  std::vector<int> basis_symbol(int n, std::size_t k) const {
    std::vector<int> out(static_cast<std::size_t>(n));
    std::size_t c = levels.at(n).lift_coordinates.at(k);
    for (int s = n; s-- > 0;) {
      out[s] = level1_lift[c % rho_dim];
      c /= rho_dim;
    }
    return out;
  }
};

namespace detail {

inline std::uint64_t checked_power(std::uint64_t base, int exp, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

// Calls visit on every tuple of length n over {0..g-1}.
template <class F>
void for_each_tuple(std::size_t g, int n, F&& visit) {
  std::vector<std::size_t> t(static_cast<std::size_t>(n), 0);
  if (g == 0 && n > 0) return;
  while (true) {
    visit(t);
    int i = n;
    while (i > 0 && t[i - 1] + 1 == g) t[--i] = 0;
    if (i == 0) return;
    ++t[i - 1];
  }
}

inline void require_k_base(const Multiring& f, int truncation, const KOptions& opt) {
  if (truncation < 0) throw std::invalid_argument("truncation must be nonnegative");
  if (!check_multiring_axioms(f).is_hyperfield()) throw std::invalid_argument(f.name + " is not a hyperfield");
  if (opt.require_hyperbolic && !is_hyperbolic(f)) throw std::invalid_argument(f.name + " is not hyperbolic");
  const std::uint64_t units = static_cast<std::uint64_t>(f.size() - 1);
  if (checked_power(units, truncation, opt.cap) > opt.cap) {
    throw CapExceeded("|F*|^N exceeds the configured cap of " + std::to_string(opt.cap));
  }
}

}  // namespace detail

inline KTheoryRing compute_k(const Multiring& f, int truncation, const KOptions& opt = {}) {
  detail::require_k_base(f, truncation, opt);
  KTheoryRing k;
  k.base = f;
  k.units = f.nonzero();
  const std::size_t g = k.units.size();
  std::vector<int> unit_pos(static_cast<std::size_t>(f.size()), -1);
  for (std::size_t i = 0; i < g; ++i) unit_pos[k.units[i]] = static_cast<int>(i);

  // Level 1.
  std::vector<BitVector> rel;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = i; j < g; ++j) {
      BitVector r(g);
      r.flip(static_cast<std::size_t>(unit_pos[f.times(k.units[i], k.units[j])]));
      r.flip(i);
      r.flip(j);
      rel.push_back(r);
    }
  }
  const QuotientStructure q1 = quotient_structure(g, rel);
  const std::size_t d1 = q1.dim();
  k.rho_dim = d1;
  k.rho.assign(static_cast<std::size_t>(f.size()), BitVector(0));
  for (std::size_t i = 0; i < g; ++i) k.rho[k.units[i]] = q1.project(BitVector::unit(g, i));
  for (std::size_t c : q1.lift_coordinates) k.level1_lift.push_back(k.units[c]);

  // Steinberg subspace of level 1 (x) level 1.
  Echelon steinberg(d1 * d1);
  for (int a : k.units) {
    const ElementSet one_minus_a = f.plus(f.one, f.negate(a));
    for (int b : set_elements(one_minus_a)) {
      if (b != f.zero) steinberg.insert(BitVector::kron(k.rho[a], k.rho[b]));
    }
  }

  k.levels.push_back(quotient_structure(1, {}));
  std::vector<std::size_t> dims{1};
  std::size_t ambient = 1;
  for (int n = 1; n <= truncation; ++n) {
    ambient *= d1;
    std::vector<BitVector> gens;
    if (n >= 2 && d1 > 0) {
      std::size_t left = 1;
      for (int i = 0; i + 2 <= n; ++i) {
        const std::size_t right = ambient / (left * d1 * d1);
        for (std::size_t l = 0; l < left; ++l) {
          for (const auto& s : steinberg.basis()) {
            for (std::size_t r = 0; r < right; ++r) {
              gens.push_back(BitVector::kron(BitVector::kron(BitVector::unit(left, l), s), BitVector::unit(right, r)));
            }
          }
        }
        left *= d1;
      }
    }
    k.levels.push_back(quotient_structure(ambient, gens));
    dims.push_back(k.levels.back().dim());
  }

  std::vector<BitVector> tops{BitVector::from_string("1")};
  const auto tensor_power_of = [&](int a, int n) {
    BitVector t = BitVector::from_string("1");
    for (int i = 0; i < n; ++i) t = BitVector::kron(t, k.rho[a]);
    return t;
  };
  for (int n = 1; n <= truncation; ++n) tops.push_back(k.levels[n].project(tensor_power_of(f.negate(f.one), n)));

  std::vector<std::size_t> tensor_dim{1};
  for (int n = 1; n <= truncation; ++n) tensor_dim.push_back(tensor_dim.back() * d1);
  const LevelProduct product = [&](int n, std::size_t i, int m, std::size_t j) {
    const std::size_t c = k.levels[n].lift_coordinates[i] * tensor_dim[m] + k.levels[m].lift_coordinates[j];
    return k.levels[n + m].projection.column(c);
  };
  std::vector<BitMatrix> hs;
  for (int n = 0; n < truncation; ++n) {
    std::vector<BitVector> cols;
    for (std::size_t i = 0; i < dims[n]; ++i) {
      BitVector acc(dims[n + 1]);
      for (std::size_t t = 0; t < dims[1]; ++t) {
        if (!tops[1].get(t)) continue;
        acc ^= n == 0 ? BitVector::unit(dims[1], t) : product(1, t, n, i);
      }
      cols.push_back(acc);
    }
    hs.push_back(BitMatrix::from_columns(dims[n + 1], cols));
  }
  k.igr = assemble_igr("k(" + f.name + ")", truncation, dims, tops, hs, product);
  return k;
}

// ---------------------------------------------------------------------------
// Identities.

struct KIdentityReport {
  VerdictList verdicts;
  bool real_reduced = false;
  bool holds() const { return verdicts.all_hold(); }
};

inline KIdentityReport k_identity_suite(const KTheoryRing& k) {
  KIdentityReport rep;
  const Multiring& f = k.base;
  const int N = k.truncation();
  const int m1 = f.negate(f.one);
  const auto& units = k.units;
  const auto mul = [&](const std::vector<int>& a) { return k.symbol(a); };

  Verdict& one = rep.verdicts.add("rho_one_zero");
  if (N >= 1 && !mul({f.one}).is_zero()) one.fail("rho_one", {f.one});

  Verdict& opp = rep.verdicts.add("rho_a_rho_minus_a");
  Verdict& comm = rep.verdicts.add("commutative");
  Verdict& sq = rep.verdicts.add("square");
  Verdict& st = rep.verdicts.add("steinberg");
  if (N >= 2) {
    for (int a : units) {
      if (!mul({a, f.negate(a)}).is_zero()) opp.fail("rho_a_rho_minus_a", {a});
      if (mul({a, a}) != mul({a, m1})) sq.fail("square", {a});
      for (int b : units) {
        if (mul({a, b}) != mul({b, a})) comm.fail("commutative", {a, b});
      }
      for (int b : set_elements(f.plus(f.one, f.negate(a)))) {
        if (b != f.zero && !mul({a, b}).is_zero()) st.fail("steinberg", {a, b});
      }
    }
  }

  Verdict& power = rep.verdicts.add("power");
  for (int n = 2; n <= N; ++n) {
    for (int a : units) {
      std::vector<int> lhs(static_cast<std::size_t>(n), a);
      std::vector<int> rhs(static_cast<std::size_t>(n), m1);
      rhs[0] = a;
      if (mul(lhs) != mul(rhs)) power.fail("power", {n, a});
    }
  }

  Verdict& perm = rep.verdicts.add("permutation");
  if (N >= 3) {
    detail::for_each_tuple(units.size(), 3, [&](const std::vector<std::size_t>& t) {
      std::vector<int> a{units[t[0]], units[t[1]], units[t[2]]};
      const BitVector base = mul(a);
      std::vector<int> p = a;
      std::sort(p.begin(), p.end());
      do {
        if (mul(p) != base) perm.fail("permutation", {a[0], a[1], a[2]});
      } while (std::next_permutation(p.begin(), p.end()));
    });
  }

  // xi * xi = rho(-1)^n * xi
  Verdict& xi = rep.verdicts.add("xi_square");
  for (int n = 1; 2 * n <= N; ++n) {
    const auto& r = k.igr;
    const std::vector<BitVector> probes =
        r.dim(n) <= 10 ? all_vectors(r.dim(n)) : std::vector<BitVector>{};
    const auto check = [&](const BitVector& x) {
      if (r.multiply(n, x, n, x) != r.multiply(n, r.top(n), n, x)) xi.fail("xi_square", {n, static_cast<int>(x.to_u64())});
    };
    if (probes.empty()) {
      for (std::size_t b = 0; b < r.dim(n); ++b) check(r.basis(n, b));
    } else {
      for (const auto& x : probes) check(x);
    }
  }

  const Classification c = classify(f);
  if (c.pre_special) {
    const RealityReport real = reality_report(from_hyperfield(f));
    rep.real_reduced = real.formally_real && real.reduced;
  }
  if (rep.real_reduced) {
    Verdict& rr = rep.verdicts.add("real_reduced_rule");
    for (int y : units) {
      for (int x : set_elements(f.plus(f.one, y))) {
        if (x == f.zero) continue;
        for (int n = 0; n + 1 <= N && n <= 2; ++n) {
          detail::for_each_tuple(units.size(), n, [&](const std::vector<std::size_t>& t) {
            std::vector<int> ys{y};
            std::vector<int> xs{x};
            for (std::size_t i : t) {
              ys.push_back(units[i]);
              xs.push_back(units[i]);
            }
            if (mul(ys).is_zero() && !mul(xs).is_zero()) rr.fail("real_reduced_rule", {x, y, n});
          });
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Injectivity of multiplication by rho(-1).

struct CompositeKernel {
  int from = 0;
  int to = 0;
  std::size_t dim = 0;
};

struct SmcReport {
  std::vector<Verdict> levels;  // level n = 1 .. N-1
  std::vector<CompositeKernel> composites;
  bool last_transition_iso = false;

  bool smc() const {
    for (const auto& v : levels) {
      if (!v.holds) return false;
    }
    return true;
  }
};

inline SmcReport smc_check(const TruncatedIgr& r) {
  SmcReport rep;
  const int N = r.truncation;
  for (int n = 1; n < N; ++n) {
    Verdict v{"h_" + std::to_string(n) + "_injective"};
    const auto ker = kernel_basis(r.transition(n));
    if (!ker.empty()) v.fail("kernel", {n, static_cast<int>(ker.size())});
    rep.levels.push_back(v);
  }
  for (int n = 0; n < N; ++n) {
    for (int m = n + 1; m <= N; ++m) rep.composites.push_back({n, m, kernel_basis(r.transition_power(n, m)).size()});
  }
  rep.last_transition_iso = N >= 1 && is_bijective(r.transition(N - 1));
  return rep;
}

inline SmcReport smc_check(const KTheoryRing& k) { return smc_check(k.igr); }

// ---------------------------------------------------------------------------
// Functoriality.

inline IgrMorphism k_induced_morphism(const std::vector<int>& map, const KTheoryRing& from, const KTheoryRing& to,
                                      std::uint64_t cap = std::uint64_t{1} << 20) {
  if (!hf_morphism_check(map, from.base, to.base).morphism.holds) {
    throw std::invalid_argument("k_induced_morphism: map is not a hyperfield morphism");
  }
  if (from.truncation() != to.truncation()) throw std::invalid_argument("k_induced_morphism: truncations differ");
  const int N = from.truncation();
  IgrMorphism f;
  const auto image = [&](const std::vector<int>& xs) {
    std::vector<int> ys;
    for (int x : xs) ys.push_back(map[x]);
    return ys;
  };
  for (int n = 0; n <= N; ++n) {
    std::vector<BitVector> cols;
    for (std::size_t b = 0; b < from.dim(n); ++b) cols.push_back(to.symbol(image(from.basis_symbol(n, b))));
    f.maps.push_back(BitMatrix::from_columns(to.dim(n), cols));
  }
  // The matrices were fixed on basis lifts; every other symbol must agree.
  for (int n = 1; n <= N; ++n) {
    if (detail::checked_power(from.units.size(), n, cap) > cap) break;
    bool ok = true;
    detail::for_each_tuple(from.units.size(), n, [&](const std::vector<std::size_t>& t) {
      if (!ok) return;
      std::vector<int> xs;
      for (std::size_t i : t) xs.push_back(from.units[i]);
      ok = f.apply(n, from.symbol(xs)) == to.symbol(image(xs));
    });
    if (!ok) throw std::logic_error("k_induced_morphism: map is not well defined on symbols");
  }
  return f;
}

// ---------------------------------------------------------------------------
// Unreduced K_n from the integer presentation on element tuples.

inline AbelianInvariants unreduced_k(const Multiring& f, int n, std::size_t max_columns = 4096) {
  if (n < 1) throw std::invalid_argument("unreduced_k: level must be positive");
  if (!check_multiring_axioms(f).is_hyperfield()) throw std::invalid_argument(f.name + " is not a hyperfield");
  const std::vector<int> units = f.nonzero();
  const std::size_t g = units.size();
  const std::uint64_t cols = detail::checked_power(g, n, max_columns);
  if (cols > max_columns) throw CapExceeded("unreduced_k: too many tuples");
  std::vector<int> pos(static_cast<std::size_t>(f.size()), -1);
  for (std::size_t i = 0; i < g; ++i) pos[units[i]] = static_cast<int>(i);
  const auto index = [&](const std::vector<std::size_t>& t) {
    std::size_t c = 0;
    for (std::size_t x : t) c = c * g + x;
    return c;
  };
  std::vector<std::vector<std::int64_t>> rows;
  // [.., ab, ..] - [.., a, ..] - [.., b, ..]
  for (int slot = 0; slot < n; ++slot) {
    detail::for_each_tuple(g, n, [&](const std::vector<std::size_t>& t) {
      for (std::size_t b = 0; b < g; ++b) {
        std::vector<std::int64_t> row(cols, 0);
        std::vector<std::size_t> ab = t;
        ab[slot] = static_cast<std::size_t>(pos[f.times(units[t[slot]], units[b])]);
        std::vector<std::size_t> bt = t;
        bt[slot] = b;
        row[index(ab)] += 1;
        row[index(t)] -= 1;
        row[index(bt)] -= 1;
        rows.push_back(std::move(row));
      }
    });
  }
  if (n >= 2) {
    detail::for_each_tuple(g, n, [&](const std::vector<std::size_t>& t) {
      for (int i = 0; i + 1 < n; ++i) {
        const int a = units[t[i]];
        if (in_set(f.plus(f.one, f.negate(a)), units[t[i + 1]])) {
          std::vector<std::int64_t> row(cols, 0);
          row[index(t)] = 1;
          rows.push_back(std::move(row));
          return;
        }
      }
    });
  }
  return smith_invariants(std::move(rows), cols);
}

// K_n and k_n agree when K_n is an elementary abelian 2-group of the same rank.
inline bool unreduced_matches_reduced(const AbelianInvariants& big, std::size_t reduced_dim) {
  if (big.free_rank != 0 || big.torsion.size() != reduced_dim) return false;
  for (auto d : big.torsion) {
    if (d != 2) return false;
  }
  return true;
}

}  // namespace hyperqf
