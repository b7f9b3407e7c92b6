#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperqf/verdict.hpp"

namespace hyperqf {

using ElementSet = std::uint64_t;

inline constexpr ElementSet bit_of(int i) { return ElementSet{1} << i; }
inline bool in_set(ElementSet s, int i) { return (s >> i) & 1U; }

inline std::vector<int> set_elements(ElementSet s) {
  std::vector<int> out;
  while (s != 0) {
    out.push_back(std::countr_zero(s));
    s &= s - 1;
  }
  return out;
}

// Finite multiring given by tables. Sums are subsets of the carrier stored as bitmasks,
// so the carrier holds at most 64 elements.
struct Multiring {
  static constexpr int kMaxElements = 64;

  std::string name;
  std::vector<std::string> labels;
  int zero = 0;
  int one = 1;
  std::vector<int> neg;
  std::vector<int> mul;          // size n*n
  std::vector<ElementSet> sum;   // size n*n

  int size() const { return static_cast<int>(labels.size()); }
  int times(int a, int b) const { return mul[static_cast<std::size_t>(a) * labels.size() + b]; }
  ElementSet plus(int a, int b) const { return sum[static_cast<std::size_t>(a) * labels.size() + b]; }
  int negate(int a) const { return neg[a]; }
  ElementSet full_set() const { return size() == 64 ? ~ElementSet{0} : bit_of(size()) - 1; }

  void set_times(int a, int b, int c) { mul[static_cast<std::size_t>(a) * labels.size() + b] = c; }
  void set_plus(int a, int b, ElementSet s) { sum[static_cast<std::size_t>(a) * labels.size() + b] = s; }

  // a + B as a set
  ElementSet plus_set(int a, ElementSet b) const {
    ElementSet out = 0;
    for (int x : set_elements(b)) out |= plus(a, x);
    return out;
  }

  ElementSet plus_sets(ElementSet a, ElementSet b) const {
    ElementSet out = 0;
    for (int x : set_elements(a)) out |= plus_set(x, b);
    return out;
  }

  ElementSet times_set(ElementSet a, int d) const {
    ElementSet out = 0;
    for (int x : set_elements(a)) out |= bit_of(times(x, d));
    return out;
  }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i) {
      if (labels[i] == label) return i;
    }
    throw std::invalid_argument("unknown element label '" + label + "' in " + name);
  }

  std::vector<int> nonzero() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i) {
      if (i != zero) out.push_back(i);
    }
    return out;
  }

  // Structural invariants of the table representation (not the axioms).
  void validate() const {
    const int n = size();
    if (n < 1 || n > kMaxElements) throw std::invalid_argument(name + ": carrier size must be between 1 and 64");
    const auto in_range = [n](int x) { return x >= 0 && x < n; };
    if (!in_range(zero) || !in_range(one)) throw std::invalid_argument(name + ": zero/one out of range");
    if (static_cast<int>(neg.size()) != n) throw std::invalid_argument(name + ": negation table incomplete");
    if (mul.size() != static_cast<std::size_t>(n) * n || sum.size() != static_cast<std::size_t>(n) * n) {
      throw std::invalid_argument(name + ": operation tables have the wrong size");
    }
    for (int a = 0; a < n; ++a) {
      if (!in_range(neg[a])) throw std::invalid_argument(name + ": negation of " + labels[a] + " out of range");
      if (neg[neg[a]] != a) throw std::invalid_argument(name + ": negation is not an involution at " + labels[a]);
      for (int b = 0; b < n; ++b) {
        if (!in_range(times(a, b))) throw std::invalid_argument(name + ": product out of range");
        if (plus(a, b) == 0) {
          throw std::invalid_argument(name + ": empty sum " + labels[a] + "+" + labels[b]);
        }
        if ((plus(a, b) & ~full_set()) != 0) throw std::invalid_argument(name + ": sum contains unknown element");
      }
    }
    std::vector<std::string> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument(name + ": duplicate element labels");
    }
  }

  friend bool operator==(const Multiring& a, const Multiring& b) {
    return a.labels == b.labels && a.zero == b.zero && a.one == b.one && a.neg == b.neg && a.mul == b.mul &&
           a.sum == b.sum;
  }
};

inline Multiring blank_multiring(std::string name, std::vector<std::string> labels, int zero, int one) {
  Multiring m;
  m.name = std::move(name);
  m.labels = std::move(labels);
  const auto n = m.labels.size();
  if (n == 0 || n > static_cast<std::size_t>(Multiring::kMaxElements)) {
    throw std::invalid_argument(m.name + ": carrier size must be between 1 and 64");
  }
  m.zero = zero;
  m.one = one;
  m.neg.assign(n, 0);
  m.mul.assign(n * n, 0);
  m.sum.assign(n * n, 0);
  return m;
}

// ---------------------------------------------------------------------------
// Clause evaluation. Each clause is a single quantifier-free instance of a law;
// exhaustive checks and witness replay both go through here.

namespace detail {

inline bool mr_clause(const Multiring& m, const std::string& clause, const std::vector<int>& w) {
  const auto arg = [&](std::size_t i) {
    if (i >= w.size() || w[i] < 0 || w[i] >= m.size()) throw std::invalid_argument("malformed witness for " + clause);
    return w[i];
  };
  if (clause == "sum_nonempty") return m.plus(arg(0), arg(1)) != 0;
  if (clause == "add_commutative") return m.plus(arg(0), arg(1)) == m.plus(arg(1), arg(0));
  if (clause == "zero_identity") {
    const int x = arg(0), y = arg(1);
    return in_set(m.plus(m.zero, x), y) == (x == y);
  }
  if (clause == "reversibility") {
    const int x = arg(0), y = arg(1), z = arg(2);
    if (!in_set(m.plus(x, y), z)) return true;
    return in_set(m.plus(z, m.negate(y)), x) && in_set(m.plus(m.negate(x), z), y);
  }
  if (clause == "add_associative") {
    const int x = arg(0), y = arg(1), z = arg(2);
    return m.plus_set(x, m.plus(y, z)) == m.plus_sets(m.plus(x, y), bit_of(z));
  }
  if (clause == "neg_involutive") return m.negate(m.negate(arg(0))) == arg(0);
  if (clause == "mul_associative") {
    const int a = arg(0), b = arg(1), c = arg(2);
    return m.times(m.times(a, b), c) == m.times(a, m.times(b, c));
  }
  if (clause == "mul_unit") return m.times(m.one, arg(0)) == arg(0) && m.times(arg(0), m.one) == arg(0);
  if (clause == "mul_commutative") return m.times(arg(0), arg(1)) == m.times(arg(1), arg(0));
  if (clause == "zero_absorbs") return m.times(arg(0), m.zero) == m.zero && m.times(m.zero, arg(0)) == m.zero;
  if (clause == "weak_distributive") {
    const int a = arg(0), b = arg(1), c = arg(2), d = arg(3);
    if (!in_set(m.plus(a, b), c)) return true;
    return in_set(m.plus(m.times(a, d), m.times(b, d)), m.times(c, d)) &&
           in_set(m.plus(m.times(d, a), m.times(d, b)), m.times(d, c));
  }
  if (clause == "distributive") {
    const int a = arg(0), b = arg(1), d = arg(2);
    ElementSet right = 0;
    ElementSet left = 0;
    for (int c : set_elements(m.plus(a, b))) {
      right |= bit_of(m.times(c, d));
      left |= bit_of(m.times(d, c));
    }
    return right == m.plus(m.times(a, d), m.times(b, d)) && left == m.plus(m.times(d, a), m.times(d, b));
  }
  if (clause == "no_zero_divisors") {
    const int a = arg(0), b = arg(1);
    return a == m.zero || b == m.zero || m.times(a, b) != m.zero;
  }
  if (clause == "one_not_zero") return m.one != m.zero;
  if (clause == "invertible") {
    const int a = arg(0);
    if (a == m.zero) return true;
    for (int b = 0; b < m.size(); ++b) {
      if (m.times(a, b) == m.one && m.times(b, a) == m.one) return true;
    }
    return false;
  }
  if (clause == "hyperbolic") return in_set(m.plus(m.one, m.negate(m.one)), arg(0));
  if (clause == "dm1") return arg(0) == m.zero || m.times(arg(0), arg(0)) == m.one;
  if (clause == "dm2") {
    const int a = arg(0), x = arg(1), y = arg(2);
    const ElementSet s = m.plus(m.one, m.negate(a));
    if (!in_set(s, x) || !in_set(s, y)) return true;
    return in_set(s, m.times(x, y));
  }
  if (clause == "dm3") {
    const int a = arg(0), b = arg(1), x = arg(2), y = arg(3), z = arg(4);
    for (int v : {a, b, x, y, z}) {
      if (v == m.zero) return true;
    }
    if (!in_set(m.plus(x, b), a) || !in_set(m.plus(y, z), b)) return true;
    for (int v : set_elements(m.plus(x, z))) {
      if (in_set(m.plus(y, v), a) && in_set(m.plus(m.times(x, y), m.times(a, z)), m.times(v, b))) return true;
    }
    return false;
  }
  throw std::invalid_argument("unknown clause " + clause);
}

}  // namespace detail

// True when the witness stored in a failing verdict reproduces the failure.
inline bool replay_witness(const Multiring& m, const Verdict& v) {
  if (v.holds) return false;
  return !detail::mr_clause(m, v.clause, v.witness);
}

struct AxiomReport {
  Verdict multigroup_add{"multigroup_add"};
  Verdict monoid_mul{"monoid_mul"};
  Verdict commutative_mul{"commutative_mul"};
  Verdict zero_absorbs{"zero_absorbs"};
  Verdict weak_distributive{"weak_distributive"};
  Verdict hyperring{"hyperring"};
  Verdict no_zero_divisors{"no_zero_divisors"};
  Verdict multifield{"multifield"};

  bool is_multiring() const {
    return multigroup_add.holds && monoid_mul.holds && zero_absorbs.holds && weak_distributive.holds;
  }
  bool is_hyperfield() const { return is_multiring() && multifield.holds; }

  std::vector<const Verdict*> verdicts() const {
    return {&multigroup_add, &monoid_mul,       &commutative_mul, &zero_absorbs,
            &weak_distributive, &hyperring, &no_zero_divisors, &multifield};
  }
};

inline AxiomReport check_multiring_axioms(const Multiring& m) {
  m.validate();
  AxiomReport r;
  const int n = m.size();
  const auto probe = [&](Verdict& v, const char* clause, std::vector<int> w) {
    if (v.holds && !detail::mr_clause(m, clause, w)) v.fail(clause, std::move(w));
  };
  for (int a = 0; a < n; ++a) {
    probe(r.multigroup_add, "neg_involutive", {a});
    probe(r.monoid_mul, "mul_unit", {a});
    probe(r.zero_absorbs, "zero_absorbs", {a});
    probe(r.multifield, "invertible", {a});
    for (int b = 0; b < n; ++b) {
      probe(r.multigroup_add, "sum_nonempty", {a, b});
      probe(r.multigroup_add, "add_commutative", {a, b});
      probe(r.multigroup_add, "zero_identity", {a, b});
      probe(r.commutative_mul, "mul_commutative", {a, b});
      probe(r.no_zero_divisors, "no_zero_divisors", {a, b});
      for (int c = 0; c < n; ++c) {
        probe(r.multigroup_add, "reversibility", {a, b, c});
        probe(r.multigroup_add, "add_associative", {a, b, c});
        probe(r.monoid_mul, "mul_associative", {a, b, c});
        probe(r.hyperring, "distributive", {a, b, c});
        if (r.weak_distributive.holds && in_set(m.plus(a, b), c)) {
          for (int d = 0; d < n; ++d) probe(r.weak_distributive, "weak_distributive", {a, b, c, d});
        }
      }
    }
  }
  if (r.multifield.holds && !detail::mr_clause(m, "one_not_zero", {})) r.multifield.fail("one_not_zero", {});
  return r;
}

struct QuadraticReport {
  Verdict hyperbolic{"hyperbolic"};
  Verdict dm1{"dm1"};
  Verdict dm2{"dm2"};
  Verdict dm3{"dm3"};

  bool pre_special() const { return hyperbolic.holds && dm1.holds && dm2.holds; }
  bool special() const { return pre_special() && dm3.holds; }
  std::vector<const Verdict*> verdicts() const { return {&hyperbolic, &dm1, &dm2, &dm3}; }
};

inline bool is_hyperbolic(const Multiring& m) { return m.plus(m.one, m.negate(m.one)) == m.full_set(); }

inline QuadraticReport check_quadratic_axioms(const Multiring& m) {
  const AxiomReport ax = check_multiring_axioms(m);
  if (!ax.is_hyperfield() || !ax.commutative_mul.holds) {
    throw std::invalid_argument(m.name + " is not a hyperfield with commutative multiplication");
  }
  QuadraticReport r;
  const int n = m.size();
  for (int x = 0; x < n; ++x) {
    if (r.hyperbolic.holds && !detail::mr_clause(m, "hyperbolic", {x})) r.hyperbolic.fail("hyperbolic", {x});
    if (r.dm1.holds && !detail::mr_clause(m, "dm1", {x})) r.dm1.fail("dm1", {x});
  }
  for (int a = 0; a < n && r.dm2.holds; ++a) {
    const ElementSet s = m.plus(m.one, m.negate(a));
    for (int x : set_elements(s)) {
      for (int y : set_elements(s)) {
        if (r.dm2.holds && !in_set(s, m.times(x, y))) r.dm2.fail("dm2", {a, x, y});
      }
    }
  }
  const auto nz = m.nonzero();
  for (int a : nz) {
    for (int b : nz) {
      for (int x : nz) {
        if (!in_set(m.plus(x, b), a)) continue;
        for (int y : nz) {
          for (int z : nz) {
            if (!in_set(m.plus(y, z), b)) continue;
            if (!detail::mr_clause(m, "dm3", {a, b, x, y, z})) {
              r.dm3.fail("dm3", {a, b, x, y, z});
              return r;
            }
          }
        }
      }
    }
  }
  return r;
}

struct Classification {
  bool multiring = false;
  bool hyperfield = false;
  bool hyperbolic = false;
  bool pre_special = false;
  bool special = false;

  friend bool operator==(const Classification&, const Classification&) = default;
};

inline Classification classify(const Multiring& m) {
  Classification c;
  const AxiomReport ax = check_multiring_axioms(m);
  c.multiring = ax.is_multiring();
  c.hyperfield = ax.is_hyperfield() && ax.commutative_mul.holds;
  if (c.hyperfield) {
    const QuadraticReport q = check_quadratic_axioms(m);
    c.hyperbolic = q.hyperbolic.holds;
    c.pre_special = q.pre_special();
    c.special = q.special();
  }
  return c;
}

// ---------------------------------------------------------------------------
// Example constructions.

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

inline Multiring q2() {
  // 0, 1, -1
  Multiring m = blank_multiring("Q2", {"0", "1", "-1"}, 0, 1);
  const int value[3] = {0, 1, -1};
  const auto index = [](int v) { return v == 0 ? 0 : (v == 1 ? 1 : 2); };
  for (int a = 0; a < 3; ++a) {
    m.neg[a] = index(-value[a]);
    for (int b = 0; b < 3; ++b) {
      m.set_times(a, b, index(value[a] * value[b]));
      ElementSet s = 0;
      if (value[a] == 0) {
        s = bit_of(b);
      } else if (value[b] == 0 || a == b) {
        s = bit_of(a);
      } else {
        s = m.full_set();
      }
      m.set_plus(a, b, s);
    }
  }
  return m;
}

inline Multiring krasner() {
  Multiring m = blank_multiring("K", {"0", "1"}, 0, 1);
  m.neg = {0, 1};
  m.mul = {0, 0, 0, 1};
  m.sum = {bit_of(0), bit_of(1), bit_of(1), bit_of(0) | bit_of(1)};
  return m;
}

// Phase hyperfield-like H_p: carrier Z/p, product mod p, -a = a.
inline Multiring h_p(int p) {
  if (!is_prime(p) || p > Multiring::kMaxElements) throw std::invalid_argument("H_p needs a prime p <= 61");
  std::vector<std::string> labels;
  for (int i = 0; i < p; ++i) labels.push_back(std::to_string(i));
  Multiring m = blank_multiring("H" + std::to_string(p), labels, 0, 1);
  for (int a = 0; a < p; ++a) {
    m.neg[a] = a;
    for (int b = 0; b < p; ++b) {
      m.set_times(a, b, (a * b) % p);
      ElementSet s = 0;
      if (b == 0) {
        s = bit_of(a);
      } else if (a == 0) {
        s = bit_of(b);
      } else if (a == b) {
        s = m.full_set();
      } else {
        s = bit_of(a) | bit_of(b);
      }
      m.set_plus(a, b, s);
    }
  }
  return m;
}

// X_n on {-n..n}, stored as 0, 1, -1, 2, -2, ...
inline Multiring kaleidoscope(int n) {
  if (n < 1 || 2 * n + 1 > Multiring::kMaxElements) throw std::invalid_argument("kaleidoscope needs 1 <= n <= 31");
  std::vector<int> value{0};
  for (int k = 1; k <= n; ++k) {
    value.push_back(k);
    value.push_back(-k);
  }
  std::vector<std::string> labels;
  for (int v : value) labels.push_back(std::to_string(v));
  const auto index = [](int v) { return v == 0 ? 0 : (v > 0 ? 2 * v - 1 : -2 * v); };
  Multiring m = blank_multiring("X" + std::to_string(n), labels, 0, 1);
  const int size = 2 * n + 1;
  for (int i = 0; i < size; ++i) {
    const int a = value[i];
    m.neg[i] = index(-a);
    for (int j = 0; j < size; ++j) {
      const int b = value[j];
      const int sign = (a > 0) == (b > 0) ? 1 : -1;
      m.set_times(i, j, (a == 0 || b == 0) ? 0 : index(sign * std::max(std::abs(a), std::abs(b))));
      ElementSet s = 0;
      if (b == -a) {
        for (int v = -std::abs(a); v <= std::abs(a); ++v) s |= bit_of(index(v));
      } else {
        if (std::abs(b) <= std::abs(a)) s |= bit_of(index(a));
        if (std::abs(a) <= std::abs(b)) s |= bit_of(index(b));
      }
      m.set_plus(i, j, s);
    }
  }
  return m;
}

inline Multiring prime_field(int p) {
  if (!is_prime(p) || p > Multiring::kMaxElements) throw std::invalid_argument("prime_field needs a prime p <= 61");
  std::vector<std::string> labels;
  for (int i = 0; i < p; ++i) labels.push_back(std::to_string(i));
  Multiring m = blank_multiring("F" + std::to_string(p), labels, 0, p > 1 ? 1 : 0);
  for (int a = 0; a < p; ++a) {
    m.neg[a] = (p - a) % p;
    for (int b = 0; b < p; ++b) {
      m.set_times(a, b, (a * b) % p);
      m.set_plus(a, b, bit_of((a + b) % p));
    }
  }
  return m;
}

enum class ExampleKind { Q2, Krasner, PhaseHp, Kaleidoscope, PrimeField };

inline Multiring build_example(ExampleKind kind, int param = 0) {
  switch (kind) {
    case ExampleKind::Q2: return q2();
    case ExampleKind::Krasner: return krasner();
    case ExampleKind::PhaseHp: return h_p(param);
    case ExampleKind::Kaleidoscope: return kaleidoscope(param);
    case ExampleKind::PrimeField: return prime_field(param);
  }
  throw std::invalid_argument("unknown example kind");
}

// ---------------------------------------------------------------------------
// Morphisms.

struct MorphismReport {
  Verdict morphism{"morphism"};
  Verdict strong{"strong"};
};

inline void check_map_shape(const std::vector<int>& f, const Multiring& from, const Multiring& to) {
  if (static_cast<int>(f.size()) != from.size()) throw std::invalid_argument("map does not cover the source carrier");
  for (int y : f) {
    if (y < 0 || y >= to.size()) throw std::invalid_argument("map value outside the target carrier");
  }
}

inline MorphismReport hf_morphism_check(const std::vector<int>& f, const Multiring& from, const Multiring& to,
                                        bool check_strong = false) {
  check_map_shape(f, from, to);
  MorphismReport r;
  Verdict& v = r.morphism;
  if (f[from.zero] != to.zero) v.fail("maps_zero", {from.zero});
  if (v.holds && f[from.one] != to.one) v.fail("maps_one", {from.one});
  const int n = from.size();
  for (int a = 0; a < n && v.holds; ++a) {
    if (f[from.negate(a)] != to.negate(f[a])) v.fail("preserves_neg", {a});
  }
  for (int a = 0; a < n && v.holds; ++a) {
    for (int b = 0; b < n && v.holds; ++b) {
      if (f[from.times(a, b)] != to.times(f[a], f[b])) v.fail("multiplicative", {a, b});
      for (int c : set_elements(from.plus(a, b))) {
        if (v.holds && !in_set(to.plus(f[a], f[b]), f[c])) v.fail("sum_compatible", {a, b, c});
      }
    }
  }
  if (!check_strong) {
    r.strong.holds = false;
    r.strong.clause = "not_requested";
    return r;
  }
  if (!v.holds) {
    r.strong.fail("not_a_morphism", {});
    return r;
  }
  std::vector<ElementSet> fiber(to.size(), 0);
  for (int a = 0; a < n; ++a) fiber[f[a]] |= bit_of(a);
  for (int a = 0; a < n && r.strong.holds; ++a) {
    for (int b = 0; b < n && r.strong.holds; ++b) {
      for (int c = 0; c < n && r.strong.holds; ++c) {
        if (!in_set(to.plus(f[a], f[b]), f[c])) continue;
        bool lifted = false;
        for (int a2 : set_elements(fiber[f[a]])) {
          for (int b2 : set_elements(fiber[f[b]])) {
            if ((from.plus(a2, b2) & fiber[f[c]]) != 0) lifted = true;
          }
        }
        if (!lifted) r.strong.fail("strong_lift", {a, b, c});
      }
    }
  }
  return r;
}

inline std::vector<int> compose_maps(const std::vector<int>& g, const std::vector<int>& f) {
  std::vector<int> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = g.at(f[i]);
  return out;
}

namespace detail {

// Backtracking over maps from -> to in index order, pruning on every clause whose
// elements are all assigned. With `bijective`, sums must correspond exactly.
inline void search_maps(const Multiring& from, const Multiring& to, bool bijective, std::size_t limit,
                        std::vector<std::vector<int>>& out) {
  const int n = from.size();
  if (bijective && n != to.size()) return;
  std::vector<int> f(n, -1);
  std::vector<bool> used(to.size(), false);
  // Cheap invariants for isomorphism pruning.
  const auto signature = [](const Multiring& m, int a) {
    int order = 1;
    int x = a;
    while (x != m.one && order <= m.size() && a != m.zero) {
      x = m.times(x, a);
      ++order;
    }
    return std::vector<int>{a == m.zero, a == m.one, m.negate(a) == a, std::popcount(m.plus(a, a)),
                            std::popcount(m.plus(a, m.negate(a))), a == m.zero ? 0 : order};
  };
  std::vector<std::vector<int>> sig_from(n), sig_to(to.size());
  if (bijective) {
    for (int a = 0; a < n; ++a) sig_from[a] = signature(from, a);
    for (int b = 0; b < to.size(); ++b) sig_to[b] = signature(to, b);
  }
  std::vector<int> order;
  order.push_back(from.zero);
  if (from.one != from.zero) order.push_back(from.one);
  for (int a = 0; a < n; ++a) {
    if (a != from.zero && a != from.one) order.push_back(a);
  }

  const auto consistent = [&](int x) {
    const int fx = f[x];
    if (f[from.negate(x)] >= 0 && f[from.negate(x)] != to.negate(fx)) return false;
    for (int a = 0; a < n; ++a) {
      if (f[a] < 0) continue;
      for (auto [p, q] : {std::pair{a, x}, std::pair{x, a}}) {
        const int pq = from.times(p, q);
        if (f[pq] >= 0 && f[pq] != to.times(f[p], f[q])) return false;
        const ElementSet s = from.plus(p, q);
        const ElementSet t = to.plus(f[p], f[q]);
        for (int c = 0; c < n; ++c) {
          if (f[c] < 0) continue;
          const bool src = in_set(s, c);
          const bool dst = in_set(t, f[c]);
          if (src && !dst) return false;
          if (bijective && dst && !src) return false;
        }
      }
    }
    return true;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (out.size() >= limit) return;
    if (k == order.size()) {
      out.push_back(f);
      return;
    }
    const int x = order[k];
    for (int y = 0; y < to.size(); ++y) {
      if (x == from.zero && y != to.zero) continue;
      if (x == from.one && y != to.one) continue;
      if (bijective && (used[y] || sig_from[x] != sig_to[y])) continue;
      f[x] = y;
      if (bijective) used[y] = true;
      if (consistent(x)) rec(k + 1);
      if (bijective) used[y] = false;
      f[x] = -1;
    }
  };
  rec(0);
}

}  // namespace detail

inline std::vector<std::vector<int>> enumerate_morphisms(const Multiring& from, const Multiring& to,
                                                         std::size_t limit = 1U << 20) {
  std::vector<std::vector<int>> out;
  detail::search_maps(from, to, false, limit, out);
  return out;
}

inline std::optional<std::vector<int>> find_isomorphism(const Multiring& a, const Multiring& b) {
  std::vector<std::vector<int>> out;
  detail::search_maps(a, b, true, 1, out);
  if (out.empty()) return std::nullopt;
  return out.front();
}

inline bool isomorphic(const Multiring& a, const Multiring& b) { return find_isomorphism(a, b).has_value(); }

// ---------------------------------------------------------------------------
// Hyperbolic product and Marshall quotient.

struct HyperbolicProduct {
  Multiring product;
  std::vector<int> first;   // projection to the first factor
  std::vector<int> second;  // projection to the second factor
  std::optional<Verdict> universal;
};

inline std::vector<Multiring> hyperfield_pool();

inline HyperbolicProduct product_h(const Multiring& f1, const Multiring& f2, bool verify_universal = false) {
  for (const Multiring* f : {&f1, &f2}) {
    const AxiomReport ax = check_multiring_axioms(*f);
    if (!ax.is_hyperfield()) throw std::invalid_argument("product_h: " + f->name + " is not a hyperfield");
    if (!is_hyperbolic(*f)) throw std::invalid_argument("product_h: " + f->name + " is not hyperbolic");
  }
  std::vector<std::pair<int, int>> carrier{{f1.zero, f2.zero}, {f1.one, f2.one}};
  for (int a : f1.nonzero()) {
    for (int b : f2.nonzero()) {
      if (a == f1.one && b == f2.one) continue;
      carrier.emplace_back(a, b);
    }
  }
  if (carrier.size() > static_cast<std::size_t>(Multiring::kMaxElements)) {
    throw std::invalid_argument("product_h: carrier exceeds 64 elements");
  }
  std::map<std::pair<int, int>, int> index;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < carrier.size(); ++i) {
    index[carrier[i]] = static_cast<int>(i);
    labels.push_back("(" + f1.labels[carrier[i].first] + ";" + f2.labels[carrier[i].second] + ")");
  }
  HyperbolicProduct out;
  Multiring& p = out.product;
  p = blank_multiring(f1.name + "x" + f2.name, labels, 0, 1);
  const int n = p.size();
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = carrier[i];
    p.neg[i] = index.at({f1.negate(a), f2.negate(b)});
    out.first.push_back(a);
    out.second.push_back(b);
    for (int j = 0; j < n; ++j) {
      const auto [c, d] = carrier[j];
      p.set_times(i, j, index.at({f1.times(a, c), f2.times(b, d)}));
      ElementSet s = 0;
      for (int e : set_elements(f1.plus(a, c))) {
        for (int g : set_elements(f2.plus(b, d))) {
          auto it = index.find({e, g});
          if (it != index.end()) s |= bit_of(it->second);
        }
      }
      p.set_plus(i, j, s);
    }
  }
  if (verify_universal) {
    Verdict v{"universal"};
    if (!hf_morphism_check(out.first, p, f1).morphism.holds) v.fail("first_projection", {});
    if (v.holds && !hf_morphism_check(out.second, p, f2).morphism.holds) v.fail("second_projection", {});
    const auto pool = hyperfield_pool();
    for (std::size_t h = 0; h < pool.size() && v.holds; ++h) {
      const auto m1 = enumerate_morphisms(pool[h], f1);
      const auto m2 = enumerate_morphisms(pool[h], f2);
      const auto mp = enumerate_morphisms(pool[h], p);
      if (mp.size() != m1.size() * m2.size()) {
        v.fail("pairing_count", {static_cast<int>(h)});
        break;
      }
      for (std::size_t i = 0; i < m1.size() && v.holds; ++i) {
        for (std::size_t j = 0; j < m2.size() && v.holds; ++j) {
          std::vector<int> pair(pool[h].size());
          for (int x = 0; x < pool[h].size(); ++x) {
            auto it = index.find({m1[i][x], m2[j][x]});
            if (it == index.end()) {
              v.fail("pairing_leaves_carrier", {static_cast<int>(h), static_cast<int>(i), static_cast<int>(j), x});
              break;
            }
            pair[x] = it->second;
          }
          if (v.holds && !hf_morphism_check(pair, pool[h], p).morphism.holds) {
            v.fail("pairing_not_morphism", {static_cast<int>(h), static_cast<int>(i), static_cast<int>(j)});
          }
        }
      }
    }
    out.universal = v;
  }
  return out;
}

struct MarshallQuotient {
  Multiring quotient;
  std::vector<int> projection;
};

inline MarshallQuotient marshall_quotient(const Multiring& f, const std::vector<int>& t_elements) {
  f.validate();
  const int n = f.size();
  ElementSet t = 0;
  for (int x : t_elements) {
    if (x < 0 || x >= n) throw std::invalid_argument("marshall_quotient: subgroup element out of range");
    t |= bit_of(x);
  }
  if (!in_set(t, f.one)) throw std::invalid_argument("marshall_quotient: subgroup must contain 1");
  if (in_set(t, f.zero)) throw std::invalid_argument("marshall_quotient: subgroup must not contain 0");
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (f.times(a, b) != f.times(b, a)) throw std::invalid_argument("marshall_quotient: multiplication not commutative");
    }
  }
  const auto ts = set_elements(t);
  for (int x : ts) {
    bool inv = false;
    for (int y : ts) {
      if (!in_set(t, f.times(x, y))) throw std::invalid_argument("marshall_quotient: subgroup not multiplicatively closed");
      if (f.times(x, y) == f.one) inv = true;
    }
    if (!inv) throw std::invalid_argument("marshall_quotient: subgroup element " + f.labels[x] + " has no inverse in it");
  }
  std::vector<int> rep(n);
  for (int a = 0; a < n; ++a) {
    int best = a;
    for (int s : ts) best = std::min(best, f.times(a, s));
    rep[a] = best;
  }
  std::vector<int> reps;
  for (int a = 0; a < n; ++a) {
    if (rep[a] == a) reps.push_back(a);
  }
  std::vector<int> cls(n);
  for (int a = 0; a < n; ++a) {
    cls[a] = static_cast<int>(std::lower_bound(reps.begin(), reps.end(), rep[a]) - reps.begin());
  }
  std::vector<std::string> labels;
  for (int r : reps) labels.push_back(f.labels[r]);
  MarshallQuotient out;
  Multiring& q = out.quotient;
  q = blank_multiring(f.name + "/T", labels, cls[f.zero], cls[f.one]);
  const auto class_sum = [&](int a, int b) {
    ElementSet s = 0;
    for (int x : ts) {
      for (int y : ts) {
        for (int c : set_elements(f.plus(f.times(a, x), f.times(b, y)))) s |= bit_of(cls[c]);
      }
    }
    return s;
  };
  const int m = q.size();
  for (int i = 0; i < m; ++i) {
    q.neg[i] = cls[f.negate(reps[i])];
    for (int j = 0; j < m; ++j) {
      q.set_times(i, j, cls[f.times(reps[i], reps[j])]);
      q.set_plus(i, j, class_sum(reps[i], reps[j]));
    }
  }
  // Every representative must give the same operations.
  for (int a = 0; a < n; ++a) {
    if (cls[f.negate(a)] != q.negate(cls[a])) throw std::logic_error("marshall_quotient: negation not well defined");
    for (int b = 0; b < n; ++b) {
      if (cls[f.times(a, b)] != q.times(cls[a], cls[b])) {
        throw std::logic_error("marshall_quotient: product not well defined");
      }
      if (class_sum(a, b) != q.plus(cls[a], cls[b])) throw std::logic_error("marshall_quotient: sum not well defined");
    }
  }
  out.projection = cls;
  return out;
}

inline std::vector<int> nonzero_squares(const Multiring& f) {
  ElementSet s = 0;
  for (int a : f.nonzero()) s |= bit_of(f.times(a, a));
  return set_elements(s & ~bit_of(f.zero));
}

// F_p modulo its nonzero squares.
inline Multiring prime_field_mod_squares(int p) {
  const Multiring f = prime_field(p);
  Multiring q = marshall_quotient(f, nonzero_squares(f)).quotient;
  q.name = "F" + std::to_string(p) + "/sq";
  return q;
}

// Small hyperfields used wherever a law quantifies over "all hyperfields".
inline std::vector<Multiring> hyperfield_pool() {
  std::vector<Multiring> pool{q2(), krasner(), h_p(3), h_p(5), prime_field(3), prime_field(5),
                              prime_field_mod_squares(7)};
  pool.push_back(product_h(q2(), q2()).product);
  return pool;
}

}  // namespace hyperqf
