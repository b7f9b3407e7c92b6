#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperqf/multiring.hpp"
#include "hyperqf/verdict.hpp"

namespace hyperqf {

using Form = std::vector<int>;

// Exponent-2 group with a distinguished -1 and a binary isometry relation stored
// as a table indexed by (a, b, c, d).
struct PreSpecialGroup {
  static constexpr int kMaxElements = 64;

  std::string name;
  std::vector<std::string> labels;
  int one = 0;
  int minus_one = 0;
  std::vector<int> mul;
  std::vector<std::uint8_t> iso;

  int size() const { return static_cast<int>(labels.size()); }
  int times(int a, int b) const { return mul[static_cast<std::size_t>(a) * labels.size() + b]; }
  int negate(int a) const { return times(minus_one, a); }

  std::size_t iso_index(int a, int b, int c, int d) const {
    const std::size_t n = labels.size();
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
  }
  bool iso2(int a, int b, int c, int d) const { return iso[iso_index(a, b, c, d)] != 0; }
  void set_iso(int a, int b, int c, int d, bool v = true) { iso[iso_index(a, b, c, d)] = v ? 1 : 0; }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i) {
      if (labels[i] == label) return i;
    }
    throw std::invalid_argument("unknown group element '" + label + "' in " + name);
  }

  void validate() const {
    const int n = size();
    if (n < 1 || n > kMaxElements) throw std::invalid_argument(name + ": group size must be between 1 and 64");
    if (one < 0 || one >= n || minus_one < 0 || minus_one >= n) {
      throw std::invalid_argument(name + ": 1 or -1 out of range");
    }
    if (mul.size() != static_cast<std::size_t>(n) * n) throw std::invalid_argument(name + ": multiplication table incomplete");
    for (int x : mul) {
      if (x < 0 || x >= n) throw std::invalid_argument(name + ": product out of range");
    }
    const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
    if (iso.size() != n4) throw std::invalid_argument(name + ": isometry table has the wrong size");
  }
};

inline PreSpecialGroup blank_group(std::string name, std::vector<std::string> labels, int one, int minus_one) {
  PreSpecialGroup g;
  g.name = std::move(name);
  g.labels = std::move(labels);
  const std::size_t n = g.labels.size();
  if (n == 0 || n > static_cast<std::size_t>(PreSpecialGroup::kMaxElements)) {
    throw std::invalid_argument(g.name + ": group size must be between 1 and 64");
  }
  g.one = one;
  g.minus_one = minus_one;
  g.mul.assign(n * n, 0);
  g.iso.assign(n * n * n * n, 0);
  return g;
}

// {1, -1} with <a,b> ~ <c,d> iff {a,b} = {c,d} as multisets.
inline PreSpecialGroup z2_group() {
  PreSpecialGroup g = blank_group("Z2", {"1", "-1"}, 0, 1);
  g.mul = {0, 1, 1, 0};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) g.set_iso(a, b, c, d, (a == c && b == d) || (a == d && b == c));
  return g;
}

inline PreSpecialGroup trivial_group() {
  PreSpecialGroup g = blank_group("1", {"1"}, 0, 0);
  g.set_iso(0, 0, 0, 0);
  return g;
}

// ---------------------------------------------------------------------------
// Axioms.

enum class SgLevel { Proto, Pre, Special };

struct SgReport {
  Verdict group{"group"};
  Verdict sg0{"sg0"};
  Verdict sg1{"sg1"};
  Verdict sg2{"sg2"};
  Verdict sg3{"sg3"};
  Verdict sg4{"sg4"};
  Verdict sg5{"sg5"};
  Verdict sg6{"sg6"};
  bool sg6_evaluated = false;

  bool proto() const { return group.holds && sg0.holds && sg1.holds && sg2.holds && sg3.holds && sg5.holds; }
  bool pre() const { return proto() && sg4.holds; }
  bool special() const { return pre() && sg6_evaluated && sg6.holds; }
  bool at_level(SgLevel level) const {
    switch (level) {
      case SgLevel::Proto: return proto();
      case SgLevel::Pre: return pre();
      case SgLevel::Special: return special();
    }
    return false;
  }
  std::vector<const Verdict*> verdicts() const { return {&group, &sg0, &sg1, &sg2, &sg3, &sg4, &sg5, &sg6}; }
};

namespace detail {

inline bool sg_clause(const PreSpecialGroup& g, const std::string& clause, const std::vector<int>& w) {
  const auto arg = [&](std::size_t i) {
    if (i >= w.size() || w[i] < 0 || w[i] >= g.size()) throw std::invalid_argument("malformed witness for " + clause);
    return w[i];
  };
  if (clause == "identity") return g.times(g.one, arg(0)) == arg(0);
  if (clause == "exponent_two") return g.times(arg(0), arg(0)) == g.one;
  if (clause == "commutative") return g.times(arg(0), arg(1)) == g.times(arg(1), arg(0));
  if (clause == "associative") {
    return g.times(g.times(arg(0), arg(1)), arg(2)) == g.times(arg(0), g.times(arg(1), arg(2)));
  }
  if (clause == "reflexive") return g.iso2(arg(0), arg(1), arg(0), arg(1));
  if (clause == "symmetric") {
    return !g.iso2(arg(0), arg(1), arg(2), arg(3)) || g.iso2(arg(2), arg(3), arg(0), arg(1));
  }
  if (clause == "transitive") {
    return !(g.iso2(arg(0), arg(1), arg(2), arg(3)) && g.iso2(arg(2), arg(3), arg(4), arg(5))) ||
           g.iso2(arg(0), arg(1), arg(4), arg(5));
  }
  if (clause == "swap") return g.iso2(arg(0), arg(1), arg(1), arg(0));
  if (clause == "hyperbolic_pair") return g.iso2(arg(0), g.negate(arg(0)), g.one, g.minus_one);
  if (clause == "discriminant") {
    return !g.iso2(arg(0), arg(1), arg(2), arg(3)) || g.times(arg(0), arg(1)) == g.times(arg(2), arg(3));
  }
  if (clause == "exchange") {
    return !g.iso2(arg(0), arg(1), arg(2), arg(3)) ||
           g.iso2(arg(0), g.negate(arg(2)), g.negate(arg(1)), arg(3));
  }
  if (clause == "scaling") {
    const int s = arg(4);
    return !g.iso2(arg(0), arg(1), arg(2), arg(3)) ||
           g.iso2(g.times(s, arg(0)), g.times(s, arg(1)), g.times(s, arg(2)), g.times(s, arg(3)));
  }
  throw std::invalid_argument("unknown clause " + clause);
}

}  // namespace detail

class IsometryOracle;
inline bool replay_sg_witness(const PreSpecialGroup& g, const Verdict& v);

// Isometry of n-ary forms by the inductive definition, memoized per oracle.
// With `permutation_invariant` the oracle treats forms as multisets; only valid once the
// group is known to be special.
class IsometryOracle {
 public:
  explicit IsometryOracle(const PreSpecialGroup& g, bool permutation_invariant = false)
      : g_(g), normalize_(permutation_invariant) {
    g_.validate();
    discriminant_prune_ = true;
    const int n = g_.size();
    for (int a = 0; a < n && discriminant_prune_; ++a)
      for (int b = 0; b < n && discriminant_prune_; ++b)
        for (int c = 0; c < n && discriminant_prune_; ++c)
          for (int d = 0; d < n; ++d) {
            if (g_.iso2(a, b, c, d) && g_.times(a, b) != g_.times(c, d)) {
              discriminant_prune_ = false;
              break;
            }
          }
  }

  const PreSpecialGroup& group() const { return g_; }
  bool permutation_invariant() const { return normalize_; }

  bool isometric(Form phi, Form psi) {
    if (phi.size() != psi.size()) return false;
    for (int x : phi) check(x);
    for (int x : psi) check(x);
    return iso_rec(std::move(phi), std::move(psi));
  }

  // D(phi) as a bitmask over the group.
  ElementSet represents(const Form& phi) {
    for (int x : phi) check(x);
    ElementSet out = 0;
    const int n = g_.size();
    if (phi.empty()) return 0;
    if (phi.size() == 1) return bit_of(phi[0]);
    for (int b = 0; b < n; ++b) {
      bool found = false;
      for_each_tail(phi.size() - 1, [&](const Form& tail) {
        Form cand{b};
        cand.insert(cand.end(), tail.begin(), tail.end());
        if (iso_rec(cand, phi)) {
          found = true;
          return true;
        }
        return false;
      });
      if (found) out |= bit_of(b);
    }
    return out;
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  void check(int x) const {
    if (x < 0 || x >= g_.size()) throw std::invalid_argument("form entry outside the group");
  }

  int product(const Form& f) const {
    int p = g_.one;
    for (int x : f) p = g_.times(p, x);
    return p;
  }

  // Calls visit on every tuple of length k (non-decreasing when normalizing) until it returns true.
  template <typename F>
  void for_each_tail(std::size_t k, F&& visit) const {
    const int n = g_.size();
    Form t(k, 0);
    while (true) {
      if (visit(t)) return;
      std::size_t i = k;
      while (i > 0) {
        --i;
        if (t[i] + 1 < n) {
          ++t[i];
          for (std::size_t j = i + 1; j < k; ++j) t[j] = normalize_ ? t[i] : 0;
          break;
        }
        if (i == 0) return;
      }
      if (k == 0) return;
    }
  }

  std::string key(const Form& a, const Form& b) const {
    std::string k;
    k.reserve(a.size() + b.size() + 1);
    for (int x : a) k.push_back(static_cast<char>(x + 1));
    k.push_back(0);
    for (int x : b) k.push_back(static_cast<char>(x + 1));
    return k;
  }

  bool iso_rec(Form a, Form b) {
    const std::size_t n = a.size();
    if (n == 0) return true;
    if (n == 1) return a[0] == b[0];
    if (n == 2) return g_.iso2(a[0], a[1], b[0], b[1]);
    if (normalize_) {
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a == b) return true;
      if (b < a) std::swap(a, b);
    }
    if (discriminant_prune_ && product(a) != product(b)) return false;
    const std::string k = key(a, b);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    bool result = false;
    const Form a_tail(a.begin() + 1, a.end());
    const Form b_tail(b.begin() + 1, b.end());
    const int m = g_.size();
    for (int x = 0; x < m && !result; ++x) {
      for (int y = 0; y < m && !result; ++y) {
        if (!g_.iso2(a[0], x, b[0], y)) continue;
        for_each_tail(n - 2, [&](const Form& z) {
          Form xz{x};
          xz.insert(xz.end(), z.begin(), z.end());
          Form yz{y};
          yz.insert(yz.end(), z.begin(), z.end());
          if (iso_rec(a_tail, xz) && iso_rec(b_tail, yz)) result = true;
          return result;
        });
      }
    }
    memo_.emplace(k, result);
    return result;
  }

  PreSpecialGroup g_;
  bool normalize_;
  bool discriminant_prune_ = false;
  std::unordered_map<std::string, bool> memo_;
};

inline bool isometric(const PreSpecialGroup& g, const Form& phi, const Form& psi) {
  IsometryOracle oracle(g);
  return oracle.isometric(phi, psi);
}

inline ElementSet represents(const PreSpecialGroup& g, const Form& phi) {
  IsometryOracle oracle(g);
  return oracle.represents(phi);
}

inline SgReport check_sg_axioms(const PreSpecialGroup& g, SgLevel level = SgLevel::Special) {
  g.validate();
  SgReport r;
  const int n = g.size();
  const auto probe = [&](Verdict& v, const char* clause, std::vector<int> w) {
    if (v.holds && !detail::sg_clause(g, clause, w)) v.fail(clause, std::move(w));
  };
  for (int a = 0; a < n; ++a) {
    probe(r.group, "identity", {a});
    probe(r.group, "exponent_two", {a});
    probe(r.sg2, "hyperbolic_pair", {a});
    for (int b = 0; b < n; ++b) {
      probe(r.group, "commutative", {a, b});
      probe(r.sg0, "reflexive", {a, b});
      probe(r.sg1, "swap", {a, b});
      for (int c = 0; c < n; ++c) {
        probe(r.group, "associative", {a, b, c});
        for (int d = 0; d < n; ++d) {
          if (!g.iso2(a, b, c, d)) continue;
          probe(r.sg0, "symmetric", {a, b, c, d});
          probe(r.sg3, "discriminant", {a, b, c, d});
          probe(r.sg4, "exchange", {a, b, c, d});
          for (int s = 0; s < n; ++s) probe(r.sg5, "scaling", {a, b, c, d, s});
          if (r.sg0.holds) {
            for (int e = 0; e < n; ++e) {
              for (int f = 0; f < n; ++f) probe(r.sg0, "transitive", {a, b, c, d, e, f});
            }
          }
        }
      }
    }
  }
  if (level != SgLevel::Special) return r;
  r.sg6_evaluated = true;
  if (n > 16) throw CapExceeded("ternary transitivity check limited to groups of order <= 16");
  // Ternary isometry by its definition, then a transitivity sweep.
  const std::size_t triples = static_cast<std::size_t>(n) * n * n;
  std::vector<std::vector<bool>> rel(triples, std::vector<bool>(triples, false));
  // pair_set[a2][a3] = bitmask of (x, z) with <a2,a3> ~ <x,z>, split by z.
  const auto pairs_by_z = [&](int p, int q) {
    std::vector<ElementSet> by_z(n, 0);
    for (int x = 0; x < n; ++x)
      for (int z = 0; z < n; ++z)
        if (g.iso2(p, q, x, z)) by_z[z] |= bit_of(x);
    return by_z;
  };
  std::vector<std::vector<ElementSet>> tails(static_cast<std::size_t>(n) * n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) tails[static_cast<std::size_t>(p) * n + q] = pairs_by_z(p, q);
  for (std::size_t ta = 0; ta < triples; ++ta) {
    const int a1 = static_cast<int>(ta / (n * n)), a23 = static_cast<int>(ta % (n * n));
    for (std::size_t tb = 0; tb < triples; ++tb) {
      const int b1 = static_cast<int>(tb / (n * n)), b23 = static_cast<int>(tb % (n * n));
      bool ok = false;
      for (int z = 0; z < n && !ok; ++z) {
        const ElementSet xs = tails[a23][z];
        const ElementSet ys = tails[b23][z];
        if (xs == 0 || ys == 0) continue;
        for (int x : set_elements(xs)) {
          for (int y : set_elements(ys)) {
            if (g.iso2(a1, x, b1, y)) {
              ok = true;
              break;
            }
          }
          if (ok) break;
        }
      }
      rel[ta][tb] = ok;
    }
  }
  const auto unpack = [n](std::size_t t) {
    return std::vector<int>{static_cast<int>(t / (n * n)), static_cast<int>((t / n) % n), static_cast<int>(t % n)};
  };
  for (std::size_t a = 0; a < triples && r.sg6.holds; ++a) {
    for (std::size_t b = 0; b < triples && r.sg6.holds; ++b) {
      if (!rel[a][b]) continue;
      for (std::size_t c = 0; c < triples; ++c) {
        if (rel[b][c] && !rel[a][c]) {
          std::vector<int> w = unpack(a);
          for (int x : unpack(b)) w.push_back(x);
          for (int x : unpack(c)) w.push_back(x);
          r.sg6.fail("ternary_transitive", w);
          break;
        }
      }
    }
  }
  return r;
}

inline bool replay_sg_witness(const PreSpecialGroup& g, const Verdict& v) {
  if (v.holds) return false;
  if (v.clause == "ternary_transitive") {
    if (v.witness.size() != 9) throw std::invalid_argument("malformed ternary witness");
    const Form a(v.witness.begin(), v.witness.begin() + 3);
    const Form b(v.witness.begin() + 3, v.witness.begin() + 6);
    const Form c(v.witness.begin() + 6, v.witness.end());
    IsometryOracle o(g);
    return o.isometric(a, b) && o.isometric(b, c) && !o.isometric(a, c);
  }
  return !detail::sg_clause(g, v.clause, v.witness);
}

// ---------------------------------------------------------------------------
// Reality and orderings.

struct RealityReport {
  std::vector<ElementSet> sums_of_squares;  // D(n<1>) for n = 1, 2, ...
  bool formally_real = false;
  bool reduced = false;
};

inline RealityReport reality_report(const PreSpecialGroup& g) {
  const SgReport ax = check_sg_axioms(g, SgLevel::Special);
  IsometryOracle oracle(g, ax.special());
  RealityReport r;
  ElementSet all = 0;
  const int cap = g.size() + 2;
  for (int n = 1; n <= cap; ++n) {
    const ElementSet d = oracle.represents(Form(static_cast<std::size_t>(n), g.one));
    r.sums_of_squares.push_back(d);
    all |= d;
    if (n >= 2 && d == r.sums_of_squares[r.sums_of_squares.size() - 2]) break;
  }
  r.formally_real = !in_set(all, g.minus_one);
  const ElementSet d2 = oracle.represents({g.one, g.one});
  r.reduced = r.formally_real && d2 == bit_of(g.one);
  return r;
}

// Elements as signs +1 / -1.
using Ordering = std::vector<int>;

// Characters G -> {1,-1} with sigma(-1) = -1 that carry binary isometries into those of Z2.
inline std::vector<Ordering> enumerate_orderings(const PreSpecialGroup& g) {
  g.validate();
  const int n = g.size();
  // Express every element over a generating set found greedily.
  std::vector<int> gens;
  std::vector<std::uint64_t> coord(n, ~std::uint64_t{0});
  coord[g.one] = 0;
  std::vector<int> span{g.one};
  for (int a = 0; a < n; ++a) {
    if (coord[a] != ~std::uint64_t{0}) continue;
    const std::uint64_t gbit = std::uint64_t{1} << gens.size();
    gens.push_back(a);
    const std::vector<int> old = span;
    for (int s : old) {
      const int t = g.times(s, a);
      if (coord[t] == ~std::uint64_t{0}) {
        coord[t] = coord[s] | gbit;
        span.push_back(t);
      }
    }
  }
  if (gens.size() > 24) throw CapExceeded("too many generators to enumerate characters");
  std::vector<Ordering> out;
  for (std::uint64_t choice = 0; choice < (std::uint64_t{1} << gens.size()); ++choice) {
    Ordering s(n);
    for (int a = 0; a < n; ++a) s[a] = (std::popcount(coord[a] & choice) & 1) ? -1 : 1;
    bool ok = s[g.minus_one] == -1;
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b) ok = s[g.times(a, b)] == s[a] * s[b];
    for (int a = 0; a < n && ok; ++a)
      for (int b = 0; b < n && ok; ++b)
        for (int c = 0; c < n && ok; ++c)
          for (int d = 0; d < n && ok; ++d) {
            if (!g.iso2(a, b, c, d)) continue;
            const bool same = (s[a] == s[c] && s[b] == s[d]) || (s[a] == s[d] && s[b] == s[c]);
            ok = same;
          }
    if (ok) out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Passing between groups and hyperfields.

inline Multiring to_hyperfield(const PreSpecialGroup& g) {
  const SgReport ax = check_sg_axioms(g, SgLevel::Special);
  if (!ax.pre()) throw std::invalid_argument(g.name + " is not a pre-special group");
  const int n = g.size();
  if (n + 1 > Multiring::kMaxElements) throw std::invalid_argument("group too large for a 64-element carrier");
  std::vector<std::string> labels{"0"};
  for (const auto& l : g.labels) labels.push_back(l == "0" ? "g0" : l);
  Multiring m = blank_multiring("M(" + g.name + ")", labels, 0, g.one + 1);
  IsometryOracle oracle(g, ax.special());
  m.neg[0] = 0;
  for (int a = 0; a < n; ++a) m.neg[a + 1] = g.negate(a) + 1;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == 0 || j == 0) {
        m.set_times(i, j, 0);
        m.set_plus(i, j, bit_of(i == 0 ? j : i));
        continue;
      }
      const int a = i - 1, b = j - 1;
      m.set_times(i, j, g.times(a, b) + 1);
      if (b == g.negate(a)) {
        m.set_plus(i, j, m.full_set());
      } else {
        m.set_plus(i, j, oracle.represents({a, b}) << 1);
      }
    }
  }
  return m;
}

inline PreSpecialGroup from_hyperfield(const Multiring& f) {
  const QuadraticReport q = check_quadratic_axioms(f);
  if (!q.pre_special()) throw std::invalid_argument(f.name + " is not a pre-special hyperfield");
  const auto nz = f.nonzero();
  const int n = static_cast<int>(nz.size());
  std::vector<int> pos(f.size(), -1);
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) {
    pos[nz[i]] = i;
    labels.push_back(f.labels[nz[i]]);
  }
  PreSpecialGroup g = blank_group("G(" + f.name + ")", labels, pos[f.one], pos[f.negate(f.one)]);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g.mul[static_cast<std::size_t>(a) * n + b] = pos[f.times(nz[a], nz[b])];
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const bool rel = f.times(nz[a], nz[b]) == f.times(nz[c], nz[d]) && in_set(f.plus(nz[c], nz[d]), nz[a]);
          g.set_iso(a, b, c, d, rel);
        }
  return g;
}

}  // namespace hyperqf
