#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperqf/igr.hpp"
#include "hyperqf/ktheory.hpp"
#include "hyperqf/multiring.hpp"

namespace hyperqf {

// Carrier of Gamma(R): index 0 is zero, index 1 + v is the level-1 vector v read as
// an integer. Multiplication is addition in R_1 and -a is a + top_1.
inline int gamma_index(const BitVector& v) { return 1 + static_cast<int>(v.to_u64()); }
inline BitVector gamma_vector(const TruncatedIgr& r, int index) {
  if (index <= 0) throw std::invalid_argument("zero has no level-1 vector");
  return BitVector::from_u64(r.dim(1), static_cast<std::uint64_t>(index - 1));
}

inline Multiring gamma(const TruncatedIgr& r) {
  if (r.truncation < 2) throw std::invalid_argument("gamma: needs truncation >= 2");
  if (!in_igr_plus(r)) throw std::invalid_argument("gamma: " + r.name + " is not in Igr_+");
  const std::size_t d1 = r.dim(1);
  if (d1 > 5) throw CapExceeded("gamma: level 1 too large for a 64-element carrier");
  const int units = 1 << d1;
  const int n = units + 1;
  std::vector<std::string> labels{"0"};
  for (int i = 0; i < units; ++i) {
    const BitVector v = BitVector::from_u64(d1, static_cast<std::uint64_t>(i));
    if (v.is_zero()) {
      labels.push_back("1");
    } else if (v == r.top(1)) {
      labels.push_back("-1");
    } else {
      labels.push_back("e" + v.to_string());
    }
  }
  Multiring m = blank_multiring("Gamma(" + r.name + ")", labels, 0, 1);
  const auto vec = [&](int x) { return gamma_vector(r, x); };
  for (int a = 0; a < n; ++a) m.neg[a] = a == 0 ? 0 : gamma_index(vec(a) ^ r.top(1));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      m.mul[static_cast<std::size_t>(a) * n + b] = (a == 0 || b == 0) ? 0 : gamma_index(vec(a) ^ vec(b));
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      ElementSet s = 0;
      if (a == 0) {
        s = bit_of(b);
      } else if (b == 0) {
        s = bit_of(a);
      } else if (b == m.neg[a]) {
        s = m.full_set();
      } else {
        const BitVector ab = vec(a) ^ vec(b);
        const BitVector lhs = r.multiply(1, vec(a), 1, vec(b));
        for (int c = 1; c < n; ++c) {
          const BitVector d = ab ^ vec(c);
          if (r.multiply(1, vec(c), 1, d) == lhs) s |= bit_of(c);
        }
      }
      m.sum[static_cast<std::size_t>(a) * n + b] = s;
    }
  }
  m.validate();
  return m;
}

// ---------------------------------------------------------------------------
// The unit F -> Gamma(k(F)) and the adjunction.

inline std::vector<int> unit_map(const Multiring& f, const KTheoryRing& k) {
  std::vector<int> phi(static_cast<std::size_t>(f.size()), 0);
  for (int a : f.nonzero()) phi[a] = gamma_index(k.rho[a]);
  return phi;
}

// phi restricted to nonzero elements is a bijective group homomorphism.
inline bool unit_is_group_iso(const Multiring& f, const Multiring& gk, const std::vector<int>& phi) {
  std::vector<bool> hit(static_cast<std::size_t>(gk.size()), false);
  for (int a : f.nonzero()) {
    if (phi[a] == gk.zero || hit[phi[a]]) return false;
    hit[phi[a]] = true;
    for (int b : f.nonzero()) {
      if (phi[f.times(a, b)] != gk.times(phi[a], phi[b])) return false;
    }
  }
  return static_cast<int>(f.nonzero().size()) == gk.size() - 1;
}

// Second formulation: ab = cd and rho(a)rho(b) = rho(c)rho(d) imply ac in 1 + cd.
inline bool alternative_k_stability(const Multiring& f, const KTheoryRing& k) {
  const auto units = f.nonzero();
  for (int a : units)
    for (int b : units)
      for (int c : units)
        for (int d : units) {
          if (f.times(a, b) != f.times(c, d)) continue;
          if (k.symbol({a, b}) != k.symbol({c, d})) continue;
          if (!in_set(f.plus(f.one, f.times(c, d)), f.times(a, c))) return false;
        }
  return true;
}

inline bool is_k_stable(const Multiring& f) {
  const KTheoryRing k = compute_k(f, 2);
  const Multiring gk = gamma(k.igr);
  return hf_morphism_check(unit_map(f, k), f, gk, true).strong.holds;
}

// f# : k(F) -> R on symbol generators, checked on every symbol within the cap.
inline IgrMorphism adjoint_transpose(const Multiring& f, const KTheoryRing& kf, const TruncatedIgr& r,
                                     const std::vector<int>& map, std::uint64_t cap = std::uint64_t{1} << 16) {
  const int N = r.truncation;
  if (kf.truncation() != N) throw std::invalid_argument("adjoint_transpose: truncations differ");
  const auto image = [&](const std::vector<int>& xs) {
    BitVector acc = r.top(0);
    int level = 0;
    for (int x : xs) {
      acc = r.multiply(level, acc, 1, gamma_vector(r, map[x]));
      ++level;
    }
    return acc;
  };
  IgrMorphism out;
  for (int n = 0; n <= N; ++n) {
    std::vector<BitVector> cols;
    for (std::size_t b = 0; b < kf.dim(n); ++b) cols.push_back(image(kf.basis_symbol(n, b)));
    out.maps.push_back(BitMatrix::from_columns(r.dim(n), cols));
  }
  for (int n = 1; n <= N; ++n) {
    if (detail::checked_power(kf.units.size(), n, cap) > cap) break;
    bool ok = true;
    detail::for_each_tuple(kf.units.size(), n, [&](const std::vector<std::size_t>& t) {
      if (!ok) return;
      std::vector<int> xs;
      for (std::size_t i : t) xs.push_back(kf.units[i]);
      ok = out.apply(n, kf.symbol(xs)) == image(xs);
    });
    if (!ok) throw std::logic_error("adjoint_transpose: not well defined on symbols of " + f.name);
  }
  return out;
}

struct AdjunctionReport {
  std::vector<int> phi;
  bool phi_group_iso = false;
  bool phi_morphism = false;
  bool k_stable = false;
  bool alternative_formula = false;
  IgrMorphism f_sharp;
  bool f_sharp_morphism = false;
  bool triangle_ok = false;
  std::size_t triangle_count = 0;
  bool unique_ok = false;
};

inline AdjunctionReport adjunction_ops(const Multiring& f, const TruncatedIgr& r, const std::vector<int>& map) {
  if (!classify(f).pre_special) throw std::invalid_argument("adjunction_ops: " + f.name + " is not pre-special");
  const Multiring gr = gamma(r);
  if (!hf_morphism_check(map, f, gr).morphism.holds) {
    throw std::invalid_argument("adjunction_ops: map is not a morphism into Gamma(" + r.name + ")");
  }
  AdjunctionReport rep;
  const KTheoryRing kf = compute_k(f, r.truncation);
  const Multiring gk = gamma(kf.igr);
  rep.phi = unit_map(f, kf);
  rep.phi_group_iso = unit_is_group_iso(f, gk, rep.phi);
  const MorphismReport mr = hf_morphism_check(rep.phi, f, gk, true);
  rep.phi_morphism = mr.morphism.holds;
  rep.k_stable = mr.strong.holds;
  rep.alternative_formula = alternative_k_stability(f, kf);

  rep.f_sharp = adjoint_transpose(f, kf, r, map);
  rep.f_sharp_morphism = check_igr_morphism(rep.f_sharp, kf.igr, r).holds();
  const auto triangle = [&](const IgrMorphism& g) {
    if (r.truncation < 1) return true;
    for (int a : f.nonzero()) {
      if (g.apply(1, kf.rho[a]) != gamma_vector(r, map[a])) return false;
    }
    return true;
  };
  rep.triangle_ok = rep.f_sharp_morphism && triangle(rep.f_sharp);
  for (const auto& g : enumerate_morphisms_from_level1(kf.igr, r)) {
    if (triangle(g)) ++rep.triangle_count;
  }
  rep.unique_ok = rep.triangle_count == 1;
  return rep;
}

// ---------------------------------------------------------------------------
// Iterating F -> Gamma(k(F)).

struct StableHull {
  Multiring hull;
  int iterations = 0;
  bool fixpoint = false;
  bool k_stable = false;
};

inline StableHull k_stable_hull(const Multiring& f, int max_iterations = 8) {
  StableHull out;
  out.hull = f;
  for (int i = 0; i < max_iterations; ++i) {
    Multiring next = gamma(compute_k(out.hull, 2).igr);
    ++out.iterations;
    const bool same = isomorphic(next, out.hull);
    out.hull = std::move(next);
    if (same) {
      out.fixpoint = true;
      break;
    }
  }
  out.k_stable = out.fixpoint && is_k_stable(out.hull);
  return out;
}

}  // namespace hyperqf
