#include <gtest/gtest.h>

#include "hyperqf/gamma.hpp"

using namespace hyperqf;

namespace {

Multiring two_orderings() { return product_h(q2(), q2()).product; }

std::vector<Multiring> pre_special_pool() {
  std::vector<Multiring> out;
  for (auto& f : hyperfield_pool()) {
    if (classify(f).pre_special) out.push_back(f);
  }
  return out;
}

std::vector<TruncatedIgr> plus_towers(int n) {
  std::vector<TruncatedIgr> out;
  for (const auto& f : pre_special_pool()) out.push_back(compute_k(f, n).igr);
  out.push_back(trivial_T(f2_power_algebra(2), n, "T(F2^2)"));
  return out;
}

}  // namespace

TEST(Gamma, RoundTripsThroughKTheory) {
  for (const Multiring& f : {q2(), krasner(), h_p(3), prime_field_mod_squares(7), two_orderings()}) {
    const Multiring g = gamma(compute_k(f, 3).igr);
    EXPECT_TRUE(isomorphic(g, f)) << f.name;
  }
}

TEST(Gamma, LabelsOfQ2) {
  const Multiring g = gamma(compute_k(q2(), 2).igr);
  EXPECT_EQ(g.labels, (std::vector<std::string>{"0", "1", "-1"}));
  // 1 + 1 excludes -1 because l(-1)l(-1) is nonzero at level 2.
  EXPECT_EQ(g.plus(1, 1), bit_of(1));
}

TEST(Gamma, TrivialTowerOverTwoPoints) {
  // Four level-1 vectors plus zero; the result is the two-ordering product.
  const Multiring g = gamma(trivial_T(f2_power_algebra(2), 3));
  EXPECT_EQ(g.size(), 5);
  EXPECT_TRUE(classify(g).pre_special);
  EXPECT_TRUE(isomorphic(g, two_orderings()));
}

TEST(Gamma, Preconditions) {
  EXPECT_THROW(gamma(compute_k(q2(), 1).igr), std::invalid_argument);
  EXPECT_THROW(gamma(trivial_T(truncated_polynomial_algebra(2), 3)), std::invalid_argument);
}

TEST(Gamma, ResultsArePreSpecial) {
  for (const auto& r : plus_towers(3)) EXPECT_TRUE(check_quadratic_axioms(gamma(r)).pre_special()) << r.name;
}

TEST(Adjunction, UnitOfQ2) {
  const TruncatedIgr kq = compute_k(q2(), 3).igr;
  const AdjunctionReport rep = adjunction_ops(q2(), kq, unit_map(q2(), compute_k(q2(), 3)));
  EXPECT_TRUE(rep.phi_group_iso);
  EXPECT_TRUE(rep.phi_morphism);
  EXPECT_TRUE(rep.k_stable);
  EXPECT_TRUE(rep.triangle_ok);
  EXPECT_TRUE(rep.unique_ok);
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(rep.f_sharp.maps[n], BitMatrix::identity(kq.dim(n)));
  EXPECT_TRUE(rep.alternative_formula);
}

TEST(Adjunction, F7QuotientIntoGammaKQ2) {
  const Multiring f = prime_field_mod_squares(7);
  const TruncatedIgr r = compute_k(q2(), 3).igr;
  // -1 lies in 1 + 1 in F7/sq but not in Q2, so the family is empty.
  EXPECT_TRUE(enumerate_morphisms(f, gamma(r)).empty());
  const TruncatedIgr own = compute_k(f, 3).igr;
  const auto maps = enumerate_morphisms(f, gamma(own));
  ASSERT_FALSE(maps.empty());
  for (const auto& m : maps) {
    const AdjunctionReport rep = adjunction_ops(f, own, m);
    EXPECT_TRUE(rep.triangle_ok);
    EXPECT_TRUE(rep.unique_ok);
  }
}

TEST(Adjunction, Preconditions) {
  const TruncatedIgr r = compute_k(q2(), 3).igr;
  EXPECT_THROW(adjunction_ops(prime_field(5), r, {0, 1, 2, 1, 2}), std::invalid_argument);
  EXPECT_THROW(adjunction_ops(q2(), r, {0, 1, 1}), std::invalid_argument);
}

TEST(Adjunction, KStability) {
  EXPECT_TRUE(is_k_stable(q2()));
  for (const auto& f : pre_special_pool()) {
    const StableHull h = k_stable_hull(f);
    EXPECT_TRUE(h.fixpoint) << f.name;
    EXPECT_TRUE(h.k_stable) << f.name;
  }
}

class AdjunctionProperty : public ::testing::Test {
 protected:
  static constexpr int kIterations = 1;  // exhaustive over the pool; no sampling
};

// Property: every morphism F -> Gamma(R) has exactly one transpose k(F) -> R satisfying
// the triangle identity.
TEST_F(AdjunctionProperty, TransposesExistAndAreUnique) {
  std::size_t checked = 0;
  for (int it = 0; it < kIterations; ++it) {
    for (const auto& f : pre_special_pool()) {
      for (const auto& r : plus_towers(3)) {
        for (const auto& m : enumerate_morphisms(f, gamma(r))) {
          const AdjunctionReport rep = adjunction_ops(f, r, m);
          EXPECT_TRUE(rep.f_sharp_morphism) << f.name << " -> " << r.name;
          EXPECT_TRUE(rep.triangle_ok) << f.name << " -> " << r.name;
          EXPECT_TRUE(rep.unique_ok) << f.name << " -> " << r.name;
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 10U);
}

// Property: the unit is natural: for g : F -> L, Gamma(k(g)) o phi_F = phi_L o g.
TEST_F(AdjunctionProperty, UnitIsNatural) {
  for (const auto& f : pre_special_pool()) {
    for (const auto& l : pre_special_pool()) {
      const KTheoryRing kf = compute_k(f, 2), kl = compute_k(l, 2);
      const auto phi_f = unit_map(f, kf);
      const auto phi_l = unit_map(l, kl);
      for (const auto& g : enumerate_morphisms(f, l, 8)) {
        const IgrMorphism kg = k_induced_morphism(g, kf, kl);
        for (int a : f.nonzero()) {
          const BitVector lhs = kg.apply(1, gamma_vector(kf.igr, phi_f[a]));
          EXPECT_EQ(gamma_index(lhs), phi_l[g[a]]) << f.name << " -> " << l.name;
        }
      }
    }
  }
}
