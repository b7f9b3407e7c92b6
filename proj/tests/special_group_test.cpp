#include <gtest/gtest.h>

#include <random>

#include "hyperqf/special_group.hpp"

using namespace hyperqf;

namespace {

PreSpecialGroup total_iso_z2() {
  PreSpecialGroup g = z2_group();
  std::fill(g.iso.begin(), g.iso.end(), 1);
  return g;
}

Multiring two_orderings() { return product_h(q2(), q2()).product; }
Multiring three_orderings() { return product_h(two_orderings(), q2()).product; }

std::vector<PreSpecialGroup> special_pool() {
  return {z2_group(), trivial_group(), from_hyperfield(two_orderings()), from_hyperfield(h_p(3)),
          from_hyperfield(prime_field_mod_squares(7)), from_hyperfield(krasner()),
          from_hyperfield(three_orderings())};
}

// All tuples of length k over {0..n-1}.
std::vector<Form> all_forms(int n, std::size_t k) {
  std::vector<Form> out;
  Form f(k, 0);
  while (true) {
    out.push_back(f);
    std::size_t i = k;
    while (i > 0 && f[i - 1] == n - 1) f[--i] = 0;
    if (i == 0) break;
    ++f[i - 1];
  }
  return out;
}

}  // namespace

TEST(SpecialGroup, Z2IsSpecial) {
  const auto r = check_sg_axioms(z2_group());
  for (const Verdict* v : r.verdicts()) EXPECT_TRUE(v->holds) << v->name;
  EXPECT_TRUE(r.special());
}

TEST(SpecialGroup, TotalRelationFailsDiscriminant) {
  const auto r = check_sg_axioms(total_iso_z2());
  EXPECT_FALSE(r.sg3.holds);
  EXPECT_TRUE(replay_sg_witness(total_iso_z2(), r.sg3));
  EXPECT_FALSE(r.proto());
}

TEST(SpecialGroup, ValuesOfBinaryForms) {
  const PreSpecialGroup g = z2_group();
  const int one = g.one, m1 = g.minus_one;
  EXPECT_EQ(represents(g, {one, one}), bit_of(one));
  EXPECT_EQ(represents(g, {one, m1}), bit_of(one) | bit_of(m1));
}

TEST(SpecialGroup, Reality) {
  const auto z2 = reality_report(z2_group());
  EXPECT_TRUE(z2.formally_real);
  EXPECT_TRUE(z2.reduced);
  const auto h3 = reality_report(from_hyperfield(h_p(3)));
  EXPECT_FALSE(h3.formally_real);
  EXPECT_FALSE(h3.reduced);
  const auto f7 = reality_report(from_hyperfield(prime_field_mod_squares(7)));
  EXPECT_FALSE(f7.formally_real);
  EXPECT_TRUE(reality_report(from_hyperfield(two_orderings())).reduced);
}

TEST(SpecialGroup, OrderingCounts) {
  EXPECT_EQ(enumerate_orderings(from_hyperfield(two_orderings())).size(), 2U);
  EXPECT_EQ(enumerate_orderings(z2_group()).size(), 1U);
  EXPECT_EQ(enumerate_orderings(from_hyperfield(h_p(3))).size(), 0U);
  EXPECT_EQ(enumerate_orderings(from_hyperfield(three_orderings())).size(), 3U);
}

TEST(SpecialGroup, HyperfieldsOfGroups) {
  EXPECT_TRUE(isomorphic(to_hyperfield(z2_group()), q2()));
  EXPECT_TRUE(isomorphic(to_hyperfield(trivial_group()), krasner()));
}

TEST(SpecialGroup, H3GroupIsPreSpecial) {
  const auto r = check_sg_axioms(from_hyperfield(h_p(3)));
  EXPECT_TRUE(r.pre());
}

TEST(SpecialGroup, NonPreSpecialInputsRejected) {
  EXPECT_THROW(from_hyperfield(prime_field(5)), std::invalid_argument);
  EXPECT_THROW(to_hyperfield(total_iso_z2()), std::invalid_argument);
}

TEST(SpecialGroup, PoolMembersAreSpecial) {
  for (const auto& g : special_pool()) EXPECT_TRUE(check_sg_axioms(g).special()) << g.name;
}

TEST(SpecialGroup, RoundTripThroughHyperfield) {
  for (const Multiring& f : hyperfield_pool()) {
    if (!classify(f).pre_special) continue;
    EXPECT_TRUE(isomorphic(to_hyperfield(from_hyperfield(f)), f)) << f.name;
  }
}

class SpecialGroupProperty : public ::testing::Test {
 protected:
  static constexpr int kIterations = 150;
  std::mt19937 rng_{4242};
};

// Property: a failing verdict's witness replays as a failure.
TEST_F(SpecialGroupProperty, WitnessesReplay) {
  const PreSpecialGroup base = from_hyperfield(two_orderings());
  std::uniform_int_distribution<std::size_t> cell(0, base.iso.size() - 1);
  for (int it = 0; it < kIterations; ++it) {
    PreSpecialGroup g = base;
    const std::size_t k = cell(rng_);
    g.iso[k] ^= 1;
    const auto r = check_sg_axioms(g);
    for (const Verdict* v : r.verdicts()) {
      if (!v->holds) EXPECT_TRUE(replay_sg_witness(g, *v)) << v->name << " " << v->clause;
    }
    EXPECT_FALSE(r.sg0.holds && r.sg1.holds && r.sg3.holds && r.sg5.holds && r.sg4.holds && r.sg2.holds && r.sg6.holds &&
                 r.group.holds)
        << "flipping one entry of a special relation cannot keep every axiom";
  }
}

// Property: in special groups isometry is invariant under permuting entries and is an
// equivalence relation, and the multiset shortcut agrees with the definition.
TEST_F(SpecialGroupProperty, IsometryInvariances) {
  for (const auto& g : special_pool()) {
    if (g.size() > 4) continue;
    IsometryOracle raw(g, false);
    IsometryOracle fast(g, true);
    const int n = g.size();
    for (std::size_t dim = 3; dim <= 4; ++dim) {
      const auto forms = all_forms(n, dim);
      for (int it = 0; it < 60; ++it) {
        std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
        const Form a = forms[pick(rng_)];
        const Form b = forms[pick(rng_)];
        Form shuffled = a;
        std::shuffle(shuffled.begin(), shuffled.end(), rng_);
        EXPECT_TRUE(raw.isometric(a, shuffled)) << g.name;
        EXPECT_EQ(raw.isometric(a, b), fast.isometric(a, b)) << g.name;
        EXPECT_EQ(raw.isometric(a, b), raw.isometric(b, a)) << g.name;
      }
    }
  }
}

// Property: binary isometry agrees with the relation it was built from, and
// every value of a form is represented.
TEST_F(SpecialGroupProperty, RepresentationContainsEntries) {
  for (const auto& g : special_pool()) {
    IsometryOracle o(g, true);
    const int n = g.size();
    for (int it = 0; it < 30; ++it) {
      std::uniform_int_distribution<int> e(0, n - 1);
      const Form f{e(rng_), e(rng_), e(rng_)};
      const ElementSet d = o.represents(f);
      for (int x : f) EXPECT_TRUE(in_set(d, x)) << g.name;
    }
  }
}

// Property: orderings are characters sending -1 to -1.
TEST_F(SpecialGroupProperty, OrderingsAreCharacters) {
  for (const auto& g : special_pool()) {
    for (const auto& s : enumerate_orderings(g)) {
      EXPECT_EQ(s[g.minus_one], -1);
      for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b) EXPECT_EQ(s[g.times(a, b)], s[a] * s[b]);
    }
  }
}
