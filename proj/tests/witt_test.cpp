#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "hyperqf/witt.hpp"

using namespace hyperqf;

namespace {

constexpr int kOne = 0;    // "1" in z2_group
constexpr int kMinus = 1;  // "-1" in z2_group

Multiring two_orderings() { return product_h(q2(), q2()).product; }

std::vector<PreSpecialGroup> special_pool() {
  return {z2_group(), trivial_group(), from_hyperfield(two_orderings()), from_hyperfield(h_p(3)),
          from_hyperfield(prime_field_mod_squares(7)), from_hyperfield(krasner())};
}

std::vector<PreSpecialGroup> reduced_pool() { return {z2_group(), from_hyperfield(two_orderings())}; }

std::vector<Form> all_multisets(int n, std::size_t k) {
  std::vector<Form> out;
  Form f(k, 0);
  while (true) {
    out.push_back(f);
    std::size_t i = k;
    while (i > 0 && f[i - 1] == n - 1) --i;
    if (i == 0) break;
    const int v = f[i - 1] + 1;
    for (std::size_t j = i - 1; j < k; ++j) f[j] = v;
  }
  return out;
}

// Integer model of W(Z_2): the class of a form is its signature.
std::int64_t z2_integer(const Form& f) {
  std::int64_t v = 0;
  for (int x : f) v += x == kOne ? 1 : -1;
  return v;
}

int two_adic_valuation(std::int64_t v) {
  int n = 0;
  while (v != 0 && v % 2 == 0) {
    v /= 2;
    ++n;
  }
  return n;
}

}  // namespace

TEST(WittReduce, Z2Examples) {
  WittContext ctx(z2_group());
  EXPECT_EQ(ctx.reduce({kOne, kMinus, kOne}), (Form{kOne}));
  EXPECT_EQ(ctx.reduce({kOne, kMinus}), Form{});
  EXPECT_EQ(ctx.reduce({kOne, kOne}), (Form{kOne, kOne}));
  EXPECT_FALSE(ctx.isotropic({kOne, kOne}));
  const WittClass c = witt_reduce(ctx, {kMinus, kOne, kMinus});
  EXPECT_EQ(c.rep, Form{kMinus});
  EXPECT_EQ(c.dimension(), 1U);
  EXPECT_EQ(c.dim2(), 1);
}

TEST(WittReduce, RequiresSpecialGroup) {
  PreSpecialGroup g = z2_group();
  std::fill(g.iso.begin(), g.iso.end(), 1);
  EXPECT_THROW(WittContext{g}, std::invalid_argument);
}

TEST(WittRing, Z2Operations) {
  WittContext ctx(z2_group());
  const Form x{kOne, kOne, kMinus, kMinus, kOne};
  EXPECT_EQ(ctx.add(x, {}), ctx.reduce(x));
  Form acc;
  for (std::size_t n = 1; n <= 6; ++n) {
    acc = ctx.add(acc, {kOne});
    EXPECT_EQ(acc, Form(n, kOne));
  }
  EXPECT_EQ(ctx.multiply({kOne, kOne}, {kOne, kOne}), Form(4, kOne));
  EXPECT_EQ(ctx.integer_multiple(-3, {kOne}), Form(3, kMinus));
}

TEST(WittRing, Pfister) {
  WittContext ctx(z2_group());
  EXPECT_EQ(ctx.pfister({kMinus}), (Form{kOne, kOne}));
  EXPECT_EQ(ctx.pfister({kOne}), Form{});
  EXPECT_EQ(ctx.pfister({kMinus, kMinus}), Form(4, kOne));

  WittOptions plus;
  plus.pfister_plus = true;
  WittContext alt(z2_group(), plus);
  EXPECT_EQ(alt.pfister({kOne}), (Form{kOne, kOne}));
  EXPECT_EQ(alt.pfister({kMinus}), Form{});
}

TEST(WittRing, MembershipExamples) {
  WittContext ctx(z2_group());
  EXPECT_EQ(ctx.in_fundamental_power({kOne, kOne}, 1, 4).status, MemberStatus::Yes);
  EXPECT_EQ(ctx.in_fundamental_power({kOne}, 1, 4).status, MemberStatus::No);
  const Membership m = ctx.in_fundamental_power({kOne, kOne}, 2, 4);
  EXPECT_EQ(m.status, MemberStatus::No);
  EXPECT_EQ(m.reason, "arason_pfister");
  EXPECT_EQ(ctx.in_fundamental_power(Form(8, kMinus), 3, 4).status, MemberStatus::Yes);
  // Without the dimension bound the signature still rules it out.
  EXPECT_EQ(ctx.in_fundamental_power({kOne, kOne}, 2, 4, false).reason, "signature");
}

TEST(WittRing, ChainEquivalenceMatchesIsometry) {
  for (const auto& g : special_pool()) {
    WittContext ctx(g);
    IsometryOracle oracle(g, true);
    const std::size_t max_dim = g.size() <= 2 ? 4 : 3;
    for (std::size_t k = 1; k <= max_dim; ++k) {
      const auto forms = all_multisets(g.size(), k);
      for (const auto& a : forms) {
        for (const auto& b : forms) {
          ASSERT_EQ(ctx.isometric(a, b), oracle.isometric(a, b)) << g.name;
        }
      }
    }
  }
}

TEST(GradedWitt, Z2Dimensions) {
  WittContext ctx(z2_group());
  const GradedWitt gw = graded_witt(ctx, 3, 4);
  // Oracle: in the integer model I^n = 2^n Z and s_n hits 2^n.
  std::vector<std::size_t> expected;
  for (int n = 0; n <= 3; ++n) {
    const std::int64_t image = z2_integer(ctx.pfister(std::vector<int>(static_cast<std::size_t>(n), kMinus)));
    expected.push_back(two_adic_valuation(image) == n ? 1U : 0U);
  }
  EXPECT_EQ(gw.igr().dims, expected);
  EXPECT_EQ(gw.igr().dims, (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_TRUE(check_igr(gw.igr()).holds());
  EXPECT_TRUE(in_igr_plus(gw.igr()));
  for (int n = 0; n < 3; ++n) EXPECT_EQ(gw.igr().transition(n).apply(gw.igr().top(n)), gw.igr().top(n + 1));
}

TEST(GradedWitt, TrivialGroup) {
  // <1,1> = <1,-1> is hyperbolic, so W = F_2 and I = 0.
  WittContext ctx(from_hyperfield(krasner()));
  EXPECT_EQ(ctx.reduce({0, 0}), Form{});
  EXPECT_EQ(graded_witt(ctx, 3, 4).igr().dims, (std::vector<std::size_t>{1, 0, 0, 0}));
}

TEST(GradedWitt, TwoOrderings) {
  WittContext ctx(from_hyperfield(two_orderings()));
  EXPECT_EQ(graded_witt(ctx, 3, 4).igr().dims, (std::vector<std::size_t>{1, 2, 2, 2}));
}

TEST(WittRing, UnknownEchoesBound) {
  WittContext ctx(z2_group());
  const Membership m = ctx.in_fundamental_power(Form(8, kOne), 3, 0);
  EXPECT_EQ(m.status, MemberStatus::Unknown);
  EXPECT_EQ(m.bound, 0);
  EXPECT_EQ(ctx.in_fundamental_power(Form(8, kOne), 3, 1).status, MemberStatus::Yes);
}

TEST(SRMaps, Z2) {
  WittContext ctx(z2_group());
  const GradedWitt gw = graded_witt(ctx, 3, 4);
  const SRReport sr = s_r_transformations(ctx, gw);
  EXPECT_FALSE(sr.undecided);
  for (const auto& v : sr.s_well_defined) EXPECT_TRUE(v.holds) << v.name;
  ASSERT_EQ(sr.s_surjective.size(), 3U);
  for (const auto& v : sr.s_surjective) EXPECT_TRUE(v.holds) << v.name;
  for (int n = 1; n <= 3; ++n) EXPECT_TRUE(is_surjective(gw.graded.projection.maps[n]));
  EXPECT_TRUE(sr.iso12_ok);
  EXPECT_TRUE(sr.composite_ok);
  ASSERT_EQ(sr.r.size(), 2U);
  EXPECT_EQ(sr.r[0], BitMatrix::identity(1));
}

TEST(SRMaps, TwoOrderings) {
  WittContext ctx(from_hyperfield(two_orderings()));
  const GradedWitt gw = graded_witt(ctx, 3, 4);
  const SRReport sr = s_r_transformations(ctx, gw);
  EXPECT_FALSE(sr.undecided);
  EXPECT_TRUE(sr.iso12_ok);
  EXPECT_TRUE(sr.composite_ok);
}

TEST(Signature, Z2) {
  WittContext ctx(z2_group());
  EXPECT_EQ(ctx.signature({kOne, kOne}), (std::vector<std::int64_t>{2}));
  EXPECT_EQ(ctx.signature({kOne, kMinus}), (std::vector<std::int64_t>{0}));
  const GradedWitt gw = graded_witt(ctx, 3, 4);
  const SignatureRing s = signature_ring(ctx, gw);
  EXPECT_FALSE(s.degenerate);
  EXPECT_EQ(s.grad_c.dims, (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_TRUE(check_igr(s.grad_c).holds());
  EXPECT_TRUE(s.theta_ok);
  for (int n = 0; n <= 3; ++n) EXPECT_TRUE(is_bijective(s.grad_sgn.maps[n]));
}

TEST(Signature, GradCIsTrivialTowerOfFunctions) {
  WittContext ctx(from_hyperfield(two_orderings()));
  const GradedWitt gw = graded_witt(ctx, 3, 4);
  const SignatureRing s = signature_ring(ctx, gw);
  ASSERT_EQ(s.orderings.size(), 2U);
  const TruncatedIgr t = trivial_T(f2_power_algebra(2), 3);
  EXPECT_EQ(s.grad_c.dims, t.dims);
  EXPECT_EQ(s.grad_c.tops, t.tops);
  EXPECT_EQ(s.grad_c.transitions, t.transitions);
  EXPECT_EQ(s.grad_c.stars, t.stars);
  EXPECT_TRUE(s.theta_ok);
}

TEST(Signature, NoOrderingsIsDegenerate) {
  WittContext ctx(from_hyperfield(h_p(3)));
  const SignatureRing s = signature_ring(ctx, graded_witt(ctx, 2, 4));
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.grad_c.dims, (std::vector<std::size_t>{1, 0, 0}));
}

TEST(Conjectures, ReducedGroupsPass) {
  ConjectureParams p;
  p.truncation = 4;
  p.dim_cap = 6;
  p.ap_max = 2;
  for (const auto& g : reduced_pool()) {
    WittContext ctx(g);
    const ConjectureReport rep = conjecture_suite(ctx, p);
    EXPECT_TRUE(rep.skipped.empty()) << g.name;
    for (const auto& v : rep.verdicts.items()) EXPECT_TRUE(v.holds) << g.name << " " << v.name << " " << v.clause;
    EXPECT_FALSE(rep.undecided) << g.name;
    EXPECT_TRUE(rep.mc_encoding_consistent);
  }
}

TEST(Conjectures, H3GroupSkipsMcAndFailsSmc) {
  WittContext ctx(from_hyperfield(h_p(3)));
  ConjectureParams p;
  p.truncation = 3;
  p.dim_cap = 4;
  const ConjectureReport rep = conjecture_suite(ctx, p);
  ASSERT_TRUE(rep.skipped.count("MC"));
  EXPECT_EQ(rep.skipped.at("MC"), "group is not reduced");
  EXPECT_FALSE(rep.verdicts.has("MC"));
  EXPECT_FALSE(rep.verdicts.get("SMC").holds);
  EXPECT_EQ(rep.verdicts.get("SMC").witness, (std::vector<int>{1, 1}));  // level 1, kernel dimension 1
}

class WittProperty : public ::testing::Test {
 protected:
  static constexpr int kIterations = 40;
  std::mt19937 rng{20261016};

  Form random_form(int n, std::size_t max_dim) {
    std::uniform_int_distribution<std::size_t> dim(0, max_dim);
    std::uniform_int_distribution<int> elem(0, n - 1);
    Form f(dim(rng));
    for (int& x : f) x = elem(rng);
    return f;
  }

  // Cancels hyperbolic pairs from randomly chosen isometric members until none remain.
  Form random_reduction(WittContext& ctx, Form f) {
    const PreSpecialGroup& g = ctx.group();
    while (true) {
      std::vector<Form> options;
      for (const Form& m : ctx.isometry_class(f)) {
        for (std::size_t i = 0; i < m.size(); ++i) {
          for (std::size_t j = 0; j < m.size(); ++j) {
            if (i == j || m[j] != g.negate(m[i])) continue;
            Form rest;
            for (std::size_t k = 0; k < m.size(); ++k) {
              if (k != i && k != j) rest.push_back(m[k]);
            }
            options.push_back(rest);
          }
        }
      }
      if (options.empty()) return f;
      f = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
    }
  }
};

// Property: the canonical representative does not depend on the order of reductions.
TEST_F(WittProperty, ReductionIsConfluent) {
  for (const auto& g : special_pool()) {
    WittContext ctx(g);
    for (int it = 0; it < kIterations; ++it) {
      const Form f = random_form(g.size(), 6);
      const Form path = random_reduction(ctx, f);
      EXPECT_FALSE(ctx.isotropic(path));
      EXPECT_EQ(ctx.reduce(path), ctx.reduce(f)) << g.name;
      EXPECT_TRUE(ctx.isometric(path, ctx.reduce(f))) << g.name;
    }
  }
}

// Property: W(G) is a commutative ring under the reduced sum and product.
TEST_F(WittProperty, RingLaws) {
  for (const auto& g : special_pool()) {
    WittContext ctx(g);
    for (int it = 0; it < kIterations; ++it) {
      const Form x = random_form(g.size(), 3), y = random_form(g.size(), 3), z = random_form(g.size(), 2);
      EXPECT_EQ(ctx.add(x, y), ctx.add(y, x));
      EXPECT_EQ(ctx.multiply(x, y), ctx.multiply(y, x));
      EXPECT_EQ(ctx.add(ctx.add(x, y), z), ctx.add(x, ctx.add(y, z)));
      EXPECT_EQ(ctx.multiply(ctx.multiply(x, y), z), ctx.multiply(x, ctx.multiply(y, z)));
      EXPECT_EQ(ctx.multiply(x, ctx.add(y, z)), ctx.add(ctx.multiply(x, y), ctx.multiply(x, z)));
      EXPECT_EQ(ctx.add(x, ctx.negative(x)), Form{});
      EXPECT_EQ(ctx.multiply(x, {g.one}), ctx.reduce(x));
    }
  }
}

// Property: I^{n+1} is contained in I^n on decided queries, and <1,1> times a
// generator of I^n lies in I^{n+1}.
TEST_F(WittProperty, FiltrationIsMonotone) {
  for (const auto& g : special_pool()) {
    WittContext ctx(g);
    for (int it = 0; it < kIterations; ++it) {
      const Form w = random_form(g.size(), 6);
      for (int n = 1; n <= 3; ++n) {
        if (ctx.in_fundamental_power(w, n + 1, 3).status == MemberStatus::Yes) {
          EXPECT_NE(ctx.in_fundamental_power(w, n, 3).status, MemberStatus::No) << g.name;
        }
      }
    }
    for (int n = 1; n <= 2; ++n) {
      for (const Form& gen : ctx.pfister_generators(n)) {
        const Form doubled = ctx.multiply({g.one, g.one}, gen);
        EXPECT_EQ(ctx.in_fundamental_power(doubled, n + 1, 4).status, MemberStatus::Yes) << g.name;
      }
    }
  }
}

// Property: sgn is additive and multiplicative, with values of the dimension's parity.
TEST_F(WittProperty, SignatureIsRingMap) {
  for (const auto& g : special_pool()) {
    WittContext ctx(g);
    for (int it = 0; it < kIterations; ++it) {
      const Form x = random_form(g.size(), 4), y = random_form(g.size(), 4);
      const auto sx = ctx.signature(x), sy = ctx.signature(y);
      const auto ssum = ctx.signature(ctx.add(x, y)), sprod = ctx.signature(ctx.multiply(x, y));
      const auto sred = ctx.signature(ctx.reduce(x));
      for (std::size_t s = 0; s < sx.size(); ++s) {
        EXPECT_EQ(ssum[s], sx[s] + sy[s]);
        EXPECT_EQ(sprod[s], sx[s] * sy[s]);
        EXPECT_EQ(sred[s], sx[s]);
        EXPECT_EQ(((sx[s] % 2) + 2) % 2, static_cast<std::int64_t>(x.size() % 2));
      }
    }
  }
}

// Property: no anisotropic class with 1 <= dim < 2^n is found in I^n.
TEST_F(WittProperty, ArasonPfisterInstance) {
  for (const auto& g : special_pool()) {
    WittContext ctx(g);
    for (int it = 0; it < kIterations && it < 1; ++it) {
      for (const Form& w : anisotropic_classes(ctx, 7)) {
        for (int n = 1; n <= 3; ++n) {
          if (w.empty() || w.size() >= (std::size_t{1} << n)) continue;
          EXPECT_NE(ctx.in_fundamental_power(w, n, 3, false).status, MemberStatus::Yes) << g.name;
        }
      }
    }
  }
}

// Property: the graded Witt ring is an Igr in Igr_+ and every s_n is onto.
TEST_F(WittProperty, GradedWittIsInIgrPlus) {
  for (const auto& g : special_pool()) {
    WittContext ctx(g);
    for (int it = 0; it < kIterations && it < 1; ++it) {
      const GradedWitt gw = graded_witt(ctx, 3, 4);
      EXPECT_TRUE(check_igr(gw.igr()).holds()) << g.name;
      EXPECT_TRUE(in_igr_h(gw.igr())) << g.name;
      EXPECT_TRUE(in_igr1(gw.igr())) << g.name;
      for (int n = 0; n <= 3; ++n) EXPECT_TRUE(is_surjective(gw.graded.projection.maps[n])) << g.name;
      const SRReport sr = s_r_transformations(ctx, gw);
      EXPECT_TRUE(sr.composite_ok) << g.name;
      for (const auto& v : sr.s_surjective) EXPECT_TRUE(v.holds) << g.name << " " << v.name;
    }
  }
}
