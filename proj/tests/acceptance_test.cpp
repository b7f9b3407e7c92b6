// One line per acceptance criterion; exit status is nonzero if any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hyperqf/hyperqf.hpp"
#include "oracle/k_oracle.hpp"

using namespace hyperqf;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      note = what;
    }
  }
};

Multiring two_orderings() { return product_h(q2(), q2()).product; }

KOptions loose() {
  KOptions o;
  o.require_hyperbolic = false;
  return o;
}

std::vector<Multiring> pre_special_pool() {
  std::vector<Multiring> out;
  for (auto& f : hyperfield_pool()) {
    if (classify(f).pre_special) out.push_back(f);
  }
  return out;
}

std::vector<TruncatedIgr> tower_pool(int n) {
  std::vector<TruncatedIgr> out;
  for (const auto& f : hyperfield_pool()) {
    if (is_hyperbolic(f)) out.push_back(compute_k(f, n).igr);
  }
  out.push_back(trivial_T(f2_power_algebra(2), n, "T(F2^2)"));
  out.push_back(trivial_T(truncated_polynomial_algebra(2), n, "T(F2[x]/x^2)"));
  return out;
}

Outcome zoo_classification() {
  Outcome o;
  struct Row {
    std::function<Multiring()> build;
    Classification expected;
  };
  const Classification all{true, true, true, true, true};
  const Classification field{true, true, false, false, false};
  const Classification hyperbolic_only{true, true, true, false, false};
  const Classification multiring_only{true, false, false, false, false};
  const std::vector<Row> rows{
      {q2, all},
      {krasner, all},
      {[] { return h_p(2); }, all},
      {[] { return h_p(3); }, all},
      {[] { return h_p(5); }, hyperbolic_only},
      {[] { return h_p(7); }, hyperbolic_only},
      {[] { return kaleidoscope(1); }, all},
      {[] { return kaleidoscope(2); }, multiring_only},
      {[] { return kaleidoscope(3); }, multiring_only},
      {[] { return kaleidoscope(4); }, multiring_only},
      {[] { return prime_field(3); }, field},
      {[] { return prime_field(5); }, field},
      {[] { return prime_field(7); }, field},
      {[] { return prime_field(11); }, field},
  };
  for (const auto& row : rows) {
    const auto start = std::chrono::steady_clock::now();
    const Multiring m = row.build();
    const Classification c = classify(m);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(c == row.expected, m.name + " misclassified");
    o.require(seconds < 1.0, m.name + " took over a second");
  }
  o.require(h_p(2) == krasner(), "H_2 differs from K");
  return o;
}

Outcome ktheory_dimensions() {
  Outcome o;
  const KTheoryRing kq = compute_k(q2(), 5);
  const int m1 = q2().negate(q2().one);
  for (int n = 0; n <= 5; ++n) {
    o.require(kq.dim(n) == 1, "k_n(Q2) not one-dimensional");
    o.require(!kq.symbol(std::vector<int>(static_cast<std::size_t>(n), m1)).is_zero(), "rho(-1)^n vanishes in k(Q2)");
    o.require(oracle::k_dimension(q2(), n) == kq.dim(n), "oracle disagrees on Q2");
  }
  const KTheoryRing kh = compute_k(h_p(3), 2);
  const KTheoryRing kk = compute_k(krasner(), 2);
  o.require(kh.igr.dims == std::vector<std::size_t>{1, 1, 0}, "k(H3) dimensions");
  o.require(kk.igr.dims == std::vector<std::size_t>{1, 0, 0}, "k(K) dimensions");
  for (int n = 0; n <= 2; ++n) {
    o.require(oracle::k_dimension(h_p(3), n) == kh.dim(n), "oracle disagrees on H3");
    o.require(oracle::k_dimension(krasner(), n) == kk.dim(n), "oracle disagrees on K");
  }
  return o;
}

Outcome identity_suites() {
  Outcome o;
  for (const auto& f : hyperfield_pool()) {
    const KTheoryRing k = compute_k(f, 3, loose());
    const KIdentityReport rep = k_identity_suite(k);
    for (const auto& v : rep.verdicts.items()) o.require(v.holds, f.name + ": " + v.name);
  }
  return o;
}

Outcome marshall_quotients() {
  Outcome o;
  const Multiring f = prime_field(7);
  const MarshallQuotient mq = marshall_quotient(f, nonzero_squares(f));
  const KTheoryRing kq = compute_k(mq.quotient, 3);
  for (int n = 1; n <= 3; ++n) {
    o.require(unreduced_matches_reduced(unreduced_k(mq.quotient, n), kq.dim(n)), "unreduced K_n differs from k_n");
  }
  const KTheoryRing kf = compute_k(f, 3, loose());
  const IgrMorphism m = k_induced_morphism(mq.projection, kf, kq);
  o.require(check_igr_morphism(m, kf.igr, kq.igr).holds(), "induced map is not a morphism");
  o.require(levelwise_surjective(m), "induced map is not surjective");
  o.require(kf.igr.dims == kq.igr.dims, "dimensions differ");
  return o;
}

Outcome gamma_roundtrip() {
  Outcome o;
  for (const Multiring& f : {q2(), krasner(), h_p(3), prime_field_mod_squares(7)}) {
    const KTheoryRing k = compute_k(f, 3);
    const Multiring g = gamma(k.igr);
    o.require(isomorphic(g, f), "Gamma(k(" + f.name + ")) is not isomorphic to it");
    const auto phi = unit_map(f, k);
    o.require(unit_is_group_iso(f, g, phi), "phi is not a group isomorphism for " + f.name);
    o.require(hf_morphism_check(phi, f, g).morphism.holds, "phi is not a morphism for " + f.name);
  }
  o.require(is_k_stable(q2()), "Q2 is not k-stable");
  return o;
}

Outcome adjunction() {
  Outcome o;
  std::size_t maps = 0;
  for (const auto& f : pre_special_pool()) {
    for (const auto& r : tower_pool(3)) {
      if (!in_igr_plus(r)) continue;
      for (const auto& m : enumerate_morphisms(f, gamma(r))) {
        const AdjunctionReport rep = adjunction_ops(f, r, m);
        o.require(rep.f_sharp_morphism && rep.triangle_ok && rep.unique_ok, f.name + " -> Gamma(" + r.name + ")");
        ++maps;
      }
    }
  }
  o.require(maps > 0, "no morphisms enumerated");
  return o;
}

Outcome igr_constructions() {
  Outcome o;
  const auto pool = tower_pool(3);
  const auto igr_ok = [&](const TruncatedIgr& r, const std::string& what) {
    o.require(check_igr(r).holds(), what + " fails check_igr");
  };
  const auto morphism_ok = [&](const IgrMorphism& f, const TruncatedIgr& r, const TruncatedIgr& s,
                               const std::string& what) {
    o.require(check_igr_morphism(f, r, s).holds(), what + " is not a morphism");
  };
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const TruncatedIgr& r = pool[i];
    igr_ok(r, r.name);
    const TruncatedIgr& s = pool[(i + 1) % pool.size()];
    const ProductResult p = igr_product({r, s});
    igr_ok(p.product, "product");
    morphism_ok(p.projections[0], p.product, r, "projection");
    morphism_ok(p.projections[1], p.product, s, "projection");
    const TensorResult t = igr_tensor({r, s});
    igr_ok(t.tensor, "tensor");
    morphism_ok(t.injections[0], r, t.tensor, "tensor injection");
    morphism_ok(t.injections[1], s, t.tensor, "tensor injection");
    std::vector<std::vector<BitVector>> gens(4);
    if (r.dim(1) > 0) gens[1].push_back(r.top(1));
    const IdealResult q = ideal_ops(r, gens);
    igr_ok(q.quotient.quotient, "quotient");
    morphism_ok(q.quotient.projection, r, q.quotient.quotient, "quotient map");
    const Level1Result one = level1_subring(r);
    igr_ok(one.sub.sub, "level-1 subring");
    morphism_ok(one.sub.inclusion, one.sub.sub, r, "level-1 inclusion");
    const HyperbolicQuotient hq = hyperbolic_quotient(r);
    igr_ok(hq.ideal.quotient.quotient, "hyperbolic quotient");
    morphism_ok(hq.ideal.quotient.projection, r, hq.ideal.quotient.quotient, "hyperbolic quotient map");
    const CanonicalComparison can = compare_q_and_level1(r);
    o.require(can.is_morphism && can.is_iso, "can is not an isomorphism for " + r.name);
    const ColimitResult c = igr_chain_colimit({r, r, r}, {identity_morphism(r), identity_morphism(r)});
    igr_ok(c.colimit, "colimit");
    for (std::size_t k = 0; k < 3; ++k) morphism_ok(c.injections[k], r, c.colimit, "colimit injection");
  }
  return o;
}

Outcome boolean_hull() {
  Outcome o;
  std::size_t checked = 0;
  for (const auto& f : hyperfield_pool()) {
    if (!classify(f).special) continue;
    const TruncatedIgr r = compute_k(f, 4).igr;
    if (!in_igr_plus(r)) continue;
    StabilizedAlgebra a;
    try {
      a = algebra_A(r);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const SpectralReport sp = spectral_report(r);
    const std::size_t orderings = enumerate_orderings(from_hyperfield(f)).size();
    o.require(is_boolean(a.algebra), "A(" + r.name + ") is not boolean");
    o.require(sp.orderings.size() == orderings, "ordering count of " + r.name);
    o.require(sp.hull_dim == a.algebra.dim, "hull dimension of " + r.name);
    ++checked;
  }
  o.require(checked >= 3, "too few stabilized members");
  return o;
}

Outcome graded_witt_z2() {
  Outcome o;
  WittContext ctx(z2_group());
  const GradedWitt gw = graded_witt(ctx, 3, 4);
  o.require(gw.igr().dims == std::vector<std::size_t>{1, 1, 1, 1}, "dimensions");
  const SRReport sr = s_r_transformations(ctx, gw);
  o.require(sr.iso12_ok, "s_1, s_2 are not isomorphisms");
  o.require(!sr.r.empty() && sr.r[0] == BitMatrix::identity(1) && sr.composite_ok, "r_1 o s_1 is not the identity");
  for (int n = 1; n <= 3; ++n) o.require(is_surjective(gw.graded.projection.maps[n]), "s_n not surjective");
  for (const auto& v : sr.s_surjective) o.require(v.holds, v.name);
  o.require(!sr.undecided, "undecided membership queries");
  return o;
}

Outcome conjectures() {
  Outcome o;
  ConjectureParams p;
  p.truncation = 4;
  p.bound = 4;
  p.dim_cap = 6;
  p.ap_max = 2;
  for (const auto& g : {z2_group(), from_hyperfield(two_orderings())}) {
    WittContext ctx(g);
    const ConjectureReport rep = conjecture_suite(ctx, p);
    for (const char* name : {"MC", "SMC", "AP", "local_global"}) {
      o.require(rep.verdicts.has(name) && rep.verdicts.get(name).holds, g.name + ": " + name);
    }
    o.require(!rep.undecided, g.name + ": undecided queries");
  }
  const SmcReport h3 = smc_check(compute_k(h_p(3), 4));
  o.require(!h3.levels.empty() && !h3.levels[0].holds, "SMC does not fail for H3 at level 1");
  o.require(!spectral_report(compute_k(h_p(3), 3).igr).mc, "MC(R) holds for k(H3)");
  return o;
}

Outcome mc_colimits() {
  Outcome o;
  const auto chain_ok = [&](const std::vector<TruncatedIgr>& objects, const std::vector<IgrMorphism>& links,
                            const std::string& what) {
    for (const auto& r : objects) o.require(spectral_report(r).mc, what + ": a member fails MC");
    const ColimitResult c = igr_chain_colimit(objects, links);
    o.require(check_igr(c.colimit).holds(), what + ": colimit fails check_igr");
    o.require(spectral_report(c.colimit).mc, what + ": colimit fails MC");
  };
  const HyperbolicProduct two = product_h(q2(), q2());
  const HyperbolicProduct three = product_h(two.product, q2());
  const KTheoryRing k1 = compute_k(q2(), 4);
  const KTheoryRing k2 = compute_k(two.product, 4);
  const KTheoryRing k3 = compute_k(three.product, 4);
  chain_ok({k2.igr, k1.igr}, {k_induced_morphism(two.first, k2, k1)}, "k(Q2^2) -> k(Q2)");
  chain_ok({k3.igr, k2.igr, k1.igr},
           {k_induced_morphism(three.first, k3, k2), k_induced_morphism(two.first, k2, k1)}, "k(Q2^3) -> k(Q2)");
  chain_ok({k1.igr, k1.igr, k1.igr}, {identity_morphism(k1.igr), identity_morphism(k1.igr)}, "constant k(Q2)");
  return o;
}

std::string run_cli(const std::string& args, int* status) {
  const std::string cmd = std::string(HYPERQF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    *status = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  *status = pclose(pipe);
  return out;
}

Outcome determinism() {
  Outcome o;
  const std::string d = std::string(HYPERQF_DATA_DIR) + "/";
  const std::vector<std::string> commands{
      "check " + d + "q2.hf",
      "ktheory " + d + "q2.hf --levels 4 --smc --identities",
      "witt " + d + "z2.sg --graded 3 --bound 4",
      "conjectures " + d + "z2.sg --truncation 4 --dimcap 6 --ap 2",
      "conjectures " + d + "two_orderings.sg --truncation 4 --dimcap 6 --ap 2",
      "conjectures " + d + "h3.hf --smc",
      "igr " + d + "kh3.igr --spectral",
      "igr " + d + "kq2.igr --gamma --emit",
      "adjoint " + d + "f7sq.hf --roundtrip",
      "product " + d + "kq2.igr " + d + "dual.igr",
      "tensor " + d + "kq2.igr " + d + "dual.igr",
      "quotient " + d + "kq2.igr --ideal 1:1",
  };
  for (const auto& c : commands) {
    int s1 = 0, s2 = 0;
    const std::string a = run_cli(c + " --json", &s1);
    const std::string b = run_cli(c + " --json", &s2);
    o.require(!a.empty() && a.find("\"status\"") != std::string::npos, "no report from: " + c);
    o.require(a == b && s1 == s2, "output differs between runs: " + c);
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "example-zoo classification", zoo_classification},
      {2, "K-theory dimensions against the spanning-set oracle", ktheory_dimensions},
      {3, "K-theory identity suites on the pool at N = 3", identity_suites},
      {4, "Marshall quotient of F_7 by squares", marshall_quotients},
      {5, "Gamma round trip and the unit", gamma_roundtrip},
      {6, "adjunction transposes exist, satisfy the triangle and are unique", adjunction},
      {7, "Igr constructions and canonical maps", igr_constructions},
      {8, "boolean hull of stabilized towers", boolean_hull},
      {9, "graded Witt ring of Z_2", graded_witt_z2},
      {10, "conjecture suite", conjectures},
      {11, "MC is preserved by chain colimits", mc_colimits},
      {12, "deterministic JSON reports", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.note = std::string("exception: ") + e.what();
    }
    std::cout << "criterion " << (c.id < 10 ? " " : "") << c.id << "  " << (out.pass ? "PASS" : "FAIL") << "  "
              << c.title;
    if (!out.pass) std::cout << "  (" << out.note << ")";
    std::cout << '\n';
    if (!out.pass) ++failures;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
  return failures == 0 ? 0 : 1;
}
