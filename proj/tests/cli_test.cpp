#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hyperqf/cli.hpp"

using namespace hyperqf;

namespace {

std::string data(const std::string& file) { return std::string(HYPERQF_DATA_DIR) + "/" + file; }

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("hyperqf_cli_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

ojson run_json(std::vector<std::string> args, int* code = nullptr) {
  args.push_back("--json");
  const CliResult r = run_command(args);
  if (code) *code = r.exit_code;
  return ojson::parse(r.out);
}

const ojson* verdict(const ojson& j, const std::string& name) {
  for (const auto& v : j["verdicts"]) {
    if (v["name"] == name) return &v;
  }
  return nullptr;
}

bool same_group(const PreSpecialGroup& a, const PreSpecialGroup& b) {
  return a.labels == b.labels && a.one == b.one && a.minus_one == b.minus_one && a.mul == b.mul && a.iso == b.iso;
}

bool same_igr(const TruncatedIgr& a, const TruncatedIgr& b) {
  return a.truncation == b.truncation && a.dims == b.dims && a.tops == b.tops && a.transitions == b.transitions &&
         a.stars == b.stars;
}

}  // namespace

TEST(StructureFile, GoldenQ2) {
  const StructureFile f = parse_structure_file(read(data("q2.hf")));
  ASSERT_EQ(f.sections.size(), 1U);
  EXPECT_EQ(f.first().kind, StructureKind::Hyperfield);
  EXPECT_EQ(f.first().hyperfield(), build_example(ExampleKind::Q2));
}

TEST(StructureFile, GoldenZ2IsSpecial) {
  const StructureFile f = parse_structure_file(read(data("z2.sg")));
  EXPECT_TRUE(same_group(f.first().group(), z2_group()));
  EXPECT_TRUE(check_sg_axioms(f.first().group()).special());
}

TEST(StructureFile, MissingSumNamesTheCell) {
  std::string text = read(data("q2.hf"));
  const auto at = text.find(" 1+1={1}");
  ASSERT_NE(at, std::string::npos);
  text.erase(at, 8);
  try {
    parse_structure_file(text);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("missing sum 1+1"), std::string::npos) << e.what();
  }
}

TEST(StructureFile, Errors) {
  EXPECT_THROW(parse_structure_file("[hyperfield A]\nelements: 0 1\nzero: 0\none: x\n"), ParseError);
  EXPECT_THROW(parse_structure_file("[igr A]\ntruncation: 0\nlevel 0 dim 1 top=1\n[igr A]\n"), ParseError);
  EXPECT_THROW(parse_structure_file("elements: 0\n"), ParseError);
  EXPECT_THROW(parse_structure_file("[ring A]\n"), ParseError);
  EXPECT_THROW(parse_structure_file("[igr A]\ntruncation: 1\nlevel 0 dim 1 top=1\nlevel 1 dim 1 top=1\n"), ParseError);
  EXPECT_THROW(parse_structure_file("[igr A]\ntruncation: 0\nlevel 0 dim 1 top=12\n"), ParseError);
  // Level-1 square missing.
  EXPECT_THROW(parse_structure_file("[igr A]\ntruncation: 2\nlevel 0 dim 1 top=1\nlevel 1 dim 1 top=1\n"
                                    "level 2 dim 1 top=1\nh 0: 1\nh 1: 1\n"),
               ParseError);
}

TEST(StructureFile, MultipleSectionsAndComments) {
  const std::string text = "# two sections\n" + read(data("z2.sg")) + "\n" + read(data("kq2.igr")) + "  # trailing\n";
  const StructureFile f = parse_structure_file(text);
  ASSERT_EQ(f.sections.size(), 2U);
  EXPECT_EQ(f.sections[1].kind, StructureKind::Igr);
  EXPECT_TRUE(same_igr(f.sections[1].igr(), compute_k(q2(), 3).igr));
}

TEST(Cli, CheckQ2) {
  int code = -1;
  const ojson j = run_json({"check", data("q2.hf")}, &code);
  EXPECT_EQ(code, 0);
  EXPECT_EQ(j["status"], "pass");
  EXPECT_EQ(j["values"]["classification"]["special"], true);
}

TEST(Cli, KTheoryQ2WithSmc) {
  const CliResult human = run_command({"ktheory", data("q2.hf"), "--levels", "4", "--smc"});
  EXPECT_EQ(human.exit_code, 0);
  EXPECT_NE(human.out.find("1 1 1 1 1"), std::string::npos);
  const ojson j = run_json({"ktheory", data("q2.hf"), "--levels", "4", "--smc"});
  EXPECT_EQ(j["dims"]["k"], (std::vector<int>{1, 1, 1, 1, 1}));
  EXPECT_EQ(j["values"]["smc"], true);
}

TEST(Cli, ConjecturesH3FailSmcAtLevelOne) {
  int code = -1;
  const ojson j = run_json({"conjectures", data("h3.hf"), "--smc"}, &code);
  EXPECT_EQ(code, 1);
  EXPECT_EQ(j["status"], "fail");
  const ojson* v = verdict(j, "SMC");
  ASSERT_NE(v, nullptr);
  EXPECT_EQ((*v)["witness"][0], 1);
  EXPECT_EQ(j["values"]["skipped"]["MC"], "group is not reduced");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_command({"check", data("missing.hf")}).exit_code, 2);
  EXPECT_EQ(run_command({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(run_command({"quotient", data("q2.hf")}).exit_code, 2);
  int code = -1;
  const ojson j = run_json({"ktheory", data("q2.hf"), "--levels", "4", "--cap", "4"}, &code);
  EXPECT_EQ(code, 3);
  EXPECT_EQ(j["status"], "undecided");
  EXPECT_EQ(run_command({"--help"}).exit_code, 0);
}

TEST(Cli, WittAndSubcommands) {
  const ojson w = run_json({"witt", data("z2.sg"), "--graded", "3"});
  EXPECT_EQ(w["status"], "pass");
  EXPECT_EQ(w["dims"]["graded_witt"], (std::vector<int>{1, 1, 1, 1}));

  const ojson sp = run_json({"igr", data("kh3.igr"), "--spectral"});
  EXPECT_EQ(sp["status"], "fail");
  EXPECT_EQ((*verdict(sp, "mc"))["holds"], false);

  const ojson gm = run_json({"igr", data("kq2.igr"), "--gamma", "--emit"});
  EXPECT_EQ(gm["values"]["gamma_elements"], 3);
  EXPECT_TRUE(isomorphic(parse_structure_file(gm["structure"].get<std::string>()).first().hyperfield(), q2()));

  EXPECT_EQ(run_json({"product", data("q2.hf"), data("q2.hf")})["values"]["elements"], 5);
  EXPECT_EQ(run_json({"product", data("kq2.igr"), data("dual.igr")})["dims"]["levels"],
            (std::vector<int>{1, 3, 3, 3}));
  EXPECT_EQ(run_json({"tensor", data("kq2.igr"), data("kq2.igr")})["status"], "pass");
  const ojson q = run_json({"quotient", data("kq2.igr"), "--ideal", "1:1"});
  EXPECT_EQ(q["dims"]["quotient"], (std::vector<int>{1, 0, 0, 0}));
  const ojson m = run_json({"quotient", data("q2.hf"), "--subgroup", "1,-1"});
  EXPECT_EQ(m["values"]["elements"], 2);
  const ojson a = run_json({"adjoint", data("f7sq.hf"), "--roundtrip"});
  EXPECT_EQ(a["status"], "pass");
  EXPECT_EQ(a["values"]["k_stable"], true);
}

TEST(Cli, WitnessReplays) {
  // 1 + 1 = {-1} breaks the multigroup laws of Q_2.
  std::string text = read(data("q2.hf"));
  text.replace(text.find("1+1={1}"), 7, "1+1={-1}");
  const std::string path = write_temp("bad_q2.hf", text);
  const ojson j = run_json({"check", path});
  EXPECT_EQ(j["status"], "fail");
  const Multiring m = parse_structure_file(text).first().hyperfield();
  std::size_t replayed = 0;
  for (const auto& v : j["verdicts"]) {
    if (v["holds"] == true || v["name"].get<std::string>().rfind("axioms.", 0) != 0) continue;
    Verdict back{v["name"].get<std::string>()};
    back.fail(v["clause"].get<std::string>(), v["witness"].get<std::vector<int>>());
    EXPECT_TRUE(replay_witness(m, back)) << back.name;
    ++replayed;
  }
  EXPECT_GT(replayed, 0U);
}

class StructureFileProperty : public ::testing::Test {
 protected:
  static constexpr int kIterations = 25;
  std::mt19937 rng{7};
};

// Property: serializing a structure and parsing it back yields the same structure.
TEST_F(StructureFileProperty, RoundTrip) {
  for (const auto& f : hyperfield_pool()) {
    const Multiring back = parse_structure_file(serialize(f)).first().hyperfield();
    EXPECT_EQ(back, f) << f.name;
    EXPECT_EQ(serialize(back), serialize(f));
  }
  for (const auto& f : hyperfield_pool()) {
    if (!classify(f).pre_special) continue;
    const PreSpecialGroup g = from_hyperfield(f);
    EXPECT_TRUE(same_group(parse_structure_file(serialize(g)).first().group(), g)) << g.name;
    const TruncatedIgr r = compute_k(f, 3).igr;
    EXPECT_TRUE(same_igr(parse_structure_file(serialize(r)).first().igr(), r)) << r.name;
  }
  // Random bilinear data on a fixed shape, including non-commutative tables.
  std::bernoulli_distribution coin(0.5);
  for (int it = 0; it < kIterations; ++it) {
    TruncatedIgr r = trivial_T(f2_power_algebra(2), 3);
    for (int n = 1; n <= 3; ++n) {
      for (int m = 1; n + m <= 3; ++m) {
        for (std::size_t i = 0; i < r.dim(n); ++i) {
          for (std::size_t j = 0; j < r.dim(m); ++j) {
            BitVector v(r.dim(n + m));
            for (std::size_t k = 0; k < v.size(); ++k) v.set(k, coin(rng));
            r.star(n, m).set(i, j, v);
          }
        }
      }
    }
    EXPECT_TRUE(same_igr(parse_structure_file(serialize(r)).first().igr(), r));
  }
}

// Property: JSON reports are byte-identical across runs.
TEST_F(StructureFileProperty, DeterministicReports) {
  const std::vector<std::vector<std::string>> commands = {
      {"check", data("two_orderings.sg"), "--json"},
      {"ktheory", data("f7sq.hf"), "--identities", "--json"},
      {"conjectures", data("z2.sg"), "--json"},
      {"igr", data("dual.igr"), "--check", "--json"},
  };
  for (int it = 0; it < kIterations && it < 2; ++it) {
    for (const auto& c : commands) EXPECT_EQ(run_command(c).out, run_command(c).out);
  }
}
