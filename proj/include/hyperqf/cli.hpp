#pragma once

// Command dispatch for the hyperqf tool. Needs CLI11 and nlohmann/json on the include path.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperqf/gamma.hpp"
#include "hyperqf/igr.hpp"
#include "hyperqf/ktheory.hpp"
#include "hyperqf/multiring.hpp"
#include "hyperqf/special_group.hpp"
#include "hyperqf/structure_file.hpp"
#include "hyperqf/witt.hpp"

namespace hyperqf {

using ojson = nlohmann::ordered_json;

enum class ReportStatus { Pass, Fail, InputError, Undecided };

inline const char* to_string(ReportStatus s) {
  switch (s) {
    case ReportStatus::Pass: return "pass";
    case ReportStatus::Fail: return "fail";
    case ReportStatus::InputError: return "input-error";
    default: return "undecided";
  }
}

inline int exit_code(ReportStatus s) {
  switch (s) {
    case ReportStatus::Pass: return 0;
    case ReportStatus::Fail: return 1;
    case ReportStatus::InputError: return 2;
    default: return 3;
  }
}

struct Report {
  std::string command;
  std::vector<std::string> args;
  std::string subject;
  ojson params = ojson::object();
  std::vector<Verdict> verdicts;
  std::vector<std::pair<std::string, std::vector<std::int64_t>>> dims;
  ojson values = ojson::object();
  std::string structure;
  std::string error;
  bool input_error = false;
  bool undecided = false;

  void add(const std::string& group, const Verdict& v) {
    Verdict c = v;
    c.name = group.empty() ? v.name : group + "." + v.name;
    verdicts.push_back(std::move(c));
  }
  void add_all(const std::string& group, const std::vector<const Verdict*>& vs) {
    for (const Verdict* v : vs) add(group, *v);
  }
  void check(const std::string& name, bool holds, const std::string& clause = "", std::vector<int> witness = {}) {
    Verdict v{name};
    if (!holds) v.fail(clause.empty() ? name : clause, std::move(witness));
    verdicts.push_back(std::move(v));
  }
  template <class T>
  void dim_row(const std::string& name, const std::vector<T>& row) {
    std::vector<std::int64_t> r;
    for (const auto& x : row) r.push_back(static_cast<std::int64_t>(x));
    dims.emplace_back(name, std::move(r));
  }

  ReportStatus status() const {
    if (input_error) return ReportStatus::InputError;
    for (const auto& v : verdicts) {
      if (!v.holds) return ReportStatus::Fail;
    }
    if (undecided) return ReportStatus::Undecided;
    return ReportStatus::Pass;
  }
};

inline ojson report_json(const Report& r) {
  ojson j;
  j["command"] = r.command;
  j["args"] = r.args;
  j["status"] = to_string(r.status());
  if (!r.error.empty()) j["error"] = r.error;
  if (!r.subject.empty()) j["subject"] = r.subject;
  j["params"] = r.params;
  ojson vs = ojson::array();
  for (const auto& v : r.verdicts) {
    ojson e;
    e["name"] = v.name;
    e["holds"] = v.holds;
    if (!v.holds) {
      e["clause"] = v.clause;
      e["witness"] = v.witness;
    }
    vs.push_back(std::move(e));
  }
  j["verdicts"] = std::move(vs);
  ojson d = ojson::object();
  for (const auto& [name, row] : r.dims) d[name] = row;
  j["dims"] = std::move(d);
  j["values"] = r.values;
  if (!r.structure.empty()) j["structure"] = r.structure;
  return j;
}

inline std::string emit_report(const Report& r, bool json) {
  if (json) return report_json(r).dump(2) + "\n";
  std::size_t width = 8;
  for (const auto& v : r.verdicts) width = std::max(width, v.name.size());
  for (const auto& d : r.dims) width = std::max(width, d.first.size());
  for (const auto& [k, v] : r.values.items()) width = std::max(width, k.size());
  const auto pad = [&](const std::string& s) { return s + std::string(width + 2 - s.size(), ' '); };
  std::ostringstream out;
  out << "hyperqf";
  if (!r.command.empty()) out << ' ' << r.command;
  for (const auto& a : r.args) out << ' ' << a;
  out << "\nstatus   " << to_string(r.status()) << '\n';
  if (!r.error.empty()) out << "error    " << r.error << '\n';
  if (!r.subject.empty()) out << "subject  " << r.subject << '\n';
  if (!r.params.empty()) out << "params   " << r.params.dump() << '\n';
  for (const auto& v : r.verdicts) {
    out << "verdict  " << pad(v.name) << (v.holds ? "pass" : "FAIL");
    if (!v.holds) {
      out << "  clause=" << v.clause << "  witness=";
      for (std::size_t i = 0; i < v.witness.size(); ++i) out << (i ? "," : "") << v.witness[i];
    }
    out << '\n';
  }
  for (const auto& [name, row] : r.dims) {
    out << "dims     " << pad(name);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
    out << '\n';
  }
  for (const auto& [k, v] : r.values.items()) out << "value    " << pad(k) << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  if (!r.structure.empty()) out << '\n' << r.structure;
  return out.str();
}

struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

namespace cli_detail {

struct Globals {
  bool json = false;
  int truncation = 3;
  std::uint64_t cap = std::uint64_t{1} << 20;
  int bound = 4;
};

inline StructureSection load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_structure_file(buf.str()).first();
  } catch (const ParseError& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

inline Multiring as_hyperfield(const StructureSection& s) {
  switch (s.kind) {
    case StructureKind::Hyperfield: return s.hyperfield();
    case StructureKind::SpecialGroup: return to_hyperfield(s.group());
    default: throw std::invalid_argument(s.name + " is an igr, a hyperfield was expected");
  }
}

inline PreSpecialGroup as_group(const StructureSection& s) {
  switch (s.kind) {
    case StructureKind::SpecialGroup: return s.group();
    case StructureKind::Hyperfield: {
      if (!classify(s.hyperfield()).pre_special) throw std::invalid_argument(s.name + " is not a pre-special hyperfield");
      return from_hyperfield(s.hyperfield());
    }
    default: throw std::invalid_argument(s.name + " is an igr, a special group was expected");
  }
}

inline TruncatedIgr as_igr(const StructureSection& s, const Globals& g) {
  if (s.kind == StructureKind::Igr) return s.igr();
  KOptions opt;
  opt.cap = g.cap;
  return compute_k(as_hyperfield(s), g.truncation, opt).igr;
}

inline ojson classification_json(const Classification& c) {
  ojson j;
  j["multiring"] = c.multiring;
  j["hyperfield"] = c.hyperfield;
  j["hyperbolic"] = c.hyperbolic;
  j["pre_special"] = c.pre_special;
  j["special"] = c.special;
  return j;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

inline void report_hyperfield_check(Report& r, const Multiring& m) {
  const AxiomReport ax = check_multiring_axioms(m);
  r.add_all("axioms", ax.verdicts());
  if (ax.is_hyperfield() && ax.commutative_mul.holds) r.add_all("quadratic", check_quadratic_axioms(m).verdicts());
  r.values["elements"] = m.size();
  r.values["classification"] = classification_json(classify(m));
}

inline void run_check(Report& r, const StructureSection& s) {
  r.subject = std::string(to_string(s.kind)) + " " + s.name;
  switch (s.kind) {
    case StructureKind::Hyperfield: report_hyperfield_check(r, s.hyperfield()); break;
    case StructureKind::SpecialGroup: {
      const SgReport sg = check_sg_axioms(s.group());
      r.add_all("axioms", sg.verdicts());
      r.values["elements"] = s.group().size();
      r.values["special"] = sg.special();
      if (sg.special()) {
        const RealityReport real = reality_report(s.group());
        r.values["formally_real"] = real.formally_real;
        r.values["reduced"] = real.reduced;
        r.values["orderings"] = enumerate_orderings(s.group()).size();
      }
      break;
    }
    case StructureKind::Igr: {
      const TruncatedIgr& g = s.igr();
      r.add_all("igr", check_igr(g).verdicts());
      r.dim_row("levels", g.dims);
      r.values["in_igr_h"] = in_igr_h(g);
      r.values["in_igr_1"] = in_igr1(g);
      r.values["in_igr_plus"] = in_igr_plus(g);
      break;
    }
  }
}

inline void add_morphism(Report& r, const std::string& group, const IgrMorphismReport& m) {
  r.add_all(group, m.verdicts());
}

}  // namespace cli_detail

inline CliResult run_command(const std::vector<std::string>& args) {
  using namespace cli_detail;
  CLI::App app{"Finite hyperfields, special groups, inductive graded rings and their K-theory and Witt rings",
               "hyperqf"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Emit a JSON report");
  app.add_option("--truncation", g.truncation, "Truncation level N")->check(CLI::Range(0, 64));
  app.add_option("--cap", g.cap, "Cap on exhaustive enumerations");
  app.add_option("--bound", g.bound, "Pfister-sum bound for I^n membership")->check(CLI::Range(0, 64));

  std::vector<std::string> files;
  std::string file;
  auto* check = app.add_subcommand("check", "Axiom reports for a structure file");
  check->add_option("file", file)->required();

  int levels = -1;
  bool smc = false, identities = false, emit = false, allow_nonhyperbolic = false;
  auto* kth = app.add_subcommand("ktheory", "Reduced K-theory of a hyperfield");
  kth->add_option("file", file)->required();
  kth->add_option("--levels", levels, "Top level computed")->check(CLI::Range(0, 64));
  kth->add_flag("--smc", smc, "Check SMC");
  kth->add_flag("--identities", identities, "Run the K-theory identity suite");
  kth->add_flag("--emit", emit, "Attach the tower as a structure file");
  kth->add_flag("--allow-nonhyperbolic", allow_nonhyperbolic, "Skip the hyperbolic precondition");

  int graded = -1;
  std::size_t dimcap = 4;
  auto* witt = app.add_subcommand("witt", "Witt ring and graded Witt ring of a special group");
  witt->add_option("file", file)->required();
  witt->add_option("--graded", graded, "Graded Witt ring up to level N")->check(CLI::Range(0, 16));
  witt->add_option("--dimcap", dimcap, "Largest dimension of enumerated forms")->check(CLI::Range(0, 12));

  bool do_check = false, spectral = false, do_gamma = false;
  auto* igr = app.add_subcommand("igr", "Inductive graded ring reports");
  igr->add_option("file", file)->required();
  igr->add_flag("--check", do_check, "Check the Igr axioms");
  igr->add_flag("--spectral", spectral, "Orderings, boolean hull and MC");
  igr->add_flag("--gamma", do_gamma, "Build the hyperfield Gamma(R)");
  igr->add_flag("--emit", emit, "Attach Gamma(R) as a structure file");

  bool as_igr_flag = false, as_hf_flag = false;
  auto* product = app.add_subcommand("product", "Product of hyperfields or Igrs");
  product->add_option("files", files)->required()->expected(2, -1);
  product->add_flag("--igr", as_igr_flag, "Product in Igr");
  product->add_flag("--hf", as_hf_flag, "Product of hyperbolic hyperfields");
  product->add_flag("--emit", emit, "Attach the product as a structure file");

  auto* tensor = app.add_subcommand("tensor", "Tensor product (coproduct) of Igrs");
  tensor->add_option("files", files)->required()->expected(1, -1);
  tensor->add_flag("--emit", emit, "Attach the tensor product as a structure file");

  std::string subgroup, ideal;
  auto* quotient = app.add_subcommand("quotient", "Marshall quotient of a hyperfield or quotient of an Igr");
  quotient->add_option("file", file)->required();
  auto* sub_opt = quotient->add_option("--subgroup", subgroup, "Comma-separated labels of a multiplicative subgroup");
  quotient->add_option("--ideal", ideal, "Ideal generators as level:bits, comma-separated")->excludes(sub_opt);
  quotient->add_flag("--emit", emit, "Attach the quotient as a structure file");

  bool roundtrip = false;
  auto* adjoint = app.add_subcommand("adjoint", "Unit phi_F, transpose f# and k-stability");
  adjoint->add_option("file", file)->required();
  adjoint->add_flag("--roundtrip", roundtrip, "Check Gamma(k(F)) = F");

  bool mc = false;
  int ap = -1;
  auto* conj = app.add_subcommand("conjectures", "MC, SMC, Arason-Pfister and local-global checks");
  conj->add_option("file", file)->required();
  conj->add_flag("--mc", mc, "Report MC");
  conj->add_flag("--smc", smc, "Report SMC");
  conj->add_option("--ap", ap, "Report AP(n) for n up to this level")->check(CLI::Range(1, 6));
  conj->add_option("--dimcap", dimcap, "Largest dimension of enumerated forms")->check(CLI::Range(0, 12));

  Report r;
  r.args = args;
  CliResult result;
  std::vector<std::string> argv_store{"hyperqf"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    const bool wants_json = std::find(args.begin(), args.end(), "--json") != args.end();
    r.input_error = true;
    r.error = e.what();
    result.exit_code = exit_code(r.status());
    result.out = emit_report(r, wants_json);
    result.err = e.what();
    return result;
  }
  r.command = app.get_subcommands().front()->get_name();
  r.args.erase(std::remove(r.args.begin(), r.args.end(), r.command), r.args.end());
  r.args.erase(std::remove(r.args.begin(), r.args.end(), "--json"), r.args.end());
  r.params["truncation"] = g.truncation;
  r.params["cap"] = g.cap;
  r.params["bound"] = g.bound;

  try {
    KOptions kopt;
    kopt.cap = g.cap;
    if (check->parsed()) {
      run_check(r, load(file));
    } else if (kth->parsed()) {
      const int N = levels >= 0 ? levels : g.truncation;
      r.params["levels"] = N;
      const Multiring f = as_hyperfield(load(file));
      r.subject = f.name;
      kopt.require_hyperbolic = !allow_nonhyperbolic;
      const KTheoryRing k = compute_k(f, N, kopt);
      r.dim_row("k", k.igr.dims);
      r.add_all("igr", check_igr(k.igr).verdicts());
      if (smc) {
        const SmcReport s = smc_check(k);
        for (const auto& v : s.levels) r.add("smc", v);
        r.values["smc"] = s.smc();
        r.values["last_transition_iso"] = s.last_transition_iso;
      }
      if (identities) {
        const KIdentityReport id = k_identity_suite(k);
        for (const auto& v : id.verdicts.items()) r.add("identities", v);
      }
      if (emit) r.structure = serialize(k.igr);
    } else if (witt->parsed()) {
      const int N = graded >= 0 ? graded : g.truncation;
      r.params["graded"] = N;
      r.params["dimcap"] = dimcap;
      WittContext ctx(as_group(load(file)));
      r.subject = ctx.group().name;
      std::vector<std::size_t> by_dim(dimcap + 1, 0);
      for (const Form& w : anisotropic_classes(ctx, dimcap)) ++by_dim[w.size()];
      r.dim_row("anisotropic_classes", by_dim);
      const GradedWitt gw = graded_witt(ctx, N, g.bound);
      r.dim_row("graded_witt", gw.igr().dims);
      r.add_all("graded", check_igr(gw.igr()).verdicts());
      r.check("graded.in_igr_plus", in_igr_plus(gw.igr()));
      const SRReport sr = s_r_transformations(ctx, gw);
      for (const auto& v : sr.s_well_defined) r.add("s", v);
      for (const auto& v : sr.s_surjective) r.add("s", v);
      for (const auto& v : sr.composite) r.add("r", v);
      if (N >= 2) r.check("s.s1_s2_iso", sr.iso12_ok);
      r.undecided = r.undecided || sr.undecided;
      const SignatureRing sig = signature_ring(ctx, gw);
      r.values["orderings"] = sig.orderings.size();
      r.values["signature_degenerate"] = sig.degenerate;
      r.dim_row("grad_c", sig.grad_c.dims);
      r.check("signature.theta", sig.theta_ok);
    } else if (igr->parsed()) {
      const TruncatedIgr t = as_igr(load(file), g);
      r.subject = t.name;
      r.dim_row("levels", t.dims);
      if (do_check || (!spectral && !do_gamma)) {
        r.add_all("igr", check_igr(t).verdicts());
        r.values["in_igr_plus"] = in_igr_plus(t);
      }
      if (spectral) {
        const SpectralReport sp = spectral_report(t);
        r.values["orderings"] = sp.orderings.size();
        r.values["hull_dim"] = sp.hull_dim;
        r.dim_row("kernel", sp.kernel_dims);
        r.dim_row("nil", sp.nil_dims);
        std::vector<int> w;
        for (std::size_t n = 0; n < sp.kernel_dims.size() && w.empty(); ++n) {
          if (sp.kernel_dims[n] != 0) w = {static_cast<int>(n), static_cast<int>(sp.kernel_dims[n])};
        }
        r.check("mc", sp.mc, "kernel", w);
      }
      if (do_gamma) {
        const Multiring gm = gamma(t);
        r.values["gamma_elements"] = gm.size();
        r.values["gamma_classification"] = classification_json(classify(gm));
        r.values["gamma_labels"] = gm.labels;
        if (emit) r.structure = serialize(gm);
      }
    } else if (product->parsed()) {
      std::vector<StructureSection> secs;
      for (const auto& f : files) secs.push_back(load(f));
      const bool hf = as_hf_flag || (!as_igr_flag && std::all_of(secs.begin(), secs.end(), [](const auto& s) {
                                      return s.kind == StructureKind::Hyperfield;
                                    }));
      if (hf) {
        Multiring acc = as_hyperfield(secs.front());
        for (std::size_t i = 1; i < secs.size(); ++i) acc = product_h(acc, as_hyperfield(secs[i])).product;
        r.subject = acc.name;
        report_hyperfield_check(r, acc);
        if (emit) r.structure = serialize(acc);
      } else {
        std::vector<TruncatedIgr> factors;
        for (const auto& s : secs) factors.push_back(as_igr(s, g));
        const ProductResult p = igr_product(factors, g.truncation);
        r.subject = p.product.name;
        r.dim_row("levels", p.product.dims);
        r.add_all("igr", check_igr(p.product).verdicts());
        for (std::size_t i = 0; i < factors.size(); ++i) {
          add_morphism(r, "projection" + std::to_string(i), check_igr_morphism(p.projections[i], p.product, factors[i]));
        }
        if (emit) r.structure = serialize(p.product);
      }
    } else if (tensor->parsed()) {
      std::vector<TruncatedIgr> factors;
      for (const auto& f : files) factors.push_back(as_igr(load(f), g));
      const TensorResult t = igr_tensor(factors, g.truncation);
      r.subject = t.tensor.name;
      r.dim_row("levels", t.tensor.dims);
      r.add_all("igr", check_igr(t.tensor).verdicts());
      for (std::size_t i = 0; i < factors.size(); ++i) {
        add_morphism(r, "injection" + std::to_string(i), check_igr_morphism(t.injections[i], factors[i], t.tensor));
      }
      if (emit) r.structure = serialize(t.tensor);
    } else if (quotient->parsed()) {
      const StructureSection s = load(file);
      if (!subgroup.empty()) {
        const Multiring f = as_hyperfield(s);
        std::vector<int> t;
        for (const auto& l : split(subgroup, ',')) t.push_back(f.index_of(l));
        r.params["subgroup"] = subgroup;
        const MarshallQuotient q = marshall_quotient(f, t);
        r.subject = q.quotient.name;
        report_hyperfield_check(r, q.quotient);
        r.add("projection", hf_morphism_check(q.projection, f, q.quotient).morphism);
        r.values["labels"] = q.quotient.labels;
        if (emit) r.structure = serialize(q.quotient);
      } else if (!ideal.empty()) {
        const TruncatedIgr t = as_igr(s, g);
        std::vector<std::vector<BitVector>> gens(static_cast<std::size_t>(t.truncation) + 1);
        for (const auto& item : split(ideal, ',')) {
          const auto colon = item.find(':');
          if (colon == std::string::npos) throw std::invalid_argument("ideal generator must be level:bits, got " + item);
          const int n = std::stoi(item.substr(0, colon));
          if (n < 0 || n > t.truncation) throw std::invalid_argument("ideal generator level out of range: " + item);
          const BitVector v = BitVector::from_string(item.substr(colon + 1));
          if (v.size() != t.dim(n)) throw std::invalid_argument("ideal generator has the wrong length: " + item);
          gens[n].push_back(v);
        }
        r.params["ideal"] = ideal;
        const IdealResult q = ideal_ops(t, gens);
        r.subject = q.quotient.quotient.name;
        r.dim_row("ideal", q.ideal.dims());
        r.dim_row("quotient", q.quotient.quotient.dims);
        r.add_all("igr", check_igr(q.quotient.quotient).verdicts());
        add_morphism(r, "projection", check_igr_morphism(q.quotient.projection, t, q.quotient.quotient));
        if (emit) r.structure = serialize(q.quotient.quotient);
      } else {
        throw std::invalid_argument("quotient needs --subgroup or --ideal");
      }
    } else if (adjoint->parsed()) {
      const Multiring f = as_hyperfield(load(file));
      r.subject = f.name;
      const KTheoryRing k = compute_k(f, std::max(g.truncation, 2), kopt);
      const auto phi = unit_map(f, k);
      const AdjunctionReport a = adjunction_ops(f, k.igr, phi);
      const Multiring gk = gamma(k.igr);
      ojson map = ojson::object();
      for (int x = 0; x < f.size(); ++x) map[f.labels[x]] = gk.labels[phi[x]];
      r.values["phi"] = map;
      r.check("phi_group_iso", a.phi_group_iso);
      r.check("phi_morphism", a.phi_morphism);
      r.check("f_sharp_morphism", a.f_sharp_morphism);
      r.check("triangle", a.triangle_ok);
      r.check("unique_transpose", a.unique_ok, "transpose_count", {static_cast<int>(a.triangle_count)});
      r.values["k_stable"] = a.k_stable;
      r.values["alternative_k_stable"] = a.alternative_formula;
      if (roundtrip) r.check("gamma_roundtrip", isomorphic(gk, f));
    } else if (conj->parsed()) {
      WittContext ctx(as_group(load(file)));
      r.subject = ctx.group().name;
      ConjectureParams p;
      p.truncation = g.truncation;
      p.bound = g.bound;
      p.dim_cap = dimcap;
      if (ap > 0) p.ap_max = ap;
      r.params["dimcap"] = dimcap;
      r.params["ap"] = p.ap_max;
      const bool all = !mc && !smc && ap <= 0;
      const ConjectureReport c = conjecture_suite(ctx, p);
      for (const auto& v : c.verdicts.items()) {
        const bool wanted = all || (mc && (v.name == "MC" || v.name == "MC_encoding")) || (smc && v.name == "SMC") ||
                            (ap > 0 && v.name == "AP");
        if (wanted) r.add("", v);
      }
      ojson skipped = ojson::object();
      for (const auto& [k, why] : c.skipped) skipped[k] = why;
      r.values["skipped"] = skipped;
      r.values["mc_encoding_consistent"] = c.mc_encoding_consistent;
      r.undecided = c.undecided;
    }
  } catch (const UndecidedQuery& e) {
    r.undecided = true;
    r.error = e.what();
  } catch (const CapExceeded& e) {
    r.undecided = true;
    r.error = std::string("cap exceeded: ") + e.what();
  } catch (const std::exception& e) {
    r.input_error = true;
    r.error = e.what();
  }
  result.exit_code = exit_code(r.status());
  result.out = emit_report(r, g.json);
  if (!r.error.empty()) result.err = r.error;
  return result;
}

}  // namespace hyperqf
