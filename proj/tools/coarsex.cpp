#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "coarsex/constructions.hpp"
#include "coarsex/ctrl.hpp"
#include "coarsex/error.hpp"
#include "coarsex/faults.hpp"
#include "coarsex/group_change.hpp"
#include "coarsex/harness.hpp"
#include "coarsex/homology.hpp"
#include "coarsex/io.hpp"
#include "coarsex/rips.hpp"

using namespace coarsex;

namespace {

struct Outcome {
  Report report;
  Json extra = Json::object();
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> parse_elements(const FiniteGroup& g, const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const auto& name : split_list(text)) {
    int idx = g.index_of(name);
    if (idx < 0) fail(ErrorKind::Input, what + ": unknown element '" + name + "' of " + g.label());
    out.push_back(idx);
  }
  if (out.empty()) fail(ErrorKind::Input, what + ": empty element list");
  return out;
}

PointSet parse_points(const Space& s, const std::string& text, const std::string& what) {
  PointSet out;
  for (const auto& name : split_list(text)) {
    auto it = std::find(s.points.begin(), s.points.end(), name);
    if (it == s.points.end()) fail(ErrorKind::Input, what + ": unknown point '" + name + "'");
    out.push_back(static_cast<int>(it - s.points.begin()));
  }
  return normalized(out);
}

// The same space, carried by an equal group object.
Space over(const Space& s, const GroupPtr& g, const std::string& what) {
  if (!s.group->same_as(*g)) fail(ErrorKind::Input, what + ": document group does not match " + g->label());
  Space out = s;
  out.group = g;
  return out;
}

Space set_or_point(const std::string& arg, const GroupPtr& g) {
  if (arg == "point") return point_space(g);
  return over(parse_space(load_json(arg)), g, arg);
}

std::string degrees_line(const std::vector<HomologyGroup>& hs, const std::string& sep, bool labelled) {
  std::string out;
  for (size_t n = 0; n < hs.size(); ++n) {
    if (n) out += sep;
    if (labelled) out += "H" + std::to_string(n) + " ";
    out += hs[n].str();
  }
  return out;
}

Json groups_json(const std::vector<HomologyGroup>& hs) {
  Json out = Json::array();
  for (const auto& h : hs) out.push_back(h.str());
  return out;
}

Relation invariant_hull(const Space& s, const Relation& r) {
  Relation out = Relation::diagonal(s.size());
  for (int g = 0; g < s.group->order(); ++g)
    for (auto [x, y] : r.pairs()) out.insert(s.act(g, x), s.act(g, y));
  return out;
}

std::string kind_of(const Json& doc) {
  if (doc.contains("blocks")) return "morphism";
  if (doc.contains("dims") || doc.contains("cocycle")) return "object";
  if (doc.contains("map") && doc.contains("source")) return "hom";
  return "space";
}

Outcome cmd_validate(const std::string& file) {
  Json doc = load_json(file);
  Outcome o;
  std::string kind = kind_of(doc);
  o.extra["kind"] = kind;
  if (kind == "space") {
    o.report = validate_space(parse_space(doc));
  } else if (kind == "hom") {
    GroupHom h = parse_hom(doc);
    o.report.add("hom.law", true);
    o.extra["kernel_order"] = h.kernel().size();
  } else if (kind == "object") {
    o.report = validate_ctrl_object(parse_ctrl_object(doc));
  } else {
    o.report = validate_ctrl_morphism(parse_ctrl_morphism(doc));
  }
  return o;
}

Outcome cmd_homology(const std::string& file, int degree) {
  Space s = parse_space(load_json(file));
  auto hs = homology(s, degree);
  Outcome o;
  std::cout << degrees_line(hs, "; ", true) << "\n";
  o.extra["homology"] = groups_json(hs);
  return o;
}

Outcome cmd_group_homology(const std::string& group, const std::string& set, int degree) {
  GroupPtr g = group_by_name(group);
  Space s = set_or_point(set, g);
  ChainComplex c = standard_group_complex(g, s, degree + 1);
  auto hs = homology(c);
  hs.resize(degree + 1);
  std::cout << degrees_line(hs, ", ", false) << "\n";
  Outcome o;
  o.extra["homology"] = groups_json(hs);
  return o;
}

Outcome cmd_phi_psi(const std::string& group, const std::string& set, int degree) {
  GroupPtr g = group_by_name(group);
  PhiPsiReport r = phi_psi(g, set_or_point(set, g), degree);
  std::cout << "standard: " << degrees_line(r.standard_groups, ", ", false) << "\n";
  std::cout << "coarse:   " << degrees_line(r.coarse_groups, ", ", false) << "\n";
  Outcome o{r.report, {}};
  o.extra["standard"] = groups_json(r.standard_groups);
  o.extra["coarse"] = groups_json(r.coarse_groups);
  return o;
}

Outcome cmd_rips(const std::string& file, const std::string& name, int max_dim, bool dirac) {
  SpaceDocument doc = parse_space_document(load_json(file));
  auto it = doc.entourages.find(name);
  if (it == doc.entourages.end()) fail(ErrorKind::Input, "no entourage named '" + name + "'");
  Relation u = invariant_hull(doc.space, it->second);
  RipsComplex rc = rips_complex(doc.space, u, max_dim);
  Outcome o;
  o.report = validate_complex(rc.complex);
  Json counts = Json::array();
  for (int d = 0; d <= rc.complex.max_dim(); ++d) counts.push_back(rc.complex.count(d));
  auto hs = simplicial_homology(rc.complex, std::max(0, max_dim - 1));
  std::cout << "simplices per dimension: " << counts.dump() << "\n";
  std::cout << "simplicial homology: " << degrees_line(hs, "; ", true) << "\n";
  std::cout << "path-metric diameter: " << rc.diameter << "\n";
  o.extra["simplices"] = counts;
  o.extra["homology"] = groups_json(hs);
  o.extra["diameter"] = rc.diameter;
  if (dirac) o.report.absorb("dirac", dirac_equivalence(doc.space, u).report);
  return o;
}

Outcome cmd_change_group(const std::string& kind_name, const std::string& hom_file, const std::string& file,
                         const std::string& output) {
  ChangeKind kind = change_kind_from_string(kind_name);
  GroupHom hom = parse_hom(load_json(hom_file));
  const GroupPtr& base = kind == ChangeKind::Ind ? hom.source() : hom.target();
  Space s = over(parse_space(load_json(file)), base, file);
  Space r = change_group(kind, s, hom);
  Outcome o;
  o.report.absorb("result", validate_space(r));
  Json doc = space_to_json(r);
  if (output.empty())
    std::cout << doc.dump(2) << "\n";
  else
    save_json(output, doc);
  o.extra["points"] = r.size();
  return o;
}

Outcome cmd_mackey(const std::string& group, const std::string& image, const std::string& other,
                   const std::string& file) {
  GroupPtr g = group_by_name(group);
  Subgroup h = make_subgroup(g, parse_elements(*g, image, "--image"));
  Subgroup h2 = make_subgroup(g, parse_elements(*g, other, "--other"));
  Space s = set_or_point(file, h.group);
  MackeyReport m = mackey_check(s, h.inclusion, h2.inclusion);
  Outcome o{m.report, {}};
  for (const auto* side : {&m.conjugate_into_first, &m.conjugate_into_second}) {
    std::cout << side->name << ": " << (side->certified ? "certified" : "not certified");
    if (!side->witness.empty()) std::cout << " (" << side->witness << ")";
    std::cout << "\n";
    o.extra[side->name] = side->certified;
  }
  std::cout << "double cosets: " << m.double_cosets.size() << "\n";
  o.extra["double_cosets"] = m.double_cosets.size();
  return o;
}

Outcome cmd_axioms(const SuiteConfig& cfg, const std::string& fault) {
  faults::Injection inj;
  if (fault == "flip_boundary_sign") inj.flip_boundary_sign = true;
  else if (fault == "drop_entourage_pair") inj.drop_entourage_pair = true;
  else if (fault == "break_cocycle") inj.break_cocycle = true;
  else if (fault != "none") fail(ErrorKind::Input, "unknown fault '" + fault + "'");
  faults::Scope scope(inj);
  Outcome o{axiom_suite(cfg), {}};
  o.extra["seed"] = cfg.seed;
  o.extra["trials"] = cfg.trials;
  o.extra["fault"] = fault;
  return o;
}

Outcome cmd_ctrl_validate(const std::string& file) {
  Json doc = load_json(file);
  std::string kind = kind_of(doc);
  Outcome o;
  if (kind == "object") {
    CtrlObject c = parse_ctrl_object(doc);
    o.report = validate_ctrl_object(c);
    o.extra["total_rank"] = c.total_rank();
  } else if (kind == "morphism") {
    o.report = validate_ctrl_morphism(parse_ctrl_morphism(doc));
  } else {
    fail(ErrorKind::Input, file + ": expected a controlled object or morphism document");
  }
  return o;
}

Outcome cmd_ctrl_functor(const std::string& kind, const std::string& file, const std::string& sub,
                         const std::string& set) {
  CtrlObject c = parse_ctrl_object(load_json(file));
  Outcome o;
  if (kind == "bh") {
    std::vector<int> h = parse_elements(*c.space.group, sub, "--sub");
    BHRoundTrip rt = bh_round_trip(c, h);
    o.report = rt.report;
    Json mats = Json::object();
    for (size_t i = 0; i < rt.image.elements.size(); ++i)
      mats[c.space.group->name(rt.image.elements[i])] = matrix_to_json(rt.image.matrices[i]);
    std::cout << "representation of rank " << rt.image.rank << ": " << mats.dump() << "\n";
    o.extra["rank"] = rt.image.rank;
    o.extra["matrices"] = mats;
  } else if (kind == "convolution") {
    Space x = set_or_point(set, c.space.group);
    FullnessReport fr = convolution_fullness(c, c, x);
    ConvObject a = convolution_object(c, x);
    std::cout << "ranks over the set: " << Json(a.ranks).dump() << "\n";
    o.report = fr.report;
    o.extra["ranks"] = a.ranks;
  } else {
    fail(ErrorKind::Input, "unknown functor '" + kind + "' (expected bh or convolution)");
  }
  return o;
}

Outcome cmd_ctrl_karoubi(const std::vector<std::string>& files, const std::string& first, std::uint64_t seed,
                         int trials) {
  Outcome o;
  if (!files.empty()) {
    if (files.size() != 2) fail(ErrorKind::Input, "karoubi takes the files of f and g");
    CtrlMorphism f = parse_ctrl_morphism(load_json(files[0]));
    CtrlMorphism g = parse_ctrl_morphism(load_json(files[1]));
    BigFamily fam = generated_family(f.target.space, parse_points(f.target.space, first, "--first"));
    KaroubiDiagram k = karoubi_complete(f, g, fam);
    std::cout << "factored through stage " << k.stage << " of " << fam.stages.size() << "\n";
    o.report = k.report;
    o.extra["stage"] = k.stage;
    return o;
  }
  SplitMix64 rng(seed);
  const std::vector<std::string> menu{"trivial", "Z2", "Z3", "Z4", "S3"};
  for (int t = 0; t < trials; ++t) {
    GroupPtr g = group_by_name(menu[t % menu.size()]);
    KaroubiInstance inst = random_karoubi_instance(rng, g);
    std::string name = "karoubi/" + std::to_string(t);
    try {
      o.report.absorb(name, karoubi_complete(inst.f, inst.g, inst.family).report);
    } catch (const Error& e) {
      o.report.add(name, false, e.what());
    }
  }
  return o;
}

Outcome cmd_ctrl_quotient(const std::string& c_file, const std::string& d_file, const std::string& sub) {
  CtrlObject c = parse_ctrl_object(load_json(c_file));
  CtrlObject d = parse_ctrl_object(load_json(d_file));
  QuotientHom q = quotient_hom(c, d, parse_points(c.space, sub, "--sub"));
  std::cout << "Hom rank " << q.hom_rank << ", quotient " << q.quotient.str() << "\n";
  if (!q.note.empty()) std::cout << q.note << "\n";
  Outcome o{q.report, {}};
  o.extra["quotient"] = q.quotient.str();
  return o;
}

int exit_code(const Report& r) { return r.passed() ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant coarse homology toolkit"};
  app.require_subcommand(1);
  std::string report_path;
  app.add_option("--report", report_path, "Write the machine-readable report to this file");

  std::string file, set = "point", group, entourage, kind, hom_file, output, image, other, sub, first, fault = "none";
  int degree = 3, max_dim = 4, trials = 20;
  bool dirac = false;
  SuiteConfig cfg;
  std::vector<std::string> files;

  auto* validate = app.add_subcommand("validate", "Validate a document");
  validate->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* hom = app.add_subcommand("homology", "Equivariant coarse homology of a space");
  hom->add_option("--max-degree", degree)->check(CLI::Range(0, 8));
  hom->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* gh = app.add_subcommand("group-homology", "Homology of a group with coefficients in a permutation module");
  gh->add_option("--group", group)->required();
  gh->add_option("--set", set, "A space document or 'point'");
  gh->add_option("--max-degree", degree)->check(CLI::Range(0, 8));

  auto* pp = app.add_subcommand("phi-psi", "Compare the standard complex with the coarse one");
  pp->add_option("--group", group)->required();
  pp->add_option("--set", set);
  pp->add_option("--max-degree", degree)->check(CLI::Range(0, 6));

  auto* rips = app.add_subcommand("rips", "Rips complex of a named entourage");
  rips->add_option("--entourage", entourage)->required();
  rips->add_option("--max-dim", max_dim)->check(CLI::Range(0, 8));
  rips->add_flag("--dirac", dirac, "Also certify the comparison map to the Rips space");
  rips->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* cg = app.add_subcommand("change-group", "Restriction, completion, quotient or induction");
  cg->add_option("--kind", kind)->required()->check(CLI::IsMember({"res", "bh", "qh", "ind"}));
  cg->add_option("--hom", hom_file)->required()->check(CLI::ExistingFile);
  cg->add_option("--output", output, "Write the resulting space here instead of standard output");
  cg->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto* mk = app.add_subcommand("mackey", "Double coset decomposition of a restricted induction");
  mk->add_option("--group", group)->required();
  mk->add_option("--image", image, "Elements of the subgroup the space lives over")->required();
  mk->add_option("--other", other, "Elements of the subgroup restricted to")->required();
  mk->add_option("file", file, "A space over the first subgroup, or 'point'")->required();

  auto* ax = app.add_subcommand("axioms", "Randomized axiom suite");
  ax->add_option("--seed", cfg.seed);
  ax->add_option("--trials", cfg.trials)->check(CLI::PositiveNumber);
  ax->add_option("--max-size", cfg.max_size)->check(CLI::Range(1, 12));
  ax->add_option("--max-degree", cfg.max_degree)->check(CLI::Range(0, 4));
  ax->add_option("--fault", fault)->check(
      CLI::IsMember({"none", "flip_boundary_sign", "drop_entourage_pair", "break_cocycle"}));

  auto* ctrl = app.add_subcommand("ctrl", "Equivariant controlled modules");
  ctrl->require_subcommand(1);
  auto* cv = ctrl->add_subcommand("validate", "Validate an object or morphism document");
  cv->add_option("file", file)->required()->check(CLI::ExistingFile);
  auto* cf = ctrl->add_subcommand("functor", "Apply the bh or convolution functor to an object");
  cf->add_option("--kind", kind)->required()->check(CLI::IsMember({"bh", "convolution"}));
  cf->add_option("--sub", sub, "Subgroup elements (bh)");
  cf->add_option("--set", set, "Underlying set (convolution)");
  cf->add_option("file", file)->required()->check(CLI::ExistingFile);
  auto* ck = ctrl->add_subcommand("karoubi", "Factor g f through a stage of a big family");
  ck->add_option("--first", first, "Points generating the family (with files)");
  ck->add_option("--seed", cfg.seed);
  ck->add_option("--trials", trials)->check(CLI::PositiveNumber);
  ck->add_option("files", files)->check(CLI::ExistingFile);
  auto* cq = ctrl->add_subcommand("quotient-hom", "Hom modulo morphisms factoring through a subset");
  cq->add_option("--sub", sub)->required();
  cq->add_option("files", files)->required()->expected(2)->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    bool table = true;
    if (*validate) o = cmd_validate(file);
    else if (*hom) o = cmd_homology(file, degree), table = false;
    else if (*gh) o = cmd_group_homology(group, set, degree), table = false;
    else if (*pp) o = cmd_phi_psi(group, set, degree);
    else if (*rips) o = cmd_rips(file, entourage, max_dim, dirac);
    else if (*cg) o = cmd_change_group(kind, hom_file, file, output), table = !output.empty();
    else if (*mk) o = cmd_mackey(group, image, other, file);
    else if (*ax) o = cmd_axioms(cfg, fault);
    else if (*cv) o = cmd_ctrl_validate(file);
    else if (*cf) o = cmd_ctrl_functor(kind, file, sub, set);
    else if (*ck) o = cmd_ctrl_karoubi(files, first, cfg.seed, trials);
    else if (*cq) o = cmd_ctrl_quotient(files[0], files[1], sub);
    if (table && !o.report.checks.empty()) std::cout << o.report.table();
    const size_t fails = o.report.count(Verdict::Fail), unknown = o.report.count(Verdict::Unknown);
    if (table)
      std::cout << o.report.checks.size() << " checks, " << fails << " failed, " << unknown << " unknown\n";
    if (!report_path.empty()) {
      Json doc = report_to_json(o.report);
      doc["result"] = o.extra;
      doc["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      save_json(report_path, doc);
    }
    return exit_code(o.report);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Input:
      case ErrorKind::Precondition:
      case ErrorKind::Domain:
      case ErrorKind::Unsupported:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
