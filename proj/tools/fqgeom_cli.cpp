#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fqgeom/calibrate.hpp"
#include "fqgeom/constructions.hpp"
#include "fqgeom/errors.hpp"
#include "fqgeom/incidence.hpp"
#include "fqgeom/io.hpp"
#include "fqgeom/lineworld.hpp"
#include "fqgeom/rng.hpp"
#include "fqgeom/simplex.hpp"
#include "json.hpp"

using namespace fqgeom;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kRegression = 1;
constexpr int kUsage = 2;

struct Options {
  std::uint32_t q = 0;
  std::uint32_t p = 0;
  int r = 1;
  int d = 2;
  std::uint64_t seed = 1;
  std::uint64_t trials = 10;
  unsigned workers = 1;
  std::string format = "auto";
  std::string output;
  std::string ceilings;
  bool force = false;

  // subcommand specific
  std::string theorem = "all";
  std::uint64_t u_size = 0, v_size = 0, r_size = 0;
  unsigned t = 3;
  long long lambda = -1;
  int k = 2;
  std::string set = "full-plane";
  std::uint64_t size = 20;
  bool unordered = false;
  bool table = false;
  bool list = false;
  std::string x;
  std::uint64_t sub_k = 7;
  std::string recipe;
  std::uint64_t instances = 200;
  std::uint64_t cube_instances = 50;
  std::string qs = "3,7,11";
  std::string universe = "general";
};

// Report sink: JSON lines or CSV, plus the frozen-ceiling comparison.
class Sink {
 public:
  Sink(const Options& o, std::string default_format) {
    format_ = o.format == "auto" ? std::move(default_format) : o.format;
    if (format_ != "json" && format_ != "csv") throw CLI::ValidationError("--format", "must be json or csv");
    if (!o.output.empty()) {
      file_ = std::make_unique<std::ofstream>(o.output);
      if (!*file_) throw Error(ErrorKind::Parse, "cannot write " + o.output);
    }
    if (!o.ceilings.empty()) ceilings_ = Ceilings::load(o.ceilings);
  }

  std::ostream& out() { return file_ ? *file_ : std::cout; }
  bool csv() const { return format_ == "csv"; }

  void report(const AuditReport& r) {
    if (csv()) {
      if (!header_done_) out() << csv_header() << '\n';
      header_done_ = true;
      out() << to_csv_row(r) << '\n';
    } else {
      out() << to_json(r).dump() << '\n';
    }
    if (ceilings_ && ceilings_->regressed(r)) {
      const auto e = ceilings_->find(r.theorem);
      std::fprintf(stderr, "regression: %s c_star=%.9g exceeds ceiling %.9g\n", r.theorem.c_str(), r.c_star,
                   e->ceiling);
      ++regressions_;
    }
  }

  // Generic row: JSON object, or CSV with the object's keys as header.
  void row(const ojson& obj) {
    if (csv()) {
      if (!header_done_) {
        bool first = true;
        for (const auto& [k, v] : obj.items()) {
          out() << (first ? "" : ",") << k;
          first = false;
        }
        out() << '\n';
        header_done_ = true;
      }
      bool first = true;
      for (const auto& [k, v] : obj.items()) {
        out() << (first ? "" : ",");
        first = false;
        if (v.is_string()) {
          const std::string s = v.get<std::string>();
          out() << (s.find(',') != std::string::npos ? "\"" + s + "\"" : s);
        } else {
          out() << v.dump();
        }
      }
      out() << '\n';
    } else {
      out() << obj.dump() << '\n';
    }
  }

  void raw(const std::string& text) { out() << text; }
  void fail(const std::string& what) {
    std::fprintf(stderr, "regression: %s\n", what.c_str());
    ++regressions_;
  }
  const std::optional<Ceilings>& ceilings() const { return ceilings_; }
  int status() const { return regressions_ ? kRegression : kOk; }

 private:
  std::string format_;
  std::unique_ptr<std::ofstream> file_;
  std::optional<Ceilings> ceilings_;
  bool header_done_ = false;
  int regressions_ = 0;
};

Field resolve_field(const Options& o) {
  Limits lim;
  if (o.force) {
    lim.force = true;
    lim.max_q = 4096;
  }
  if (o.q && o.p) throw CLI::ValidationError("--q", "give either --q or --p/--r");
  if (o.p) return Field::make(o.p, o.r, lim);
  const std::uint32_t q = o.q ? o.q : 7;
  std::uint32_t p = 2;
  while (q % p != 0) ++p;
  int r = 0;
  std::uint64_t acc = 1;
  while (acc < q) {
    acc *= p;
    ++r;
  }
  if (acc != q) throw CLI::ValidationError("--q", std::to_string(q) + " is not a prime power");
  return Field::make(p, r, lim);
}

std::vector<Point> random_set(const Space& s, Lcg& rng, std::uint64_t m) {
  std::vector<Point> out;
  for (auto c : rng.sample(s.size(), m)) out.push_back(s.decode(c));
  return out;
}

std::vector<RigidMotion> random_motions(const MotionUniverse& uni, Lcg& rng, std::uint64_t m) {
  std::vector<RigidMotion> out;
  for (auto i : rng.sample(uni.size(), m)) out.push_back(uni.motion(i));
  return out;
}

// A requested size, or a seeded one in [1, cap].
std::uint64_t pick(std::uint64_t requested, std::uint64_t cap, Lcg& rng) {
  return requested ? requested : rng.between(1, std::max<std::uint64_t>(cap, 1));
}

std::vector<std::uint32_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected comma-separated integers, got '" + text + "'");
    }
  }
  return out;
}

std::vector<Point> point_set(const Space& s, const Options& o, Lcg& rng) {
  if (o.set == "full-plane" || o.set == "full") return s.all_points();
  if (o.set == "random") return random_set(s, rng, std::min(o.size, s.size()));
  return load_points(s, o.set);
}

// ---------------------------------------------------------------- field, group

int cmd_field(const Options& o) {
  const Field f = resolve_field(o);
  Sink sink(o, "json");
  if (o.table) {
    for (std::uint32_t i = 0; i < f.q(); ++i) {
      const Elem x = f.elem(i);
      ojson row;
      row["element"] = i;
      row["coeffs"] = f.coeffs(x);
      row["inverse"] = i ? ojson(f.inv(x).v) : ojson(nullptr);
      row["quad_char"] = f.quad_char(x);
      ojson roots = ojson::array();
      for (Elem y : f.sqrt_all(x)) roots.push_back(y.v);
      row["sqrt"] = roots;
      if (sink.csv()) {
        row["coeffs"] = ojson(row["coeffs"]).dump();
        row["sqrt"] = ojson(row["sqrt"]).dump();
      }
      sink.row(row);
    }
    return sink.status();
  }
  ojson j;
  j["p"] = f.p();
  j["r"] = f.r();
  j["q"] = f.q();
  j["q_mod_4"] = f.q_mod_4();
  j["modulus"] = f.modulus();
  std::uint32_t squares = 0;
  for (std::uint32_t i = 1; i < f.q(); ++i) squares += f.quad_char(f.elem(i)) == 1;
  j["nonzero_squares"] = squares;
  if (sink.csv()) j["modulus"] = ojson(f.modulus()).dump();
  sink.row(j);
  return sink.status();
}

std::string matrix_text(const Matrix& m) {
  std::string s = "[";
  for (int i = 0; i < m.dim; ++i) {
    s += i ? ",[" : "[";
    for (int j = 0; j < m.dim; ++j) s += (j ? "," : "") + std::to_string(m(i, j).v);
    s += "]";
  }
  return s + "]";
}

int cmd_group(const Options& o) {
  const Field f = resolve_field(o);
  Sink sink(o, "json");
  const auto group = enumerate_orthogonal(f, o.d);
  if (o.list) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      ojson row;
      row["index"] = i;
      row["matrix"] = matrix_text(group[i].m);
      row["det"] = group[i].det;
      row["order"] = matrix_order(f, group[i].m);
      sink.row(row);
    }
    return sink.status();
  }
  ojson j;
  j["q"] = f.q();
  j["d"] = o.d;
  j["order"] = group.size();
  std::uint64_t rot = 0;
  for (const auto& g : group) rot += g.det == 1;
  j["det_plus"] = rot;
  j["det_minus"] = group.size() - rot;
  if (o.d == 2 && f.q_mod_4() == 3) {
    const OrthoMatrix g = so2_generator(f);
    j["so2_generator"] = matrix_text(g.m);
    j["so2_order"] = matrix_order(f, g.m);
  }
  sink.row(j);
  return sink.status();
}

// ---------------------------------------------------------------- audits

int cmd_audit_incidence(const Options& o) {
  const Field f = resolve_field(o);
  const Space s(f, o.d);
  Sink sink(o, "json");
  std::vector<IncidenceTheorem> which;
  if (o.theorem == "all") {
    which.assign(std::begin(kIncidenceTheorems), std::end(kIncidenceTheorems));
  } else {
    try {
      which.push_back(incidence_theorem_from_string(o.theorem));
    } catch (const Error&) {
      throw CLI::ValidationError("--theorem", "unknown theorem '" + o.theorem + "'");
    }
  }
  const MotionUniverse general(s, MotionClass::General);
  std::optional<MotionUniverse> oriented;
  if (o.d == 2) oriented.emplace(s, MotionClass::SFPrime);
  Lcg master(o.seed);
  const std::uint64_t cap = std::min<std::uint64_t>(s.size(), 30);
  for (std::uint64_t trial = 0; trial < o.trials; ++trial)
    for (auto th : which) {
      Lcg rng(master.next());
      const bool sym = th == IncidenceTheorem::T2_6 || th == IncidenceTheorem::T8_2;
      const MotionUniverse& uni = sym && oriented ? *oriented : general;
      const auto u = random_set(s, rng, pick(o.u_size, cap, rng));
      const auto v = sym ? u : random_set(s, rng, pick(o.v_size, cap, rng));
      const PairSet p(s, u, v);
      const auto r = random_motions(uni, rng, pick(o.r_size, std::min<std::uint64_t>(uni.size(), 400), rng));
      sink.report(audit_bound(s, p, r, th, o.workers));
      if (o.theorem == "all" && th == IncidenceTheorem::T2_1)
        for (const auto& rep : audit_cs_bounds(s, p, r, o.workers)) sink.report(rep);
    }
  return sink.status();
}

int cmd_audit_distance(const Options& o) {
  const Field f = resolve_field(o);
  const Space s(f, o.d);
  Sink sink(o, "json");
  Lcg master(o.seed);
  for (std::uint64_t trial = 0; trial < o.trials; ++trial) {
    Lcg rng(master.next());
    const auto a = random_set(s, rng, pick(o.u_size, s.size(), rng));
    const auto b = random_set(s, rng, pick(o.v_size, s.size(), rng));
    const Elem lambda = o.lambda >= 0 ? f.elem(static_cast<std::uint64_t>(o.lambda)) : f.elem(rng.between(1, f.q() - 1));
    sink.report(audit_distance(s, a, b, lambda));
  }
  return sink.status();
}

int cmd_audit_moment(const Options& o) {
  const Field f = resolve_field(o);
  const Space s(f, o.d);
  Sink sink(o, "json");
  Lcg master(o.seed);
  for (std::uint64_t trial = 0; trial < o.trials; ++trial) {
    Lcg rng(master.next());
    const auto u = random_set(s, rng, pick(o.u_size, std::min<std::uint64_t>(s.size(), 30), rng));
    for (const auto& rep : audit_moments(s, PairSet(s, u, u), o.t, o.workers)) sink.report(rep);
  }
  return sink.status();
}

ojson wide_json(Wide v) {
  if (v >> 64) return to_string(v);
  return static_cast<std::uint64_t>(v);
}

int cmd_audit_triple(const Options& o) {
  const Field f = resolve_field(o);
  const Space s(f, o.d);
  Sink sink(o, "json");
  const MotionClass tag = motion_class_from_string(o.universe);
  Lcg master(o.seed);
  const std::uint64_t cap = std::min<std::uint64_t>(s.size(), 20);
  for (std::uint64_t trial = 0; trial < o.trials; ++trial) {
    Lcg rng(master.next());
    const auto a = random_set(s, rng, pick(o.u_size, cap, rng));
    const auto b = random_set(s, rng, pick(o.v_size, cap, rng));
    const auto c = random_set(s, rng, pick(o.r_size, cap, rng));
    const TripleCorrelation t = triple_correlation(s, a, b, c, tag, o.workers);
    ojson row;
    row["trial"] = trial;
    row["q"] = f.q();
    row["d"] = o.d;
    row["A"] = a.size();
    row["B"] = b.size();
    row["C"] = c.size();
    row["exact"] = wide_json(t.exact);
    row["holder_333"] = t.holder_333;
    row["holder_442"] = t.holder_442;
    const double exact = static_cast<double>(t.exact);
    row["holder_333_holds"] = exact <= t.holder_333 * (1 + 1e-12);
    row["holder_442_holds"] = exact <= t.holder_442 * (1 + 1e-12);
    if (!row["holder_333_holds"].get<bool>() || !row["holder_442_holds"].get<bool>())
      sink.fail("Holder bound exceeded in trial " + std::to_string(trial));
    sink.row(row);
  }
  return sink.status();
}

int cmd_audit_kollar(const Options& o) {
  const Field f = resolve_field(o);
  const Space s(f, 2);
  const Space s3(f, 3);
  Sink sink(o, "json");
  const MotionUniverse uni(s, MotionClass::SFPrime);
  Lcg master(o.seed);
  for (std::uint64_t trial = 0; trial < o.trials; ++trial) {
    Lcg rng(master.next());
    const auto u = random_set(s, rng, pick(o.u_size, std::min<std::uint64_t>(s.size(), 8), rng));
    const PairLines lines = lines_of_pairs(s, u);
    std::vector<Point> pts;
    for (const auto& m : random_motions(uni, rng, pick(o.r_size, std::min<std::uint64_t>(uni.size(), 300), rng)))
      pts.push_back(motion_point(s, m));
    sink.report(kollar_check(s3, pts, lines.lines, o.workers));
  }
  return sink.status();
}

int cmd_audit_plane(const Options& o) {
  const Field f = resolve_field(o);
  const Space s(f, 2);
  Sink sink(o, "json");
  Lcg master(o.seed);
  for (std::uint64_t trial = 0; trial < o.trials; ++trial) {
    Lcg rng(master.next());
    const auto u = random_set(s, rng, pick(o.u_size, std::min<std::uint64_t>(s.size(), 8), rng));
    sink.report(plane_richness_report(s, u, o.workers));
  }
  return sink.status();
}

int cmd_audit_fur(const Options& o) {
  const Field f = resolve_field(o);
  const Space s(f, o.d);
  Sink sink(o, "json");
  const MotionUniverse uni(s, motion_class_from_string(o.universe));
  Lcg master(o.seed);
  for (std::uint64_t trial = 0; trial < o.trials; ++trial) {
    Lcg rng(master.next());
    const auto a = random_set(s, rng, pick(o.u_size, std::min<std::uint64_t>(s.size(), 30), rng));
    const auto r = random_motions(uni, rng, pick(o.r_size, uni.size(), rng));
    for (const auto& rep : furstenberg_image(s, a, r, o.workers).audits) sink.report(rep);
  }
  return sink.status();
}

// ---------------------------------------------------------------- tables

int cmd_census(const Options& o, bool format_given) {
  const Field f = resolve_field(o);
  const Space s(f, o.d);
  Options local = o;
  if (!format_given) local.format = "csv";
  Sink sink(local, "csv");
  Lcg rng(o.seed);
  std::vector<std::vector<Point>> sets;
  const auto a = point_set(s, o, rng);
  for (int i = 0; i <= o.k; ++i) sets.push_back(a);
  ClassCensus census;
  if (o.lambda >= 0) {
    if (o.k != 2) throw CLI::ValidationError("--lambda", "the fixed-edge census needs --k 2");
    census = count_classes_containing(s, a, a, a, f.elem(static_cast<std::uint64_t>(o.lambda)), o.workers);
  } else {
    census = count_classes(s, sets, o.workers);
  }
  if (sink.csv()) {
    sink.raw(census.to_csv());
  } else {
    ojson j;
    j["q"] = f.q();
    j["d"] = o.d;
    j["k"] = o.k;
    j["points"] = a.size();
    if (o.lambda >= 0) j["lambda"] = o.lambda;
    j["total"] = census.total();
    j["classes"] = census.class_count();
    j["nondegenerate_classes"] = census.nondegenerate_classes();
    j["degenerate_classes"] = census.degenerate_classes();
    j["degenerate_tuples"] = census.degenerate_count();
    j["pair_collisions"] = wide_json(census.pair_collisions());
    if (o.unordered) j["unordered_classes"] = unordered_class_count(census, sets);
    sink.row(j);
  }
  const Wide t = census.total();
  if (t * t > static_cast<Wide>(census.class_count()) * census.pair_collisions())
    sink.fail("census violates (sum |C|)^2 <= #classes * sum |C|^2");
  return sink.status();
}

int cmd_mu_table(const Options& o, bool format_given) {
  const Field f = resolve_field(o);
  const Space s(f, 2);
  Options local = o;
  if (!format_given) local.format = "csv";
  Sink sink(local, "csv");
  std::vector<std::optional<Point>> ends(f.q());
  for (const auto& y : s.all_points())
    if (!ends[s.norm(y).v]) ends[s.norm(y).v] = y;
  for (std::uint32_t l1 = 1; l1 < f.q(); ++l1)
    for (std::uint32_t l2 = 0; l2 < f.q(); ++l2)
      for (std::uint32_t l3 = 0; l3 < f.q(); ++l3) {
        const auto ext = extend_segment(s, s.zero(), *ends[l1], f.elem(l2), f.elem(l3));
        ojson row;
        row["l1"] = l1;
        row["l2"] = l2;
        row["l3"] = l3;
        row["discriminant"] = ext.discriminant.v;
        row["mu"] = ext.mu;
        row["witnesses"] = ext.witnesses.size();
        if (static_cast<int>(ext.witnesses.size()) != ext.mu)
          sink.fail("witness count differs from mu at (" + std::to_string(l1) + "," + std::to_string(l2) + "," +
                    std::to_string(l3) + ")");
        sink.row(row);
      }
  return sink.status();
}

int cmd_lines(const Options& o, bool format_given) {
  const Field f = resolve_field(o);
  const Space s(f, 2);
  Options local = o;
  if (!format_given) local.format = "csv";
  Sink sink(local, "csv");
  Lcg rng(o.seed);
  Options sized = o;
  if (o.set == "full-plane") sized.set = "random";
  const auto u = point_set(s, sized, rng);
  for (const auto& a : u)
    for (const auto& b : u) {
      ojson row;
      row["u"] = format_point(a);
      row["v"] = format_point(b);
      row["line"] = format_line(line_from_pair(s, a, b));
      sink.row(row);
    }
  return sink.status();
}

// ---------------------------------------------------------------- sharpness

int emit_recipe(const Options& o, const SharpnessRecipe& recipe) {
  Sink sink(o, "json");
  const ojson result = run_recipe(recipe, o.workers);
  const ojson& res = result["result"];
  if (recipe.kind == "sec3_cyclic") {
    if (res["A"] != res["expected_A"]) sink.fail("sec3 size identity |A| = (|X|+1)k");
    if (res["max_distance_set"].get<std::uint64_t>() > res["distance_bound"].get<std::uint64_t>())
      sink.fail("sec3 distance set exceeds 2k");
  } else if (recipe.kind == "fur1_strip") {
    if (!res["contained"].get<bool>()) sink.fail("strip image leaves F_q^(d-1) x (X+X)");
    if (res["progression"].get<bool>() && !res["within_twice"].get<bool>()) sink.fail("strip image exceeds 2|A|");
  } else if (recipe.kind == "inci_subfield" && sink.ceilings()) {
    if (const auto e = sink.ceilings()->find("SUB")) {
      const double ratio = res["ratio"].get<double>();
      if (ratio < e->observed_min / kHeadroom || ratio > e->ceiling) sink.fail("subfield ratio outside the frozen band");
    }
  }
  if (sink.csv()) {
    ojson flat;
    for (const auto& [k, v] : res.items())
      if (v.is_primitive()) flat[k] = v;
    sink.row(flat);
  } else {
    sink.row(result);
  }
  return sink.status();
}

int cmd_sharpness(const Options& o, const std::string& kind) {
  SharpnessRecipe recipe;
  recipe.seed = o.seed;
  recipe.d = o.d;
  recipe.x = parse_list(o.x, "--X");
  if (kind == "sec3") {
    recipe.kind = "sec3_cyclic";
    recipe.p = o.p ? o.p : 3;
    recipe.r = 3;
    recipe.k = o.sub_k;
  } else if (kind == "fur1") {
    const Field f = resolve_field(o);
    recipe.kind = "fur1_strip";
    recipe.p = f.p();
    recipe.r = f.r();
    if (recipe.x.empty()) recipe.x = {0, 1, 2};
  } else if (kind == "subfield") {
    recipe.kind = "inci_subfield";
    recipe.p = o.p ? o.p : 3;
    recipe.r = 3;
  } else {
    std::ifstream in(o.recipe);
    if (!in) throw CLI::ValidationError("--recipe", "cannot open '" + o.recipe + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Parse, std::string("recipe is not JSON: ") + e.what());
    }
    recipe = recipe_from_json(j);
  }
  return emit_recipe(o, recipe);
}

int cmd_calibrate(const Options& o) {
  CalibrationConfig cfg;
  cfg.seed = o.seed;
  cfg.instances = o.instances;
  cfg.cube_instances = o.cube_instances;
  cfg.workers = o.workers;
  cfg.qs = parse_list(o.qs, "--qs");
  const Calibration cal = calibrate(cfg);
  Sink sink(o, "json");
  sink.raw(cal.text);
  return sink.status();
}

// ---------------------------------------------------------------- wiring

const char* kFooter =
    "Randomness: every seeded choice comes from a 64-bit LCG,\n"
    "  state <- 6364136223846793005 * state + 1442695040888963407 (mod 2^64),\n"
    "  below(n) = ((state >> 32) * n) >> 32, subsets by partial Fisher-Yates (sorted).\n"
    "Trial i uses a fresh generator seeded with the i-th output of LCG(--seed).\n"
    "Exit status: 0 success, 1 frozen-ceiling regression, 2 usage error.";

struct Cli {
  CLI::App app{"Exact incidence, distance and congruence experiments over F_q^d", "fqgeom"};
  Options o;
  std::string manifest;
  std::string save_manifest;
  std::function<int()> action;
  std::vector<std::string> command;

  void common(CLI::App* sub, bool field = true) {
    if (field) {
      sub->add_option("--q", o.q, "field size q = p^r");
      sub->add_option("--p", o.p, "characteristic p");
      sub->add_option("--r", o.r, "degree r (with --p)")->check(CLI::Range(1, 3));
      sub->add_option("--d", o.d, "dimension")->check(CLI::Range(1, 4));
    }
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--workers", o.workers, "worker threads (output does not depend on it)")->check(CLI::Range(1u, 256u));
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", o.output, "write here instead of stdout");
    sub->add_option("--ceilings", o.ceilings, "frozen ceiling file; exceeding it exits 1");
    sub->add_flag("--force", o.force, "lift the size guardrails");
  }

  void trials(CLI::App* sub) {
    sub->add_option("--trials", o.trials, "seeded instances");
    sub->add_option("--u-size", o.u_size, "|U| (0 = seeded)");
    sub->add_option("--v-size", o.v_size, "|V| (0 = seeded)");
    sub->add_option("--r-size", o.r_size, "|R| (0 = seeded)");
  }

  template <class F>
  void on(CLI::App* sub, std::vector<std::string> path, F&& f) {
    sub->callback([this, sub, path, f]() mutable {
      command = path;
      action = [this, sub, f]() mutable { return f(sub); };
    });
  }

  Cli() {
    app.footer(kFooter);
    app.require_subcommand(1);
    app.add_option("--manifest", manifest, "replay a JSON manifest (CLI run or sharpness recipe)");
    app.add_option("--save-manifest", save_manifest, "write the manifest of this run");

    auto* field = app.add_subcommand("field", "field parameters, or --table for every element");
    common(field);
    field->add_flag("--table", o.table, "one row per element");
    on(field, {"field"}, [this](CLI::App*) { return cmd_field(o); });

    auto* group = app.add_subcommand("group", "O(d,q) order and generators");
    common(group);
    group->add_flag("--list", o.list, "one row per matrix");
    on(group, {"group"}, [this](CLI::App*) { return cmd_group(o); });

    auto* audit = app.add_subcommand("audit", "seeded audits producing AuditReports");
    audit->require_subcommand(1);
    auto* inc = audit->add_subcommand("incidence", "point-motion incidence bounds");
    common(inc);
    trials(inc);
    inc->add_option("--theorem", o.theorem, "T2.1, T2.3(1), T2.3(2), T2.4, T2.6, T8.2 or all");
    on(inc, {"audit", "incidence"}, [this](CLI::App*) { return cmd_audit_incidence(o); });
    auto* dist = audit->add_subcommand("distance", "distance counts against the explicit bound");
    common(dist);
    trials(dist);
    dist->add_option("--lambda", o.lambda, "distance (default: seeded nonzero)");
    on(dist, {"audit", "distance"}, [this](CLI::App*) { return cmd_audit_distance(o); });
    auto* mom = audit->add_subcommand("moment", "moment sums of i(r) over the full group");
    common(mom);
    trials(mom);
    mom->add_option("--t", o.t, "moment order")->check(CLI::Range(1u, 8u));
    on(mom, {"audit", "moment"}, [this](CLI::App*) { return cmd_audit_moment(o); });
    auto* tri = audit->add_subcommand("triple", "triple correlation against two Holder bounds");
    common(tri);
    trials(tri);
    tri->add_option("--universe", o.universe, "general, SO2, translation, SF, SF_prime");
    on(tri, {"audit", "triple"}, [this](CLI::App*) { return cmd_audit_triple(o); });
    auto* kol = audit->add_subcommand("kollar", "point-line incidences in F_q^3");
    common(kol);
    trials(kol);
    on(kol, {"audit", "kollar"}, [this](CLI::App*) { return cmd_audit_kollar(o); });
    auto* pl = audit->add_subcommand("plane", "most lines of L(U x U) in one plane");
    common(pl);
    trials(pl);
    on(pl, {"audit", "plane"}, [this](CLI::App*) { return cmd_audit_plane(o); });
    auto* fur = audit->add_subcommand("fur", "Furstenberg image lower bounds");
    common(fur);
    trials(fur);
    fur->add_option("--universe", o.universe, "general, SO2, translation, SF, SF_prime");
    on(fur, {"audit", "fur"}, [this](CLI::App*) { return cmd_audit_fur(o); });

    auto* census = app.add_subcommand("census", "congruence classes of k-simplices");
    common(census);
    census->add_option("--k", o.k, "simplex dimension")->check(CLI::Range(1, 3));
    census->add_option("--set", o.set, "full-plane, random, or a point file");
    census->add_option("--size", o.size, "size for --set random");
    census->add_option("--lambda", o.lambda, "restrict the first edge to this norm (k = 2)");
    census->add_flag("--unordered", o.unordered, "also count classes up to vertex order");
    on(census, {"census"}, [this](CLI::App* sub) { return cmd_census(o, sub->count("--format") > 0); });

    auto* mu = app.add_subcommand("mu-table", "apex counts for every (l1 != 0, l2, l3)");
    common(mu);
    on(mu, {"mu-table"}, [this](CLI::App* sub) { return cmd_mu_table(o, sub->count("--format") > 0); });

    auto* lines = app.add_subcommand("lines", "lines of F_q^3 encoding the pairs of U x U");
    common(lines);
    lines->add_option("--set", o.set, "random (default), or a point file");
    lines->add_option("--size", o.size, "size for --set random");
    on(lines, {"lines"}, [this](CLI::App* sub) { return cmd_lines(o, sub->count("--format") > 0); });

    auto* sharp = app.add_subcommand("sharpness", "sharpness constructions");
    sharp->require_subcommand(1);
    auto* sec3 = sharp->add_subcommand("sec3", "cyclic orbits over F_{p^3}");
    common(sec3);
    sec3->add_option("--k", o.sub_k, "order of theta, dividing q+1");
    sec3->add_option("--X", o.x, "comma-separated scalars");
    on(sec3, {"sharpness", "sec3"}, [this](CLI::App*) { return cmd_sharpness(o, "sec3"); });
    auto* fur1 = sharp->add_subcommand("fur1", "strip construction");
    common(fur1);
    fur1->add_option("--X", o.x, "comma-separated last coordinates (default 0,1,2)");
    on(fur1, {"sharpness", "fur1"}, [this](CLI::App*) { return cmd_sharpness(o, "fur1"); });
    auto* sub = sharp->add_subcommand("subfield", "subfield incidence instance");
    common(sub);
    on(sub, {"sharpness", "subfield"}, [this](CLI::App*) { return cmd_sharpness(o, "subfield"); });
    auto* replay = sharp->add_subcommand("replay", "run a JSON recipe {kind, p, r, d, k, X, seed}");
    common(replay, false);
    replay->add_option("--recipe", o.recipe, "recipe file")->required();
    on(replay, {"sharpness", "replay"}, [this](CLI::App*) { return cmd_sharpness(o, "replay"); });

    auto* cal = app.add_subcommand("calibrate", "rebuild the frozen ceiling file");
    common(cal, false);
    cal->add_option("--instances", o.instances, "plane instances per q");
    cal->add_option("--cube-instances", o.cube_instances, "extra d = 3 instances at q = 3");
    cal->add_option("--qs", o.qs, "comma-separated primes");
    on(cal, {"calibrate"}, [this](CLI::App*) { return cmd_calibrate(o); });
  }

  // The given options of every parsed subcommand, in declaration order.
  ojson describe() const {
    ojson j;
    std::string cmd;
    for (const auto& c : command) cmd += (cmd.empty() ? "" : " ") + c;
    j["command"] = cmd;
    ojson opts = ojson::object();
    const CLI::App* cur = &app;
    for (const auto& name : command) {
      cur = cur->get_subcommand(name);
      for (const CLI::Option* opt : cur->get_options()) {
        if (opt->count() == 0 || opt->get_name() == "--help") continue;
        const auto res = opt->results();
        opts[opt->get_name()] = opt->get_type_size() == 0 ? ojson(true) : ojson(res.empty() ? "" : res.back());
      }
    }
    j["options"] = opts;
    return j;
  }
};

std::vector<std::string> manifest_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--manifest", "cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ValidationError("--manifest", std::string("not JSON: ") + e.what());
  }
  std::vector<std::string> args;
  if (j.contains("kind")) return {"sharpness", "replay", "--recipe", path};
  if (!j.contains("command") || !j["command"].is_string())
    throw CLI::ValidationError("--manifest", "field 'command' is missing");
  std::stringstream ss(j["command"].get<std::string>());
  for (std::string w; ss >> w;) args.push_back(w);
  if (j.contains("options")) {
    if (!j["options"].is_object()) throw CLI::ValidationError("--manifest", "field 'options' must be an object");
    for (const auto& [k, v] : j["options"].items()) {
      if (v.is_boolean()) {
        if (v.get<bool>()) args.push_back(k);
      } else {
        args.push_back(k);
        args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    }
  }
  return args;
}

int run(std::vector<std::string> args) {
  Cli cli;
  std::vector<char*> argv;
  args.insert(args.begin(), "fqgeom");
  for (auto& a : args) argv.push_back(a.data());
  try {
    cli.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (!cli.manifest.empty() && cli.command.empty()) {
      auto replay = manifest_args(cli.manifest);
      return run(replay);
    }
    return cli.app.exit(e) == 0 ? kOk : kUsage;
  }
  if (!cli.manifest.empty()) return run(manifest_args(cli.manifest));
  if (cli.o.force) std::fprintf(stderr, "warning: --force lifts the size guardrails; runs may be very large\n");
  if (!cli.save_manifest.empty()) {
    std::ofstream out(cli.save_manifest);
    out << cli.describe().dump(2) << '\n';
  }
  return cli.action();
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const CLI::Error& e) {
    std::fprintf(stderr, "usage error: %s: %s\n", e.get_name().c_str(), e.what());
    return kUsage;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
}
