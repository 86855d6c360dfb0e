#include "fqgeom/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fqgeom/errors.hpp"
#include "fqgeom/incidence.hpp"
#include "fqgeom/parallel.hpp"
#include "fqgeom/simplex.hpp"

namespace fqgeom {

namespace {

SideCondition cond(std::string text, bool ok) { return SideCondition{std::move(text), ok}; }

AuditReport fur_report(const Space& s, const std::string& id, const FurstenbergInstance& inst, double predicted) {
  AuditReport rep;
  rep.theorem = id;
  rep.q = s.field().q();
  rep.d = s.dim();
  rep.sizes = {{"A", inst.a.size()}, {"R", inst.r.size()}, {"image", inst.image.size()}};
  rep.kind = BoundKind::Lower;
  rep.lhs = inst.image.size();
  rep.main_term = predicted;
  rep.error_term_unit = 0.0;
  return rep;
}

std::vector<AuditReport> fur_audits(const Space& s, const FurstenbergInstance& inst) {
  const Field& f = s.field();
  const int d = s.dim();
  const double q = f.q();
  const double qd = std::pow(q, d);
  const double na = static_cast<double>(inst.a.size());
  const double nr = static_cast<double>(inst.r.size());
  const double o_dm1 = static_cast<double>(orthogonal_order(f, d - 1));
  const bool residue = (d >= 3 && d % 2 == 1) || (d % 4 == 2 && f.q_mod_4() == 3);
  const std::string residue_text = "(d>=3 odd) or (d=2 mod 4 and q=3 mod 4)";
  const Wide a2 = ipow(inst.a.size(), 2);
  const bool plane3 = d == 2 && f.q_mod_4() == 3;

  std::vector<AuditReport> out;
  out.push_back(fur_report(s, "T1.8", inst, std::min(qd, na * nr / (qd * o_dm1))));

  AuditReport t91 = fur_report(s, "T1.9(1)", inst, std::min(qd, na * nr / (std::pow(q, d - 1) * o_dm1)));
  t91.side_conditions = {cond(residue_text, residue), cond("|A| < q^((d-1)/2)", a2 < ipow(f.q(), static_cast<unsigned>(d - 1)))};
  out.push_back(t91);

  AuditReport t92 = fur_report(s, "T1.9(2)", inst, std::min(qd, nr / (std::pow(q, (d - 1) / 2.0) * o_dm1)));
  t92.side_conditions = {cond(residue_text, residue),
                         cond("q^((d-1)/2) <= |A| <= q^((d+1)/2)",
                              ipow(f.q(), static_cast<unsigned>(d - 1)) <= a2 && a2 <= ipow(f.q(), static_cast<unsigned>(d + 1)))};
  out.push_back(t92);

  AuditReport t10 = fur_report(s, "T1.10", inst, std::min(q * q, std::sqrt(na) * nr / q));
  t10.side_conditions = {cond("d=2", d == 2), cond("q=3 mod 4", f.q_mod_4() == 3)};
  out.push_back(t10);

  AuditReport t11 = fur_report(s, "T1.11", inst, std::pow(nr, 0.6));
  const bool sf = std::all_of(inst.r.begin(), inst.r.end(),
                              [&](const RigidMotion& m) { return in_class(s, m, MotionClass::SFPrime); });
  // 2|R|^(1/5) < |A| < |R|^(3/5), compared as |A|^5 > 32|R| and |A|^5 < |R|^3.
  const Wide a5 = ipow(inst.a.size(), 5);
  t11.side_conditions = {cond("d=2 and q=3 mod 4", plane3), cond("R in SF'", sf),
                         cond("2|R|^(1/5) < |A| < |R|^(3/5)",
                              a5 > static_cast<Wide>(32) * inst.r.size() && a5 < ipow(inst.r.size(), 3))};
  out.push_back(t11);

  for (auto& rep : out) rep.finalize();
  return out;
}

}  // namespace

FurstenbergInstance furstenberg_image(const Space& s, std::vector<Point> a, std::vector<RigidMotion> r,
                                      unsigned workers) {
  for (const auto& x : a) s.check(x);
  for (const auto& m : r) {
    s.check(m.z);
    if (m.g.m.dim != s.dim()) throw Error(ErrorKind::DimensionMismatch, "motion dimension differs from the space");
  }
  normalize_set(a);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());

  using Bits = std::vector<std::uint8_t>;
  const Bits hit = parallel_reduce<Bits>(
      r.size(), workers,
      [&](std::uint64_t lo, std::uint64_t hi) {
        Bits bits(s.size(), 0);
        for (std::uint64_t i = lo; i < hi; ++i)
          for (const auto& x : a) bits[s.encode(apply(s, r[i], x))] = 1;
        return bits;
      },
      [](Bits x, Bits y) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] |= y[i];
        return x;
      });

  FurstenbergInstance inst;
  inst.a = std::move(a);
  inst.r = std::move(r);
  for (std::uint64_t code = 0; code < hit.size(); ++code)
    if (hit[code]) inst.image.push_back(s.decode(code));
  std::sort(inst.image.begin(), inst.image.end());
  inst.audits = fur_audits(s, inst);
  return inst;
}

OrthoMatrix embed_orthogonal(const OrthoMatrix& g) {
  OrthoMatrix out;
  const int n = g.m.dim;
  out.m = identity_matrix(n + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.m(i, j) = g.m(i, j);
  out.det = g.det;
  return out;
}

bool is_progression(const Field& f, std::vector<Elem> x) {
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  if (x.size() <= 2) return true;
  for (std::uint32_t dv = 1; dv < f.q(); ++dv) {
    const Elem delta = f.elem(dv);
    for (const Elem start : x) {
      std::vector<Elem> ap;
      Elem cur = start;
      for (std::size_t i = 0; i < x.size(); ++i, cur = f.add(cur, delta)) ap.push_back(cur);
      std::sort(ap.begin(), ap.end());
      if (ap == x) return true;
    }
  }
  return false;
}

Fur1Strip build_fur1_strip(const Space& s, std::vector<Elem> x, unsigned workers) {
  const int d = s.dim();
  if (d < 2) throw Error(ErrorKind::BadParameters, "the strip construction needs d >= 2");
  if (d > 3) throw Error(ErrorKind::TooLarge, "O(d-1) is enumerated only for d <= 3");
  const Field& f = s.field();
  for (const Elem e : x) f.elem(e.v);
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  if (x.empty()) throw Error(ErrorKind::BadParameters, "X must be nonempty");

  const Space base(f, d - 1);
  std::vector<Point> a;
  for (const auto& y : base.all_points())
    for (const Elem t : x) {
      Point pt = s.zero();
      for (int i = 0; i < d - 1; ++i) pt[i] = y[i];
      pt[d - 1] = t;
      a.push_back(pt);
    }
  const Limits& lim = f.limits();
  const Wide work = static_cast<Wide>(orthogonal_order(f, d - 1)) * a.size() * a.size();
  if (!lim.force && work > lim.max_tuples) throw Error(ErrorKind::TooLarge, "strip image exceeds the guardrail");

  std::vector<RigidMotion> r;
  for (const auto& g : enumerate_orthogonal(f, d - 1))
    for (const auto& z : a) r.push_back(RigidMotion{embed_orthogonal(g), z});

  Fur1Strip out;
  out.x = x;
  std::set<Elem> sums;
  for (const Elem u : x)
    for (const Elem w : x) sums.insert(f.add(u, w));
  out.sumset.assign(sums.begin(), sums.end());
  out.instance = furstenberg_image(s, std::move(a), std::move(r), workers);
  out.contained = std::all_of(out.instance.image.begin(), out.instance.image.end(),
                              [&](const Point& pt) { return sums.count(pt[d - 1]) > 0; });
  out.progression = is_progression(f, x);
  out.within_twice = out.instance.image.size() <= 2 * out.instance.a.size();
  return out;
}

Sec3Cyclic build_sec3_cyclic(std::uint32_t p, std::uint64_t k, const std::vector<std::uint32_t>& x,
                             unsigned workers) {
  if (!is_prime(p) || p % 4 != 3) throw Error(ErrorKind::BadParameters, "p must be a prime with p = 3 mod 4");
  const Field f = Field::make(p, 3);
  const std::uint64_t order = static_cast<std::uint64_t>(f.q()) + 1;
  if (k == 0 || order % k != 0)
    throw Error(ErrorKind::BadParameters, "k must divide q+1 = " + std::to_string(order));
  std::vector<Elem> xs;
  for (std::uint32_t t : x) {
    if (t >= f.q()) throw Error(ErrorKind::BadParameters, "X element " + std::to_string(t) + " is not in F_q");
    xs.push_back(Elem{t});
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const Elem minus_one = f.neg(f.one());
  for (const Elem t : xs) {
    if (t == f.zero() || t == f.one()) throw Error(ErrorKind::BadParameters, "X must avoid 0 and 1");
    if (std::binary_search(xs.begin(), xs.end(), f.neg(t)))
      throw Error(ErrorKind::BadParameters, "X must not contain both t and -t (t = " + std::to_string(t.v) + ")");
    if (t == minus_one && k % 2 == 0)
      throw Error(ErrorKind::BadParameters, "-1 in X with k even repeats the points of A_1");
  }

  const Space s(f, 2);
  Sec3Cyclic out;
  out.p = p;
  out.k = k;
  out.x = xs;
  for (std::uint64_t code = 0; code < s.size(); ++code)
    if (s.norm(s.decode(code)) == f.one()) {
      out.v = s.decode(code);
      break;
    }
  const OrthoMatrix gen = so2_generator(f);
  Matrix theta = identity_matrix(2);
  for (std::uint64_t i = 0; i < order / k; ++i) theta = mat_mul(f, theta, gen.m);
  out.theta = OrthoMatrix{theta, 1};

  std::vector<Point> base;
  Point cur = out.v;
  for (std::uint64_t i = 0; i < k; ++i, cur = mat_vec(s, theta, cur)) base.push_back(cur);
  out.orbits.push_back(base);
  for (const Elem t : xs) {
    std::vector<Point> orbit;
    for (const auto& b : base) orbit.push_back(s.scale(t, b));
    out.orbits.push_back(orbit);
  }
  for (const auto& o : out.orbits) out.a.insert(out.a.end(), o.begin(), o.end());
  normalize_set(out.a);

  std::set<Elem> all;
  for (const auto& o1 : out.orbits)
    for (const auto& o2 : out.orbits) {
      std::set<Elem> dist;
      for (const auto& y : o1)
        for (const auto& z : o2) dist.insert(s.norm(s.sub(y, z)));
      out.max_distance_set = std::max<std::uint64_t>(out.max_distance_set, dist.size());
      out.distance_set_total += dist.size();
      all.insert(dist.begin(), dist.end());
    }
  out.distinct_distances = all.size();
  out.classes = count_classes(s, {{s.zero()}, out.a, out.a}, workers).class_count();
  return out;
}

InciSubfield build_inci_subfield(std::uint32_t p, int u_size, unsigned workers) {
  if (!is_prime(p) || p % 4 != 3) throw Error(ErrorKind::BadParameters, "p must be a prime with p = 3 mod 4");
  if (p >= 7) throw Error(ErrorKind::TooLarge, "the subfield instance is run at p = 3 only");
  const Field fp = Field::make(p, 1);
  const Field f = Field::make(p, 3);
  const Space s(f, 2);
  if (u_size < 0) u_size = static_cast<int>(std::lround(std::pow(static_cast<double>(p), 1.5)));
  if (static_cast<std::uint64_t>(u_size) > static_cast<std::uint64_t>(p) * p)
    throw Error(ErrorKind::BadParameters, "U must fit in the subfield plane");

  // Constant polynomials carry the same index in F_p and F_{p^3}.
  std::vector<Point> sub;
  for (std::uint64_t code = 0; code < s.size(); ++code) {
    const Point x = s.decode(code);
    if (f.in_prime_subfield(x[0]) && f.in_prime_subfield(x[1])) sub.push_back(x);
  }
  InciSubfield out;
  out.p = p;
  out.u.assign(sub.begin(), sub.begin() + u_size);
  for (const auto& g : enumerate_orthogonal(fp, 2)) {
    const OrthoMatrix lifted = make_ortho(f, g.m);
    for (const auto& z : sub) out.r.push_back(RigidMotion{lifted, z});
  }
  const PairSet pairs(s, out.u, out.u);
  out.incidences = incidence_count(s, pairs, out.r, workers);
  const double np = static_cast<double>(pairs.size());
  out.ratio = np > 0 ? static_cast<double>(out.incidences) / (np * std::cbrt(static_cast<double>(out.r.size()))) : 0.0;
  return out;
}

namespace {

nlohmann::ordered_json elems(const std::vector<Elem>& v) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const Elem e : v) j.push_back(e.v);
  return j;
}

nlohmann::ordered_json point_json(const Point& x) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (int i = 0; i < x.dim; ++i) j.push_back(x[i].v);
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const SharpnessRecipe& recipe) {
  nlohmann::ordered_json j;
  j["kind"] = recipe.kind;
  j["p"] = recipe.p;
  j["r"] = recipe.r;
  j["d"] = recipe.d;
  j["k"] = recipe.k;
  j["X"] = recipe.x;
  j["seed"] = recipe.seed;
  return j;
}

SharpnessRecipe recipe_from_json(const nlohmann::json& j) {
  SharpnessRecipe r;
  auto field = [&](const char* name, auto& dst) {
    if (!j.contains(name)) return;
    try {
      j.at(name).get_to(dst);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::Parse, std::string("recipe field '") + name + "' has the wrong type");
    }
  };
  if (!j.is_object()) throw Error(ErrorKind::Parse, "recipe must be a JSON object");
  if (!j.contains("kind")) throw Error(ErrorKind::Parse, "recipe field 'kind' is missing");
  field("kind", r.kind);
  field("p", r.p);
  field("r", r.r);
  field("d", r.d);
  field("k", r.k);
  field("X", r.x);
  field("seed", r.seed);
  if (r.kind != "sec3_cyclic" && r.kind != "fur1_strip" && r.kind != "inci_subfield")
    throw Error(ErrorKind::Parse, "recipe field 'kind' must be sec3_cyclic, fur1_strip or inci_subfield");
  return r;
}

nlohmann::ordered_json to_json(const Fur1Strip& v) {
  nlohmann::ordered_json j;
  j["X"] = elems(v.x);
  j["A"] = v.instance.a.size();
  j["R"] = v.instance.r.size();
  j["image"] = v.instance.image.size();
  j["sumset"] = elems(v.sumset);
  j["contained"] = v.contained;
  j["progression"] = v.progression;
  j["within_twice"] = v.within_twice;
  nlohmann::ordered_json audits = nlohmann::ordered_json::array();
  for (const auto& a : v.instance.audits) audits.push_back(to_json(a));
  j["audits"] = audits;
  return j;
}

nlohmann::ordered_json to_json(const Sec3Cyclic& v) {
  nlohmann::ordered_json j;
  j["p"] = v.p;
  j["q"] = static_cast<std::uint64_t>(v.p) * v.p * v.p;
  j["k"] = v.k;
  j["X"] = elems(v.x);
  j["v"] = point_json(v.v);
  j["A"] = v.a.size();
  j["expected_A"] = (v.x.size() + 1) * v.k;
  j["max_distance_set"] = v.max_distance_set;
  j["distance_bound"] = 2 * v.k;
  j["distance_set_total"] = v.distance_set_total;
  j["distinct_distances"] = v.distinct_distances;
  j["classes"] = v.classes;
  const double q = static_cast<double>(v.p) * v.p * v.p;
  j["classes_over_q3"] = static_cast<double>(v.classes) / (q * q * q);
  return j;
}

nlohmann::ordered_json to_json(const InciSubfield& v) {
  nlohmann::ordered_json j;
  j["p"] = v.p;
  j["q"] = static_cast<std::uint64_t>(v.p) * v.p * v.p;
  j["U"] = v.u.size();
  j["P"] = v.u.size() * v.u.size();
  j["R"] = v.r.size();
  j["incidences"] = v.incidences;
  j["ratio"] = v.ratio;
  return j;
}

nlohmann::ordered_json run_recipe(const SharpnessRecipe& recipe, unsigned workers) {
  nlohmann::ordered_json out;
  out["recipe"] = to_json(recipe);
  if (recipe.kind == "sec3_cyclic") {
    out["result"] = to_json(build_sec3_cyclic(recipe.p, recipe.k, recipe.x, workers));
  } else if (recipe.kind == "fur1_strip") {
    const Space s(Field::make(recipe.p, recipe.r), recipe.d);
    std::vector<Elem> xs;
    for (auto t : recipe.x) xs.push_back(s.field().elem(t));
    out["result"] = to_json(build_fur1_strip(s, xs, workers));
  } else if (recipe.kind == "inci_subfield") {
    out["result"] = to_json(build_inci_subfield(recipe.p, -1, workers));
  } else {
    throw Error(ErrorKind::BadParameters, "unknown recipe kind " + recipe.kind);
  }
  return out;
}

}  // namespace fqgeom
