#include <cmath>
#include <set>

#include "doctest.h"
#include "fqgeom/constructions.hpp"
#include "fqgeom/errors.hpp"
#include "fqgeom/incidence.hpp"
#include "fqgeom/rng.hpp"

using namespace fqgeom;

namespace {

std::vector<Point> random_set(const Space& s, Lcg& rng, std::uint64_t m) {
  std::vector<Point> out;
  for (auto c : rng.sample(s.size(), m)) out.push_back(s.decode(c));
  return out;
}

std::vector<RigidMotion> all_motions(const Space& s, MotionClass tag = MotionClass::General) {
  const MotionUniverse uni(s, tag);
  std::vector<RigidMotion> out;
  for (std::uint64_t i = 0; i < uni.size(); ++i) out.push_back(uni.motion(i));
  return out;
}

std::vector<Point> brute_image(const Space& s, const std::vector<Point>& a, const std::vector<RigidMotion>& r) {
  std::set<Point> img;
  for (const auto& m : r)
    for (const auto& x : a) img.insert(apply(s, m, x));
  return {img.begin(), img.end()};
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

const AuditReport& find(const FurstenbergInstance& inst, const std::string& id) {
  for (const auto& a : inst.audits)
    if (a.theorem == id) return a;
  FAIL("missing audit " << id);
  return inst.audits.front();
}

}  // namespace

TEST_CASE("furstenberg_image examples") {
  const Space s(Field::make(3, 1), 2);
  Lcg rng(1);
  auto a = random_set(s, rng, 4);
  normalize_set(a);
  const std::vector<RigidMotion> id{identity_motion(s)};
  CHECK(furstenberg_image(s, a, id).image == a);

  std::vector<RigidMotion> trans;
  for (const auto& z : s.all_points()) trans.push_back(RigidMotion{OrthoMatrix{identity_matrix(2), 1}, z});
  CHECK(furstenberg_image(s, {s.make({1, 2})}, trans).image == s.all_points());
  CHECK(furstenberg_image(s, {s.zero()}, all_motions(s)).image == s.all_points());

  CHECK(kind_of([&] { furstenberg_image(Space(s.field(), 3), a, id); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("furstenberg_image against brute force, monotone, worker independent") {
  Lcg rng(12);
  for (std::uint32_t p : {3u, 7u}) {
    const Space s(Field::make(p, 1), 2);
    const auto motions = all_motions(s);
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = random_set(s, rng, 1 + rng.below(6));
      std::vector<RigidMotion> r;
      for (auto i : rng.sample(motions.size(), 1 + rng.below(30))) r.push_back(motions[i]);
      const auto inst = furstenberg_image(s, a, r);
      REQUIRE(inst.image == brute_image(s, a, r));
      CHECK(inst.image.size() >= a.size());
      CHECK(furstenberg_image(s, a, r, 4).image == inst.image);

      auto a2 = a;
      a2.push_back(s.decode(rng.below(s.size())));
      auto r2 = r;
      r2.push_back(motions[rng.below(motions.size())]);
      const auto bigger = furstenberg_image(s, a2, r2);
      CHECK(std::includes(bigger.image.begin(), bigger.image.end(), inst.image.begin(), inst.image.end()));
    }
  }
}

TEST_CASE("furstenberg audits") {
  const Space s(Field::make(7, 1), 2);
  Lcg rng(3);
  const auto motions = all_motions(s, MotionClass::SFPrime);
  const auto a = random_set(s, rng, 5);
  std::vector<RigidMotion> r;
  for (auto i : rng.sample(motions.size(), 40)) r.push_back(motions[i]);
  const auto inst = furstenberg_image(s, a, r);
  REQUIRE(inst.audits.size() == 5);

  const double img = static_cast<double>(inst.image.size());
  const auto& t18 = find(inst, "T1.8");
  CHECK(t18.kind == BoundKind::Lower);
  CHECK(t18.main_term == doctest::Approx(std::min(49.0, 5.0 * 40.0 / (49.0 * 2.0))));
  CHECK(t18.c_star == doctest::Approx(t18.main_term / img));
  CHECK(t18.hypotheses_hold());

  const auto& t110 = find(inst, "T1.10");
  CHECK(t110.main_term == doctest::Approx(std::min(49.0, std::sqrt(5.0) * 40.0 / 7.0)));
  CHECK(t110.hypotheses_hold());

  // 2 * 40^(1/5) = 4.18 < 5 < 40^(3/5) = 9.14.
  const auto& t111 = find(inst, "T1.11");
  CHECK(t111.main_term == doctest::Approx(std::pow(40.0, 0.6)));
  CHECK(t111.hypotheses_hold());

  // |A| = 5 against q^(1/2) = 2.65 and q^(3/2) = 18.5.
  CHECK_FALSE(find(inst, "T1.9(1)").hypotheses_hold());
  CHECK(find(inst, "T1.9(2)").hypotheses_hold());

  r.push_back(identity_motion(s));
  CHECK_FALSE(find(furstenberg_image(s, a, r), "T1.11").hypotheses_hold());
}

TEST_CASE("is_progression") {
  const Field f = Field::make(7, 1);
  auto els = [&](std::initializer_list<int> v) {
    std::vector<Elem> out;
    for (int x : v) out.push_back(f.from_int(x));
    return out;
  };
  CHECK(is_progression(f, els({0, 1, 2})));
  CHECK(is_progression(f, els({1, 4, 0})));  // 4, 0, 3 ... step 3 from 1: 1, 4, 0
  CHECK_FALSE(is_progression(f, els({0, 1, 3})));
  CHECK(is_progression(f, els({5})));
  CHECK(is_progression(f, els({0, 1, 2, 3, 4, 5, 6})));
}

TEST_CASE("fur1 strip") {
  const Space s(Field::make(7, 1), 2);
  const Field& f = s.field();
  const auto zero = build_fur1_strip(s, {f.zero()});
  CHECK(zero.contained);
  CHECK(zero.instance.image.size() == 7);
  CHECK(zero.instance.a.size() == 7);
  for (const auto& x : zero.instance.image) CHECK(x[1] == f.zero());

  const auto three = build_fur1_strip(s, {f.from_int(0), f.from_int(1), f.from_int(2)});
  CHECK(three.instance.r.size() == 42);
  CHECK(three.contained);
  CHECK(three.progression);
  CHECK(three.within_twice);
  CHECK(three.instance.image == brute_image(s, three.instance.a, three.instance.r));
  for (const auto& x : three.instance.image) CHECK(x[1].v <= 4);

  std::vector<Elem> all;
  for (std::uint32_t t = 0; t < 7; ++t) all.push_back(f.elem(t));
  CHECK(build_fur1_strip(s, all).instance.image == s.all_points());

  const Space s3(Field::make(3, 1), 3);
  const auto cube = build_fur1_strip(s3, {s3.field().zero(), s3.field().one()});
  CHECK(cube.instance.r.size() == orthogonal_order(s3.field(), 2) * cube.instance.a.size());
  CHECK(cube.contained);
  CHECK(cube.within_twice);
  CHECK(cube.instance.image == brute_image(s3, cube.instance.a, cube.instance.r));

  // Not a progression: containment still holds exactly.
  const auto gap = build_fur1_strip(s, {f.from_int(0), f.from_int(1), f.from_int(3)});
  CHECK(gap.contained);
  CHECK_FALSE(gap.progression);
}

TEST_CASE("sec3 cyclic") {
  const auto base = build_sec3_cyclic(3, 7, {});
  CHECK(base.a.size() == 7);
  CHECK(base.max_distance_set <= 7);
  const Space s(Field::make(3, 3), 2);
  CHECK(s.norm(base.v) == s.field().one());
  CHECK(matrix_order(s.field(), base.theta.m) == 7);
  std::set<Elem> dist;
  for (const auto& x : base.a)
    for (const auto& y : base.a) dist.insert(s.norm(s.sub(x, y)));
  CHECK(base.distinct_distances == dist.size());
  CHECK(base.max_distance_set <= 2 * base.k);

  for (std::uint64_t k : {1u, 2u, 4u, 7u, 14u, 28u})
    for (const std::vector<std::uint32_t>& x : {std::vector<std::uint32_t>{}, {3}, {3, 4}, {5, 9, 10}}) {
      const auto c = build_sec3_cyclic(3, k, x);
      CHECK(c.a.size() == (x.size() + 1) * k);
      CHECK(c.max_distance_set <= 2 * k);
      CHECK(c.classes <= c.distance_set_total);
    }

  // k = q + 1 with a maximal sign-free X: A is a union of full circles.
  const Field& f = s.field();
  std::vector<std::uint32_t> xmax;
  for (std::uint32_t t = 2; t < 27; ++t) {
    const Elem e{t};
    if (e == f.neg(f.one())) continue;
    if (std::find(xmax.begin(), xmax.end(), f.neg(e).v) == xmax.end()) xmax.push_back(t);
  }
  CHECK(xmax.size() == 12);
  const auto circles = build_sec3_cyclic(3, 28, xmax);
  std::set<Elem> radii{f.one()};
  for (auto t : xmax) radii.insert(f.square(Elem{t}));
  std::vector<Point> expect;
  for (const auto& x : s.all_points())
    if (radii.count(s.norm(x))) expect.push_back(x);
  CHECK(circles.a == expect);

  CHECK(kind_of([] { build_sec3_cyclic(3, 5, {}); }) == ErrorKind::BadParameters);
  CHECK(kind_of([] { build_sec3_cyclic(5, 2, {}); }) == ErrorKind::BadParameters);
  CHECK(kind_of([] { build_sec3_cyclic(3, 7, {0}); }) == ErrorKind::BadParameters);
  CHECK(kind_of([] { build_sec3_cyclic(3, 7, {1}); }) == ErrorKind::BadParameters);
  const std::uint32_t minus3 = f.neg(Elem{3}).v;
  CHECK(kind_of([&] { build_sec3_cyclic(3, 7, {3, minus3}); }) == ErrorKind::BadParameters);
  const std::uint32_t minus1 = f.neg(f.one()).v;
  CHECK(kind_of([&] { build_sec3_cyclic(3, 4, {minus1}); }) == ErrorKind::BadParameters);
  CHECK(build_sec3_cyclic(3, 7, {minus1}).a.size() == 14);
}

TEST_CASE("subfield incidence instance") {
  const auto inst = build_inci_subfield(3);
  CHECK(inst.r.size() == 72);
  CHECK(inst.u.size() == 5);
  const Space s(Field::make(3, 3), 2);
  for (const auto& x : inst.u) CHECK((x[0].v < 3 && x[1].v < 3));
  // Reference count over every (pair, motion).
  std::uint64_t brute = 0;
  for (const auto& m : inst.r)
    for (const auto& u : inst.u)
      for (const auto& v : inst.u) brute += apply(s, m, u) == v ? 1 : 0;
  CHECK(inst.incidences == brute);
  CHECK(inst.incidences == 25 * orthogonal_order(Field::make(3, 1), 2));
  CHECK(inst.ratio == doctest::Approx(200.0 / (25.0 * std::cbrt(72.0))));

  CHECK(build_inci_subfield(3, 0).incidences == 0);
  CHECK(kind_of([] { build_inci_subfield(7); }) == ErrorKind::TooLarge);
  CHECK(kind_of([] { build_inci_subfield(5); }) == ErrorKind::BadParameters);
}

TEST_CASE("recipes") {
  SharpnessRecipe r;
  r.kind = "sec3_cyclic";
  r.p = 3;
  r.k = 7;
  r.x = {2, 4};
  const auto j = to_json(r);
  const auto back = recipe_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.kind == r.kind);
  CHECK(back.k == 7);
  CHECK(back.x == r.x);
  CHECK(run_recipe(r).dump() == run_recipe(back, 3).dump());
  CHECK(run_recipe(r)["result"]["A"] == 21);

  CHECK(kind_of([] { recipe_from_json(nlohmann::json::parse(R"({"p": 3})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { recipe_from_json(nlohmann::json::parse(R"({"kind": "nope"})")); }) == ErrorKind::Parse);
  CHECK(kind_of([] { recipe_from_json(nlohmann::json::parse(R"({"kind": "fur1_strip", "p": "x"})")); }) ==
        ErrorKind::Parse);
}
