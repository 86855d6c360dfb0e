#include <cmath>

#include "doctest.h"
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

std::vector<RigidMotion> all_motions(const MotionUniverse& uni) {
  std::vector<RigidMotion> out;
  for (std::uint64_t i = 0; i < uni.size(); ++i) out.push_back(uni.motion(i));
  return out;
}

// O(|R| |U| |V|) reference count.
std::uint64_t brute_incidences(const Space& s, const PairSet& p, const std::vector<RigidMotion>& r) {
  std::uint64_t n = 0;
  for (const auto& m : r)
    for (const auto& u : p.U())
      for (const auto& v : p.V()) n += apply(s, m, u) == v ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("incidence_count examples") {
  const Space s(Field::make(3, 1), 2);
  const auto all = all_motions(MotionUniverse(s, MotionClass::General));
  const auto plane = s.all_points();
  CHECK(incidence_count(s, PairSet(s, plane, plane), all) == 648);
  const PairSet origin(s, {s.zero()}, {s.zero()});
  CHECK(brute_incidences(s, origin, all) == 8);
  CHECK(incidence_count(s, origin, all) == 8);
  CHECK(incidence_count(s, origin, {}) == 0);
  const Space s3(s.field(), 3);
  CHECK_THROWS_AS(incidence_count(s3, PairSet(s3, {s3.zero()}, {s3.zero()}), all), Error);
}

TEST_CASE("incidence_count matches the cubic oracle") {
  Lcg rng(7);
  const Space s(Field::make(7, 1), 2);
  const MotionUniverse uni(s, MotionClass::General);
  for (int trial = 0; trial < 10; ++trial) {
    const PairSet p(s, random_set(s, rng, rng.between(1, 20)), random_set(s, rng, rng.between(1, 20)));
    std::vector<RigidMotion> r;
    for (auto i : rng.sample(uni.size(), 60)) r.push_back(uni.motion(i));
    const auto expect = brute_incidences(s, p, r);
    CHECK(incidence_count(s, p, r) == expect);
    CHECK(incidence_count(s, p, r, 3) == expect);
  }
}

TEST_CASE("motion_spectrum examples") {
  const Space s(Field::make(3, 1), 2);
  const auto single = motion_spectrum(s, PairSet(s, {s.zero()}, {s.zero()}), MotionClass::General);
  CHECK(single.histogram == std::map<std::uint64_t, std::uint64_t>{{0, 64}, {1, 8}});
  CHECK(single.universe_size == 72);
  const auto plane = s.all_points();
  const auto full = motion_spectrum(s, PairSet(s, plane, plane), MotionClass::General);
  CHECK(full.histogram == std::map<std::uint64_t, std::uint64_t>{{9, 72}});
  const auto empty = motion_spectrum(s, PairSet(s, {}, plane), MotionClass::General);
  CHECK(empty.histogram == std::map<std::uint64_t, std::uint64_t>{{0, 72}});
}

TEST_CASE("rich_motions examples and monotonicity") {
  const Space s(Field::make(3, 1), 2);
  const auto fixers = rich_motions(s, PairSet(s, {s.zero()}, {s.zero()}), 1, MotionClass::General);
  CHECK(fixers.size() == 8);
  for (const auto& r : fixers) CHECK(r.z == s.zero());
  const auto plane = s.all_points();
  const PairSet full(s, plane, plane);
  CHECK(rich_motions(s, full, 1, MotionClass::General).size() == 72);
  CHECK(rich_motions(s, full, 82, MotionClass::General).empty());
  CHECK_THROWS_AS(rich_motions(s, full, 0, MotionClass::General), Error);

  Lcg rng(11);
  const Space s7(Field::make(7, 1), 2);
  const PairSet p(s7, random_set(s7, rng, 25), random_set(s7, rng, 25));
  std::vector<RigidMotion> prev = rich_motions(s7, p, 1, MotionClass::General);
  for (std::uint64_t k = 2; k <= 6; ++k) {
    const auto cur = rich_motions(s7, p, k, MotionClass::General);
    CHECK(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
    CHECK(cur.size() == motion_spectrum(s7, p, MotionClass::General).count_at_least(k));
    prev = cur;
  }
}

TEST_CASE("moment_sum examples") {
  const Space s(Field::make(3, 1), 2);
  const auto plane = s.all_points();
  const PairSet full(s, plane, plane);
  CHECK(moment_sum(s, full, 1, MotionClass::General) == 81 * 8);
  CHECK(moment_sum(s, PairSet(s, {s.zero()}, {s.zero()}), 2, MotionClass::General) == 8);
  CHECK(moment_sum(s, full, 3, MotionClass::General) == 52488);
}

TEST_CASE("double counting: sum_r i(r) = |U||V||O(d)|") {
  Lcg rng(3);
  for (auto [p, d] : std::vector<std::pair<std::uint32_t, int>>{{3, 2}, {7, 2}, {3, 3}}) {
    const Space s(Field::make(p, 1), d);
    const std::uint64_t od = orthogonal_order(s.field(), d);
    for (int trial = 0; trial < 8; ++trial) {
      const PairSet ps(s, random_set(s, rng, rng.between(0, 15)), random_set(s, rng, rng.between(0, 15)));
      const auto spec = motion_spectrum(s, ps, MotionClass::General, 2);
      CHECK(spec.incidences() == ps.size() * od);
      std::uint64_t total = 0;
      for (const auto& [k, n] : spec.histogram) total += n;
      CHECK(total == spec.universe_size);
      CHECK(moment_sum(spec, 1) == ps.size() * od);
    }
  }
}

TEST_CASE("spectra are independent of the worker count") {
  Lcg rng(5);
  const Space s(Field::make(7, 1), 2);
  const PairSet p(s, random_set(s, rng, 30), random_set(s, rng, 18));
  const auto one = motion_spectrum(s, p, MotionClass::General, 1);
  for (unsigned w : {2u, 3u, 8u}) CHECK(motion_spectrum(s, p, MotionClass::General, w).histogram == one.histogram);
  CHECK(rich_motions(s, p, 3, MotionClass::General, 1) == rich_motions(s, p, 3, MotionClass::General, 5));
}

TEST_CASE("triple_correlation examples and Hoelder") {
  const Space s(Field::make(3, 1), 2);
  const std::vector<Point> origin{s.zero()};
  auto t = triple_correlation(s, origin, origin, origin, MotionClass::General);
  CHECK(t.exact == 8);
  CHECK(t.holder_333 == doctest::Approx(8.0));
  CHECK(t.holder_442 == doctest::Approx(8.0));
  t = triple_correlation(s, origin, origin, {}, MotionClass::General);
  CHECK(t.exact == 0);
  CHECK(t.holder_333 == 0.0);
  CHECK(t.holder_442 == 0.0);
  const auto plane = s.all_points();
  t = triple_correlation(s, plane, plane, plane, MotionClass::General);
  CHECK(t.exact == 72 * 729);
  CHECK(t.holder_333 == doctest::Approx(72.0 * 729));
  CHECK(t.holder_442 == doctest::Approx(72.0 * 729));

  Lcg rng(17);
  const Space s7(Field::make(7, 1), 2);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = random_set(s7, rng, 20), b = random_set(s7, rng, 15), c = random_set(s7, rng, 10);
    const auto tc = triple_correlation(s7, a, b, c, MotionClass::General, 2);
    CHECK(static_cast<double>(tc.exact) <= tc.holder_333 * (1 + 1e-12));
    CHECK(static_cast<double>(tc.exact) <= tc.holder_442 * (1 + 1e-12));
  }
}

TEST_CASE("audit_bound examples") {
  const Space s(Field::make(3, 1), 2);
  const auto all = all_motions(MotionUniverse(s, MotionClass::General));
  const auto plane = s.all_points();
  const PairSet full(s, plane, plane);
  auto rep = audit_bound(s, full, all, IncidenceTheorem::T2_1);
  CHECK(rep.lhs == 648);
  CHECK(rep.main_term == doctest::Approx(648.0));
  CHECK(rep.c_star == 0.0);

  // |P||R|/q^2 = 72/9 = 8 for a single pair against all 72 motions.
  const PairSet origin(s, {s.zero()}, {s.zero()});
  rep = audit_bound(s, origin, all, IncidenceTheorem::T2_4);
  CHECK(rep.lhs == 8);
  CHECK(rep.main_term == doctest::Approx(8.0));
  CHECK(rep.error_term_unit == doctest::Approx(std::sqrt(3.0) * std::sqrt(72.0)));
  CHECK(rep.c_star == 0.0);
  CHECK(rep.hypotheses_hold());

  for (auto which : kIncidenceTheorems) {
    rep = audit_bound(s, full, {}, which);
    CHECK(rep.lhs == 0);
    CHECK(rep.c_star == 0.0);
  }
}

TEST_CASE("audit side conditions are reported, not thrown") {
  const Space s(Field::make(5, 1), 2);
  const auto all = all_motions(MotionUniverse(s, MotionClass::General));
  const PairSet p(s, {s.zero()}, {s.zero(), s.make({1, 0})});
  const auto t24 = audit_bound(s, p, all, IncidenceTheorem::T2_4);
  CHECK_FALSE(t24.hypotheses_hold());
  const auto t26 = audit_bound(s, p, all, IncidenceTheorem::T2_6);
  CHECK_FALSE(t26.hypotheses_hold());
  CHECK(t26.main_term == 0.0);
  const double nr = static_cast<double>(all.size());
  CHECK(t26.error_term_unit == doctest::Approx(std::max(2.0 * std::pow(nr, 0.4), std::pow(nr, 1.2))));
  const auto swapped = audit_bound(s, p.swapped(s), all, IncidenceTheorem::T2_4);
  CHECK(swapped.notes.size() == 1);

  // T2.3 branches at d = 2, q = 7: |U|^2 < 7 versus 7 <= |U|^2 <= 343.
  const Space s7(Field::make(7, 1), 2);
  const auto all7 = all_motions(MotionUniverse(s7, MotionClass::General));
  const PairSet small(s7, {s7.zero(), s7.make({1, 0})}, {s7.zero()});
  const PairSet mid(s7, {s7.zero(), s7.make({1, 0}), s7.make({2, 0})}, {s7.zero()});
  CHECK(audit_bound(s7, small, all7, IncidenceTheorem::T2_3_1).hypotheses_hold());
  CHECK_FALSE(audit_bound(s7, mid, all7, IncidenceTheorem::T2_3_1).hypotheses_hold());
  CHECK(audit_bound(s7, mid, all7, IncidenceTheorem::T2_3_2).hypotheses_hold());

  // p = 11: 11^(5/4) ~ 20.0, 11^(4/3) ~ 24.4.
  const Space s11(Field::make(11, 1), 2);
  Lcg rng(2);
  for (std::uint64_t n : {20u, 21u, 24u, 25u}) {
    auto u = random_set(s11, rng, n);
    const auto rep = audit_bound(s11, PairSet(s11, u, u), {}, IncidenceTheorem::T8_2);
    CHECK(rep.hypotheses_hold() == (n >= 21 && n <= 24));
  }
}

TEST_CASE("audit_cs_bounds examples") {
  const Space s(Field::make(3, 1), 2);
  const PairSet origin(s, {s.zero()}, {s.zero()});
  const auto stab = rich_motions(s, origin, 1, MotionClass::General);
  auto reps = audit_cs_bounds(s, origin, stab);
  REQUIRE(reps.size() == 2);
  CHECK(reps[0].lhs == 8);
  CHECK(reps[0].error_term_unit == doctest::Approx(std::sqrt(8.0) + 8.0));
  CHECK(reps[0].c_star <= 1.0);
  reps = audit_cs_bounds(s, origin, {});
  CHECK(reps[0].lhs == 0);
  CHECK(reps[0].c_star == 0.0);
  const auto plane = s.all_points();
  const auto all = all_motions(MotionUniverse(s, MotionClass::General));
  reps = audit_cs_bounds(s, PairSet(s, plane, plane), all);
  CHECK(reps[0].lhs == 648);
  CHECK(reps[0].error_term_unit == doctest::Approx(81 * std::sqrt(72.0) + 72));
  CHECK(reps[0].c_star <= 1.0);
  CHECK_FALSE(reps[1].hypotheses_hold());  // |U| = 9 > q
}

TEST_CASE("Cauchy-Schwarz bound holds with constant 1 on random instances") {
  Lcg rng(23);
  for (std::uint32_t p : {3u, 7u, 11u}) {
    const Space s(Field::make(p, 1), 2);
    const MotionUniverse uni(s, MotionClass::General);
    for (int trial = 0; trial < 20; ++trial) {
      const PairSet ps(s, random_set(s, rng, rng.between(1, s.size())), random_set(s, rng, rng.between(1, s.size())));
      std::vector<RigidMotion> r;
      for (auto i : rng.sample(uni.size(), rng.between(1, 200))) r.push_back(uni.motion(i));
      CHECK(audit_cs_bounds(s, ps, r)[0].c_star <= 1.0);
    }
  }
}

TEST_CASE("rich and moment audits") {
  const Space s(Field::make(7, 1), 2);
  Lcg rng(31);
  const auto u = random_set(s, rng, 20);
  const PairSet p(s, u, u);
  const auto rich = audit_rich(s, p, MotionClass::General);
  CHECK(rich.hypotheses_hold());
  CHECK(rich.c_star > 0.0);
  // Recompute the maximizing k by hand.
  const auto spec = motion_spectrum(s, p, MotionClass::General);
  const double denom = 2.0 * 400.0 * 49.0;
  double best = 0.0;
  for (std::uint64_t k = 17; k <= 20; ++k) {
    best = std::max(best, static_cast<double>(spec.count_at_least(k)) * k * k / denom);
  }
  CHECK(rich.c_star == doctest::Approx(best));

  const auto moments = audit_moments(s, p, 3);
  REQUIRE(moments.size() == 2);
  CHECK(moments[0].theorem == "P5.1");
  CHECK(moments[0].lhs == moment_sum(spec, 3));
  CHECK(moments[1].theorem == "P5.2");
  CHECK(moments[1].hypotheses_hold());
}

TEST_CASE("audits do not depend on the choice of modulus") {
  // Instances defined intrinsically (the unit circle) must audit identically
  // in F_3[x]/(x^2+1) and F_3[x]/(x^2+x+2).
  std::vector<std::map<std::uint64_t, std::uint64_t>> spectra;
  std::vector<double> c_stars;
  for (auto mod : {std::vector<std::uint32_t>{1, 0, 1}, std::vector<std::uint32_t>{2, 1, 1}}) {
    const Space s(Field::with_modulus(3, mod), 2);
    std::vector<Point> circle;
    for (const auto& x : s.all_points())
      if (s.norm(x) == s.field().one()) circle.push_back(x);
    CHECK(circle.size() == 8);
    const PairSet p(s, circle, circle);
    const auto spec = motion_spectrum(s, p, MotionClass::General);
    CHECK(spec.incidences() == 64 * orthogonal_order(s.field(), 2));
    spectra.push_back(spec.histogram);
    c_stars.push_back(audit_rich(s, p, MotionClass::General).c_star);
  }
  CHECK(spectra[0] == spectra[1]);
  CHECK(c_stars[0] == c_stars[1]);
}
