#include <cmath>
#include <set>

#include "doctest.h"
#include "fqgeom/errors.hpp"
#include "fqgeom/lineworld.hpp"
#include "fqgeom/rng.hpp"

using namespace fqgeom;

namespace {

std::vector<Point> random_set(const Space& s, Lcg& rng, std::uint64_t m) {
  std::vector<Point> out;
  for (auto c : rng.sample(s.size(), m)) out.push_back(s.decode(c));
  return out;
}

std::vector<RigidMotion> sf_prime(const Space& s) {
  const MotionUniverse uni(s, MotionClass::SFPrime);
  std::vector<RigidMotion> out;
  for (std::uint64_t i = 0; i < uni.size(); ++i) out.push_back(uni.motion(i));
  return out;
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

}  // namespace

TEST_CASE("phi_of") {
  const Field f7 = Field::make(7, 1);
  const OrthoMatrix m0 = phi_of(f7, f7.zero());
  CHECK(m0.m(0, 0) == f7.neg(f7.one()));
  CHECK(m0.m(1, 1) == f7.neg(f7.one()));
  CHECK(m0.m(0, 1) == f7.zero());
  CHECK(m0.m(1, 0) == f7.zero());

  for (std::uint32_t p : {3u, 7u, 11u}) {
    const Field f = Field::make(p, 1);
    std::set<OrthoMatrix> image;
    for (std::uint32_t t = 0; t < p; ++t) {
      const OrthoMatrix g = phi_of(f, f.elem(t));
      REQUIRE(is_orthogonal(f, g.m));
      REQUIRE(determinant(f, g.m) == f.one());
      REQUIRE(g.m != identity_matrix(2));
      REQUIRE(phi_inverse(f, g) == f.elem(t));
      image.insert(g);
    }
    std::set<OrthoMatrix> rotations;
    for (const auto& g : enumerate_orthogonal(f, 2))
      if (g.det == 1 && g.m != identity_matrix(2)) rotations.insert(g);
    CHECK(image == rotations);
  }
  CHECK(kind_of([] { phi_of(Field::make(5, 1), Elem{1}); }) == ErrorKind::WrongResidue);
}

TEST_CASE("phi_inverse") {
  const Field f = Field::make(11, 1);
  OrthoMatrix minus;
  minus.m = identity_matrix(2);
  minus.m(0, 0) = minus.m(1, 1) = f.neg(f.one());
  CHECK(phi_inverse(f, minus) == f.zero());
  CHECK(kind_of([&] { phi_inverse(f, OrthoMatrix{identity_matrix(2), 1}); }) == ErrorKind::NotInDomain);
  Matrix refl = identity_matrix(2);
  refl(1, 1) = f.neg(f.one());
  CHECK(kind_of([&] { phi_inverse(f, OrthoMatrix{refl, -1}); }) == ErrorKind::NotInDomain);
}

TEST_CASE("line_from_pair examples") {
  const Space s2(Field::make(7, 1), 2);
  const Space s3(s2.field(), 3);
  const Line3 fixed = line_from_pair(s2, s2.make({1, 0}), s2.make({1, 0}));
  CHECK(fixed == make_line(s3, s3.make({1, 0, 0}), s3.make({0, 0, 1})));
  const Line3 axis = line_from_pair(s2, s2.zero(), s2.zero());
  CHECK(axis == make_line(s3, s3.zero(), s3.make({0, 0, 1})));
  CHECK(kind_of([] {
          const Space s5(Field::make(5, 1), 2);
          line_from_pair(s5, s5.zero(), s5.zero());
        }) == ErrorKind::WrongResidue);
}

TEST_CASE("closed form agrees with the motion parametrization on all of F_7^2 x F_7^2") {
  const Space s2(Field::make(7, 1), 2);
  const Space s3(s2.field(), 3);
  const auto plane = s2.all_points();
  std::set<Line3> distinct;
  for (const auto& a : plane)
    for (const auto& b : plane) {
      const Line3 l = line_from_pair(s2, a, b);  // throws FormMismatch on disagreement
      REQUIRE(l.dir[2] == s2.field().one());
      distinct.insert(l);
    }
  CHECK(distinct.size() == plane.size() * plane.size());
}

TEST_CASE("line points are the SF' motions taking a to b") {
  for (std::uint32_t p : {3u, 7u}) {
    const Space s2(Field::make(p, 1), 2);
    const Space s3(s2.field(), 3);
    const auto motions = sf_prime(s2);
    Lcg rng(p);
    for (int trial = 0; trial < 20; ++trial) {
      const Point a = s2.decode(rng.below(s2.size()));
      const Point b = s2.decode(rng.below(s2.size()));
      const Line3 l = line_from_pair(s2, a, b);
      std::set<Point> pts;
      for (const auto& m : motions)
        if (apply(s2, m, a) == b) pts.insert(motion_point(s2, m));
      CHECK(pts.size() == p);
      for (const auto& x : pts) CHECK(on_line(s3, l, x));
    }
  }
}

TEST_CASE("incidence_equivalence") {
  const Space s(Field::make(7, 1), 2);
  const auto motions = sf_prime(s);
  const PairSet one(s, {s.make({1, 2})}, {s.make({3, 3})});
  CHECK(incidence_equivalence(s, one, {}).motion_side == 0);
  CHECK(incidence_equivalence(s, one, {}).line_side == 0);

  RigidMotion hit = motions[0];
  hit.z = s.sub(s.make({3, 3}), mat_vec(s, hit.g.m, s.make({1, 2})));
  const std::vector<RigidMotion> single{hit};
  const auto e1 = incidence_equivalence(s, one, single);
  CHECK(e1.motion_side == 1);
  CHECK(e1.line_side == 1);

  Lcg rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const PairSet p(s, random_set(s, rng, 1 + rng.below(10)), random_set(s, rng, 1 + rng.below(10)));
    std::vector<RigidMotion> r;
    for (auto i : rng.sample(motions.size(), 1 + rng.below(200))) r.push_back(motions[i]);
    const auto e = incidence_equivalence(s, p, r);
    CHECK(e.motion_side == e.line_side);
  }

  Matrix refl = identity_matrix(2);
  refl(1, 1) = s.field().neg(s.field().one());
  const std::vector<RigidMotion> bad{RigidMotion{OrthoMatrix{refl, -1}, s.zero()}};
  CHECK(kind_of([&] { incidence_equivalence(s, one, bad); }) == ErrorKind::NotOriented);
  const std::vector<RigidMotion> ident{identity_motion(s)};
  CHECK(kind_of([&] { incidence_equivalence(s, one, ident); }) == ErrorKind::NotOriented);
}

TEST_CASE("planes") {
  for (std::uint32_t p : {3u, 7u}) {
    const Space s3(Field::make(p, 1), 3);
    const auto planes = all_planes(s3);
    CHECK(planes.size() == p * (p * p + p + 1));
    CHECK(std::set<Plane3>(planes.begin(), planes.end()).size() == planes.size());
    // Each plane has q^2 points.
    std::uint64_t n = 0;
    for (const auto& x : s3.all_points()) n += on_plane(s3, planes[planes.size() / 2], x) ? 1 : 0;
    CHECK(n == p * p);
  }
  const Space s3(Field::make(7, 1), 3);
  CHECK(make_plane(s3, s3.make({0, 3, 6}), Elem{3}) == make_plane(s3, s3.make({0, 1, 2}), Elem{1}));
  CHECK(make_line(s3, s3.make({1, 1, 1}), s3.make({2, 4, 2})) == make_line(s3, s3.make({2, 3, 2}), s3.make({1, 2, 1})));
}

TEST_CASE("plane_audit") {
  const Space s2(Field::make(7, 1), 2);
  const Space s3(s2.field(), 3);
  const auto planes = all_planes(s3);

  // Reference: containment by checking every point of every line.
  auto reference = [&](const std::vector<Line3>& lines) {
    std::pair<std::uint64_t, std::size_t> best{0, 0};
    for (std::size_t i = 0; i < planes.size(); ++i) {
      std::uint64_t n = 0;
      for (const auto& l : lines) {
        bool all = true;
        for (const auto& x : line_points(s3, l)) all = all && on_plane(s3, planes[i], x);
        n += all ? 1 : 0;
      }
      if (n > best.first) best = {n, i};
    }
    return best;
  };

  const std::vector<Point> single{s2.make({2, 3})};
  CHECK(plane_audit(s2, single).max_lines <= 1);

  const std::vector<Point> pair{s2.make({0, 0}), s2.make({1, 0})};
  const auto pa = plane_audit(s2, pair);
  CHECK(pa.lines == 4);
  CHECK(pa.max_lines <= 4 * pair.size());

  Lcg rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = random_set(s2, rng, 8);
    const PairLines pl = lines_of_pairs(s2, u);
    CHECK(pl.lines.size() == 64);
    const auto ref = reference(pl.lines);
    for (unsigned w : {1u, 4u}) {
      const auto a = plane_audit(s3, pl.lines, w);
      CHECK(a.max_lines == ref.first);
      REQUIRE(a.plane.has_value());
      CHECK(*a.plane == planes[ref.second]);
    }
  }
}

TEST_CASE("kollar_check") {
  const Space s3(Field::make(7, 1), 3);
  const auto empty = kollar_check(s3, s3.all_points(), {});
  CHECK(empty.lhs == 0);

  const Line3 l = make_line(s3, s3.make({1, 2, 3}), s3.make({1, 0, 1}));
  const auto pts = line_points(s3, l);
  const std::vector<Line3> ls{l};
  const auto rep = kollar_check(s3, pts, ls);
  CHECK(rep.lhs == 7);
  CHECK(rep.error_term_unit == doctest::Approx(std::pow(7.0, 0.4) + std::pow(7.0, 1.2)));
  CHECK(std::pow(7.0, 1.2) > std::pow(7.0, 0.4));
  CHECK(rep.c_star <= 1.0);

  // Incidences against a direct membership scan.
  Lcg rng(4);
  const auto points = random_set(s3, rng, 100);
  std::vector<Line3> lines;
  for (int i = 0; i < 30; ++i) {
    const Point d = s3.decode(1 + rng.below(s3.size() - 1));
    lines.push_back(make_line(s3, s3.decode(rng.below(s3.size())), d));
  }
  std::uint64_t brute = 0;
  for (const auto& ln : lines)
    for (const auto& x : points) brute += on_line(s3, ln, x) ? 1 : 0;
  CHECK(point_line_incidences(s3, points, lines) == brute);
}
