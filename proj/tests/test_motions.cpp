#include <set>

#include "doctest.h"
#include "fqgeom/errors.hpp"
#include "fqgeom/motions.hpp"

using namespace fqgeom;

namespace {

// Closed forms for |O(d, q)|, q odd: an oracle independent of the enumeration.
std::uint64_t o_closed_form(const Field& f, int d) {
  const std::int64_t q = f.q();
  const int eta = f.quad_char(f.from_int(-1));
  switch (d) {
    case 1: return 2;
    case 2: return static_cast<std::uint64_t>(2 * (q - eta));
    case 3: return static_cast<std::uint64_t>(2 * q * (q * q - 1));
  }
  return 0;
}

}  // namespace

TEST_CASE("enumerate_orthogonal examples") {
  const Field f3 = Field::make(3, 1);
  const auto o1 = enumerate_orthogonal(f3, 1);
  REQUIRE(o1.size() == 2);
  CHECK(o1[0].m(0, 0) == Elem{1});
  CHECK(o1[1].m(0, 0) == Elem{2});
  // Brute force over all 81 matrices of F_3^{2x2}.
  std::uint64_t brute = 0;
  for (std::uint32_t code = 0; code < 81; ++code) {
    Matrix m;
    m.dim = 2;
    m(0, 0) = Elem{code % 3};
    m(0, 1) = Elem{code / 3 % 3};
    m(1, 0) = Elem{code / 9 % 3};
    m(1, 1) = Elem{code / 27};
    brute += is_orthogonal(f3, m) ? 1 : 0;
  }
  CHECK(brute == 8);
  CHECK(enumerate_orthogonal(f3, 2).size() == 8);
  CHECK(enumerate_orthogonal(Field::make(7, 1), 2).size() == 16);
}

TEST_CASE("orthogonal group orders match closed forms") {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, int>>{{3, 1}, {5, 1}, {7, 1}, {11, 1}, {3, 2}, {13, 1}}) {
    const Field f = Field::make(p, r);
    for (int d = 1; d <= 3; ++d) {
      if (d == 3 && f.q() > 11) continue;
      const auto group = enumerate_orthogonal(f, d);
      CHECK(group.size() == o_closed_form(f, d));
      for (const auto& g : group) {
        CHECK(is_orthogonal(f, g.m));
        CHECK(determinant(f, g.m) == (g.det == 1 ? f.one() : f.from_int(-1)));
      }
    }
  }
  CHECK(orthogonal_order(Field::make(3, 1), 0) == 1);
  CHECK_THROWS_AS(enumerate_orthogonal(Field::make(3, 1), 4), Error);
}

TEST_CASE("enumeration is sorted and duplicate free") {
  const auto group = enumerate_orthogonal(Field::make(7, 1), 3);
  std::set<Matrix> seen;
  for (const auto& g : group) seen.insert(g.m);
  CHECK(seen.size() == group.size());
  for (std::size_t i = 1; i < group.size(); ++i) {
    bool less = false;
    for (int k = 0; k < 9; ++k) {
      const Elem a = group[i - 1].m(k / 3, k % 3), b = group[i].m(k / 3, k % 3);
      if (a != b) {
        less = a < b;
        break;
      }
    }
    CHECK(less);
  }
}

TEST_CASE("|SO(2,q)| = q - chi(-1)") {
  for (auto [p, r] : std::vector<std::pair<std::uint32_t, int>>{{3, 1}, {7, 1}, {11, 1}, {19, 1}, {3, 3}, {5, 1}, {13, 1}}) {
    const Field f = Field::make(p, r);
    std::uint64_t rot = 0;
    for (const auto& g : enumerate_orthogonal(f, 2)) rot += g.det == 1 ? 1 : 0;
    CHECK(rot == static_cast<std::uint64_t>(static_cast<int>(f.q()) - f.quad_char(f.from_int(-1))));
    if (f.q_mod_4() == 3) CHECK(rot == f.q() + 1);
  }
}

TEST_CASE("so2_generator") {
  for (std::uint32_t p : {3u, 7u, 11u}) {
    const Field f = Field::make(p, 1);
    const OrthoMatrix g = so2_generator(f);
    CHECK(g.det == 1);
    CHECK(matrix_order(f, g.m) == p + 1);
    // Powers are pairwise distinct and exhaust SO(2, q).
    std::set<Matrix> powers;
    Matrix acc = identity_matrix(2);
    for (std::uint32_t i = 0; i <= p; ++i) {
      powers.insert(acc);
      acc = mat_mul(f, acc, g.m);
    }
    CHECK(powers.size() == p + 1);
    for (const auto& h : enumerate_orthogonal(f, 2))
      if (h.det == 1) CHECK(powers.count(h.m) == 1);
  }
  CHECK(so2_generator(Field::make(3, 3)).det == 1);
  try {
    so2_generator(Field::make(5, 1));
    FAIL("expected WrongResidue");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WrongResidue);
  }
}

TEST_CASE("apply examples") {
  const Space s7(Field::make(7, 1), 2);
  const RigidMotion id = identity_motion(s7);
  CHECK(apply(s7, id, s7.make({4, 5})) == s7.make({4, 5}));
  Matrix minus = identity_matrix(2);
  minus(0, 0) = Elem{6};
  minus(1, 1) = Elem{6};
  const RigidMotion neg{OrthoMatrix{minus, 1}, s7.zero()};
  CHECK(apply(s7, neg, s7.make({1, 2})) == s7.make({6, 5}));
  const Space s3(Field::make(3, 1), 2);
  const RigidMotion shift{OrthoMatrix{identity_matrix(2), 1}, s3.make({1, 0})};
  CHECK(apply(s3, shift, s3.make({2, 2})) == s3.make({0, 2}));
}

TEST_CASE("compose and invert form a group on O(2,3) x F_3^2") {
  const Space s(Field::make(3, 1), 2);
  const MotionUniverse uni(s, MotionClass::General);
  REQUIRE(uni.size() == 72);
  const RigidMotion id = identity_motion(s);
  std::set<RigidMotion> all;
  for (std::uint64_t i = 0; i < uni.size(); ++i) all.insert(uni.motion(i));
  const auto pts = s.all_points();
  for (std::uint64_t i = 0; i < uni.size(); ++i) {
    const RigidMotion r = uni.motion(i);
    const RigidMotion ri = invert(s, r);
    CHECK(compose(s, r, ri) == id);
    CHECK(compose(s, ri, r) == id);
    CHECK(compose(s, id, r) == r);
    CHECK(ri.g.m == transpose(r.g.m));
    CHECK(ri.z == s.neg(mat_vec(s, transpose(r.g.m), r.z)));
    CHECK(uni.index_of(r) == i);
    for (std::uint64_t j = 0; j < uni.size(); j += 5) {
      const RigidMotion r2 = uni.motion(j);
      const RigidMotion c = compose(s, r2, r);
      CHECK(all.count(c) == 1);
      for (const auto& x : pts) CHECK(apply(s, c, x) == apply(s, r2, apply(s, r, x)));
    }
    for (const auto& x : pts) CHECK(apply(s, ri, apply(s, r, x)) == x);
  }
}

TEST_CASE("each (u, v) is matched by exactly |O(d)| motions") {
  const Space s(Field::make(3, 1), 2);
  const MotionUniverse uni(s, MotionClass::General);
  const auto pts = s.all_points();
  for (const auto& u : pts)
    for (const auto& v : pts) {
      std::uint64_t n = 0;
      for (std::uint64_t i = 0; i < uni.size(); ++i) n += apply(s, uni.motion(i), u) == v ? 1 : 0;
      CHECK(n == 8);
    }
}

TEST_CASE("classify examples") {
  const Space s(Field::make(3, 1), 2);
  const RigidMotion t{OrthoMatrix{identity_matrix(2), 1}, s.make({1, 1})};
  CHECK(classify(s, t) == MotionClass::Translation);
  Matrix minus = identity_matrix(2);
  minus(0, 0) = Elem{2};
  minus(1, 1) = Elem{2};
  CHECK(classify(s, RigidMotion{OrthoMatrix{minus, 1}, s.zero()}) == MotionClass::SFPrime);
  Matrix refl = identity_matrix(2);
  refl(1, 1) = Elem{2};
  CHECK(classify(s, RigidMotion{make_ortho(s.field(), refl), s.zero()}) == MotionClass::General);
}

TEST_CASE("motion universes partition as expected") {
  const Space s(Field::make(7, 1), 2);
  const MotionUniverse general(s, MotionClass::General);
  const MotionUniverse sf(s, MotionClass::SF);
  const MotionUniverse sfp(s, MotionClass::SFPrime);
  const MotionUniverse tr(s, MotionClass::Translation);
  const MotionUniverse so2(s, MotionClass::SO2);
  CHECK(general.size() == 16 * 49);
  CHECK(sf.size() == 8 * 49);
  CHECK(sfp.size() + tr.size() == sf.size());
  CHECK(so2.size() == 8);
  for (std::uint64_t i = 0; i < sfp.size(); ++i) {
    CHECK(in_class(s, sfp.motion(i), MotionClass::SFPrime));
    CHECK_FALSE(in_class(s, sfp.motion(i), MotionClass::Translation));
  }
  CHECK_THROWS_AS(MotionUniverse(Space(s.field(), 3), MotionClass::SF), Error);
}
