#include "fqgeom/motions.hpp"

#include <algorithm>
#include <string>

#include "fqgeom/errors.hpp"

namespace fqgeom {

Matrix identity_matrix(int dim) {
  Matrix m;
  m.dim = static_cast<std::uint8_t>(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = Elem{1};
  return m;
}

Matrix mat_mul(const Field& f, const Matrix& x, const Matrix& y) {
  Matrix out;
  out.dim = x.dim;
  for (int i = 0; i < x.dim; ++i)
    for (int j = 0; j < x.dim; ++j) {
      Elem acc = f.zero();
      for (int k = 0; k < x.dim; ++k) acc = f.add(acc, f.mul(x(i, k), y(k, j)));
      out(i, j) = acc;
    }
  return out;
}

Point mat_vec(const Space& s, const Matrix& m, const Point& v) {
  const Field& f = s.field();
  Point out = s.zero();
  for (int i = 0; i < m.dim; ++i) {
    Elem acc = f.zero();
    for (int k = 0; k < m.dim; ++k) acc = f.add(acc, f.mul(m(i, k), v[k]));
    out[i] = acc;
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix t;
  t.dim = m.dim;
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) t(i, j) = m(j, i);
  return t;
}

Elem determinant(const Field& f, const Matrix& m) {
  // Gaussian elimination; sign tracked through row swaps.
  Matrix w = m;
  const int n = m.dim;
  Elem det = f.one();
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (w(r, col).v != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) return f.zero();
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(w(pivot, j), w(col, j));
      det = f.neg(det);
    }
    det = f.mul(det, w(col, col));
    const Elem inv = f.inv(w(col, col));
    for (int r = col + 1; r < n; ++r) {
      const Elem factor = f.mul(w(r, col), inv);
      if (factor.v == 0) continue;
      for (int j = col; j < n; ++j) w(r, j) = f.sub(w(r, j), f.mul(factor, w(col, j)));
    }
  }
  return det;
}

bool is_orthogonal(const Field& f, const Matrix& m) {
  return mat_mul(f, transpose(m), m) == identity_matrix(m.dim);
}

std::string_view to_string(MotionClass c) {
  switch (c) {
    case MotionClass::General: return "general";
    case MotionClass::SO2: return "SO2";
    case MotionClass::Translation: return "translation";
    case MotionClass::SF: return "SF";
    case MotionClass::SFPrime: return "SF_prime";
  }
  return "general";
}

MotionClass motion_class_from_string(std::string_view name) {
  for (auto c : {MotionClass::General, MotionClass::SO2, MotionClass::Translation, MotionClass::SF,
                 MotionClass::SFPrime})
    if (to_string(c) == name) return c;
  throw Error(ErrorKind::Parse, "unknown motion class '" + std::string(name) + "'");
}

OrthoMatrix make_ortho(const Field& f, const Matrix& m) {
  if (!is_orthogonal(f, m)) throw Error(ErrorKind::BadParameters, "matrix is not orthogonal");
  const Elem det = determinant(f, m);
  return OrthoMatrix{m, det == f.one() ? 1 : -1};
}

namespace {

bool row_major_less(const OrthoMatrix& x, const OrthoMatrix& y) {
  for (int i = 0; i < x.m.dim; ++i)
    for (int j = 0; j < x.m.dim; ++j)
      if (x.m(i, j) != y.m(i, j)) return x.m(i, j) < y.m(i, j);
  return false;
}

}  // namespace

std::vector<OrthoMatrix> enumerate_orthogonal(const Field& f, int d) {
  if (d < 1 || d > 3)
    throw Error(ErrorKind::TooLarge, "orthogonal enumeration supports d in 1..3, got " + std::to_string(d));
  const Space s(f, d);
  std::vector<Point> units;
  for (std::uint64_t c = 0; c < s.size(); ++c) {
    Point v = s.decode(c);
    if (s.norm(v) == f.one()) units.push_back(v);
  }

  std::vector<OrthoMatrix> out;
  auto emit = [&](std::initializer_list<const Point*> cols) {
    Matrix m;
    m.dim = static_cast<std::uint8_t>(d);
    int j = 0;
    for (const Point* c : cols) {
      for (int i = 0; i < d; ++i) m(i, j) = (*c)[i];
      ++j;
    }
    out.push_back(OrthoMatrix{m, determinant(f, m) == f.one() ? 1 : -1});
  };

  for (const Point& c1 : units) {
    if (d == 1) {
      emit({&c1});
      continue;
    }
    for (const Point& c2 : units) {
      if (s.dot(c1, c2).v != 0) continue;
      if (d == 2) {
        emit({&c1, &c2});
        continue;
      }
      // The orthogonal complement of {c1, c2} is spanned by c1 x c2.
      Point c3 = s.zero();
      c3[0] = f.sub(f.mul(c1[1], c2[2]), f.mul(c1[2], c2[1]));
      c3[1] = f.sub(f.mul(c1[2], c2[0]), f.mul(c1[0], c2[2]));
      c3[2] = f.sub(f.mul(c1[0], c2[1]), f.mul(c1[1], c2[0]));
      for (const Point& cand : {c3, s.neg(c3)}) {
        if (s.norm(cand) != f.one()) continue;
        emit({&c1, &c2, &cand});
      }
    }
  }
  std::sort(out.begin(), out.end(), row_major_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t orthogonal_order(const Field& f, int d) {
  if (d == 0) return 1;
  return enumerate_orthogonal(f, d).size();
}

std::uint64_t matrix_order(const Field& f, const Matrix& m) {
  const Matrix id = identity_matrix(m.dim);
  Matrix acc = m;
  std::uint64_t n = 1;
  while (acc != id) {
    acc = mat_mul(f, acc, m);
    ++n;
  }
  return n;
}

OrthoMatrix so2_generator(const Field& f) {
  if (f.q_mod_4() != 3)
    throw Error(ErrorKind::WrongResidue, "SO(2,q) is cyclic of order q+1 only for q = 3 mod 4");
  const auto group = enumerate_orthogonal(f, 2);
  const OrthoMatrix* best = nullptr;
  std::uint64_t best_order = 0;
  for (const auto& g : group) {
    if (g.det != 1) continue;
    const std::uint64_t ord = matrix_order(f, g.m);
    if (ord > best_order) {
      best_order = ord;
      best = &g;
    }
  }
  if (best == nullptr || best_order != f.q() + 1)
    throw Error(ErrorKind::FormMismatch, "SO(2,q) is not cyclic of order q+1");
  return *best;
}

RigidMotion identity_motion(const Space& s) {
  return RigidMotion{OrthoMatrix{identity_matrix(s.dim()), 1}, s.zero()};
}

Point apply(const Space& s, const RigidMotion& r, const Point& x) {
  return s.add(mat_vec(s, r.g.m, x), r.z);
}

RigidMotion compose(const Space& s, const RigidMotion& r2, const RigidMotion& r1) {
  const Field& f = s.field();
  return RigidMotion{OrthoMatrix{mat_mul(f, r2.g.m, r1.g.m), r2.g.det * r1.g.det},
                     s.add(mat_vec(s, r2.g.m, r1.z), r2.z)};
}

RigidMotion invert(const Space& s, const RigidMotion& r) {
  const Matrix gt = transpose(r.g.m);
  return RigidMotion{OrthoMatrix{gt, r.g.det}, s.neg(mat_vec(s, gt, r.z))};
}

MotionClass classify(const Space& s, const RigidMotion& r) {
  if (r.g.m == identity_matrix(s.dim())) return MotionClass::Translation;
  if (s.dim() == 2 && r.g.det == 1) return MotionClass::SFPrime;
  return MotionClass::General;
}

bool in_class(const Space& s, const RigidMotion& r, MotionClass tag) {
  const bool is_identity = r.g.m == identity_matrix(s.dim());
  const bool oriented = s.dim() == 2 && r.g.det == 1;
  switch (tag) {
    case MotionClass::General: return true;
    case MotionClass::SO2: return oriented && r.z == s.zero();
    case MotionClass::Translation: return is_identity;
    case MotionClass::SF: return oriented;
    case MotionClass::SFPrime: return oriented && !is_identity;
  }
  return false;
}

MotionUniverse::MotionUniverse(Space space, MotionClass tag) : space_(std::move(space)), tag_(tag) {
  const int d = space_.dim();
  const bool planar_only =
      tag == MotionClass::SO2 || tag == MotionClass::SF || tag == MotionClass::SFPrime;
  if (planar_only && d != 2)
    throw Error(ErrorKind::BadParameters, std::string(to_string(tag)) + " motions require d = 2");
  all_translations_ = tag != MotionClass::SO2;
  if (tag == MotionClass::Translation) {
    linear_.push_back(OrthoMatrix{identity_matrix(d), 1});
    return;
  }
  const Matrix id = identity_matrix(d);
  for (auto& g : enumerate_orthogonal(space_.field(), d)) {
    if (planar_only && g.det != 1) continue;
    if (tag == MotionClass::SFPrime && g.m == id) continue;
    linear_.push_back(g);
  }
}

Point MotionUniverse::translation(std::uint64_t code) const {
  return all_translations_ ? space_.decode(code) : space_.zero();
}

RigidMotion MotionUniverse::motion(std::uint64_t index) const {
  const std::uint64_t tc = translation_count();
  return RigidMotion{linear_[index / tc], translation(index % tc)};
}

std::uint64_t MotionUniverse::index_of(const RigidMotion& r) const {
  auto it = std::lower_bound(linear_.begin(), linear_.end(), r.g, row_major_less);
  if (it == linear_.end() || it->m != r.g.m) throw Error(ErrorKind::NotInDomain, "motion not in universe");
  const auto gi = static_cast<std::uint64_t>(it - linear_.begin());
  if (!all_translations_) {
    if (r.z != space_.zero()) throw Error(ErrorKind::NotInDomain, "motion not in universe");
    return gi;
  }
  return gi * space_.size() + space_.encode(r.z);
}

}  // namespace fqgeom
