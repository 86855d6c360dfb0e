#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fqgeom/ffield.hpp"

namespace fqgeom {

/// Square matrix over F_q of size dim <= 4, row-major.
struct Matrix {
  std::array<Elem, kMaxDim * kMaxDim> a{};
  std::uint8_t dim = 0;

  Elem operator()(int i, int j) const { return a[static_cast<std::size_t>(i * kMaxDim + j)]; }
  Elem& operator()(int i, int j) { return a[static_cast<std::size_t>(i * kMaxDim + j)]; }
  constexpr auto operator<=>(const Matrix&) const = default;
};

Matrix identity_matrix(int dim);
Matrix mat_mul(const Field& f, const Matrix& x, const Matrix& y);
Point mat_vec(const Space& s, const Matrix& m, const Point& v);
Matrix transpose(const Matrix& m);
Elem determinant(const Field& f, const Matrix& m);
bool is_orthogonal(const Field& f, const Matrix& m);

/// An element of O(d, q) together with its determinant sign.
struct OrthoMatrix {
  Matrix m;
  int det = 1;

  constexpr auto operator<=>(const OrthoMatrix&) const = default;
};

/// Rigid motion x -> g x + z.
struct RigidMotion {
  OrthoMatrix g;
  Point z;

  constexpr auto operator<=>(const RigidMotion&) const = default;
};

enum class MotionClass { General, SO2, Translation, SF, SFPrime };

std::string_view to_string(MotionClass c);
MotionClass motion_class_from_string(std::string_view name);

/// All of O(d, q) for d in {1,2,3}, built column by column from unit
/// vectors, sorted lexicographically on row-major entries.
std::vector<OrthoMatrix> enumerate_orthogonal(const Field& f, int d);

/// |O(d, q)|, with |O(0)| = 1.
std::uint64_t orthogonal_order(const Field& f, int d);

/// A rotation generating the cyclic group SO(2, q); requires q = 3 mod 4.
OrthoMatrix so2_generator(const Field& f);

/// Multiplicative order of a matrix (smallest n >= 1 with m^n = I).
std::uint64_t matrix_order(const Field& f, const Matrix& m);

OrthoMatrix make_ortho(const Field& f, const Matrix& m);  // throws BadParameters if not orthogonal
RigidMotion identity_motion(const Space& s);
Point apply(const Space& s, const RigidMotion& r, const Point& x);
/// compose(r2, r1) = r2 after r1.
RigidMotion compose(const Space& s, const RigidMotion& r2, const RigidMotion& r1);
RigidMotion invert(const Space& s, const RigidMotion& r);

/// Most specific tag: Translation, then SFPrime (d = 2), else General.
MotionClass classify(const Space& s, const RigidMotion& r);
bool in_class(const Space& s, const RigidMotion& r, MotionClass tag);

/// The motion set selected by a MotionClass, indexed implicitly as
/// index = linear_index * translation_count + translation_code.
class MotionUniverse {
 public:
  MotionUniverse(Space space, MotionClass tag);

  const Space& space() const { return space_; }
  MotionClass tag() const { return tag_; }
  const std::vector<OrthoMatrix>& linear_parts() const { return linear_; }
  std::uint64_t translation_count() const { return all_translations_ ? space_.size() : 1; }
  std::uint64_t size() const { return linear_.size() * translation_count(); }
  Point translation(std::uint64_t code) const;
  RigidMotion motion(std::uint64_t index) const;
  /// Index of r inside this universe; throws NotInDomain if absent.
  std::uint64_t index_of(const RigidMotion& r) const;

 private:
  Space space_;
  MotionClass tag_;
  bool all_translations_ = true;
  std::vector<OrthoMatrix> linear_;
};

}  // namespace fqgeom
