#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace fqgeom {

/// Guardrails applied to every exhaustive computation. `force` lifts the
/// q and tuple caps; the CLI logs a warning when it is used.
struct Limits {
  std::uint32_t max_q = 49;
  int max_dim = 4;
  std::uint64_t max_tuples = 100'000'000;
  bool force = false;
};

/// An element of F_q stored by its canonical integer i = sum coeffs[j] * p^j.
struct Elem {
  std::uint32_t v = 0;

  constexpr auto operator<=>(const Elem&) const = default;
};

namespace detail {
struct FieldTables;
}

/// F_{p^r} for odd prime p and 1 <= r <= 3, with table-driven arithmetic.
/// Copies share the (immutable) tables.
class Field {
 public:
  /// Lexicographically smallest monic irreducible modulus of degree r,
  /// coefficients compared from the constant term upward.
  static Field make(std::uint32_t p, int r, const Limits& limits = {});

  /// Explicit modulus, low degree first, monic (last entry 1).
  static Field with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus,
                            const Limits& limits = {});

  std::uint32_t p() const;
  int r() const;
  std::uint32_t q() const;
  int q_mod_4() const;
  const std::vector<std::uint32_t>& modulus() const;
  const Limits& limits() const;

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  /// Image of an integer under Z -> F_p -> F_q.
  Elem from_int(long long n) const;
  /// Validated lookup by canonical index.
  Elem elem(std::uint64_t index) const;
  Elem from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Elem x) const;

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem mul(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem inv(Elem a) const;  // throws NotInDomain for 0
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;
  Elem square(Elem a) const { return mul(a, a); }

  /// +1 for nonzero squares, 0 for zero, -1 otherwise; via x^((q-1)/2).
  int quad_char(Elem x) const;
  /// All y with y^2 = x, ascending.
  const std::vector<Elem>& sqrt_all(Elem x) const;

  /// True iff x lies in the prime subfield F_p (constant polynomial).
  bool in_prime_subfield(Elem x) const { return x.v < p(); }

  friend bool operator==(const Field& a, const Field& b);

 private:
  explicit Field(std::shared_ptr<const detail::FieldTables> t) : t_(std::move(t)) {}
  std::shared_ptr<const detail::FieldTables> t_;
};

bool is_prime(std::uint64_t n);

inline constexpr int kMaxDim = 4;

/// A point of F_q^d, 1 <= d <= 4.
struct Point {
  std::array<Elem, kMaxDim> x{};
  std::uint8_t dim = 0;

  Elem operator[](int i) const { return x[static_cast<std::size_t>(i)]; }
  Elem& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
  constexpr auto operator<=>(const Point&) const = default;
};

/// F_q^d: dimension-aware point arithmetic and the dense point encoding
/// code(x) = sum x_i * q^i used for membership indexes.
class Space {
 public:
  Space(Field field, int dim);

  const Field& field() const { return f_; }
  int dim() const { return d_; }
  std::uint64_t size() const { return size_; }

  Point zero() const;
  Point make(std::initializer_list<std::uint32_t> coords) const;
  Point add(const Point& a, const Point& b) const;
  Point sub(const Point& a, const Point& b) const;
  Point neg(const Point& a) const;
  Point scale(Elem c, const Point& a) const;
  Elem dot(const Point& a, const Point& b) const;
  /// The quadratic form sum x_i^2.
  Elem norm(const Point& a) const { return dot(a, a); }

  std::uint64_t encode(const Point& a) const;
  Point decode(std::uint64_t code) const;
  std::vector<Point> all_points() const;

  void check(const Point& a) const;  // DimensionMismatch on wrong dim

 private:
  Field f_;
  int d_;
  std::uint64_t size_;
};

/// Dense membership bitmap over the encoding of a Space.
class PointIndex {
 public:
  PointIndex(const Space& space, std::span<const Point> points);
  bool contains(std::uint64_t code) const { return bits_[code] != 0; }
  bool contains(const Point& a) const { return contains(space_.encode(a)); }

 private:
  Space space_;
  std::vector<std::uint8_t> bits_;
};

/// Sorts and deduplicates a point list in place.
void normalize_set(std::vector<Point>& pts);

}  // namespace fqgeom
