#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fqgeom/ffield.hpp"
#include "fqgeom/incidence.hpp"
#include "fqgeom/motions.hpp"
#include "fqgeom/report.hpp"

namespace fqgeom {

/// Line in F_q^3. Canonical: the last nonzero coordinate of `dir` is 1 and
/// `base` has 0 in that coordinate, so equal point sets give equal values.
struct Line3 {
  Point base;
  Point dir;

  constexpr auto operator<=>(const Line3&) const = default;
};

/// Plane normal . x = offset, with the first nonzero normal coordinate 1.
struct Plane3 {
  Point normal;
  Elem offset;

  constexpr auto operator<=>(const Plane3&) const = default;
};

Line3 make_line(const Space& s3, const Point& base, const Point& dir);  // BadParameters for dir = 0
Plane3 make_plane(const Space& s3, const Point& normal, Elem offset);  // BadParameters for normal = 0
bool on_line(const Space& s3, const Line3& l, const Point& x);
bool on_plane(const Space& s3, const Plane3& h, const Point& x);
bool in_plane(const Space& s3, const Plane3& h, const Line3& l);
/// base + t dir for t = 0, 1, ..., q-1.
std::vector<Point> line_points(const Space& s3, const Line3& l);
/// Every affine plane of F_q^3 in canonical order; q(q^2+q+1) of them.
std::vector<Plane3> all_planes(const Space& s3);

/// The rotation [[(r^2-1)/(r^2+1), -2r/(r^2+1)], [2r/(r^2+1), (r^2-1)/(r^2+1)]].
/// Requires q = 3 mod 4.
OrthoMatrix phi_of(const Field& f, Elem r);
/// The r with phi_of(r) = g; NotInDomain unless g is a rotation other than I.
Elem phi_inverse(const Field& f, const OrthoMatrix& g);

/// {((I - phi(r))^-1 (b - phi(r) a), r) : r in F_q}, evaluated pointwise.
Line3 line_from_pair_definitional(const Space& s2, const Point& a, const Point& b);
/// ((a+b)/2, 0) + r((a-b)^perp/2, 1) with (x1, x2)^perp = (x2, -x1).
Line3 line_from_pair_closed_form(const Space& s2, const Point& a, const Point& b);
/// Both of the above; FormMismatch if they differ.
Line3 line_from_pair(const Space& s2, const Point& a, const Point& b);

/// ((I - g)^-1 z, phi_inverse(g)) for a motion in SF'; NotOriented otherwise.
Point motion_point(const Space& s2, const RigidMotion& r);

struct IncidenceEquivalence {
  std::uint64_t motion_side = 0;
  std::uint64_t line_side = 0;
};

/// I(P, R) counted once over motions and once over the encoded points and lines.
IncidenceEquivalence incidence_equivalence(const Space& s2, const PairSet& p, std::span<const RigidMotion> r);

/// Distinct lines of U x U together with the number of pairs that produced them.
struct PairLines {
  std::vector<Line3> lines;  // sorted, distinct
  std::uint64_t pairs = 0;
};
PairLines lines_of_pairs(const Space& s2, std::span<const Point> u);

struct PlaneAudit {
  std::uint64_t max_lines = 0;
  std::optional<Plane3> plane;  // first plane in canonical order reaching the max
  std::uint64_t lines = 0;
  double implied_c = 0.0;       // max_lines / sqrt(lines)
};

PlaneAudit plane_audit(const Space& s3, std::span<const Line3> lines, unsigned workers = 1);
/// Plane audit of the lines of U x U.
PlaneAudit plane_audit(const Space& s2, std::span<const Point> u, unsigned workers = 1);

/// "PLANE": the plane maximum for the lines of U x U against |U|, so
/// c_star = max lines in a plane / |U|.
AuditReport plane_richness_report(const Space& s2, std::span<const Point> u, unsigned workers = 1);

/// Point-line incidences in F_q^3 (each line counted once per point on it).
std::uint64_t point_line_incidences(const Space& s3, std::span<const Point> points, std::span<const Line3> lines);

/// "K7.2": I(P, L) against |L||P|^(2/5) + |P|^(6/5), with the plane maximum
/// and implied c reported alongside.
AuditReport kollar_check(const Space& s3, std::span<const Point> points, std::span<const Line3> lines,
                         unsigned workers = 1);

}  // namespace fqgeom
