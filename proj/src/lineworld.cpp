#include "fqgeom/lineworld.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fqgeom/errors.hpp"
#include "fqgeom/parallel.hpp"

namespace fqgeom {

namespace {

void require_space3(const Space& s3) {
  if (s3.dim() != 3) throw Error(ErrorKind::DimensionMismatch, "expected F_q^3");
}

void require_residue(const Field& f) {
  if (f.q_mod_4() != 3) throw Error(ErrorKind::WrongResidue, "the line encoding needs q = 3 mod 4");
}

bool is_zero(const Point& x) {
  for (int i = 0; i < x.dim; ++i)
    if (x[i].v != 0) return false;
  return true;
}

}  // namespace

Line3 make_line(const Space& s3, const Point& base, const Point& dir) {
  require_space3(s3);
  s3.check(base);
  s3.check(dir);
  if (is_zero(dir)) throw Error(ErrorKind::BadParameters, "line direction is zero");
  const Field& f = s3.field();
  int k = 2;
  while (dir[k].v == 0) --k;
  Line3 l;
  l.dir = s3.scale(f.inv(dir[k]), dir);
  l.base = s3.sub(base, s3.scale(base[k], l.dir));
  return l;
}

Plane3 make_plane(const Space& s3, const Point& normal, Elem offset) {
  require_space3(s3);
  s3.check(normal);
  if (is_zero(normal)) throw Error(ErrorKind::BadParameters, "plane normal is zero");
  const Field& f = s3.field();
  int k = 0;
  while (normal[k].v == 0) ++k;
  const Elem inv = f.inv(normal[k]);
  return Plane3{s3.scale(inv, normal), f.mul(inv, offset)};
}

bool on_line(const Space& s3, const Line3& l, const Point& x) {
  int k = 2;
  while (l.dir[k].v == 0) --k;
  const Point rel = s3.sub(x, l.base);
  return s3.scale(rel[k], l.dir) == rel;
}

bool on_plane(const Space& s3, const Plane3& h, const Point& x) { return s3.dot(h.normal, x) == h.offset; }

bool in_plane(const Space& s3, const Plane3& h, const Line3& l) {
  return on_plane(s3, h, l.base) && on_plane(s3, h, s3.add(l.base, l.dir));
}

std::vector<Point> line_points(const Space& s3, const Line3& l) {
  std::vector<Point> out;
  const Field& f = s3.field();
  for (std::uint32_t t = 0; t < f.q(); ++t) out.push_back(s3.add(l.base, s3.scale(f.elem(t), l.dir)));
  return out;
}

std::vector<Plane3> all_planes(const Space& s3) {
  require_space3(s3);
  const Field& f = s3.field();
  std::vector<Plane3> out;
  for (std::uint64_t code = 1; code < s3.size(); ++code) {
    const Point n = s3.decode(code);
    int k = 0;
    while (n[k].v == 0) ++k;
    if (n[k].v != 1) continue;
    for (std::uint32_t e = 0; e < f.q(); ++e) out.push_back(Plane3{n, f.elem(e)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

OrthoMatrix phi_of(const Field& f, Elem r) {
  require_residue(f);
  const Elem r2 = f.square(r);
  const Elem den = f.inv(f.add(r2, f.one()));
  const Elem a = f.mul(f.sub(r2, f.one()), den);
  const Elem b = f.mul(f.mul(f.from_int(2), r), den);
  Matrix m;
  m.dim = 2;
  m(0, 0) = a;
  m(0, 1) = f.neg(b);
  m(1, 0) = b;
  m(1, 1) = a;
  return OrthoMatrix{m, 1};
}

Elem phi_inverse(const Field& f, const OrthoMatrix& g) {
  require_residue(f);
  const Matrix& m = g.m;
  if (m.dim != 2 || !is_orthogonal(f, m) || determinant(f, m) != f.one() || m == identity_matrix(2))
    throw Error(ErrorKind::NotInDomain, "phi_inverse needs a rotation other than I");
  return f.div(m(1, 0), f.sub(f.one(), m(0, 0)));
}

namespace {

// (I - g)^-1 v for a 2x2 g with I - g invertible.
Point solve_fixed(const Space& s2, const Matrix& g, const Point& v) {
  const Field& f = s2.field();
  const Elem a = f.sub(f.one(), g(0, 0)), b = f.neg(g(0, 1));
  const Elem c = f.neg(g(1, 0)), d = f.sub(f.one(), g(1, 1));
  const Elem det = f.sub(f.mul(a, d), f.mul(b, c));
  if (det.v == 0) throw Error(ErrorKind::NotInDomain, "I - g is singular");
  const Elem inv = f.inv(det);
  Point x = s2.zero();
  x[0] = f.mul(inv, f.sub(f.mul(d, v[0]), f.mul(b, v[1])));
  x[1] = f.mul(inv, f.sub(f.mul(a, v[1]), f.mul(c, v[0])));
  return x;
}

Point lift(const Space& s3, const Point& xy, Elem r) {
  Point out = s3.zero();
  out[0] = xy[0];
  out[1] = xy[1];
  out[2] = r;
  return out;
}

void require_plane(const Space& s2) {
  if (s2.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "expected F_q^2");
  require_residue(s2.field());
}

}  // namespace

Line3 line_from_pair_definitional(const Space& s2, const Point& a, const Point& b) {
  require_plane(s2);
  s2.check(a);
  s2.check(b);
  const Field& f = s2.field();
  const Space s3(f, 3);
  std::vector<Point> pts;
  for (std::uint32_t t = 0; t < f.q(); ++t) {
    const Elem r = f.elem(t);
    const Matrix& g = phi_of(f, r).m;
    const Point z = s2.sub(b, mat_vec(s2, g, a));
    pts.push_back(lift(s3, solve_fixed(s2, g, z), r));
  }
  const Line3 l = make_line(s3, pts[0], s3.sub(pts[1], pts[0]));
  for (const auto& x : pts)
    if (!on_line(s3, l, x)) throw Error(ErrorKind::FormMismatch, "motion parameter set is not a line");
  return l;
}

Line3 line_from_pair_closed_form(const Space& s2, const Point& a, const Point& b) {
  require_plane(s2);
  s2.check(a);
  s2.check(b);
  const Field& f = s2.field();
  const Space s3(f, 3);
  const Elem half = f.inv(f.from_int(2));
  const Point mid = s2.scale(half, s2.add(a, b));
  const Point diff = s2.sub(a, b);
  Point perp = s2.zero();
  perp[0] = diff[1];
  perp[1] = f.neg(diff[0]);
  return make_line(s3, lift(s3, mid, f.zero()), lift(s3, s2.scale(half, perp), f.one()));
}

Line3 line_from_pair(const Space& s2, const Point& a, const Point& b) {
  const Line3 def = line_from_pair_definitional(s2, a, b);
  if (def != line_from_pair_closed_form(s2, a, b))
    throw Error(ErrorKind::FormMismatch, "closed-form line disagrees with the motion parametrization");
  return def;
}

Point motion_point(const Space& s2, const RigidMotion& r) {
  require_plane(s2);
  if (!in_class(s2, r, MotionClass::SFPrime))
    throw Error(ErrorKind::NotOriented, "line encoding needs a rotation other than I");
  const Field& f = s2.field();
  return lift(Space(f, 3), solve_fixed(s2, r.g.m, r.z), phi_inverse(f, r.g));
}

IncidenceEquivalence incidence_equivalence(const Space& s2, const PairSet& p, std::span<const RigidMotion> r) {
  require_plane(s2);
  const Space s3(s2.field(), 3);
  std::vector<Point> points;
  for (const auto& m : r) points.push_back(motion_point(s2, m));

  IncidenceEquivalence out;
  out.motion_side = incidence_count(s2, p, r);
  // Each pair contributes its own line, so coinciding lines keep their multiplicity.
  for (const auto& u : p.U())
    for (const auto& v : p.V()) {
      const Line3 l = line_from_pair(s2, u, v);
      for (const auto& x : points) out.line_side += on_line(s3, l, x) ? 1 : 0;
    }
  return out;
}

PairLines lines_of_pairs(const Space& s2, std::span<const Point> u) {
  PairLines out;
  for (const auto& a : u)
    for (const auto& b : u) {
      out.lines.push_back(line_from_pair(s2, a, b));
      ++out.pairs;
    }
  std::sort(out.lines.begin(), out.lines.end());
  out.lines.erase(std::unique(out.lines.begin(), out.lines.end()), out.lines.end());
  return out;
}

PlaneAudit plane_audit(const Space& s3, std::span<const Line3> lines, unsigned workers) {
  require_space3(s3);
  const std::vector<Plane3> planes = all_planes(s3);
  const Limits& lim = s3.field().limits();
  const Wide work = static_cast<Wide>(planes.size()) * lines.size();
  if (!lim.force && work > lim.max_tuples)
    throw Error(ErrorKind::TooLarge, "plane audit of " + to_string(work) + " plane-line tests exceeds the guardrail");

  using Best = std::pair<std::uint64_t, std::uint64_t>;  // (count, plane index)
  const Best best = parallel_reduce<Best>(
      planes.size(), workers,
      [&](std::uint64_t lo, std::uint64_t hi) {
        Best b{0, UINT64_MAX};
        for (std::uint64_t i = lo; i < hi; ++i) {
          std::uint64_t n = 0;
          for (const auto& l : lines) n += in_plane(s3, planes[i], l) ? 1 : 0;
          if (n > b.first || b.second == UINT64_MAX) b = {n, i};
        }
        return b;
      },
      [](Best a, Best b) { return b.first > a.first || a.second == UINT64_MAX ? b : a; });

  PlaneAudit out;
  out.lines = lines.size();
  out.max_lines = best.first;
  if (!lines.empty() && best.second != UINT64_MAX) out.plane = planes[best.second];
  out.implied_c = lines.empty() ? 0.0 : static_cast<double>(out.max_lines) / std::sqrt(static_cast<double>(lines.size()));
  return out;
}

PlaneAudit plane_audit(const Space& s2, std::span<const Point> u, unsigned workers) {
  const PairLines pl = lines_of_pairs(s2, u);
  return plane_audit(Space(s2.field(), 3), pl.lines, workers);
}

AuditReport plane_richness_report(const Space& s2, std::span<const Point> u, unsigned workers) {
  std::vector<Point> us(u.begin(), u.end());
  normalize_set(us);
  const PairLines lines = lines_of_pairs(s2, us);
  const PlaneAudit pa = plane_audit(Space(s2.field(), 3), lines.lines, workers);
  AuditReport rep;
  rep.theorem = "PLANE";
  rep.q = s2.field().q();
  rep.d = 3;
  rep.sizes = {{"U", us.size()}, {"L", lines.lines.size()}};
  rep.lhs = pa.max_lines;
  rep.error_term_unit = static_cast<double>(us.size());
  rep.side_conditions = {{"q=3 mod 4", s2.field().q_mod_4() == 3}};
  if (lines.lines.size() != lines.pairs) rep.notes.push_back("distinct pairs produced coinciding lines");
  rep.finalize();
  return rep;
}

std::uint64_t point_line_incidences(const Space& s3, std::span<const Point> points, std::span<const Line3> lines) {
  require_space3(s3);
  const PointIndex index(s3, points);
  std::uint64_t n = 0;
  for (const auto& l : lines)
    for (const auto& x : line_points(s3, l)) n += index.contains(x) ? 1 : 0;
  return n;
}

AuditReport kollar_check(const Space& s3, std::span<const Point> points, std::span<const Line3> lines,
                         unsigned workers) {
  std::vector<Point> pts(points.begin(), points.end());
  normalize_set(pts);
  std::vector<Line3> ls(lines.begin(), lines.end());
  std::sort(ls.begin(), ls.end());
  ls.erase(std::unique(ls.begin(), ls.end()), ls.end());

  const PlaneAudit pa = plane_audit(s3, ls, workers);
  const double np = static_cast<double>(pts.size());
  const double nl = static_cast<double>(ls.size());
  AuditReport rep;
  rep.theorem = "K7.2";
  rep.q = s3.field().q();
  rep.d = 3;
  rep.sizes = {{"P", pts.size()}, {"L", ls.size()}, {"plane_max", pa.max_lines}};
  rep.kind = BoundKind::Upper;
  rep.lhs = point_line_incidences(s3, pts, ls);
  rep.main_term = 0.0;
  rep.error_term_unit = nl * std::pow(np, 0.4) + std::pow(np, 1.2);
  char buf[96];
  std::snprintf(buf, sizeof buf, "plane hypothesis: max %llu lines in a plane, implied c = %.6g",
                static_cast<unsigned long long>(pa.max_lines), pa.implied_c);
  rep.notes.push_back(buf);
  rep.finalize();
  return rep;
}

}  // namespace fqgeom
