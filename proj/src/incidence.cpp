#include "fqgeom/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fqgeom/errors.hpp"
#include "fqgeom/parallel.hpp"

namespace fqgeom {

PairSet::PairSet(const Space& s, std::vector<Point> u, std::vector<Point> v) : u_(std::move(u)), v_(std::move(v)) {
  for (const auto& x : u_) s.check(x);
  for (const auto& x : v_) s.check(x);
  normalize_set(u_);
  normalize_set(v_);
}

std::uint64_t MotionSpectrum::incidences() const {
  std::uint64_t total = 0;
  for (const auto& [k, n] : histogram) total += k * n;
  return total;
}

std::uint64_t MotionSpectrum::count_at_least(std::uint64_t k) const {
  std::uint64_t total = 0;
  for (auto it = histogram.lower_bound(k); it != histogram.end(); ++it) total += it->second;
  return total;
}

Wide ipow(std::uint64_t base, unsigned e) {
  Wide acc = 1;
  for (unsigned i = 0; i < e; ++i) acc *= base;
  return acc;
}

std::uint64_t motion_incidences(const Space& s, std::span<const Point> u, const PointIndex& v,
                                const RigidMotion& r) {
  std::uint64_t n = 0;
  for (const auto& x : u) n += v.contains(apply(s, r, x)) ? 1 : 0;
  return n;
}

std::uint64_t incidence_count(const Space& s, const PairSet& p, std::span<const RigidMotion> r,
                              unsigned workers) {
  for (const auto& m : r) s.check(m.z);
  const PointIndex v(s, p.V());
  return parallel_reduce<std::uint64_t>(
      r.size(), workers,
      [&](std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t n = 0;
        for (std::uint64_t i = lo; i < hi; ++i) n += motion_incidences(s, p.U(), v, r[i]);
        return n;
      },
      [](std::uint64_t a, std::uint64_t b) { return a + b; });
}

namespace {

using Counts = std::vector<std::uint64_t>;

// Visits i(r) for a contiguous block of universe indices, reusing g*U across
// consecutive translations of the same linear part.
template <class Visit>
void scan_universe(const MotionUniverse& uni, std::span<const Point> u, const PointIndex& v,
                   std::uint64_t lo, std::uint64_t hi, Visit&& visit) {
  const Space& s = uni.space();
  const std::uint64_t tc = uni.translation_count();
  std::vector<Point> gu(u.size());
  std::uint64_t cached = UINT64_MAX;
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    const std::uint64_t gi = idx / tc;
    if (gi != cached) {
      for (std::size_t i = 0; i < u.size(); ++i) gu[i] = mat_vec(s, uni.linear_parts()[gi].m, u[i]);
      cached = gi;
    }
    const Point z = uni.translation(idx % tc);
    std::uint64_t n = 0;
    for (const auto& x : gu) n += v.contains(s.add(x, z)) ? 1 : 0;
    visit(idx, n);
  }
}

Counts merge_counts(Counts a, Counts b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

MotionSpectrum motion_spectrum(const MotionUniverse& universe, const PairSet& p, unsigned workers) {
  const Space& s = universe.space();
  const PointIndex v(s, p.V());
  const std::uint64_t cap = std::min(p.U().size(), p.V().size());
  Counts hist = parallel_reduce<Counts>(
      universe.size(), workers,
      [&](std::uint64_t lo, std::uint64_t hi) {
        Counts h(cap + 1, 0);
        scan_universe(universe, p.U(), v, lo, hi, [&](std::uint64_t, std::uint64_t n) { ++h[n]; });
        return h;
      },
      merge_counts);
  MotionSpectrum out;
  out.universe_size = universe.size();
  for (std::size_t k = 0; k < hist.size(); ++k)
    if (hist[k] != 0) out.histogram[k] = hist[k];
  return out;
}

MotionSpectrum motion_spectrum(const Space& s, const PairSet& p, MotionClass universe, unsigned workers) {
  return motion_spectrum(MotionUniverse(s, universe), p, workers);
}

std::vector<RigidMotion> rich_motions(const Space& s, const PairSet& p, std::uint64_t k, MotionClass universe,
                                      unsigned workers) {
  if (k == 0) throw Error(ErrorKind::BadParameters, "richness threshold must be >= 1");
  const MotionUniverse uni(s, universe);
  const PointIndex v(s, p.V());
  using List = std::vector<RigidMotion>;
  return parallel_reduce<List>(
      uni.size(), workers,
      [&](std::uint64_t lo, std::uint64_t hi) {
        List out;
        scan_universe(uni, p.U(), v, lo, hi, [&](std::uint64_t idx, std::uint64_t n) {
          if (n >= k) out.push_back(uni.motion(idx));
        });
        return out;
      },
      [](List a, List b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
      });
}

Wide moment_sum(const MotionSpectrum& spectrum, unsigned t) {
  if (t == 0) throw Error(ErrorKind::BadParameters, "moment exponent must be >= 1");
  Wide total = 0;
  for (const auto& [k, n] : spectrum.histogram) total += ipow(k, t) * n;
  return total;
}

Wide moment_sum(const Space& s, const PairSet& p, unsigned t, MotionClass universe, unsigned workers) {
  return moment_sum(motion_spectrum(s, p, universe, workers), t);
}

TripleCorrelation triple_correlation(const Space& s, std::span<const Point> a, std::span<const Point> b,
                                     std::span<const Point> c, MotionClass universe, unsigned workers) {
  const MotionUniverse uni(s, universe);
  const PointIndex ia(s, a), ib(s, b), ic(s, c);
  struct Sums {
    Wide exact = 0, a3 = 0, b3 = 0, c3 = 0, a4 = 0, b4 = 0, c2 = 0;
  };
  const Sums sums = parallel_reduce<Sums>(
      uni.size(), workers,
      [&](std::uint64_t lo, std::uint64_t hi) {
        Sums acc;
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
          const RigidMotion r = uni.motion(idx);
          const Wide x = motion_incidences(s, a, ia, r);
          const Wide y = motion_incidences(s, b, ib, r);
          const Wide z = motion_incidences(s, c, ic, r);
          acc.exact += x * y * z;
          acc.a3 += x * x * x;
          acc.b3 += y * y * y;
          acc.c3 += z * z * z;
          acc.a4 += x * x * x * x;
          acc.b4 += y * y * y * y;
          acc.c2 += z * z;
        }
        return acc;
      },
      [](Sums l, const Sums& r) {
        l.exact += r.exact;
        l.a3 += r.a3;
        l.b3 += r.b3;
        l.c3 += r.c3;
        l.a4 += r.a4;
        l.b4 += r.b4;
        l.c2 += r.c2;
        return l;
      });
  TripleCorrelation out;
  out.exact = sums.exact;
  out.sum_a3 = sums.a3;
  out.sum_b3 = sums.b3;
  out.sum_c3 = sums.c3;
  out.sum_a4 = sums.a4;
  out.sum_b4 = sums.b4;
  out.sum_c2 = sums.c2;
  auto ld = [](Wide w) { return static_cast<long double>(w); };
  out.holder_333 = static_cast<double>(std::cbrt(ld(sums.a3)) * std::cbrt(ld(sums.b3)) * std::cbrt(ld(sums.c3)));
  out.holder_442 = static_cast<double>(std::pow(ld(sums.a4), 0.25L) * std::pow(ld(sums.b4), 0.25L) *
                                       std::sqrt(ld(sums.c2)));
  return out;
}

std::string_view to_string(IncidenceTheorem t) {
  switch (t) {
    case IncidenceTheorem::T2_1: return "T2.1";
    case IncidenceTheorem::T2_3_1: return "T2.3(1)";
    case IncidenceTheorem::T2_3_2: return "T2.3(2)";
    case IncidenceTheorem::T2_4: return "T2.4";
    case IncidenceTheorem::T2_6: return "T2.6";
    case IncidenceTheorem::T8_2: return "T8.2";
  }
  return "?";
}

IncidenceTheorem incidence_theorem_from_string(std::string_view name) {
  for (auto t : kIncidenceTheorems)
    if (to_string(t) == name) return t;
  throw Error(ErrorKind::Parse, "unknown incidence theorem '" + std::string(name) + "'");
}

namespace {

SideCondition cond(std::string text, bool ok) { return SideCondition{std::move(text), ok}; }

bool dimension_residue_ok(int d, const Field& f) {
  return (d >= 3 && d % 2 == 1) || (d % 4 == 2 && f.q_mod_4() == 3);
}

bool all_in_class(const Space& s, std::span<const RigidMotion> r, MotionClass tag) {
  return std::all_of(r.begin(), r.end(), [&](const RigidMotion& m) { return in_class(s, m, tag); });
}

}  // namespace

AuditReport audit_bound_with(const Space& s, const PairSet& p, std::span<const RigidMotion> r,
                             IncidenceTheorem which, std::uint64_t incidences) {
  const Field& f = s.field();
  const int d = s.dim();
  const double q = f.q();
  const double nu = static_cast<double>(p.U().size());
  const double nv = static_cast<double>(p.V().size());
  const double np = static_cast<double>(p.size());
  const double nr = static_cast<double>(r.size());

  AuditReport rep;
  rep.theorem = std::string(to_string(which));
  rep.q = f.q();
  rep.d = d;
  rep.sizes = {{"U", p.U().size()}, {"V", p.V().size()}, {"P", p.size()}, {"R", r.size()}};
  rep.lhs = incidences;
  rep.kind = BoundKind::Upper;
  const double o_dm1 = static_cast<double>(orthogonal_order(f, d - 1));
  const Wide u2 = ipow(p.U().size(), 2);
  const std::string residue = "(d>=3 odd) or (d=2 mod 4 and q=3 mod 4)";

  switch (which) {
    case IncidenceTheorem::T2_1:
      rep.main_term = np * nr / std::pow(q, d);
      rep.error_term_unit = std::pow(q, d / 2.0) * std::sqrt(o_dm1) * std::sqrt(np * nr);
      break;
    case IncidenceTheorem::T2_3_1:
      rep.side_conditions.push_back(cond(residue, dimension_residue_ok(d, f)));
      rep.side_conditions.push_back(cond("|U| < q^((d-1)/2)", u2 < ipow(f.q(), static_cast<unsigned>(d - 1))));
      rep.main_term = np * nr / std::pow(q, d);
      rep.error_term_unit = std::pow(q, (d - 1) / 2.0) * std::sqrt(o_dm1) * std::sqrt(np * nr);
      break;
    case IncidenceTheorem::T2_3_2:
      rep.side_conditions.push_back(cond(residue, dimension_residue_ok(d, f)));
      rep.side_conditions.push_back(cond("q^((d-1)/2) <= |U| <= q^((d+1)/2)",
                                         u2 >= ipow(f.q(), static_cast<unsigned>(d - 1)) &&
                                             u2 <= ipow(f.q(), static_cast<unsigned>(d + 1))));
      rep.main_term = np * nr / std::pow(q, d);
      rep.error_term_unit =
          std::pow(q, (d - 1) / 4.0) * std::sqrt(o_dm1) * std::sqrt(np * nr) * std::sqrt(nu);
      break;
    case IncidenceTheorem::T2_4: {
      rep.side_conditions.push_back(cond("d = 2", d == 2));
      rep.side_conditions.push_back(cond("q = 3 mod 4", f.q_mod_4() == 3));
      double small = nu, large = nv;
      if (nu > nv) {
        std::swap(small, large);
        rep.notes.push_back("U and V swapped so that |U| <= |V| (I(U x V, R) = I(V x U, R^-1))");
      }
      rep.main_term = np * nr / (q * q);
      rep.error_term_unit = std::sqrt(q) * std::pow(small, 0.75) * std::sqrt(large) * std::sqrt(nr);
      break;
    }
    case IncidenceTheorem::T2_6:
      rep.side_conditions.push_back(cond("d = 2", d == 2));
      rep.side_conditions.push_back(cond("q = 3 mod 4", f.q_mod_4() == 3));
      rep.side_conditions.push_back(cond("R subset of SF'(2,q)", d == 2 && all_in_class(s, r, MotionClass::SFPrime)));
      rep.side_conditions.push_back(cond("U = V", p.symmetric()));
      rep.main_term = 0.0;
      rep.error_term_unit = std::max(np * std::pow(nr, 0.4), std::pow(nr, 1.2));
      break;
    case IncidenceTheorem::T8_2: {
      const std::uint64_t pr = f.p();
      rep.side_conditions.push_back(cond("q prime", f.r() == 1));
      rep.side_conditions.push_back(cond("p = 3 mod 4", pr % 4 == 3));
      rep.side_conditions.push_back(cond("d = 2", d == 2));
      rep.side_conditions.push_back(cond("U = V", p.symmetric()));
      const std::uint64_t n = p.U().size();
      rep.side_conditions.push_back(
          cond("p^(5/4) <= |U| <= p^(4/3)", ipow(n, 4) >= ipow(pr, 5) && ipow(n, 3) <= ipow(pr, 4)));
      rep.main_term = np * nr / (q * q);
      rep.error_term_unit = std::pow(q, 0.125) * std::pow(nu, 1.5) * std::sqrt(nr);
      break;
    }
  }
  rep.finalize();
  return rep;
}

AuditReport audit_bound(const Space& s, const PairSet& p, std::span<const RigidMotion> r, IncidenceTheorem which,
                        unsigned workers) {
  return audit_bound_with(s, p, r, which, incidence_count(s, p, r, workers));
}

std::vector<AuditReport> audit_cs_bounds(const Space& s, const PairSet& p, std::span<const RigidMotion> r,
                                         unsigned workers) {
  const Field& f = s.field();
  const std::uint64_t inc = incidence_count(s, p, r, workers);
  const double np = static_cast<double>(p.size());
  const double nr = static_cast<double>(r.size());
  auto base = [&](std::string id) {
    AuditReport rep;
    rep.theorem = std::move(id);
    rep.q = f.q();
    rep.d = s.dim();
    rep.sizes = {{"U", p.U().size()}, {"V", p.V().size()}, {"P", p.size()}, {"R", r.size()}};
    rep.lhs = inc;
    rep.kind = BoundKind::Upper;
    return rep;
  };
  std::vector<AuditReport> out;
  AuditReport cs31 = base("CS3.1");
  cs31.error_term_unit = np * std::sqrt(nr) + nr;
  cs31.finalize();
  out.push_back(cs31);

  AuditReport cs33 = base("CS3.3");
  cs33.side_conditions.push_back(cond("q prime", f.r() == 1));
  cs33.side_conditions.push_back(cond("U = V", p.symmetric()));
  cs33.side_conditions.push_back(cond("|U| <= q", p.U().size() <= f.q()));
  cs33.error_term_unit = std::pow(np, 5.0 / 6.0) * std::sqrt(nr) + nr;
  cs33.finalize();
  out.push_back(cs33);
  return out;
}

AuditReport audit_rich(const Space& s, const PairSet& p, MotionClass universe, unsigned workers) {
  const Field& f = s.field();
  const int d = s.dim();
  const MotionSpectrum spec = motion_spectrum(s, p, universe, workers);
  const double qd = std::pow(static_cast<double>(f.q()), d);
  const double np = static_cast<double>(p.size());
  const double o_dm1 = static_cast<double>(orthogonal_order(f, d - 1));

  AuditReport rep;
  rep.theorem = "C2.2";
  rep.q = f.q();
  rep.d = d;
  rep.kind = BoundKind::Upper;
  rep.side_conditions.push_back(cond("U = V", p.symmetric()));
  // k > 2|P| q^-d  <=>  k q^d > 2|P|
  const Wide qdi = ipow(f.q(), static_cast<unsigned>(d));
  std::uint64_t best_k = 0, best_rk = 0;
  double best = -1.0;
  const std::uint64_t kmax = spec.histogram.empty() ? 0 : spec.histogram.rbegin()->first;
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    if (static_cast<Wide>(k) * qdi <= 2 * static_cast<Wide>(p.size())) continue;
    const std::uint64_t rk = spec.count_at_least(k);
    const double ratio = static_cast<double>(rk) * static_cast<double>(k) * static_cast<double>(k) / (o_dm1 * np * qd);
    if (ratio > best) {
      best = ratio;
      best_k = k;
      best_rk = rk;
    }
  }
  rep.sizes = {{"U", p.U().size()}, {"P", p.size()}, {"universe", spec.universe_size}, {"k", best_k}};
  rep.lhs = best_rk;
  rep.main_term = 0.0;
  rep.error_term_unit = best_k == 0 ? 0.0 : o_dm1 * np * qd / (static_cast<double>(best_k) * static_cast<double>(best_k));
  if (best_k == 0) rep.notes.push_back("no k above 2|P|/q^d is attained");
  rep.finalize();
  return rep;
}

std::vector<AuditReport> audit_moments(const Space& s, const PairSet& p, unsigned t, unsigned workers) {
  const Field& f = s.field();
  const int d = s.dim();
  const MotionSpectrum spec = motion_spectrum(s, p, MotionClass::General, workers);
  const std::uint64_t lhs = narrow(moment_sum(spec, t));
  const double q = f.q();
  const double np = static_cast<double>(p.size());
  const double o_d = static_cast<double>(orthogonal_order(f, d));
  const double o_dm1 = static_cast<double>(orthogonal_order(f, d - 1));

  auto base = [&](std::string id) {
    AuditReport rep;
    rep.theorem = std::move(id);
    rep.q = f.q();
    rep.d = d;
    rep.sizes = {{"U", p.U().size()}, {"P", p.size()}, {"t", t}, {"universe", spec.universe_size}};
    rep.lhs = lhs;
    rep.kind = BoundKind::Upper;
    rep.side_conditions.push_back(cond("U = V", p.symmetric()));
    return rep;
  };
  std::vector<AuditReport> out;
  AuditReport p51 = base("P5.1");
  p51.side_conditions.push_back(cond("t >= 3", t >= 3));
  p51.main_term = std::pow(np, t) * o_d / std::pow(q, (t - 1.0) * d);
  p51.error_term_unit = std::pow(q, d) * o_dm1 * std::pow(np, t / 2.0);
  p51.finalize();
  out.push_back(p51);
  if (d == 2) {
    AuditReport p52 = base("P5.2");
    p52.side_conditions.push_back(cond("t >= 2", t >= 2));
    p52.side_conditions.push_back(cond("q = 3 mod 4", f.q_mod_4() == 3));
    p52.main_term = std::pow(np, t) / std::pow(q, 2.0 * t - 3.0);
    p52.error_term_unit = q * std::pow(np, (2.0 * t + 1.0) / 4.0);
    p52.finalize();
    out.push_back(p52);
  }
  return out;
}

}  // namespace fqgeom
