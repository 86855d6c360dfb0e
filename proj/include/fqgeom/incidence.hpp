#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "fqgeom/ffield.hpp"
#include "fqgeom/motions.hpp"
#include "fqgeom/report.hpp"

namespace fqgeom {

/// P = U x V, kept implicit. U and V are stored sorted and deduplicated.
class PairSet {
 public:
  PairSet(const Space& s, std::vector<Point> u, std::vector<Point> v);

  const std::vector<Point>& U() const { return u_; }
  const std::vector<Point>& V() const { return v_; }
  std::uint64_t size() const { return u_.size() * v_.size(); }
  bool symmetric() const { return u_ == v_; }
  PairSet swapped(const Space& s) const { return PairSet(s, v_, u_); }

 private:
  std::vector<Point> u_;
  std::vector<Point> v_;
};

/// Histogram of i(r) over a motion universe.
struct MotionSpectrum {
  std::map<std::uint64_t, std::uint64_t> histogram;
  std::uint64_t universe_size = 0;

  std::uint64_t incidences() const;
  std::uint64_t count_at_least(std::uint64_t k) const;
};

/// i(r) = #{u in U : g u + z in V}.
std::uint64_t motion_incidences(const Space& s, std::span<const Point> u, const PointIndex& v,
                                const RigidMotion& r);

/// I(P, R), costing O(|R| |U|) membership tests.
std::uint64_t incidence_count(const Space& s, const PairSet& p, std::span<const RigidMotion> r,
                              unsigned workers = 1);

MotionSpectrum motion_spectrum(const MotionUniverse& universe, const PairSet& p, unsigned workers = 1);
MotionSpectrum motion_spectrum(const Space& s, const PairSet& p, MotionClass universe, unsigned workers = 1);

/// R_k: motions of the universe incident to at least k pairs, in universe order.
std::vector<RigidMotion> rich_motions(const Space& s, const PairSet& p, std::uint64_t k,
                                      MotionClass universe, unsigned workers = 1);

Wide moment_sum(const MotionSpectrum& spectrum, unsigned t);
Wide moment_sum(const Space& s, const PairSet& p, unsigned t, MotionClass universe, unsigned workers = 1);

struct TripleCorrelation {
  Wide exact = 0;
  Wide sum_a3 = 0, sum_b3 = 0, sum_c3 = 0;
  Wide sum_a4 = 0, sum_b4 = 0, sum_c2 = 0;
  double holder_333 = 0.0;  // (sum a^3)^(1/3) (sum b^3)^(1/3) (sum c^3)^(1/3)
  double holder_442 = 0.0;  // (sum a^4)^(1/4) (sum b^4)^(1/4) (sum c^2)^(1/2)
};

/// sum_r i_A(r) i_B(r) i_C(r) with i_X(r) counting pairs of X x X.
TripleCorrelation triple_correlation(const Space& s, std::span<const Point> a, std::span<const Point> b,
                                     std::span<const Point> c, MotionClass universe, unsigned workers = 1);

enum class IncidenceTheorem { T2_1, T2_3_1, T2_3_2, T2_4, T2_6, T8_2 };

std::string_view to_string(IncidenceTheorem t);
IncidenceTheorem incidence_theorem_from_string(std::string_view name);
inline constexpr IncidenceTheorem kIncidenceTheorems[] = {
    IncidenceTheorem::T2_1, IncidenceTheorem::T2_3_1, IncidenceTheorem::T2_3_2,
    IncidenceTheorem::T2_4, IncidenceTheorem::T2_6,   IncidenceTheorem::T8_2};

/// Exact I(P, R) against the theorem's two terms. Violated hypotheses are
/// listed in side_conditions; the audit still runs.
AuditReport audit_bound(const Space& s, const PairSet& p, std::span<const RigidMotion> r,
                        IncidenceTheorem which, unsigned workers = 1);
/// Same, reusing an already computed I(P, R).
AuditReport audit_bound_with(const Space& s, const PairSet& p, std::span<const RigidMotion> r,
                             IncidenceTheorem which, std::uint64_t incidences);

/// "CS3.1": I <= |P||R|^(1/2) + |R| (constant 1), and "CS3.3":
/// I << |P|^(5/6)|R|^(1/2) + |R| (prime field, P = U x U, |U| <= q).
std::vector<AuditReport> audit_cs_bounds(const Space& s, const PairSet& p, std::span<const RigidMotion> r,
                                         unsigned workers = 1);

/// "C2.2": max over k > 2|P|/q^d of |R_k| k^2 / (|O(d-1)| |P| q^d), over the universe.
AuditReport audit_rich(const Space& s, const PairSet& p, MotionClass universe, unsigned workers = 1);

/// "P5.1" (t >= 3, any d) and, for d = 2, "P5.2" (t >= 2, q = 3 mod 4):
/// moment sums over the full motion group against the stated two terms.
std::vector<AuditReport> audit_moments(const Space& s, const PairSet& p, unsigned t, unsigned workers = 1);

/// Integer power helper used by the exact side-condition checks.
Wide ipow(std::uint64_t base, unsigned e);

}  // namespace fqgeom
