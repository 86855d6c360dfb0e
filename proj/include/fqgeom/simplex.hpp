#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fqgeom/ffield.hpp"
#include "fqgeom/motions.hpp"
#include "fqgeom/report.hpp"

namespace fqgeom {

/// Ordered (k+1)-tuple of points.
struct LabeledSimplex {
  std::vector<Point> vertices;
};

/// Congruence invariant of a labeled simplex: the matrix of norms
/// ||x^i - x^j|| and the dimension of span{x^i - x^1}.
struct SimplexKey {
  int vertices = 0;
  int rank = 0;
  std::vector<Elem> norms;  // row-major, vertices x vertices

  Elem norm(int i, int j) const { return norms[static_cast<std::size_t>(i * vertices + j)]; }
  /// "r|n12,n13,...,n1m,n23,..." with integer-encoded entries.
  std::string canonical() const;
  auto operator<=>(const SimplexKey&) const = default;
};

/// Dimension of the span of the given vectors.
int span_rank(const Space& s, std::span<const Point> vectors);

SimplexKey classify(const Space& s, const LabeledSimplex& x);
bool nondegenerate(const Space& s, const SimplexKey& key);

/// Number of (x, y) in A x B with ||x - y|| = lambda.
std::uint64_t distance_count(const Space& s, std::span<const Point> a, std::span<const Point> b, Elem lambda);

/// "T3.1": |N - |A||B|/q| against q^(1/2) sqrt(|A||B|); the stated constant is 4,
/// so `report.c_star <= 4` is a genuine pass/fail when the hypotheses hold.
AuditReport audit_distance(const Space& s, std::span<const Point> a, std::span<const Point> b, Elem lambda);
inline constexpr double kDistanceConstant = 4.0;

struct SegmentExtension {
  std::vector<Point> witnesses;  // all z with ||x-z|| = l2 and ||y-z|| = l3, sorted
  int mu = 0;                    // 2 / 1 / 0 by the character of 4 s2 - s1^2
  Elem discriminant;             // 4 s2 - s1^2
};

/// Apexes completing the segment (x, y) in F_q^2. Throws DegenerateSegment
/// when ||x - y|| = 0.
SegmentExtension extend_segment(const Space& s, const Point& x, const Point& y, Elem l2, Elem l3);
/// The 2/1/0 value from the side norms alone.
int mu_formula(const Field& f, Elem l1, Elem l2, Elem l3);

/// First motion (in O(d) order) mapping s1 onto s2 vertex-wise.
std::optional<RigidMotion> orbit_oracle(const Space& s, std::span<const OrthoMatrix> group,
                                        const LabeledSimplex& s1, const LabeledSimplex& s2);
std::optional<RigidMotion> orbit_oracle(const Space& s, const LabeledSimplex& s1, const LabeledSimplex& s2);

/// Number of rigid motions fixing every vertex.
std::uint64_t stabilizer_size(const Space& s, std::span<const OrthoMatrix> group, const LabeledSimplex& x);
std::uint64_t stabilizer_size(const Space& s, const LabeledSimplex& x);

class ClassCensus {
 public:
  ClassCensus() = default;
  ClassCensus(int simplex_dim, int space_dim) : k_(simplex_dim), d_(space_dim) {}

  void add(const SimplexKey& key, std::uint64_t multiplicity);

  const std::map<SimplexKey, std::uint64_t>& classes() const { return classes_; }
  int k() const { return k_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t class_count() const { return classes_.size(); }
  std::uint64_t degenerate_count() const { return degenerate_; }  // labeled tuples
  std::uint64_t nondegenerate_classes() const;
  std::uint64_t degenerate_classes() const;
  /// #{(x, y) : x ~ y} = sum_C |C|^2, read off the histogram.
  Wide pair_collisions() const;

  /// CSV: "key,multiplicity" then one row per class in key order.
  std::string to_csv() const;

 private:
  int k_ = 0;
  int d_ = 0;
  std::map<SimplexKey, std::uint64_t> classes_;
  std::uint64_t total_ = 0;
  std::uint64_t degenerate_ = 0;
};

/// Census of labeled k-simplices with x^i in sets[i] (k = sets.size() - 1).
ClassCensus count_classes(const Space& s, const std::vector<std::vector<Point>>& sets, unsigned workers = 1);

/// Classes of triangles (x, y, z) in A x B x C with ||x - y|| = lambda.
ClassCensus count_classes_containing(const Space& s, std::span<const Point> a, std::span<const Point> b,
                                     std::span<const Point> c, Elem lambda, unsigned workers = 1);

/// Unordered classes: keys identified under vertex permutations that map
/// every input set onto an identical input set.
std::uint64_t unordered_class_count(const ClassCensus& census, const std::vector<std::vector<Point>>& sets);

struct CopyCount {
  std::uint64_t count = 0;
  double main_term = 0.0;  // q^(-binom(k,2)) prod |A_i|
  double ratio = 0.0;
};

/// Labeled copies of the simplex with norm matrix `delta` in prod A_i.
/// Off-diagonal norms must be nonzero.
CopyCount copy_count(const Space& s, const std::vector<std::vector<Point>>& sets, const SimplexKey& delta);

struct SphereIntersection {
  std::vector<Point> points;
  bool independent = false;  // centers' differences linearly independent
  double bound = 0.0;        // 2 q^(d-k)
  bool within_bound = true;  // vacuous unless independent
};

/// Points of F_q^d on every sphere ||x - c_i|| = r_i (radii nonzero).
SphereIntersection sphere_intersection(const Space& s, std::span<const Point> centers, std::span<const Elem> radii);

/// Points of norm rho, per rho, for repeated sphere queries.
class SphereTable {
 public:
  explicit SphereTable(const Space& s);
  const std::vector<Point>& sphere(Elem rho) const { return by_norm_[rho.v]; }

 private:
  std::vector<std::vector<Point>> by_norm_;
};

SphereIntersection sphere_intersection(const Space& s, const SphereTable& table, std::span<const Point> centers,
                                       std::span<const Elem> radii);

}  // namespace fqgeom
