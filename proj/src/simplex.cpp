#include "fqgeom/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fqgeom/errors.hpp"
#include "fqgeom/parallel.hpp"

namespace fqgeom {

std::string SimplexKey::canonical() const {
  std::ostringstream os;
  os << rank << '|';
  bool first = true;
  for (int i = 0; i < vertices; ++i)
    for (int j = i + 1; j < vertices; ++j) {
      os << (first ? "" : ",") << norm(i, j).v;
      first = false;
    }
  return os.str();
}

int span_rank(const Space& s, std::span<const Point> vectors) {
  const Field& f = s.field();
  const int d = s.dim();
  std::vector<Point> rows(vectors.begin(), vectors.end());
  int rank = 0;
  for (int col = 0; col < d && rank < static_cast<int>(rows.size()); ++col) {
    auto piv = std::find_if(rows.begin() + rank, rows.end(), [&](const Point& r) { return r[col].v != 0; });
    if (piv == rows.end()) continue;
    std::swap(*piv, rows[static_cast<std::size_t>(rank)]);
    const Point& pr = rows[static_cast<std::size_t>(rank)];
    const Elem inv = f.inv(pr[col]);
    for (std::size_t i = static_cast<std::size_t>(rank) + 1; i < rows.size(); ++i) {
      if (rows[i][col].v == 0) continue;
      rows[i] = s.sub(rows[i], s.scale(f.mul(rows[i][col], inv), pr));
    }
    ++rank;
  }
  return rank;
}

SimplexKey classify(const Space& s, const LabeledSimplex& x) {
  const int m = static_cast<int>(x.vertices.size());
  SimplexKey key;
  key.vertices = m;
  key.norms.assign(static_cast<std::size_t>(m * m), Elem{0});
  std::vector<Point> diffs;
  for (int i = 0; i < m; ++i) {
    s.check(x.vertices[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < m; ++j) {
      const Elem n = s.norm(s.sub(x.vertices[static_cast<std::size_t>(i)], x.vertices[static_cast<std::size_t>(j)]));
      key.norms[static_cast<std::size_t>(i * m + j)] = n;
      key.norms[static_cast<std::size_t>(j * m + i)] = n;
    }
    if (i > 0) diffs.push_back(s.sub(x.vertices[static_cast<std::size_t>(i)], x.vertices[0]));
  }
  key.rank = span_rank(s, diffs);
  return key;
}

bool nondegenerate(const Space& s, const SimplexKey& key) {
  return key.rank == std::min(key.vertices - 1, s.dim());
}

std::uint64_t distance_count(const Space& s, std::span<const Point> a, std::span<const Point> b, Elem lambda) {
  std::uint64_t n = 0;
  for (const auto& x : a)
    for (const auto& y : b) n += s.norm(s.sub(x, y)) == lambda ? 1 : 0;
  return n;
}

AuditReport audit_distance(const Space& s, std::span<const Point> a, std::span<const Point> b, Elem lambda) {
  const double q = s.field().q();
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  AuditReport rep;
  rep.theorem = "T3.1";
  rep.q = s.field().q();
  rep.d = s.dim();
  rep.sizes = {{"A", a.size()}, {"B", b.size()}, {"lambda", lambda.v}};
  rep.kind = BoundKind::TwoSided;
  rep.side_conditions = {{"d=2", s.dim() == 2}, {"lambda!=0", lambda.v != 0}};
  rep.lhs = distance_count(s, a, b, lambda);
  rep.main_term = na * nb / q;
  rep.error_term_unit = std::sqrt(q) * std::sqrt(na * nb);
  rep.finalize();
  return rep;
}

int mu_formula(const Field& f, Elem l1, Elem l2, Elem l3) {
  const Elem s1 = f.add(f.add(l1, l2), l3);
  const Elem s2 = f.add(f.add(f.mul(l1, l2), f.mul(l2, l3)), f.mul(l3, l1));
  const Elem disc = f.sub(f.mul(f.from_int(4), s2), f.square(s1));
  return f.quad_char(disc) + 1;
}

SegmentExtension extend_segment(const Space& s, const Point& x, const Point& y, Elem l2, Elem l3) {
  if (s.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "extend_segment works in F_q^2");
  s.check(x);
  s.check(y);
  const Field& f = s.field();
  const Point e = s.sub(y, x);
  const Elem l1 = s.norm(e);
  if (l1.v == 0) throw Error(ErrorKind::DegenerateSegment, "||x - y|| = 0");

  SegmentExtension out;
  const Elem s1 = f.add(f.add(l1, l2), l3);
  const Elem s2 = f.add(f.add(f.mul(l1, l2), f.mul(l2, l3)), f.mul(l3, l1));
  out.discriminant = f.sub(f.mul(f.from_int(4), s2), f.square(s1));
  out.mu = mu_formula(f, l1, l2, l3);

  // z = x + alpha e + beta e_perp with alpha = s/l1, beta^2 = (l1 l2 - s^2)/l1^2,
  // where s = (l1 + l2 - l3)/2 is the prescribed value of (z - x).e.
  const Elem half = f.inv(f.from_int(2));
  const Elem sdot = f.mul(f.sub(f.add(l1, l2), l3), half);
  const Elem il1 = f.inv(l1);
  const Elem alpha = f.mul(sdot, il1);
  const Elem beta2 = f.mul(f.sub(f.mul(l1, l2), f.square(sdot)), f.square(il1));
  Point perp = s.zero();
  perp[0] = f.neg(e[1]);
  perp[1] = e[0];
  const Point base = s.add(x, s.scale(alpha, e));
  for (Elem beta : f.sqrt_all(beta2)) out.witnesses.push_back(s.add(base, s.scale(beta, perp)));
  std::sort(out.witnesses.begin(), out.witnesses.end());
  return out;
}

namespace {

bool maps_onto(const Space& s, const Matrix& g, const Point& z, const LabeledSimplex& s1, const LabeledSimplex& s2) {
  for (std::size_t i = 0; i < s1.vertices.size(); ++i)
    if (s.add(mat_vec(s, g, s1.vertices[i]), z) != s2.vertices[i]) return false;
  return true;
}

}  // namespace

std::optional<RigidMotion> orbit_oracle(const Space& s, std::span<const OrthoMatrix> group,
                                        const LabeledSimplex& s1, const LabeledSimplex& s2) {
  if (s1.vertices.size() != s2.vertices.size() || s1.vertices.empty()) return std::nullopt;
  for (const auto& g : group) {
    const Point z = s.sub(s2.vertices[0], mat_vec(s, g.m, s1.vertices[0]));
    if (maps_onto(s, g.m, z, s1, s2)) return RigidMotion{g, z};
  }
  return std::nullopt;
}

std::optional<RigidMotion> orbit_oracle(const Space& s, const LabeledSimplex& s1, const LabeledSimplex& s2) {
  const auto group = enumerate_orthogonal(s.field(), s.dim());
  return orbit_oracle(s, group, s1, s2);
}

std::uint64_t stabilizer_size(const Space& s, std::span<const OrthoMatrix> group, const LabeledSimplex& x) {
  if (x.vertices.empty()) throw Error(ErrorKind::BadParameters, "empty simplex");
  std::uint64_t n = 0;
  for (const auto& g : group) {
    const Point z = s.sub(x.vertices[0], mat_vec(s, g.m, x.vertices[0]));
    n += maps_onto(s, g.m, z, x, x) ? 1 : 0;
  }
  return n;
}

std::uint64_t stabilizer_size(const Space& s, const LabeledSimplex& x) {
  const auto group = enumerate_orthogonal(s.field(), s.dim());
  return stabilizer_size(s, group, x);
}

void ClassCensus::add(const SimplexKey& key, std::uint64_t multiplicity) {
  classes_[key] += multiplicity;
  total_ += multiplicity;
  if (key.rank != std::min(k_, d_)) degenerate_ += multiplicity;
}

std::uint64_t ClassCensus::nondegenerate_classes() const {
  std::uint64_t n = 0;
  for (const auto& [key, c] : classes_) n += key.rank == std::min(k_, d_) ? 1 : 0;
  return n;
}

std::uint64_t ClassCensus::degenerate_classes() const { return class_count() - nondegenerate_classes(); }

Wide ClassCensus::pair_collisions() const {
  Wide total = 0;
  for (const auto& [key, c] : classes_) total += static_cast<Wide>(c) * c;
  return total;
}

std::string ClassCensus::to_csv() const {
  std::ostringstream os;
  os << "key,multiplicity\n";
  for (const auto& [key, c] : classes_) os << key.canonical() << ',' << c << '\n';
  return os.str();
}

namespace {

// Packs (rank, upper-triangular norms) into one integer:
// rank + (k+1) * sum_t n_t q^t.
struct KeyPacker {
  int m;  // vertices
  std::uint64_t q;
  std::uint64_t rank_base;

  KeyPacker(const Space& s, int vertices) : m(vertices), q(s.field().q()), rank_base(static_cast<std::uint64_t>(vertices)) {
    Wide cap = rank_base;
    for (int t = 0; t < m * (m - 1) / 2; ++t) cap *= q;
    if (cap >> 64) throw Error(ErrorKind::TooLarge, "simplex key does not fit in 64 bits");
  }

  SimplexKey unpack(std::uint64_t code) const {
    SimplexKey key;
    key.vertices = m;
    key.rank = static_cast<int>(code % rank_base);
    code /= rank_base;
    key.norms.assign(static_cast<std::size_t>(m * m), Elem{0});
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const Elem n{static_cast<std::uint32_t>(code % q)};
        code /= q;
        key.norms[static_cast<std::size_t>(i * m + j)] = n;
        key.norms[static_cast<std::size_t>(j * m + i)] = n;
      }
    return key;
  }
};

using Tally = std::unordered_map<std::uint64_t, std::uint64_t>;

ClassCensus census_impl(const Space& s, const std::vector<std::vector<Point>>& sets, unsigned workers,
                        std::optional<Elem> first_edge) {
  if (sets.size() < 2) throw Error(ErrorKind::BadParameters, "a simplex needs at least two vertex sets");
  if (sets.size() > 4) throw Error(ErrorKind::TooLarge, "census supports k <= 3");
  const int m = static_cast<int>(sets.size());
  ClassCensus census(m - 1, s.dim());
  Wide tuples = 1;
  for (const auto& a : sets) {
    for (const auto& x : a) s.check(x);
    tuples *= a.size();
  }
  if (tuples == 0) return census;
  const Limits& lim = s.field().limits();
  if (!lim.force && tuples > lim.max_tuples)
    throw Error(ErrorKind::TooLarge, "census of " + to_string(tuples) + " tuples exceeds the guardrail");
  const KeyPacker packer(s, m);

  Tally merged = parallel_reduce<Tally>(
      sets[0].size(), workers,
      [&](std::uint64_t lo, std::uint64_t hi) {
        Tally tally;
        std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
        std::vector<Point> v(static_cast<std::size_t>(m));
        std::vector<Point> diffs(static_cast<std::size_t>(m - 1));
        for (std::uint64_t i0 = lo; i0 < hi; ++i0) {
          v[0] = sets[0][i0];
          std::fill(idx.begin() + 1, idx.end(), 0);
          while (true) {
            for (int i = 1; i < m; ++i) v[static_cast<std::size_t>(i)] = sets[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
            const Elem n01 = s.norm(s.sub(v[0], v[1]));
            if (!first_edge || n01 == *first_edge) {
              std::uint64_t code = 0, mult = 1;
              for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                  const Elem n = (i == 0 && j == 1) ? n01 : s.norm(s.sub(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]));
                  code += n.v * mult;
                  mult *= packer.q;
                }
              for (int i = 1; i < m; ++i) diffs[static_cast<std::size_t>(i - 1)] = s.sub(v[static_cast<std::size_t>(i)], v[0]);
              ++tally[code * packer.rank_base + static_cast<std::uint64_t>(span_rank(s, diffs))];
            }
            int pos = m - 1;
            while (pos >= 1 && ++idx[static_cast<std::size_t>(pos)] == sets[static_cast<std::size_t>(pos)].size()) {
              idx[static_cast<std::size_t>(pos)] = 0;
              --pos;
            }
            if (pos < 1) break;
          }
        }
        return tally;
      },
      [](Tally a, Tally b) {
        for (const auto& [k, c] : b) a[k] += c;
        return a;
      });

  std::vector<std::pair<std::uint64_t, std::uint64_t>> sorted(merged.begin(), merged.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [code, c] : sorted) census.add(packer.unpack(code), c);
  return census;
}

}  // namespace

ClassCensus count_classes(const Space& s, const std::vector<std::vector<Point>>& sets, unsigned workers) {
  return census_impl(s, sets, workers, std::nullopt);
}

ClassCensus count_classes_containing(const Space& s, std::span<const Point> a, std::span<const Point> b,
                                     std::span<const Point> c, Elem lambda, unsigned workers) {
  if (s.dim() != 2) throw Error(ErrorKind::DimensionMismatch, "triangle census works in F_q^2");
  const std::vector<std::vector<Point>> sets{{a.begin(), a.end()}, {b.begin(), b.end()}, {c.begin(), c.end()}};
  return census_impl(s, sets, workers, lambda);
}

std::uint64_t unordered_class_count(const ClassCensus& census, const std::vector<std::vector<Point>>& sets) {
  const int m = census.k() + 1;
  if (static_cast<int>(sets.size()) != m) throw Error(ErrorKind::BadParameters, "set count does not match census");
  std::vector<std::vector<Point>> norm_sets = sets;
  for (auto& a : norm_sets) normalize_set(a);

  std::vector<std::vector<int>> perms;
  std::vector<int> sigma(static_cast<std::size_t>(m));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) ok = norm_sets[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] == norm_sets[static_cast<std::size_t>(i)];
    if (ok) perms.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  std::set<SimplexKey> seen;
  for (const auto& [key, c] : census.classes()) {
    SimplexKey best = key;
    for (const auto& p : perms) {
      SimplexKey alt = key;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          alt.norms[static_cast<std::size_t>(i * m + j)] = key.norm(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
      best = std::min(best, alt);
    }
    seen.insert(best);
  }
  return seen.size();
}

CopyCount copy_count(const Space& s, const std::vector<std::vector<Point>>& sets, const SimplexKey& delta) {
  const int m = static_cast<int>(sets.size());
  if (delta.vertices != m) throw Error(ErrorKind::BadParameters, "simplex size does not match set count");
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (delta.norm(i, j).v == 0) throw Error(ErrorKind::BadParameters, "copy_count needs nonzero side lengths");

  CopyCount out;
  double main = 1.0;
  for (const auto& a : sets) {
    for (const auto& x : a) s.check(x);
    main *= static_cast<double>(a.size());
  }
  out.main_term = main / std::pow(static_cast<double>(s.field().q()), m * (m - 1) / 2.0);

  std::vector<Point> chosen(static_cast<std::size_t>(m));
  auto extend = [&](auto&& self, int level) -> std::uint64_t {
    if (level == m) return 1;
    std::uint64_t n = 0;
    for (const auto& x : sets[static_cast<std::size_t>(level)]) {
      bool ok = true;
      for (int i = 0; i < level && ok; ++i) ok = s.norm(s.sub(x, chosen[static_cast<std::size_t>(i)])) == delta.norm(i, level);
      if (!ok) continue;
      chosen[static_cast<std::size_t>(level)] = x;
      n += self(self, level + 1);
    }
    return n;
  };
  out.count = m == 0 ? 0 : extend(extend, 0);
  out.ratio = out.main_term > 0.0 ? static_cast<double>(out.count) / out.main_term : 0.0;
  return out;
}

SphereTable::SphereTable(const Space& s) : by_norm_(s.field().q()) {
  for (const auto& x : s.all_points()) by_norm_[s.norm(x).v].push_back(x);
}

namespace {

SphereIntersection sphere_setup(const Space& s, std::span<const Point> centers, std::span<const Elem> radii) {
  if (centers.empty() || centers.size() != radii.size())
    throw Error(ErrorKind::BadParameters, "need one radius per center");
  for (const auto& r : radii)
    if (r.v == 0) throw Error(ErrorKind::BadParameters, "sphere radii must be nonzero");
  for (const auto& c : centers) s.check(c);
  SphereIntersection out;
  std::vector<Point> diffs;
  for (std::size_t i = 1; i < centers.size(); ++i) diffs.push_back(s.sub(centers[i], centers[0]));
  out.independent = span_rank(s, diffs) == static_cast<int>(diffs.size());
  out.bound = 2.0 * std::pow(static_cast<double>(s.field().q()), s.dim() - static_cast<double>(centers.size()));
  return out;
}

bool on_all(const Space& s, const Point& x, std::span<const Point> centers, std::span<const Elem> radii) {
  for (std::size_t i = 0; i < centers.size(); ++i)
    if (s.norm(s.sub(x, centers[i])) != radii[i]) return false;
  return true;
}

void finish(SphereIntersection& out) {
  std::sort(out.points.begin(), out.points.end());
  out.within_bound = !out.independent || static_cast<double>(out.points.size()) <= out.bound;
}

}  // namespace

SphereIntersection sphere_intersection(const Space& s, std::span<const Point> centers, std::span<const Elem> radii) {
  SphereIntersection out = sphere_setup(s, centers, radii);
  for (std::uint64_t code = 0; code < s.size(); ++code) {
    const Point x = s.decode(code);
    if (on_all(s, x, centers, radii)) out.points.push_back(x);
  }
  finish(out);
  return out;
}

SphereIntersection sphere_intersection(const Space& s, const SphereTable& table, std::span<const Point> centers,
                                       std::span<const Elem> radii) {
  SphereIntersection out = sphere_setup(s, centers, radii);
  for (const auto& w : table.sphere(radii[0])) {
    const Point x = s.add(centers[0], w);
    if (on_all(s, x, centers, radii)) out.points.push_back(x);
  }
  finish(out);
  return out;
}

}  // namespace fqgeom
