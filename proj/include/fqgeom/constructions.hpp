#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fqgeom/ffield.hpp"
#include "fqgeom/motions.hpp"
#include "fqgeom/report.hpp"
#include "json.hpp"

namespace fqgeom {

/// B = union of r(A) over r in R, with the lower-bound audits
/// "T1.8", "T1.9(1)", "T1.9(2)", "T1.10", "T1.11". Each audit's main_term is the
/// predicted minimum with constant 1 and c_star = main_term / |B|.
struct FurstenbergInstance {
  std::vector<Point> a;
  std::vector<RigidMotion> r;
  std::vector<Point> image;
  std::vector<AuditReport> audits;
};

FurstenbergInstance furstenberg_image(const Space& s, std::vector<Point> a, std::vector<RigidMotion> r,
                                      unsigned workers = 1);

/// Embeds g in O(d-1) into O(d) as the top-left block with 1 in the corner.
OrthoMatrix embed_orthogonal(const OrthoMatrix& g);

/// True when X (distinct elements) is an arithmetic progression in F_q.
bool is_progression(const Field& f, std::vector<Elem> x);

struct Fur1Strip {
  std::vector<Elem> x;
  FurstenbergInstance instance;
  std::vector<Elem> sumset;   // X + X
  bool contained = false;     // image within F_q^(d-1) x (X + X)
  bool progression = false;
  bool within_twice = false;  // |image| <= 2|A|
};

/// A = F_q^(d-1) x X and R = O(d-1) x A, with O(d-1) embedded in O(d).
Fur1Strip build_fur1_strip(const Space& s, std::vector<Elem> x, unsigned workers = 1);

struct Sec3Cyclic {
  std::uint32_t p = 0;
  std::uint64_t k = 0;
  std::vector<Elem> x;
  Point v;
  OrthoMatrix theta;
  std::vector<std::vector<Point>> orbits;  // A_1, then A_t for t in X
  std::vector<Point> a;
  std::uint64_t max_distance_set = 0;      // over ordered pairs (A_l, A_b)
  std::uint64_t distance_set_total = 0;    // sum over ordered pairs
  std::uint64_t distinct_distances = 0;    // |{||x - y|| : x, y in A}|
  std::uint64_t classes = 0;               // congruence classes of {0} x A x A
};

/// The cyclic-orbit set over F_{p^3}: theta of order k in SO(2, q), v the first
/// unit vector, A = union over t in {1} and X of t {v, theta v, ...}.
Sec3Cyclic build_sec3_cyclic(std::uint32_t p, std::uint64_t k, const std::vector<std::uint32_t>& x,
                             unsigned workers = 1);

struct InciSubfield {
  std::uint32_t p = 0;
  std::vector<Point> u;
  std::vector<RigidMotion> r;
  std::uint64_t incidences = 0;
  double ratio = 0.0;  // I / (|P| |R|^(1/3))
};

/// P = U x U with U in the subfield plane F_p^2 and R = O(2, p) x F_p^2, both
/// inside F_{p^3}^2. |U| defaults to round(p^(3/2)). Only p = 3 is in range.
InciSubfield build_inci_subfield(std::uint32_t p, int u_size = -1, unsigned workers = 1);

/// JSON recipe: {kind, p, r, d, k, X, seed}; kind in sec3_cyclic, fur1_strip, inci_subfield.
struct SharpnessRecipe {
  std::string kind;
  std::uint32_t p = 3;
  int r = 1;
  int d = 2;
  std::uint64_t k = 0;
  std::vector<std::uint32_t> x;
  std::uint64_t seed = 0;
};

nlohmann::ordered_json to_json(const SharpnessRecipe& recipe);
SharpnessRecipe recipe_from_json(const nlohmann::json& j);  // Parse error names the bad field
/// Builds the recipe and returns its report object.
nlohmann::ordered_json run_recipe(const SharpnessRecipe& recipe, unsigned workers = 1);

nlohmann::ordered_json to_json(const Fur1Strip& v);
nlohmann::ordered_json to_json(const Sec3Cyclic& v);
nlohmann::ordered_json to_json(const InciSubfield& v);

}  // namespace fqgeom
