#include "fqgeom/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fqgeom/constructions.hpp"
#include "fqgeom/errors.hpp"
#include "fqgeom/incidence.hpp"
#include "fqgeom/lineworld.hpp"
#include "fqgeom/rng.hpp"
#include "fqgeom/simplex.hpp"

namespace fqgeom {

std::vector<CorpusInstance> corpus_plan(const CalibrationConfig& config) {
  Lcg master(config.seed);
  std::vector<CorpusInstance> plan;
  for (std::uint32_t q : config.qs) {
    for (std::uint64_t i = 0; i < config.instances; ++i)
      plan.push_back(CorpusInstance{q, 2, static_cast<int>(i % 4), master.next()});
    if (q == 3)
      for (std::uint64_t i = 0; i < config.cube_instances; ++i)
        plan.push_back(CorpusInstance{q, 3, i % 2 == 0 ? 0 : 2, master.next()});
  }
  return plan;
}

namespace {

std::vector<Point> random_set(const Space& s, Lcg& rng, std::uint64_t m) {
  std::vector<Point> out;
  for (auto c : rng.sample(s.size(), m)) out.push_back(s.decode(c));
  return out;
}

std::vector<RigidMotion> random_motions(const MotionUniverse& uni, Lcg& rng, std::uint64_t m) {
  std::vector<RigidMotion> out;
  for (auto i : rng.sample(uni.size(), m)) out.push_back(uni.motion(i));
  return out;
}

// Set sizes: mostly 1..30, sometimes 1..3 so the small-set hypotheses get samples.
std::uint64_t set_size(const Space& s, Lcg& rng) {
  const std::uint64_t cap = std::min<std::uint64_t>(s.size(), rng.below(4) == 0 ? 3 : 30);
  return rng.between(1, cap);
}

// The |U| window p^(5/4) <= |U| <= p^(4/3), or 0 when empty.
std::pair<std::uint64_t, std::uint64_t> small_set_window(std::uint64_t p) {
  std::uint64_t lo = 1, hi = 0;
  while (ipow(lo, 4) < ipow(p, 5)) ++lo;
  for (std::uint64_t u = lo; ipow(u, 3) <= ipow(p, 4); ++u) hi = u;
  return {lo, hi};
}

void append(std::vector<AuditReport>& out, std::vector<AuditReport> more) {
  for (auto& r : more) out.push_back(std::move(r));
}

void incidence_audits(std::vector<AuditReport>& out, const Space& s, const PairSet& p,
                      const std::vector<RigidMotion>& r, unsigned workers) {
  const std::uint64_t inc = incidence_count(s, p, r, workers);
  for (auto t : kIncidenceTheorems) out.push_back(audit_bound_with(s, p, r, t, inc));
  append(out, audit_cs_bounds(s, p, r, workers));
}

}  // namespace

std::vector<AuditReport> run_instance(const CorpusInstance& inst, unsigned workers) {
  const Field f = Field::make(inst.q, 1);
  const Space s(f, inst.d);
  Lcg rng(inst.seed);
  std::vector<AuditReport> out;

  switch (inst.kind) {
    case 0: {
      const MotionUniverse uni(s, MotionClass::General);
      const PairSet p(s, random_set(s, rng, set_size(s, rng)), random_set(s, rng, set_size(s, rng)));
      const auto r = random_motions(uni, rng, rng.between(1, std::min<std::uint64_t>(uni.size(), 400)));
      incidence_audits(out, s, p, r, workers);
      const PairSet pu(s, p.U(), p.U());
      out.push_back(audit_rich(s, pu, MotionClass::General, workers));
      append(out, audit_moments(s, pu, 3, workers));
      append(out, furstenberg_image(s, p.U(), r, workers).audits);
      break;
    }
    case 1: {
      const MotionUniverse uni(s, MotionClass::SFPrime);
      std::uint64_t m = set_size(s, rng);
      const auto [lo, hi] = small_set_window(inst.q);
      if (rng.below(2) == 0 && lo <= hi && hi <= s.size()) m = rng.between(lo, hi);
      const auto u = random_set(s, rng, m);
      const PairSet p(s, u, u);
      const auto r = random_motions(uni, rng, rng.between(1, std::min<std::uint64_t>(uni.size(), 400)));
      incidence_audits(out, s, p, r, workers);
      append(out, audit_moments(s, p, 2, workers));
      append(out, furstenberg_image(s, u, r, workers).audits);
      break;
    }
    case 2: {
      for (int rep = 0; rep < 3; ++rep) {
        const auto a = random_set(s, rng, rng.between(1, s.size()));
        const auto b = random_set(s, rng, rng.between(1, s.size()));
        out.push_back(audit_distance(s, a, b, f.elem(rng.between(1, inst.q - 1))));
      }
      const MotionUniverse uni(s, MotionClass::General);
      const auto a = random_set(s, rng, set_size(s, rng));
      const auto r = random_motions(uni, rng, rng.between(1, uni.size()));
      append(out, furstenberg_image(s, a, r, workers).audits);
      break;
    }
    case 3: {
      if (inst.d != 2) throw Error(ErrorKind::BadParameters, "line instances live in the plane");
      const Space s3(f, 3);
      const auto u = random_set(s, rng, rng.between(1, std::min<std::uint64_t>(s.size(), 8)));
      out.push_back(plane_richness_report(s, u, workers));
      const PairLines lines = lines_of_pairs(s, u);
      const MotionUniverse uni(s, MotionClass::SFPrime);
      std::vector<Point> pts;
      for (const auto& m : random_motions(uni, rng, rng.between(1, std::min<std::uint64_t>(uni.size(), 300))))
        pts.push_back(motion_point(s, m));
      out.push_back(kollar_check(s3, pts, lines.lines, workers));
      break;
    }
    default:
      throw Error(ErrorKind::BadParameters, "unknown corpus kind " + std::to_string(inst.kind));
  }
  return out;
}

AuditReport subfield_report(unsigned workers) {
  const InciSubfield sub = build_inci_subfield(3, -1, workers);
  AuditReport rep;
  rep.theorem = "SUB";
  rep.q = 27;
  rep.d = 2;
  rep.sizes = {{"U", sub.u.size()}, {"P", sub.u.size() * sub.u.size()}, {"R", sub.r.size()}};
  rep.lhs = sub.incidences;
  rep.error_term_unit = static_cast<double>(sub.u.size() * sub.u.size()) * std::cbrt(static_cast<double>(sub.r.size()));
  rep.finalize();
  return rep;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// Ceilings keep three decimals, rounded up.
double round_up(double v) { return std::ceil(v * 1000.0 - 1e-9) / 1000.0; }

}  // namespace

Calibration calibrate(const CalibrationConfig& config) {
  Calibration cal;
  for (const auto& inst : corpus_plan(config))
    for (const auto& rep : run_instance(inst, config.workers))
      if (rep.hypotheses_hold()) cal.samples[rep.theorem].push_back(rep.c_star);
  cal.samples["SUB"].push_back(subfield_report(config.workers).c_star);

  std::ostringstream os;
  os << "# Frozen empirical constants c* per audit id.\n";
  os << "# corpus: seed=" << config.seed << " qs=";
  for (std::size_t i = 0; i < config.qs.size(); ++i) os << (i ? "," : "") << config.qs[i];
  os << " instances=" << config.instances << " cube_instances=" << config.cube_instances << "\n";
  os << "# ceiling = " << fmt(kHeadroom) << " x observed_max rounded up to 3 decimals, except fixed ids (";
  bool first = true;
  for (const auto& [id, c] : kFixedCeilings) {
    os << (first ? "" : ", ") << id << "=" << fmt(c);
    first = false;
  }
  os << ").\n";
  os << "# Lower-bound ids (T1.x) store predicted_min / |image|. SUB's band is [observed_min / "
     << fmt(kHeadroom) << ", ceiling].\n";
  os << "# id observed_min observed_max ceiling instances\n";
  for (const auto& [id, xs] : cal.samples) {
    Ceilings::Entry e;
    e.observed_min = *std::min_element(xs.begin(), xs.end());
    e.observed_max = *std::max_element(xs.begin(), xs.end());
    const auto fixed = kFixedCeilings.find(id);
    e.ceiling = fixed != kFixedCeilings.end() ? fixed->second : round_up(kHeadroom * e.observed_max);
    e.instances = xs.size();
    cal.ceilings.set(id, e);
    os << id << ' ' << fmt(e.observed_min) << ' ' << fmt(e.observed_max) << ' ' << fmt(e.ceiling) << ' '
       << e.instances << '\n';
  }
  cal.text = os.str();
  return cal;
}

}  // namespace fqgeom
