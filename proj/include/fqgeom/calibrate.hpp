#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fqgeom/report.hpp"

namespace fqgeom {

/// One seeded corpus instance. `kind` selects the workload:
///   0 general motions, 1 oriented motions with U = V,
///   2 distance counts, 3 line encoding (plane richness and Kollar).
struct CorpusInstance {
  std::uint32_t q = 3;
  int d = 2;
  int kind = 0;
  std::uint64_t seed = 0;
};

struct CalibrationConfig {
  std::uint64_t seed = 1;
  std::vector<std::uint32_t> qs{3, 7, 11};
  std::uint64_t instances = 200;       // per q, d = 2
  std::uint64_t cube_instances = 50;   // extra d = 3 instances at q = 3
  unsigned workers = 1;
};

/// Instance list with per-instance seeds drawn serially from Lcg(config.seed):
/// for each q, `instances` plane instances of kind i mod 4, then (q = 3 only)
/// the d = 3 instances alternating kinds 0 and 2.
std::vector<CorpusInstance> corpus_plan(const CalibrationConfig& config);

/// Every audit report produced by one instance.
std::vector<AuditReport> run_instance(const CorpusInstance& inst, unsigned workers = 1);

/// The fixed sharpness instance reported as "SUB": I / (|P||R|^(1/3)) for the
/// subfield construction at p = 3.
AuditReport subfield_report(unsigned workers = 1);

/// Ids whose ceiling is a stated constant rather than observed headroom.
inline const std::map<std::string, double> kFixedCeilings{{"T3.1", 4.0}, {"PLANE", 4.0}};
inline constexpr double kHeadroom = 1.25;

struct Calibration {
  std::map<std::string, std::vector<double>> samples;  // c_star of reports whose hypotheses hold
  Ceilings ceilings;
  std::string text;  // the ceiling file
};

Calibration calibrate(const CalibrationConfig& config);

}  // namespace fqgeom
