#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace fqgeom {

using Wide = unsigned __int128;

std::string to_string(Wide v);
/// Narrows a wide count, throwing TooLarge when it does not fit.
std::uint64_t narrow(Wide v);

/// Direction of the audited inequality.
///   Upper:    lhs <= main_term + C * error_term_unit, c_star = (lhs - main)+ / unit
///   Lower:    lhs >= main_term / C,                    c_star = main / lhs
///   TwoSided: |lhs - main_term| <= C * unit,          c_star = |lhs - main| / unit
enum class BoundKind { Upper, Lower, TwoSided };

struct SideCondition {
  std::string condition;
  bool satisfied = true;
};

struct AuditReport {
  std::string theorem;
  std::uint32_t q = 0;
  int d = 0;
  std::vector<std::pair<std::string, std::uint64_t>> sizes;
  std::uint64_t lhs = 0;
  double main_term = 0.0;
  double error_term_unit = 0.0;
  double c_star = 0.0;
  BoundKind kind = BoundKind::Upper;
  std::vector<SideCondition> side_conditions;
  std::vector<std::string> notes;

  bool hypotheses_hold() const;
  /// Fills c_star from lhs, main_term, error_term_unit and kind.
  void finalize();
};

nlohmann::ordered_json to_json(const AuditReport& r);
std::string csv_header();
std::string to_csv_row(const AuditReport& r);

/// Frozen empirical constants, one line per audit id:
///   <id> <observed_min> <observed_max> <ceiling> <instances>
/// Lines starting with '#' are comments.
class Ceilings {
 public:
  struct Entry {
    double observed_min = 0.0;
    double observed_max = 0.0;
    double ceiling = 0.0;
    std::uint64_t instances = 0;
  };

  static Ceilings parse(const std::string& text);
  static Ceilings load(const std::string& path);

  void set(const std::string& id, Entry e) { entries_[id] = e; }
  std::optional<Entry> find(const std::string& id) const;
  const std::map<std::string, Entry>& entries() const { return entries_; }

  /// True when the report's hypotheses hold and its c_star exceeds the ceiling.
  bool regressed(const AuditReport& r) const;

 private:
  std::map<std::string, Entry> entries_;
};

}  // namespace fqgeom
