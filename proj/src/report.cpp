#include "fqgeom/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fqgeom/errors.hpp"

namespace fqgeom {

std::string to_string(Wide v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::uint64_t narrow(Wide v) {
  if (v > static_cast<Wide>(UINT64_MAX)) throw Error(ErrorKind::TooLarge, "count exceeds 64 bits");
  return static_cast<std::uint64_t>(v);
}

bool AuditReport::hypotheses_hold() const {
  return std::all_of(side_conditions.begin(), side_conditions.end(),
                     [](const SideCondition& c) { return c.satisfied; });
}

void AuditReport::finalize() {
  const double l = static_cast<double>(lhs);
  switch (kind) {
    case BoundKind::Upper:
      c_star = (error_term_unit > 0.0 && l > main_term) ? (l - main_term) / error_term_unit : 0.0;
      break;
    case BoundKind::Lower:
      c_star = lhs > 0 ? main_term / l : 0.0;
      break;
    case BoundKind::TwoSided:
      c_star = error_term_unit > 0.0 ? std::fabs(l - main_term) / error_term_unit : 0.0;
      break;
  }
}

namespace {

std::string_view kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::Upper: return "upper";
    case BoundKind::Lower: return "lower";
    case BoundKind::TwoSided: return "two_sided";
  }
  return "upper";
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const AuditReport& r) {
  nlohmann::ordered_json j;
  j["theorem"] = r.theorem;
  j["q"] = r.q;
  j["d"] = r.d;
  nlohmann::ordered_json sizes = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.sizes) sizes[k] = v;
  j["sizes"] = sizes;
  j["lhs"] = r.lhs;
  j["main_term"] = r.main_term;
  j["error_term_unit"] = r.error_term_unit;
  j["c_star"] = r.c_star;
  j["kind"] = kind_name(r.kind);
  nlohmann::ordered_json conds = nlohmann::ordered_json::array();
  for (const auto& c : r.side_conditions)
    conds.push_back({{"condition", c.condition}, {"satisfied", c.satisfied}});
  j["side_conditions"] = conds;
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

std::string csv_header() {
  return "theorem,q,d,sizes,lhs,main_term,error_term_unit,c_star,kind,side_conditions";
}

std::string to_csv_row(const AuditReport& r) {
  std::ostringstream os;
  os << r.theorem << ',' << r.q << ',' << r.d << ',';
  for (std::size_t i = 0; i < r.sizes.size(); ++i)
    os << (i ? ";" : "") << r.sizes[i].first << '=' << r.sizes[i].second;
  os << ',' << r.lhs << ',' << fmt_double(r.main_term) << ',' << fmt_double(r.error_term_unit) << ','
     << fmt_double(r.c_star) << ',' << kind_name(r.kind) << ',';
  os << '"';
  for (std::size_t i = 0; i < r.side_conditions.size(); ++i)
    os << (i ? ";" : "") << r.side_conditions[i].condition << '='
       << (r.side_conditions[i].satisfied ? "ok" : "violated");
  os << '"';
  return os.str();
}

Ceilings Ceilings::parse(const std::string& text) {
  Ceilings c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string id;
    Entry e;
    if (!(ls >> id >> e.observed_min >> e.observed_max >> e.ceiling >> e.instances))
      throw Error(ErrorKind::Parse, "ceiling file line " + std::to_string(lineno));
    c.entries_[id] = e;
  }
  return c;
}

Ceilings Ceilings::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open ceiling file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<Ceilings::Entry> Ceilings::find(const std::string& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool Ceilings::regressed(const AuditReport& r) const {
  if (!r.hypotheses_hold()) return false;
  const auto e = find(r.theorem);
  return e && r.c_star > e->ceiling;
}

}  // namespace fqgeom
