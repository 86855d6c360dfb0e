#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fqgeom/ffield.hpp"
#include "fqgeom/lineworld.hpp"
#include "fqgeom/motions.hpp"

namespace fqgeom {

// Text encodings shared by every CLI input and output. Elements are their
// canonical index; whitespace is ignored when parsing. Malformed text throws
// Parse with the offending input in the message.

std::string format_elem(Elem x);
Elem parse_elem(const Field& f, std::string_view text);

/// "[3,0]"
std::string format_point(const Point& x);
Point parse_point(const Space& s, std::string_view text);

/// "g=[[a,b],[c,d]];z=[e,f]"
std::string format_motion(const RigidMotion& r);
RigidMotion parse_motion(const Space& s, std::string_view text);

/// "base=[a,b,c];dir=[d,e,1]"
std::string format_line(const Line3& l);
Line3 parse_line(const Space& s3, std::string_view text);

/// "n=[a,b,c];off=e"
std::string format_plane(const Plane3& h);
Plane3 parse_plane(const Space& s3, std::string_view text);

/// One item per line; blank lines and lines starting with '#' are skipped.
std::vector<Point> read_points(const Space& s, std::istream& in);
std::vector<RigidMotion> read_motions(const Space& s, std::istream& in);
std::vector<Point> load_points(const Space& s, const std::string& path);
std::vector<RigidMotion> load_motions(const Space& s, const std::string& path);

}  // namespace fqgeom
