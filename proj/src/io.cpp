#include "fqgeom/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "fqgeom/errors.hpp"

namespace fqgeom {

namespace {

std::string strip(std::string_view text) {
  std::string out;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
  throw Error(ErrorKind::Parse, std::string(what) + ": '" + std::string(text) + "'");
}

// Cursor over a whitespace-free string.
struct Reader {
  std::string s;
  std::size_t pos = 0;
  std::string_view original;

  void expect(std::string_view lit) {
    if (s.compare(pos, lit.size(), lit) != 0) bad("expected '" + std::string(lit) + "'", original);
    pos += lit.size();
  }
  std::uint64_t number() {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
    if (ec != std::errc()) bad("expected a number", original);
    pos = static_cast<std::size_t>(end - s.data());
    return v;
  }
  std::vector<std::uint64_t> list() {
    expect("[");
    std::vector<std::uint64_t> out{number()};
    while (pos < s.size() && s[pos] == ',') {
      ++pos;
      out.push_back(number());
    }
    expect("]");
    return out;
  }
  void done() {
    if (pos != s.size()) bad("trailing characters", original);
  }
};

Point to_point(const Space& s, const std::vector<std::uint64_t>& v, std::string_view text) {
  if (static_cast<int>(v.size()) != s.dim())
    throw Error(ErrorKind::DimensionMismatch, "point '" + std::string(text) + "' has the wrong dimension");
  Point x = s.zero();
  for (int i = 0; i < s.dim(); ++i) {
    if (v[static_cast<std::size_t>(i)] >= s.field().q()) bad("element out of range", text);
    x[i] = Elem{static_cast<std::uint32_t>(v[static_cast<std::size_t>(i)])};
  }
  return x;
}

std::string join(const Point& x) {
  std::string out = "[";
  for (int i = 0; i < x.dim; ++i) out += (i ? "," : "") + std::to_string(x[i].v);
  return out + "]";
}

template <class T, class Parse>
std::vector<T> read_lines(std::istream& in, Parse&& parse) {
  std::vector<T> out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    out.push_back(parse(t));
  }
  return out;
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path);
  return in;
}

}  // namespace

std::string format_elem(Elem x) { return std::to_string(x.v); }

Elem parse_elem(const Field& f, std::string_view text) {
  Reader r{strip(text), 0, text};
  const std::uint64_t v = r.number();
  r.done();
  if (v >= f.q()) bad("element out of range", text);
  return Elem{static_cast<std::uint32_t>(v)};
}

std::string format_point(const Point& x) { return join(x); }

Point parse_point(const Space& s, std::string_view text) {
  Reader r{strip(text), 0, text};
  const auto v = r.list();
  r.done();
  return to_point(s, v, text);
}

std::string format_motion(const RigidMotion& m) {
  std::string out = "g=[";
  for (int i = 0; i < m.g.m.dim; ++i) {
    out += i ? ",[" : "[";
    for (int j = 0; j < m.g.m.dim; ++j) out += (j ? "," : "") + std::to_string(m.g.m(i, j).v);
    out += "]";
  }
  return out + "];z=" + join(m.z);
}

RigidMotion parse_motion(const Space& s, std::string_view text) {
  Reader r{strip(text), 0, text};
  r.expect("g=[");
  Matrix m = identity_matrix(s.dim());
  for (int i = 0; i < s.dim(); ++i) {
    if (i) r.expect(",");
    const Point row = to_point(s, r.list(), text);
    for (int j = 0; j < s.dim(); ++j) m(i, j) = row[j];
  }
  r.expect("];z=");
  const Point z = to_point(s, r.list(), text);
  r.done();
  if (!is_orthogonal(s.field(), m)) bad("matrix is not orthogonal", text);
  return RigidMotion{make_ortho(s.field(), m), z};
}

std::string format_line(const Line3& l) { return "base=" + join(l.base) + ";dir=" + join(l.dir); }

Line3 parse_line(const Space& s3, std::string_view text) {
  Reader r{strip(text), 0, text};
  r.expect("base=");
  const Point base = to_point(s3, r.list(), text);
  r.expect(";dir=");
  const Point dir = to_point(s3, r.list(), text);
  r.done();
  return make_line(s3, base, dir);
}

std::string format_plane(const Plane3& h) { return "n=" + join(h.normal) + ";off=" + std::to_string(h.offset.v); }

Plane3 parse_plane(const Space& s3, std::string_view text) {
  Reader r{strip(text), 0, text};
  r.expect("n=");
  const Point n = to_point(s3, r.list(), text);
  r.expect(";off=");
  const std::uint64_t off = r.number();
  r.done();
  if (off >= s3.field().q()) bad("element out of range", text);
  return make_plane(s3, n, Elem{static_cast<std::uint32_t>(off)});
}

std::vector<Point> read_points(const Space& s, std::istream& in) {
  return read_lines<Point>(in, [&](const std::string& t) { return parse_point(s, t); });
}

std::vector<RigidMotion> read_motions(const Space& s, std::istream& in) {
  return read_lines<RigidMotion>(in, [&](const std::string& t) { return parse_motion(s, t); });
}

std::vector<Point> load_points(const Space& s, const std::string& path) {
  auto in = open(path);
  return read_points(s, in);
}

std::vector<RigidMotion> load_motions(const Space& s, const std::string& path) {
  auto in = open(path);
  return read_motions(s, in);
}

}  // namespace fqgeom
