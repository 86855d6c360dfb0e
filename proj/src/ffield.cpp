#include "fqgeom/ffield.hpp"

#include <algorithm>

#include "fqgeom/errors.hpp"

namespace fqgeom {

namespace detail {

struct FieldTables {
  std::uint32_t p = 0;
  int r = 0;
  std::uint32_t q = 0;
  std::vector<std::uint32_t> modulus;  // low degree first, monic
  Limits limits;

  std::vector<std::uint32_t> add;  // q*q
  std::vector<std::uint32_t> mul;  // q*q
  std::vector<std::uint32_t> neg;
  std::vector<std::uint32_t> inv;  // inv[0] unused
  std::vector<std::int8_t> chi;
  std::vector<std::vector<Elem>> roots;
};

}  // namespace detail

namespace {

// Hard ceiling even under --force: tables are q^2 words.
constexpr std::uint32_t kAbsoluteMaxQ = 4096;

using Poly = std::vector<std::uint32_t>;

Poly digits(std::uint32_t index, std::uint32_t p, int r) {
  Poly c(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) {
    c[static_cast<std::size_t>(j)] = index % p;
    index /= p;
  }
  return c;
}

std::uint32_t undigits(const Poly& c, std::uint32_t p) {
  std::uint32_t v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * p + *it;
  return v;
}

// Evaluate a monic polynomial (low degree first) at t in Z_p.
std::uint32_t eval_mod(const Poly& f, std::uint32_t t, std::uint32_t p) {
  std::uint64_t acc = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (acc * t + *it) % p;
  return static_cast<std::uint32_t>(acc);
}

// Degree <= 3: irreducible iff no root in Z_p.
bool irreducible_small(const Poly& f, std::uint32_t p) {
  const int deg = static_cast<int>(f.size()) - 1;
  if (deg == 1) return true;
  for (std::uint32_t t = 0; t < p; ++t)
    if (eval_mod(f, t, p) == 0) return false;
  return true;
}

Poly mul_reduce(const Poly& a, const Poly& b, const Poly& m, std::uint32_t p) {
  const std::size_t r = m.size() - 1;
  std::vector<std::uint64_t> prod(2 * r, 0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  for (std::size_t k = 2 * r - 1; k-- > r;) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    // x^k = x^(k-r) * x^r and x^r = -(m_0 + ... + m_{r-1} x^{r-1})
    for (std::size_t j = 0; j < r; ++j) prod[k - r + j] = (prod[k - r + j] + (p - m[j]) * c) % p;
  }
  Poly out(r);
  for (std::size_t i = 0; i < r; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return out;
}

std::shared_ptr<detail::FieldTables> build(std::uint32_t p, Poly modulus, const Limits& limits) {
  auto t = std::make_shared<detail::FieldTables>();
  t->p = p;
  t->r = static_cast<int>(modulus.size()) - 1;
  t->modulus = std::move(modulus);
  t->limits = limits;
  std::uint64_t q = 1;
  for (int i = 0; i < t->r; ++i) q *= p;
  if (q > kAbsoluteMaxQ || (q > limits.max_q && !limits.force))
    throw Error(ErrorKind::TooLarge, "q=" + std::to_string(q) + " exceeds the field-size guardrail");
  t->q = static_cast<std::uint32_t>(q);

  const std::uint32_t n = t->q;
  std::vector<Poly> elems(n);
  for (std::uint32_t i = 0; i < n; ++i) elems[i] = digits(i, p, t->r);

  t->add.resize(std::size_t{n} * n);
  t->mul.resize(std::size_t{n} * n);
  t->neg.resize(n);
  t->inv.assign(n, 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    Poly ng(elems[a].size());
    for (std::size_t j = 0; j < ng.size(); ++j) ng[j] = (p - elems[a][j]) % p;
    t->neg[a] = undigits(ng, p);
    for (std::uint32_t b = 0; b < n; ++b) {
      Poly s(elems[a].size());
      for (std::size_t j = 0; j < s.size(); ++j) s[j] = (elems[a][j] + elems[b][j]) % p;
      t->add[std::size_t{a} * n + b] = undigits(s, p);
      t->mul[std::size_t{a} * n + b] = undigits(mul_reduce(elems[a], elems[b], t->modulus, p), p);
    }
  }
  for (std::uint32_t a = 1; a < n; ++a)
    for (std::uint32_t b = 1; b < n; ++b)
      if (t->mul[std::size_t{a} * n + b] == 1) {
        t->inv[a] = b;
        break;
      }

  // Euler's criterion by square-and-multiply on the table.
  const std::uint64_t half = (n - 1) / 2;
  t->chi.resize(n);
  for (std::uint32_t a = 0; a < n; ++a) {
    std::uint32_t acc = 1, base = a;
    for (std::uint64_t e = half; e != 0; e >>= 1) {
      if (e & 1) acc = t->mul[std::size_t{acc} * n + base];
      base = t->mul[std::size_t{base} * n + base];
    }
    t->chi[a] = a == 0 ? 0 : (acc == 1 ? 1 : -1);
  }

  t->roots.assign(n, {});
  for (std::uint32_t y = 0; y < n; ++y) t->roots[t->mul[std::size_t{y} * n + y]].push_back(Elem{y});
  return t;
}

void check_char(std::uint32_t p) {
  if (!is_prime(p)) throw Error(ErrorKind::NonPrime, "p=" + std::to_string(p) + " is not prime");
  if (p == 2) throw Error(ErrorKind::EvenCharacteristic, "characteristic 2 is not supported");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::make(std::uint32_t p, int r, const Limits& limits) {
  check_char(p);
  if (r < 1 || r > 3)
    throw Error(ErrorKind::UnsupportedDegree, "r=" + std::to_string(r) + " (supported: 1..3)");
  std::uint64_t count = 1;
  for (int i = 0; i < r; ++i) count *= p;
  if (count > kAbsoluteMaxQ || (count > limits.max_q && !limits.force))
    throw Error(ErrorKind::TooLarge, "q=" + std::to_string(count) + " exceeds the field-size guardrail");
  // n runs through coefficient tuples with c_0 as the most significant digit.
  for (std::uint64_t n = 0; n < count; ++n) {
    Poly f(static_cast<std::size_t>(r) + 1);
    std::uint64_t rest = n;
    for (int j = r - 1; j >= 0; --j) {
      f[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    f[static_cast<std::size_t>(r)] = 1;
    if (irreducible_small(f, p)) return Field(build(p, std::move(f), limits));
  }
  throw Error(ErrorKind::BadParameters, "no irreducible polynomial found");
}

Field Field::with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus, const Limits& limits) {
  check_char(p);
  const int r = static_cast<int>(modulus.size()) - 1;
  if (r < 1 || r > 3)
    throw Error(ErrorKind::UnsupportedDegree, "modulus degree " + std::to_string(r));
  if (modulus.back() != 1) throw Error(ErrorKind::BadParameters, "modulus must be monic");
  for (auto c : modulus)
    if (c >= p) throw Error(ErrorKind::BadParameters, "modulus coefficient out of range");
  if (!irreducible_small(modulus, p)) throw Error(ErrorKind::BadParameters, "modulus is reducible");
  return Field(build(p, std::move(modulus), limits));
}

std::uint32_t Field::p() const { return t_->p; }
int Field::r() const { return t_->r; }
std::uint32_t Field::q() const { return t_->q; }
int Field::q_mod_4() const { return static_cast<int>(t_->q % 4); }
const std::vector<std::uint32_t>& Field::modulus() const { return t_->modulus; }
const Limits& Field::limits() const { return t_->limits; }

Elem Field::from_int(long long n) const {
  const long long p = t_->p;
  return Elem{static_cast<std::uint32_t>(((n % p) + p) % p)};
}

Elem Field::elem(std::uint64_t index) const {
  if (index >= t_->q) throw Error(ErrorKind::Parse, "element " + std::to_string(index) + " out of range");
  return Elem{static_cast<std::uint32_t>(index)};
}

Elem Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (static_cast<int>(coeffs.size()) != t_->r) throw Error(ErrorKind::Parse, "coefficient vector length");
  Poly c(coeffs.begin(), coeffs.end());
  for (auto v : c)
    if (v >= t_->p) throw Error(ErrorKind::Parse, "coefficient out of range");
  return Elem{undigits(c, t_->p)};
}

std::vector<std::uint32_t> Field::coeffs(Elem x) const { return digits(x.v, t_->p, t_->r); }

Elem Field::add(Elem a, Elem b) const { return Elem{t_->add[std::size_t{a.v} * t_->q + b.v]}; }
Elem Field::sub(Elem a, Elem b) const { return add(a, neg(b)); }
Elem Field::mul(Elem a, Elem b) const { return Elem{t_->mul[std::size_t{a.v} * t_->q + b.v]}; }
Elem Field::neg(Elem a) const { return Elem{t_->neg[a.v]}; }

Elem Field::inv(Elem a) const {
  if (a.v == 0) throw Error(ErrorKind::NotInDomain, "inverse of zero");
  return Elem{t_->inv[a.v]};
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem acc = one();
  for (; e != 0; e >>= 1) {
    if (e & 1) acc = mul(acc, a);
    a = mul(a, a);
  }
  return acc;
}

int Field::quad_char(Elem x) const { return t_->chi[x.v]; }
const std::vector<Elem>& Field::sqrt_all(Elem x) const { return t_->roots[x.v]; }

bool operator==(const Field& a, const Field& b) {
  return a.t_ == b.t_ || (a.t_->p == b.t_->p && a.t_->modulus == b.t_->modulus);
}

// ---------------------------------------------------------------------------

Space::Space(Field field, int dim) : f_(std::move(field)), d_(dim) {
  if (dim < 1 || dim > kMaxDim || dim > f_.limits().max_dim)
    throw Error(ErrorKind::TooLarge, "dimension " + std::to_string(dim) + " outside 1..4");
  size_ = 1;
  for (int i = 0; i < dim; ++i) size_ *= f_.q();
}

Point Space::zero() const {
  Point a;
  a.dim = static_cast<std::uint8_t>(d_);
  return a;
}

Point Space::make(std::initializer_list<std::uint32_t> coords) const {
  if (static_cast<int>(coords.size()) != d_)
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(d_) + " coordinates");
  Point a = zero();
  int i = 0;
  for (auto c : coords) a[i++] = f_.elem(c);
  return a;
}

void Space::check(const Point& a) const {
  if (a.dim != d_)
    throw Error(ErrorKind::DimensionMismatch,
                "point of dimension " + std::to_string(a.dim) + " in F_q^" + std::to_string(d_));
}

Point Space::add(const Point& a, const Point& b) const {
  Point c = zero();
  for (int i = 0; i < d_; ++i) c[i] = f_.add(a[i], b[i]);
  return c;
}

Point Space::sub(const Point& a, const Point& b) const {
  Point c = zero();
  for (int i = 0; i < d_; ++i) c[i] = f_.sub(a[i], b[i]);
  return c;
}

Point Space::neg(const Point& a) const {
  Point c = zero();
  for (int i = 0; i < d_; ++i) c[i] = f_.neg(a[i]);
  return c;
}

Point Space::scale(Elem s, const Point& a) const {
  Point c = zero();
  for (int i = 0; i < d_; ++i) c[i] = f_.mul(s, a[i]);
  return c;
}

Elem Space::dot(const Point& a, const Point& b) const {
  Elem acc = f_.zero();
  for (int i = 0; i < d_; ++i) acc = f_.add(acc, f_.mul(a[i], b[i]));
  return acc;
}

std::uint64_t Space::encode(const Point& a) const {
  std::uint64_t code = 0;
  for (int i = d_ - 1; i >= 0; --i) code = code * f_.q() + a[i].v;
  return code;
}

Point Space::decode(std::uint64_t code) const {
  Point a = zero();
  for (int i = 0; i < d_; ++i) {
    a[i] = Elem{static_cast<std::uint32_t>(code % f_.q())};
    code /= f_.q();
  }
  return a;
}

std::vector<Point> Space::all_points() const {
  std::vector<Point> out;
  out.reserve(size_);
  for (std::uint64_t c = 0; c < size_; ++c) out.push_back(decode(c));
  std::sort(out.begin(), out.end());
  return out;
}

PointIndex::PointIndex(const Space& space, std::span<const Point> points)
    : space_(space), bits_(space.size(), 0) {
  for (const auto& a : points) {
    space.check(a);
    bits_[space.encode(a)] = 1;
  }
}

void normalize_set(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

}  // namespace fqgeom
