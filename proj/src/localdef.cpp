#include "wdl/localdef.hpp"

#include "wdl/error.hpp"

namespace wdl {

namespace {

enum Coord { kDa, kDb, kDc, kDe, kDalpha, kDbeta, kDgamma, kDdelta };

using Row = std::array<Integer, 8>;

Integer binom(std::uint64_t n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

Integer z(std::uint64_t x) { return Integer(static_cast<unsigned long>(x)); }

Integer gcd3(const Integer& a, const Integer& b, const Integer& c) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

IntMatrix to_matrix(const std::vector<Row>& rows) {
  IntMatrix m(0, 8);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

// Clears the denominators of a rational row. Used only where those
// denominators are p-units, so the Z_(p)-span is unchanged.
Row clear_denominators(const std::array<Rational, 8>& row) {
  Integer den = 1;
  for (const auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  Row out;
  for (std::size_t i = 0; i < 8; ++i) {
    Rational scaled = row[i] * den;
    out[i] = scaled.get_num();
  }
  return out;
}

// Differentials of the six 2x2 minors of the matrix
//   (  0      t    q-1     s     )
//   ( dgamma ddelta  dc  -da-de  )
// indexed by column pairs (1,2),(3,4),(1,3),(1,4),(2,3),(2,4).
std::array<Row, 6> minor_rows(const Integer& q1, const Integer& s, const Integer& t) {
  std::array<Row, 6> m{};
  m[0][kDgamma] = -t;
  m[1][kDa] = -q1;
  m[1][kDe] = -q1;
  m[1][kDc] = -s;
  m[2][kDgamma] = -q1;
  m[3][kDgamma] = -s;
  m[4][kDc] = t;
  m[4][kDdelta] = -q1;
  m[5][kDa] = -t;
  m[5][kDe] = -t;
  m[5][kDdelta] = -s;
  return m;
}

}  // namespace

void DeformationPoint::validate() const {
  if (!is_prime(q)) fail(ErrorCode::NotPrime, "q = " + std::to_string(q) + " is not prime");
  if (!is_prime(p)) fail(ErrorCode::NotPrime, "p = " + std::to_string(p) + " is not prime");
  if (p == 2) fail(ErrorCode::InvalidArgument, "p must be odd");
  if (p == q) fail(ErrorCode::InvalidArgument, "p must differ from q");
  if (t == 0) fail(ErrorCode::InvalidArgument, "t must be nonzero");
}

std::uint64_t DeformationPoint::m() const { return vp_finite(p, t); }

std::uint64_t DeformationPoint::n() const { return vp_finite(p, gcd3(s, t, z(q - 1))); }

CotangentLattices build_lattices(const DeformationPoint& pt) {
  pt.validate();
  const Integer q = z(pt.q);
  const Integer q1 = q - 1;
  const Integer& s = pt.s;
  const Integer& t = pt.t;
  const Integer c2 = binom(pt.q, 2);
  const Integer c3 = binom(pt.q, 3);

  Row dr1{}, dr2{}, dr3{}, dr4{}, dr5{}, dr6{};
  dr1[kDa] = 1 - q;
  dr1[kDc] = -s;
  dr1[kDe] = -q;
  dr2[kDalpha] = 1;
  dr2[kDgamma] = -t;
  dr2[kDdelta] = 1;
  dr3[kDc] = -q * t;
  dr3[kDalpha] = -(q * q - q);
  dr3[kDgamma] = s - q * t * c2;
  dr4[kDa] = t * (1 + q);
  dr4[kDe] = q * t;
  dr4[kDalpha] = -q * s - t * c2;
  dr4[kDgamma] = -t * s * c2 - t * t * c3;
  dr4[kDdelta] = s - t * c2;
  dr5[kDgamma] = -(q * q - 1);
  dr6[kDc] = t;
  dr6[kDgamma] = -q * s - t * c2;
  dr6[kDdelta] = -q1;

  const auto minors = minor_rows(q1, s, t);
  Row trace{}, de{}, tde{}, zero{};
  trace[kDalpha] = 1;
  trace[kDdelta] = 1;
  de[kDe] = 1;
  tde[kDe] = t;

  IntMatrix framed_gens = to_matrix({dr1, dr2, dr3, dr4, dr5, dr6});
  IntMatrix uni_gens = to_matrix({dr1, dr2, minors[2], minors[3], minors[4], minors[5], trace, zero, tde, zero});
  IntMatrix st_gens = to_matrix({minors[0], minors[1], minors[2], minors[3], minors[4], minors[5], trace, de});

  // Hand-eliminated bases.
  const Integer f = gcd3(s, t, q1);
  const Integer xi = -q * s * s - s * t - t * t * binom(pt.q + 1, 3);
  const Integer zeta = -q * s - t * c2;
  Row e1{}, e2{}, e3{}, e4{}, e5{};
  e1[kDa] = q1;
  e1[kDc] = s;
  e1[kDe] = q;
  e2[kDalpha] = 1;
  e2[kDgamma] = -t;
  e2[kDdelta] = 1;
  e3[kDgamma] = q * q - 1;
  e4[kDc] = t;
  e4[kDgamma] = zeta;
  e4[kDdelta] = 1 - q;
  e5[kDa] = 2 * t;
  e5[kDgamma] = xi;
  e5[kDdelta] = 2 * s;
  IntMatrix framed_elim = to_matrix({e1, e2, e3, e4, e5});

  Row u2{}, u3{}, u5{};
  u2[kDalpha] = 1;
  u2[kDdelta] = 1;
  u3[kDgamma] = f;
  u5[kDa] = t;
  u5[kDdelta] = s;
  Row u4 = e4;
  u4[kDgamma] = 0;
  IntMatrix uni_elim = to_matrix({e1, u2, u3, u4, u5});

  const std::uint64_t vq1 = vp_finite(pt.p, q1);
  const bool case_one = s == 0 || vq1 <= vp_finite(pt.p, s);
  IntMatrix st_elim;
  if (case_one) {
    std::array<Rational, 8> last{};
    last[kDa] = f;
    last[kDc] = Rational(f * s, q1);
    last[kDc].canonicalize();
    st_elim = to_matrix({de, u2, u3, u4, clear_denominators(last)});
  } else {
    std::array<Rational, 8> r4{};
    r4[kDa] = Rational(f * q1, s);
    r4[kDa].canonicalize();
    r4[kDc] = f;
    st_elim = to_matrix({de, u2, u3, clear_denominators(r4), u5});
  }

  return CotangentLattices{
      PLattice(pt.p, 8, framed_gens),
      PLattice(pt.p, 8, uni_gens),
      PLattice(pt.p, 8, st_gens),
      std::move(framed_gens),
      std::move(uni_gens),
      std::move(st_gens),
      std::move(framed_elim),
      std::move(uni_elim),
      std::move(st_elim),
      case_one,
  };
}

LatticePair parse_lattice_pair(const std::string& name) {
  if (name == "framed/unipotent") return LatticePair::FramedUnipotent;
  if (name == "unipotent/steinberg") return LatticePair::UnipotentSteinberg;
  if (name == "framed/steinberg") return LatticePair::FramedSteinberg;
  fail(ErrorCode::InvalidArgument, "unknown lattice pair \"" + name + "\"");
}

std::string to_string(LatticePair pair) {
  switch (pair) {
    case LatticePair::FramedUnipotent: return "framed/unipotent";
    case LatticePair::UnipotentSteinberg: return "unipotent/steinberg";
    case LatticePair::FramedSteinberg: return "framed/steinberg";
  }
  return "?";
}

PAdicVal relative_length_lattice(const CotangentLattices& l, LatticePair pair) {
  switch (pair) {
    case LatticePair::FramedUnipotent: return quotient_length(l.framed, l.unipotent);
    case LatticePair::UnipotentSteinberg: return quotient_length(l.unipotent, l.steinberg);
    case LatticePair::FramedSteinberg: return quotient_length(l.framed, l.steinberg);
  }
  fail(ErrorCode::Internal, "bad lattice pair");
}

PAdicVal relative_length_lattice(const DeformationPoint& pt, LatticePair pair) {
  return relative_length_lattice(build_lattices(pt), pair);
}

PAdicVal relative_length_closed_form(const DeformationPoint& pt, LatticePair pair) {
  pt.validate();
  const std::uint64_t m = pt.m();
  const std::uint64_t n = pt.n();
  const std::uint64_t v = vp_finite(pt.p, z(pt.q) * z(pt.q) - 1);
  switch (pair) {
    case LatticePair::FramedUnipotent: return PAdicVal(v - n);
    case LatticePair::UnipotentSteinberg: return PAdicVal(m - n);
    case LatticePair::FramedSteinberg: return PAdicVal(m + v - 2 * n);
  }
  fail(ErrorCode::Internal, "bad lattice pair");
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat2_pow(const Mat2& a, std::uint64_t e) {
  Mat2 result{Rational(1), Rational(0), Rational(0), Rational(1)};
  Mat2 base = a;
  while (e > 0) {
    if (e & 1) result = mat2_mul(result, base);
    base = mat2_mul(base, base);
    e >>= 1;
  }
  return result;
}

ShottonResult shotton_equivalence_check(const Mat2& a, const Mat2& b, std::uint64_t q) {
  if (q < 2) fail(ErrorCode::InvalidArgument, "q must be at least 2");
  const Rational qq(z(q));
  auto trace = [](const Mat2& m) { return Rational(m[0] + m[3]); };
  auto det = [](const Mat2& m) { return Rational(m[0] * m[3] - m[1] * m[2]); };
  if (trace(a) != qq + 1 || det(a) != qq) {
    fail(ErrorCode::Precondition, "characteristic polynomial of A is not (T-q)(T-1)");
  }
  if (trace(b) != 2 || det(b) != 1) {
    fail(ErrorCode::Precondition, "characteristic polynomial of B is not (T-1)^2");
  }
  const Mat2 nb{b[0] - 1, b[1], b[2], b[3] - 1};
  const Mat2 bq{1 + qq * nb[0], qq * nb[1], qq * nb[2], 1 + qq * nb[3]};
  if (bq != mat2_pow(b, q)) fail(ErrorCode::Internal, "B^q disagrees with I + q(B - I)");
  const Mat2 na{a[0] - 1, a[1], a[2], a[3] - 1};
  const Mat2 prod = mat2_mul(nb, na);
  ShottonResult out;
  out.lhs = mat2_mul(a, b) == mat2_mul(bq, a);
  out.rhs = prod[0] == 0 && prod[1] == 0 && prod[2] == 0 && prod[3] == 0;
  return out;
}

DefectDecomposition defect_decomposition(const std::vector<DeformationPoint>& points) {
  DefectDecomposition out;
  for (const auto& pt : points) {
    pt.validate();
    const std::uint64_t m = pt.m();
    const std::uint64_t n = pt.n();
    const std::uint64_t v = vp_finite(pt.p, z(pt.q) * z(pt.q) - 1);
    out.cotangent_change += m + v - 2 * n;
    out.eta_change += m + v;
    out.defect += 2 * n;
  }
  return out;
}

}  // namespace wdl
