#include "wdl/elliptic.hpp"

#include <algorithm>
#include <limits>

#include "wdl/error.hpp"

namespace wdl {

namespace {

// Jacobi symbol (a / n) for odd n.
int jacobi(std::uint64_t a, std::uint64_t n) {
  a %= n;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const std::uint64_t r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

Integer pow_int(const Integer& base, unsigned long e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// Integer c4, c6 are the invariants of an integral model (Kraus).
bool kraus_ok(const Integer& c4, const Integer& c6) {
  const Integer disc = c4 * c4 * c4 - c6 * c6;
  if (disc == 0 || disc % 1728 != 0) return false;
  Integer r27 = c6 % 27;
  if (r27 < 0) r27 += 27;
  if (r27 == 9 || r27 == 18) return false;
  Integer r4 = c6 % 4;
  if (r4 < 0) r4 += 4;
  if (r4 == 3) return true;
  Integer r32 = c6 % 32;
  if (r32 < 0) r32 += 32;
  const bool c4_ok = c4 == 0 || vp_finite(2, c4) >= 4;
  return c4_ok && (r32 == 0 || r32 == 8);
}

// Reduced integral model with the given invariants (Kraus conditions hold).
WeierstrassCurve model_from_c4c6(const Integer& c4, const Integer& c6) {
  Integer b2 = (-c6) % 12;
  if (b2 < 0) b2 += 12;
  if (b2 > 6) b2 -= 12;
  const Integer b4n = b2 * b2 - c4;
  if (b4n % 24 != 0) fail(ErrorCode::Internal, "c4, c6 do not come from an integral model");
  const Integer b4 = b4n / 24;
  const Integer b6n = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
  if (b6n % 216 != 0) fail(ErrorCode::Internal, "c4, c6 do not come from an integral model");
  const Integer b6 = b6n / 216;
  Integer a1 = b2 % 2;
  if (a1 < 0) a1 += 2;
  Integer a3 = b6 % 2;
  if (a3 < 0) a3 += 2;
  WeierstrassCurve e;
  e.a[0] = a1;
  e.a[1] = (b2 - a1) / 4;
  e.a[2] = a3;
  e.a[3] = (b4 - a1 * a3) / 2;
  e.a[4] = (b6 - a3) / 4;
  return e;
}

std::uint64_t mod_u64(const Integer& x, std::uint64_t m) { return reduce_mod(x, m); }

}  // namespace

std::string WeierstrassCurve::ainvs_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < 5; ++i) {
    if (i) s += ',';
    s += a[i].get_str();
  }
  return s + "]";
}

CurveInvariants invariants(const WeierstrassCurve& e) {
  CurveInvariants v;
  const auto& [a1, a2, a3, a4, a6] = e.a;
  v.b2 = a1 * a1 + 4 * a2;
  v.b4 = 2 * a4 + a1 * a3;
  v.b6 = a3 * a3 + 4 * a6;
  v.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  v.c4 = v.b2 * v.b2 - 24 * v.b4;
  v.c6 = -v.b2 * v.b2 * v.b2 + 36 * v.b2 * v.b4 - 216 * v.b6;
  v.discriminant = -v.b2 * v.b2 * v.b8 - 8 * v.b4 * v.b4 * v.b4 - 27 * v.b6 * v.b6 + 9 * v.b2 * v.b4 * v.b6;
  if (v.discriminant == 0) fail(ErrorCode::InvalidArgument, "singular curve " + e.ainvs_string());
  if (1728 * v.discriminant != v.c4 * v.c4 * v.c4 - v.c6 * v.c6) {
    fail(ErrorCode::Internal, "invariant identity 1728 Delta = c4^3 - c6^2 failed");
  }
  v.j = Rational(v.c4 * v.c4 * v.c4, v.discriminant);
  v.j.canonicalize();
  return v;
}

WeierstrassCurve minimal_model(const WeierstrassCurve& e) {
  const CurveInvariants inv = invariants(e);
  Integer c4 = inv.c4;
  Integer c6 = inv.c6;
  Integer g;
  mpz_gcd(g.get_mpz_t(), c4.get_mpz_t(), c6.get_mpz_t());
  if (g != 1) {
    for (const auto& [ell, exp] : factor_integer(g)) {
      (void)exp;
      const std::uint64_t l = ell.get_ui();
      std::uint64_t d = std::numeric_limits<std::uint64_t>::max();
      if (c4 != 0) d = std::min(d, vp_finite(l, c4) / 4);
      if (c6 != 0) d = std::min(d, vp_finite(l, c6) / 6);
      for (; d > 0; --d) {
        const Integer u = pow_int(ell, d);
        const Integer c4d = c4 / pow_int(u, 4);
        const Integer c6d = c6 / pow_int(u, 6);
        if (l >= 5 || kraus_ok(c4d, c6d)) {
          c4 = c4d;
          c6 = c6d;
          break;
        }
      }
    }
  }
  WeierstrassCurve out = model_from_c4c6(c4, c6);
  out.label = e.label;
  invariants(out);
  return out;
}

WeierstrassCurve scale_model(const WeierstrassCurve& e, const Integer& u) {
  if (u == 0) fail(ErrorCode::InvalidArgument, "scale factor must be nonzero");
  WeierstrassCurve out = e;
  const unsigned long weights[5] = {1, 2, 3, 4, 6};
  for (std::size_t i = 0; i < 5; ++i) out.a[i] = e.a[i] * pow_int(u, weights[i]);
  return out;
}

WeierstrassCurve change_coordinates(const WeierstrassCurve& e, const Integer& r, const Integer& s,
                                    const Integer& t) {
  const auto& [a1, a2, a3, a4, a6] = e.a;
  WeierstrassCurve out = e;
  out.a[0] = a1 + 2 * s;
  out.a[1] = a2 - s * a1 + 3 * r - s * s;
  out.a[2] = a3 + r * a1 + 2 * t;
  out.a[3] = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  out.a[4] = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
  return out;
}

std::string to_string(ReductionType t) {
  switch (t) {
    case ReductionType::Good: return "good";
    case ReductionType::SplitMultiplicative: return "split";
    case ReductionType::NonsplitMultiplicative: return "nonsplit";
    case ReductionType::Additive: return "additive";
  }
  return "?";
}

ReductionInfo reduction_at(const WeierstrassCurve& e, std::uint64_t q) {
  if (!is_prime(q)) fail(ErrorCode::NotPrime, "q = " + std::to_string(q) + " is not prime");
  const CurveInvariants inv = invariants(e);
  ReductionInfo info;
  info.q = q;
  info.vq_delta = vp_finite(q, inv.discriminant);
  if (inv.c4 != 0) {
    info.vq_j = 3 * static_cast<std::int64_t>(vp_finite(q, inv.c4)) - static_cast<std::int64_t>(info.vq_delta);
  }
  if (info.vq_delta == 0) {
    info.type = ReductionType::Good;
  } else if (mod_u64(inv.c4, q) != 0) {
    bool split;
    if (q >= 5) {
      split = jacobi(mod_u64(-inv.c6, q), q) == 1;
    } else {
      // The nodal cubic has q points (split) or q + 2 points (nonsplit).
      split = count_points(e, q) == q;
    }
    info.type = split ? ReductionType::SplitMultiplicative : ReductionType::NonsplitMultiplicative;
  } else {
    info.type = ReductionType::Additive;
  }
  return info;
}

std::uint64_t count_points(const WeierstrassCurve& e, std::uint64_t l) {
  if (!is_prime(l)) fail(ErrorCode::NotPrime, "l = " + std::to_string(l) + " is not prime");
  if (l == 2) {
    std::uint64_t a[5];
    for (std::size_t i = 0; i < 5; ++i) a[i] = mod_u64(e.a[i], 2);
    std::uint64_t count = 1;
    for (std::uint64_t x = 0; x < 2; ++x)
      for (std::uint64_t y = 0; y < 2; ++y) {
        const std::uint64_t lhs = y * y + a[0] * x * y + a[2] * y;
        const std::uint64_t rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
        if ((lhs + rhs) % 2 == 0) ++count;
      }
    return count;
  }
  // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
  const CurveInvariants inv = invariants(e);
  const std::uint64_t b2 = mod_u64(inv.b2, l);
  const std::uint64_t b4 = mod_u64(2 * inv.b4, l);
  const std::uint64_t b6 = mod_u64(inv.b6, l);
  std::int64_t sum = 0;
  for (std::uint64_t x = 0; x < l; ++x) {
    std::uint64_t f = (4 % l) * x % l;
    f = (f + b2) % l * x % l;
    f = (f + b4) % l * x % l;
    f = (f + b6) % l;
    sum += jacobi(f, l);
  }
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(l) + 1 + sum);
}

std::int64_t ap(const WeierstrassCurve& e, std::uint64_t l) {
  const CurveInvariants inv = invariants(e);
  if (mod_u64(inv.discriminant, l) == 0) {
    fail(ErrorCode::Precondition, "bad reduction at l = " + std::to_string(l));
  }
  const std::int64_t a = static_cast<std::int64_t>(l) + 1 - static_cast<std::int64_t>(count_points(e, l));
  if (static_cast<std::uint64_t>(a * a) > 4 * l) fail(ErrorCode::Internal, "Hasse bound violated");
  return a;
}

std::optional<std::uint64_t> irreducibility_certificate(const WeierstrassCurve& e, std::uint64_t p,
                                                        std::uint64_t bound) {
  if (!is_prime(p) || p == 2) fail(ErrorCode::InvalidArgument, "certificate needs an odd prime p");
  const CurveInvariants inv = invariants(e);
  for (std::uint64_t l = 2; l <= bound; ++l) {
    if (l == p || !is_prime(l) || mod_u64(inv.discriminant, l) == 0) continue;
    const std::int64_t a = ap(e, l);
    const std::int64_t pp = static_cast<std::int64_t>(p);
    std::int64_t disc = (a * a - 4 * static_cast<std::int64_t>(l)) % pp;
    if (disc < 0) disc += pp;
    if (disc != 0 && jacobi(static_cast<std::uint64_t>(disc), p) == -1) return l;
  }
  return std::nullopt;
}

std::optional<Integer> semistable_conductor(const WeierstrassCurve& e) {
  const WeierstrassCurve m = minimal_model(e);
  const CurveInvariants inv = invariants(m);
  Integer n = 1;
  for (const auto& [q, exp] : factor_integer(inv.discriminant)) {
    (void)exp;
    if (inv.c4 % q == 0) return std::nullopt;
    n *= q;
  }
  return n;
}

bool conductor_matches(const WeierstrassCurve& minimal, const Integer& conductor) {
  if (conductor <= 0) return false;
  const CurveInvariants inv = invariants(minimal);
  Integer rest = abs(inv.discriminant);
  for (const auto& [q, exp] : factor_integer(conductor)) {
    if (exp != 1) return false;
    if (rest % q != 0 || inv.c4 % q == 0) return false;
    while (rest % q == 0) rest /= q;
  }
  return rest == 1;
}

}  // namespace wdl
