#include "wdl/arith.hpp"

#include <algorithm>

#include "wdl/error.hpp"

namespace wdl {

namespace {

void require_prime(std::uint64_t p, const char* what) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, std::string(what) + ": " + std::to_string(p) + " is not prime");
}

void require_unit(std::uint64_t x, std::uint64_t q) {
  if (x % q == 0) fail(ErrorCode::InvalidArgument, "residue is 0 mod " + std::to_string(q));
}

}  // namespace

std::uint64_t PAdicVal::value() const {
  if (const auto* n = std::get_if<std::uint64_t>(&v_)) return *n;
  fail(ErrorCode::InfiniteLength, "valuation is infinite");
}

std::string PAdicVal::to_string() const {
  return is_finite() ? std::to_string(std::get<std::uint64_t>(v_)) : std::string("inf");
}

PAdicVal operator+(const PAdicVal& a, const PAdicVal& b) {
  if (a.is_infinite() || b.is_infinite()) return PAdicVal::infinity();
  return PAdicVal(std::get<std::uint64_t>(a.v_) + std::get<std::uint64_t>(b.v_));
}

std::strong_ordering operator<=>(const PAdicVal& a, const PAdicVal& b) {
  if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
  if (a.is_infinite()) return std::strong_ordering::greater;
  if (b.is_infinite()) return std::strong_ordering::less;
  return std::get<std::uint64_t>(a.v_) <=> std::get<std::uint64_t>(b.v_);
}

PAdicVal min(const PAdicVal& a, const PAdicVal& b) { return b < a ? b : a; }

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d : {2u, 3u, 5u, 7u}) {
    if (n % d == 0) return n == d;
  }
  if (n < 121) return true;
  if (n < (std::uint64_t{1} << 32)) {
    for (std::uint64_t d = 11; d * d <= n; d += 2) {
      if (n % d == 0) return false;
    }
    return true;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<std::uint64_t, unsigned>> factor_trial(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  if (n == 0) fail(ErrorCode::InvalidArgument, "cannot factor 0");
  for (std::uint64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

Integer pollard_brent(const Integer& n, unsigned long seed) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer y = seed, c = seed + 1, m = 64, g = 1, r = 1, q = 1, x, ys, diff;
  auto f = [&](const Integer& v) {
    Integer out = v * v + c;
    mpz_mod(out.get_mpz_t(), out.get_mpz_t(), n.get_mpz_t());
    return out;
  };
  while (g == 1) {
    x = y;
    for (Integer i = 0; i < r; ++i) y = f(y);
    Integer k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (Integer i = 0; i < m && i < r - k; ++i) {
        y = f(y);
        diff = abs(x - y);
        q = q * diff % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += m;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      diff = abs(x - ys);
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  return g;
}

void split_composite(const Integer& n, std::vector<Integer>& primes) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
    primes.push_back(n);
    return;
  }
  for (unsigned long seed = 2;; ++seed) {
    Integer d = pollard_brent(n, seed);
    if (d != 1 && d != n) {
      split_composite(d, primes);
      split_composite(n / d, primes);
      return;
    }
  }
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "cannot factor 0");
  Integer rest = abs(n);
  std::vector<Integer> primes;
  for (unsigned long d = 2; d < 1u << 16; d += (d == 2 ? 1 : 2)) {
    if (Integer(d) * d > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      primes.emplace_back(d);
      rest /= d;
    }
  }
  if (rest > 1) split_composite(rest, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<Integer, unsigned>> out;
  for (const auto& p : primes) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

PAdicVal vp(std::uint64_t p, const Integer& n) {
  require_prime(p, "vp");
  if (n == 0) return PAdicVal::infinity();
  Integer pp(static_cast<unsigned long>(p));
  mpz_class rest;
  mp_bitcnt_t v = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
  return PAdicVal(static_cast<std::uint64_t>(v));
}

std::uint64_t vp_finite(std::uint64_t p, const Integer& n) { return vp(p, n).value(); }

std::int64_t vp_signed(std::uint64_t p, const Rational& x) {
  if (x == 0) fail(ErrorCode::InvalidArgument, "signed valuation of zero");
  return static_cast<std::int64_t>(vp_finite(p, x.get_num())) -
         static_cast<std::int64_t>(vp_finite(p, x.get_den()));
}

Integer strip_prime(const Integer& n, std::uint64_t p) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "strip_prime of zero");
  Integer pp(static_cast<unsigned long>(p));
  mpz_class rest;
  mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
  return rest;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e > 0) {
    if (e & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return result;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
  Integer inv;
  Integer aa(static_cast<unsigned long>(a % m));
  Integer mm(static_cast<unsigned long>(m));
  if (mpz_invert(inv.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()) == 0) {
    fail(ErrorCode::InvalidArgument, std::to_string(a) + " is not invertible mod " + std::to_string(m));
  }
  return inv.get_ui();
}

std::uint64_t reduce_mod(const Integer& a, std::uint64_t m) {
  Integer r;
  Integer mm(static_cast<unsigned long>(m));
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), mm.get_mpz_t());
  return r.get_ui();
}

std::uint64_t unit_part_mod(std::uint64_t q, const Rational& x) {
  require_prime(q, "unit_part_mod");
  if (x == 0) fail(ErrorCode::InvalidArgument, "unit part of zero");
  const std::uint64_t num = reduce_mod(strip_prime(x.get_num(), q), q);
  const std::uint64_t den = reduce_mod(strip_prime(x.get_den(), q), q);
  return mulmod(num, invmod(den, q), q);
}

std::uint64_t multiplicative_order(std::uint64_t x, std::uint64_t q) {
  require_prime(q, "multiplicative_order");
  require_unit(x, q);
  std::uint64_t order = q - 1;
  for (auto [f, e] : factor_trial(q - 1)) {
    (void)e;
    while (order % f == 0 && powmod(x, order / f, q) == 1) order /= f;
  }
  return order;
}

std::uint64_t primitive_root(std::uint64_t q) {
  require_prime(q, "primitive_root");
  if (q == 2) return 1;
  const auto factors = factor_trial(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool ok = std::all_of(factors.begin(), factors.end(), [&](const auto& fe) {
      return powmod(g, (q - 1) / fe.first, q) != 1;
    });
    if (ok) return g;
  }
  fail(ErrorCode::Internal, "no primitive root found mod " + std::to_string(q));
}

std::uint64_t discrete_log_ppart(std::uint64_t x, std::uint64_t q, std::uint64_t p, unsigned k) {
  require_prime(q, "discrete_log_ppart");
  require_prime(p, "discrete_log_ppart");
  require_unit(x, q);
  const unsigned t = static_cast<unsigned>(vp_finite(p, Integer(static_cast<unsigned long>(q - 1))));
  if (k > t) {
    fail(ErrorCode::Precondition, "p^k must divide q-1 (k=" + std::to_string(k) + ", v_p(q-1)=" + std::to_string(t) + ")");
  }
  if (k == 0) return 0;
  std::uint64_t pt = 1;
  for (unsigned i = 0; i < t; ++i) pt *= p;
  const std::uint64_t cofactor = (q - 1) / pt;
  const std::uint64_t g = primitive_root(q);
  // gamma has order p^t; h = gamma^L with L = log_g(x) mod p^t.
  const std::uint64_t gamma = powmod(g, cofactor, q);
  const std::uint64_t h = powmod(x, cofactor, q);
  const std::uint64_t gamma_top = powmod(gamma, pt / p, q);  // order p
  std::uint64_t log = 0;
  std::uint64_t pi = 1;  // p^i
  for (unsigned i = 0; i < t; ++i) {
    // Strip the digits found so far, then project to the order-p subgroup.
    std::uint64_t residual = mulmod(h, invmod(powmod(gamma, log, q), q), q);
    std::uint64_t projected = powmod(residual, pt / (pi * p), q);
    std::uint64_t digit = 0;
    std::uint64_t acc = 1;
    while (acc != projected) {
      acc = mulmod(acc, gamma_top, q);
      ++digit;
      if (digit >= p) fail(ErrorCode::Internal, "discrete log digit search failed");
    }
    log += digit * pi;
    pi *= p;
  }
  std::uint64_t pk = 1;
  for (unsigned i = 0; i < k; ++i) pk *= p;
  return log % pk;
}

unsigned fq_index_pval(std::uint64_t x, std::uint64_t q, std::uint64_t p) {
  require_prime(p, "fq_index_pval");
  const std::uint64_t order = multiplicative_order(x, q);
  return static_cast<unsigned>(vp_finite(p, Integer(static_cast<unsigned long>((q - 1) / order))));
}

unsigned subgroup_index_via_log(std::uint64_t x, std::uint64_t q, std::uint64_t p, unsigned k) {
  const std::uint64_t log = discrete_log_ppart(x, q, p, k);
  if (log == 0) return k;
  return std::min<unsigned>(k, static_cast<unsigned>(vp_finite(p, Integer(static_cast<unsigned long>(log)))));
}

}  // namespace wdl
