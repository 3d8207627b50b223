#pragma once

// Exact integer/rational arithmetic, p-adic valuations and the index
// computations in F_q^x that drive the tame invariants.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wdl {

using Integer = mpz_class;
using Rational = mpq_class;

struct Infinity {
  friend bool operator==(Infinity, Infinity) = default;
};

/// A p-adic valuation or O-length: a natural number or Infinity.
/// Infinity is only ever produced by valuating zero.
class PAdicVal {
 public:
  PAdicVal() : v_(std::uint64_t{0}) {}
  PAdicVal(std::uint64_t n) : v_(n) {}  // NOLINT(implicit)
  PAdicVal(Infinity) : v_(Infinity{}) {}  // NOLINT(implicit)

  static PAdicVal infinity() { return PAdicVal(Infinity{}); }

  bool is_finite() const { return std::holds_alternative<std::uint64_t>(v_); }
  bool is_infinite() const { return !is_finite(); }

  /// Throws wdl::Error(InfiniteLength) on Infinity.
  std::uint64_t value() const;

  std::string to_string() const;

  friend PAdicVal operator+(const PAdicVal& a, const PAdicVal& b);
  friend bool operator==(const PAdicVal& a, const PAdicVal& b) = default;
  friend std::strong_ordering operator<=>(const PAdicVal& a, const PAdicVal& b);

 private:
  std::variant<std::uint64_t, Infinity> v_;
};

PAdicVal min(const PAdicVal& a, const PAdicVal& b);

bool is_prime(std::uint64_t n);

/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<std::uint64_t, unsigned>> factor_trial(std::uint64_t n);

/// Prime factorization of |n| for nonzero n: trial division, then
/// Pollard-Brent on the cofactor. Primes ascending.
std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n);

/// Exact v_p(n); Infinity for n = 0. Throws NotPrime for composite p.
PAdicVal vp(std::uint64_t p, const Integer& n);

/// Signed valuation of a nonzero rational: v_p(num) - v_p(den).
std::int64_t vp_signed(std::uint64_t p, const Rational& x);

/// Finite valuation of a nonzero integer; shorthand for vp(p, n).value().
std::uint64_t vp_finite(std::uint64_t p, const Integer& n);

/// n / p^{v_p(n)}, for nonzero n.
Integer strip_prime(const Integer& n, std::uint64_t p);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m);
/// Inverse of a modulo m; throws InvalidArgument if gcd(a, m) != 1.
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);
/// Least nonnegative residue of an arbitrary integer.
std::uint64_t reduce_mod(const Integer& a, std::uint64_t m);

/// (x * q^{-v_q(x)}) mod q, i.e. the unit part of x reduced in F_q^x.
std::uint64_t unit_part_mod(std::uint64_t q, const Rational& x);

std::uint64_t multiplicative_order(std::uint64_t x, std::uint64_t q);

/// Smallest generator of F_q^x.
std::uint64_t primitive_root(std::uint64_t q);

/// log_g(x) mod p^k for the primitive root g = primitive_root(q), by
/// Pohlig-Hellman on the p-part of q-1. Requires p^k | q-1.
std::uint64_t discrete_log_ppart(std::uint64_t x, std::uint64_t q, std::uint64_t p,
                                 unsigned k);

/// v_p of [F_q^x : <x>], computed from the exact multiplicative order.
unsigned fq_index_pval(std::uint64_t x, std::uint64_t q, std::uint64_t p);

/// v_p of the index of the subgroup generated by log_{q,p^k}(x) in Z/p^k.
/// Requires k <= v_p(q-1). Equals min(k, fq_index_pval(x, q, p)).
unsigned subgroup_index_via_log(std::uint64_t x, std::uint64_t q, std::uint64_t p,
                                unsigned k);

}  // namespace wdl
