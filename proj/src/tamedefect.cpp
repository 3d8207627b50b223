#include "wdl/tamedefect.hpp"

#include <algorithm>

#include "wdl/error.hpp"

namespace wdl {

namespace {

Integer z(std::uint64_t x) { return Integer(static_cast<unsigned long>(x)); }

void require_odd_prime_p(std::uint64_t p) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, "p = " + std::to_string(p) + " is not prime");
  if (p == 2) fail(ErrorCode::Precondition, "p must be odd");
}

}  // namespace

LocalTameInvariants tame_invariants_minimal(const WeierstrassCurve& minimal, std::uint64_t q, std::uint64_t p) {
  require_odd_prime_p(p);
  if (p == q) fail(ErrorCode::Precondition, "p must differ from q");
  const CurveInvariants inv = invariants(minimal);
  if (reduce_mod(inv.discriminant, p) == 0) {
    fail(ErrorCode::Precondition, "p = " + std::to_string(p) + " divides the conductor");
  }
  const ReductionInfo red = reduction_at(minimal, q);
  if (!red.multiplicative()) {
    fail(ErrorCode::Precondition, "reduction at q = " + std::to_string(q) + " is " + to_string(red.type) +
                                      ", not multiplicative");
  }
  LocalTameInvariants out;
  out.q = q;
  out.p = p;
  out.vq_tate = static_cast<std::uint64_t>(-red.vq_j);
  out.split = red.type == ReductionType::SplitMultiplicative;
  out.t_q = static_cast<unsigned>(vp_finite(p, z(q - 1)));
  out.m_q = static_cast<unsigned>(vp_finite(p, z(out.vq_tate)));
  // j = 1/q_E + 744 + O(q), so the unit part of q_E is that of 1/j.
  out.unit_part = invmod(unit_part_mod(q, inv.j), q);
  out.u_q = fq_index_pval(out.unit_part, q, p);
  out.k_q = std::min(out.m_q, out.t_q);
  out.n_q = std::min({out.t_q, out.m_q, out.u_q});
  return out;
}

LocalTameInvariants tame_invariants(const WeierstrassCurve& e, std::uint64_t q, std::uint64_t p) {
  return tame_invariants_minimal(minimal_model(e), q, p);
}

unsigned nq_via_log(const LocalTameInvariants& inv) {
  return subgroup_index_via_log(inv.unit_part, inv.q, inv.p, inv.k_q);
}

LoweredConductor lowered_conductor_minimal(const WeierstrassCurve& minimal, const Integer& conductor,
                                           std::uint64_t p) {
  require_odd_prime_p(p);
  if (conductor % z(p) == 0) fail(ErrorCode::Precondition, "p divides the conductor");
  LoweredConductor out;
  out.n_lowered = conductor;
  for (const auto& [qq, exp] : factor_integer(conductor)) {
    if (exp != 1) fail(ErrorCode::Precondition, "conductor is not squarefree");
    const std::uint64_t q = qq.get_ui();
    const ReductionInfo red = reduction_at(minimal, q);
    if (!red.multiplicative()) fail(ErrorCode::Precondition, "reduction at " + std::to_string(q) + " is not multiplicative");
    if (static_cast<std::uint64_t>(-red.vq_j) % p == 0) {
      out.dropped.push_back(q);
      out.n_lowered /= qq;
    }
  }
  return out;
}

LoweredConductor lowered_conductor(const WeierstrassCurve& e, std::uint64_t p) {
  const WeierstrassCurve m = minimal_model(e);
  const auto n = semistable_conductor(m);
  if (!n) fail(ErrorCode::Precondition, "curve is not semistable");
  return lowered_conductor_minimal(m, *n, p);
}

DefectForQ wiles_defect_for_Q(const WeierstrassCurve& e, const std::set<std::uint64_t>& primes_q, std::uint64_t p) {
  if (primes_q.empty()) fail(ErrorCode::InvalidArgument, "Q must be nonempty");
  const WeierstrassCurve m = minimal_model(e);
  const auto n = semistable_conductor(m);
  if (!n) fail(ErrorCode::Precondition, "curve is not semistable");
  DefectForQ out;
  out.lowered = lowered_conductor_minimal(m, *n, p);
  Integer qprod = 1;
  Integer total = 0;
  for (std::uint64_t q : primes_q) {
    if (*n % z(q) != 0) fail(ErrorCode::Precondition, "q = " + std::to_string(q) + " does not divide the conductor");
    out.local.push_back(tame_invariants_minimal(m, q, p));
    total += 2 * out.local.back().n_q;
    qprod *= z(q);
  }
  out.defect = Rational(total);
  const Integer n_prime = *n / qprod;
  const Integer& level = out.lowered.n_lowered;
  Integer g;
  mpz_gcd(g.get_mpz_t(), level.get_mpz_t(), qprod.get_mpz_t());
  out.applicability.level_divides = level % n_prime == 0;
  out.applicability.even_q_meets_level = primes_q.size() % 2 == 0 && g > 1;
  out.applicability.odd_q_nontrivial_n = primes_q.size() % 2 == 1 && n_prime > 1;
  out.applicability.level_two_primes = prime_divisor_count(level) >= 2;
  return out;
}

unsigned prime_divisor_count(const Integer& n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "prime divisors of 0");
  if (abs(n) == 1) return 0;
  return static_cast<unsigned>(factor_integer(n).size());
}

}  // namespace wdl
