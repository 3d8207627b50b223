#pragma once

// Tame invariants of a semistable curve at a multiplicative prime, level
// lowering, and the Wiles defect over a set of Steinberg primes.

#include <cstdint>
#include <set>
#include <vector>

#include "wdl/arith.hpp"
#include "wdl/elliptic.hpp"

namespace wdl {

struct LocalTameInvariants {
  std::uint64_t q = 0;
  std::uint64_t p = 0;
  std::uint64_t vq_tate = 0;  // -v_q(j)
  unsigned t_q = 0;           // v_p(q - 1)
  unsigned m_q = 0;           // v_p(vq_tate)
  unsigned u_q = 0;           // v_p([F_q^x : <unit_part>])
  unsigned k_q = 0;           // min(m_q, t_q)
  unsigned n_q = 0;           // min(t_q, m_q, u_q)
  std::uint64_t unit_part = 0;  // unit part of the Tate period mod q
  bool split = false;
};

/// Computes on the minimal model. Throws Precondition unless the reduction
/// at q is multiplicative and p is an odd prime of good reduction, p != q.
LocalTameInvariants tame_invariants(const WeierstrassCurve& e, std::uint64_t q, std::uint64_t p);
/// Same, for a model already known to be minimal.
LocalTameInvariants tame_invariants_minimal(const WeierstrassCurve& minimal, std::uint64_t q, std::uint64_t p);

/// Discrete-log route: subgroup_index_via_log(unit_part, q, p, k_q).
unsigned nq_via_log(const LocalTameInvariants& inv);

struct LoweredConductor {
  Integer n_lowered;
  std::vector<std::uint64_t> dropped;
};

/// Drops every q | N with p | v_q(q_E). Throws Precondition for curves that
/// are not semistable or with p | N.
LoweredConductor lowered_conductor(const WeierstrassCurve& e, std::uint64_t p);
LoweredConductor lowered_conductor_minimal(const WeierstrassCurve& minimal, const Integer& conductor,
                                           std::uint64_t p);

/// Hypotheses of the defect formula, evaluated for N_total = N' * Q.
struct DefectApplicability {
  bool level_divides = false;        // N' | N(rhobar)
  bool even_q_meets_level = false;   // |Q| even and gcd(N(rhobar), Q) > 1
  bool odd_q_nontrivial_n = false;   // |Q| odd and N' > 1
  bool level_two_primes = false;     // N(rhobar) has at least two prime divisors
  bool applicable() const { return level_divides && (even_q_meets_level || odd_q_nontrivial_n || level_two_primes); }
};

struct DefectForQ {
  Rational defect;  // sum of 2 n_q
  std::vector<LocalTameInvariants> local;
  LoweredConductor lowered;
  DefectApplicability applicability;
};

DefectForQ wiles_defect_for_Q(const WeierstrassCurve& e, const std::set<std::uint64_t>& primes_q, std::uint64_t p);

/// Number of distinct prime divisors.
unsigned prime_divisor_count(const Integer& n);

}  // namespace wdl
