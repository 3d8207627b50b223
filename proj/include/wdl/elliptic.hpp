#pragma once

// Weierstrass curves over Q: invariants, global minimal models, reduction
// types, Frobenius traces and a one-sided certificate that the mod-p
// representation is irreducible.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdl/arith.hpp"

namespace wdl {

struct WeierstrassCurve {
  /// a1, a2, a3, a4, a6
  std::array<Integer, 5> a;
  std::string label;

  const Integer& a1() const { return a[0]; }
  const Integer& a2() const { return a[1]; }
  const Integer& a3() const { return a[2]; }
  const Integer& a4() const { return a[3]; }
  const Integer& a6() const { return a[4]; }

  std::string ainvs_string() const;
};

struct CurveInvariants {
  Integer b2, b4, b6, b8;
  Integer c4, c6;
  Integer discriminant;
  Rational j;
};

/// Throws InvalidArgument if the discriminant vanishes.
CurveInvariants invariants(const WeierstrassCurve& e);

/// Globally minimal model in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1}).
WeierstrassCurve minimal_model(const WeierstrassCurve& e);

/// Model with a-invariants a_i * u^i; isomorphic over Q.
WeierstrassCurve scale_model(const WeierstrassCurve& e, const Integer& u);

/// Integral change of coordinates x = x' + r, y = y' + s x' + t (u = 1).
WeierstrassCurve change_coordinates(const WeierstrassCurve& e, const Integer& r, const Integer& s,
                                    const Integer& t);

enum class ReductionType { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

std::string to_string(ReductionType t);

struct ReductionInfo {
  std::uint64_t q = 0;
  ReductionType type = ReductionType::Good;
  std::uint64_t vq_delta = 0;
  std::int64_t vq_j = 0;  // 0 when j = 0

  bool multiplicative() const {
    return type == ReductionType::SplitMultiplicative || type == ReductionType::NonsplitMultiplicative;
  }
};

/// Reduction at q of the given model, which must be minimal at q.
ReductionInfo reduction_at(const WeierstrassCurve& e, std::uint64_t q);

/// Number of projective points of the reduction mod l, singular or not.
std::uint64_t count_points(const WeierstrassCurve& e, std::uint64_t l);

/// l + 1 - #E(F_l). Throws Precondition at bad l.
std::int64_t ap(const WeierstrassCurve& e, std::uint64_t l);

/// Smallest good l <= bound, l != p, with x^2 - a_l x + l irreducible mod p.
std::optional<std::uint64_t> irreducibility_certificate(const WeierstrassCurve& e, std::uint64_t p,
                                                        std::uint64_t bound);

inline constexpr std::uint64_t kDefaultCertificateBound = 1000;

/// rad(Delta_min) when every bad prime is multiplicative; nullopt otherwise.
std::optional<Integer> semistable_conductor(const WeierstrassCurve& e);

/// Checks that a squarefree conductor N equals rad(Delta) for the minimal
/// model e with every q | N multiplicative.
bool conductor_matches(const WeierstrassCurve& minimal, const Integer& conductor);

}  // namespace wdl
