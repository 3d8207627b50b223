#pragma once

// Cotangent lattices of the framed, unipotent and Steinberg local
// deformation rings at a Steinberg augmentation (q, s, t), and their
// relative lengths.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wdl/arith.hpp"
#include "wdl/plattice.hpp"

namespace wdl {

struct DeformationPoint {
  std::uint64_t q = 0;
  std::uint64_t p = 0;
  Integer s;
  Integer t;

  /// Throws InvalidArgument unless q, p are primes, p odd, p != q, t != 0.
  void validate() const;
  /// v_p(t)
  std::uint64_t m() const;
  /// v_p(gcd(s, t, q-1))
  std::uint64_t n() const;
};

/// Ambient coordinates, in order.
inline constexpr std::array<const char*, 8> kCotangentCoordinates = {"da", "db", "dc", "de",
                                                                      "dalpha", "dbeta", "dgamma", "ddelta"};

struct CotangentLattices {
  PLattice framed;
  PLattice unipotent;
  PLattice steinberg;
  /// Evaluated differentials of the defining relations, 8 columns each.
  IntMatrix framed_generators;
  IntMatrix unipotent_generators;
  IntMatrix steinberg_generators;
  /// Five-row bases from hand elimination, for cross-checking. Rows with
  /// p-unit denominators are cleared.
  IntMatrix framed_eliminated;
  IntMatrix unipotent_eliminated;
  IntMatrix steinberg_eliminated;
  /// True when the Steinberg basis used the (q-1) | s branch.
  bool steinberg_case_one = false;
};

CotangentLattices build_lattices(const DeformationPoint& pt);

enum class LatticePair { FramedUnipotent, UnipotentSteinberg, FramedSteinberg };

LatticePair parse_lattice_pair(const std::string& name);
std::string to_string(LatticePair pair);

PAdicVal relative_length_lattice(const DeformationPoint& pt, LatticePair pair);
PAdicVal relative_length_lattice(const CotangentLattices& l, LatticePair pair);
PAdicVal relative_length_closed_form(const DeformationPoint& pt, LatticePair pair);

/// 2x2 rational matrix, row-major.
using Mat2 = std::array<Rational, 4>;

Mat2 mat2_mul(const Mat2& a, const Mat2& b);
Mat2 mat2_pow(const Mat2& a, std::uint64_t e);

struct ShottonResult {
  bool lhs = false;  // AB = B^q A
  bool rhs = false;  // (B - I)(A - I) = 0
};

/// Requires char poly of A to be (T-q)(T-1) and of B to be (T-1)^2.
ShottonResult shotton_equivalence_check(const Mat2& a, const Mat2& b, std::uint64_t q);

struct DefectDecomposition {
  std::uint64_t cotangent_change = 0;
  std::uint64_t eta_change = 0;
  std::uint64_t defect = 0;
};

DefectDecomposition defect_decomposition(const std::vector<DeformationPoint>& points);

}  // namespace wdl
