#pragma once

// Finite flat reduced local algebras over O = Z_p presented inside O^r,
// modules over them, cotangent and congruence lengths, and Wiles defects.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "wdl/arith.hpp"
#include "wdl/plattice.hpp"

namespace wdl {

using IntVector = std::vector<Integer>;

/// Subring of O^r generated by integer vectors under componentwise product.
/// Coordinate i is the augmentation lambda_i. Indices are 0-based.
class OAlgebra {
 public:
  /// Throws Inadmissible if a generator is not constant mod p, or two
  /// coordinates are not separated by any generator.
  OAlgebra(std::uint64_t p, std::size_t r, std::vector<IntVector> generators);

  std::uint64_t prime() const { return p_; }
  std::size_t num_augmentations() const { return r_; }
  const std::vector<IntVector>& generators() const { return gens_; }
  /// Hermite basis over Z of the ring generated by 1 and the generators;
  /// its Z_(p)-span is the algebra. r rows of length r.
  const IntMatrix& basis() const { return basis_; }
  /// Least d such that monomials of degree <= d in the generators span.
  unsigned stabilization_degree() const { return degree_; }

  bool contains(const IntVector& x) const;
  /// Matrix of y -> y * x in basis coordinates (row convention).
  IntMatrix multiplication_matrix(const IntVector& x) const;

 private:
  std::uint64_t p_;
  std::size_t r_;
  std::vector<IntVector> gens_;
  IntMatrix basis_;
  unsigned degree_ = 0;
};

/// Free O-lattice of rank n with one integer action matrix per algebra
/// generator, acting on row vectors: g . v = v * A_g.
class RModule {
 public:
  /// Throws InvalidArgument on shape errors, noncommuting actions, or
  /// actions that violate a relation among the generators.
  RModule(OAlgebra algebra, std::size_t rank, std::vector<IntMatrix> actions);

  const OAlgebra& algebra() const { return algebra_; }
  std::size_t rank() const { return rank_; }
  const std::vector<IntMatrix>& actions() const { return actions_; }

  /// Rank of M[ker lambda_i].
  std::size_t lambda_rank(std::size_t i) const;

 private:
  OAlgebra algebra_;
  std::size_t rank_;
  std::vector<IntMatrix> actions_;
};

RModule regular_module(const OAlgebra& r);
/// Actions transposed: the O-dual with the contragredient action.
RModule dual_module(const RModule& m);
RModule direct_sum(const RModule& a, const RModule& b);
/// The R-submodule of O^r generated by the given vectors, with the action of
/// R by componentwise product, in a Hermite basis.
RModule submodule_of_normalization(const OAlgebra& r, const std::vector<IntVector>& vectors);

/// Saturated lattice M[ker lambda_i] in O^n.
PLattice eigen_lattice(const RModule& m, std::size_t i);

/// ker(lambda_i) inside the algebra, as vectors in O^r.
PLattice augmentation_ideal(const OAlgebra& r, std::size_t i);

PAdicVal cotangent_length(const OAlgebra& r, std::size_t i);

/// Generator alpha of R[ker lambda_i], as a vector in O^r.
IntVector annihilator_generator(const OAlgebra& r, std::size_t i);

/// v_p(lambda_i(alpha)).
PAdicVal algebra_congruence_length(const OAlgebra& r, std::size_t i);

struct CongruenceModuleInfo {
  PAdicVal length;
  std::size_t lambda_rank = 0;
};

CongruenceModuleInfo module_congruence(const RModule& m, std::size_t i);
PAdicVal module_congruence_length(const RModule& m, std::size_t i);

struct DefectReport {
  PAdicVal phi_length;
  PAdicVal psi_length;
  std::size_t lambda_rank = 0;
  Rational defect;
  /// Some generic point carries rank above lambda_rank; the sign of the
  /// defect is then not guaranteed.
  bool generic_rank_exceeds_lambda_rank = false;
};

DefectReport wiles_defect(const OAlgebra& r, const RModule& m, std::size_t i);
DefectReport wiles_defect(const OAlgebra& r, std::size_t i);

/// The subalgebra generated by the annihilator generators alpha_i.
OAlgebra build_remark_subalgebra(const OAlgebra& rtilde);

/// {"p": int, "r": int, "generators": [[int,...],...]}; unknown keys rejected.
OAlgebra algebra_from_json(const std::string& text);
/// {"rank": int, "actions": [[[int,...],...],...]}; unknown keys rejected.
RModule module_from_json(const OAlgebra& r, const std::string& text);

}  // namespace wdl
