#pragma once

// Lattices over Z_(p), the integers localized at p, given by integer
// generator rows. This is the substrate for every O-length computed in the
// library (with O = Z_p, lengths over Z_(p) and Z_p agree).

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "wdl/arith.hpp"

namespace wdl {

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Integer> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Integer> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  void append_row(std::span<const Integer> values);
  IntMatrix transpose() const;
  /// Column block [first, first + count).
  IntMatrix columns(std::size_t first, std::size_t count) const;

  std::vector<std::vector<Integer>> to_rows() const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);

/// Echelon form reached by row operations that are invertible over Z_(p):
/// swaps, multiplication by integers prime to p, and adding Z-multiples of
/// one row to another. Rows [0, pivots.size()) are the pivot rows; the
/// remaining rows are zero in the reduced columns.
struct LocalEchelon {
  IntMatrix rows;
  std::vector<std::size_t> pivot_columns;
};

LocalEchelon local_echelon(const IntMatrix& m, std::uint64_t p, std::size_t reduce_cols);

class PLattice {
 public:
  /// Span over Z_(p) of the rows of `generators`. Rows may be redundant or 0.
  PLattice(std::uint64_t p, std::size_t ambient_rank, IntMatrix generators);

  static PLattice zero(std::uint64_t p, std::size_t n);
  static PLattice full(std::uint64_t p, std::size_t n);

  std::uint64_t prime() const { return p_; }
  std::size_t ambient_rank() const { return n_; }
  const IntMatrix& generators() const { return gens_; }
  /// Rows form a Z_(p)-basis of the lattice, in echelon form.
  const IntMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivot_columns() const { return pivots_; }
  std::size_t rank() const { return basis_.rows(); }

  /// Coordinates of v in the basis if v lies in span_Q; empty otherwise.
  std::vector<Rational> solve(std::span<const Integer> v) const;

 private:
  std::uint64_t p_;
  std::size_t n_;
  IntMatrix gens_;
  IntMatrix basis_;
  std::vector<std::size_t> pivots_;
};

std::size_t rank(const PLattice& l);

/// True iff every generator of `sub` is a Z_(p)-combination of `sup`.
bool contains(const PLattice& sub, const PLattice& sup);

/// Length over Z_p of sup/sub, as g(sub) - g(sup) where g is the minimal
/// p-valuation among maximal minors. Requires sub within sup and equal ranks.
PAdicVal quotient_length(const PLattice& sub, const PLattice& sup);

/// span_Q(L) intersected with Z_(p)^n.
PLattice saturate(const PLattice& l);

/// Saturated lattice of integer row vectors v with v * a = 0.
PLattice kernel(const IntMatrix& a, std::uint64_t p);

/// Minimum p-valuation over all rho x rho minors, rho = rank(m). Enumerates
/// every row and column subset; Infinity for the zero matrix is reported as 0
/// since the empty minor is 1.
std::uint64_t min_maximal_minor_valuation(const IntMatrix& m, std::uint64_t p);

/// Cross-check oracle: p-valuations of the nonzero diagonal entries of an
/// integer diagonalization (Smith form over Z) of m. Their sum equals
/// min_maximal_minor_valuation(m, p).
std::vector<std::uint64_t> smith_valuations(const IntMatrix& m, std::uint64_t p);

/// Determinant by fraction-free elimination.
Integer determinant(const IntMatrix& m);

/// Row-style Hermite normal form over Z; returns the nonzero rows.
IntMatrix hermite_basis(const IntMatrix& m);

/// Integer coordinates of v in the rows of an integer basis (e.g. a Hermite
/// basis). Throws Precondition if v is not an integral combination.
std::vector<Integer> integer_coordinates(const IntMatrix& basis, std::span<const Integer> v);

std::string to_string(const IntMatrix& m);

}  // namespace wdl
