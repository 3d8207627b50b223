#include "wdl/plattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "wdl/error.hpp"

namespace wdl {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::InvalidArgument, "ragged matrix literal");
    for (long x : r) data_.emplace_back(x);
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  IntMatrix m(0, cols);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

void IntMatrix::append_row(std::span<const Integer> values) {
  if (values.size() != cols_) {
    fail(ErrorCode::InvalidArgument, "row has " + std::to_string(values.size()) +
                                         " entries, expected " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) fail(ErrorCode::InvalidArgument, "column block out of range");
  IntMatrix out(rows_, count);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = (*this)(r, first + c);
  return out;
}

std::vector<std::vector<Integer>> IntMatrix::to_rows() const {
  std::vector<std::vector<Integer>> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.emplace_back(row(r).begin(), row(r).end());
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::InvalidArgument, "matrix product shape mismatch");
  IntMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorCode::InvalidArgument, "matrix difference shape mismatch");
  IntMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  auto ra = m.row(a);
  auto rb = m.row(b);
  std::swap_ranges(ra.begin(), ra.end(), rb.begin());
}

// Divide a row by the prime-to-p part of its content.
void strip_unit_content(std::span<Integer> row, std::uint64_t p) {
  Integer g = 0;
  for (const auto& x : row) {
    if (x != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  if (g == 0) return;
  Integer u = strip_prime(g, p);
  if (u == 1) return;
  for (auto& x : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), u.get_mpz_t());
}

bool row_is_zero(std::span<const Integer> row) {
  return std::all_of(row.begin(), row.end(), [](const Integer& x) { return x == 0; });
}

// Minimal p-valuation among the ρ x ρ minors of a matrix whose ρ rows are
// linearly independent.
std::uint64_t full_row_rank_minor_valuation(const IntMatrix& b, std::uint64_t p) {
  const std::size_t rho = b.rows();
  const std::size_t n = b.cols();
  if (rho == 0) return 0;
  std::vector<std::size_t> cols(rho);
  for (std::size_t i = 0; i < rho; ++i) cols[i] = i;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  IntMatrix sq(rho, rho);
  while (true) {
    for (std::size_t r = 0; r < rho; ++r)
      for (std::size_t c = 0; c < rho; ++c) sq(r, c) = b(r, cols[c]);
    Integer d = determinant(sq);
    if (d != 0) {
      best = std::min(best, vp_finite(p, d));
      if (best == 0) return 0;
    }
    // Next combination in lexicographic order.
    std::size_t i = rho;
    while (i > 0 && cols[i - 1] == n - rho + i - 1) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < rho; ++j) cols[j] = cols[j - 1] + 1;
  }
  if (best == std::numeric_limits<std::uint64_t>::max()) {
    fail(ErrorCode::Internal, "rows were not independent");
  }
  return best;
}

std::size_t rational_rank(const IntMatrix& m) {
  // Any prime works for the rank; the local echelon never discards
  // independent rows.
  return local_echelon(m, 2, m.cols()).pivot_columns.size();
}

}  // namespace

LocalEchelon local_echelon(const IntMatrix& m, std::uint64_t p, std::size_t reduce_cols) {
  if (reduce_cols > m.cols()) fail(ErrorCode::InvalidArgument, "reduce_cols exceeds column count");
  LocalEchelon out{m, {}};
  IntMatrix& a = out.rows;
  std::size_t cur = 0;
  Integer g, u, w, tmp;
  for (std::size_t c = 0; c < reduce_cols && cur < a.rows(); ++c) {
    std::size_t pivot = a.rows();
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (std::size_t r = cur; r < a.rows(); ++r) {
      if (a(r, c) == 0) continue;
      std::uint64_t v = vp_finite(p, a(r, c));
      if (v < best || (v == best && abs(a(r, c)) < abs(a(pivot, c)))) {
        best = v;
        pivot = r;
      }
    }
    if (pivot == a.rows()) continue;
    swap_rows(a, cur, pivot);
    strip_unit_content(a.row(cur), p);
    for (std::size_t r = cur + 1; r < a.rows(); ++r) {
      if (a(r, c) == 0) continue;
      // row_r <- u * row_r - w * pivot_row, with u = P/g a p-unit.
      mpz_gcd(g.get_mpz_t(), a(cur, c).get_mpz_t(), a(r, c).get_mpz_t());
      mpz_divexact(u.get_mpz_t(), a(cur, c).get_mpz_t(), g.get_mpz_t());
      mpz_divexact(w.get_mpz_t(), a(r, c).get_mpz_t(), g.get_mpz_t());
      for (std::size_t j = 0; j < a.cols(); ++j) {
        tmp = u * a(r, j);
        tmp -= w * a(cur, j);
        a(r, j) = tmp;
      }
      strip_unit_content(a.row(r), p);
    }
    out.pivot_columns.push_back(c);
    ++cur;
  }
  return out;
}

PLattice::PLattice(std::uint64_t p, std::size_t ambient_rank, IntMatrix generators)
    : p_(p), n_(ambient_rank), gens_(std::move(generators)) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, "lattice prime " + std::to_string(p) + " is not prime");
  if (gens_.rows() == 0) gens_ = IntMatrix(0, n_);
  if (gens_.cols() != n_) {
    fail(ErrorCode::InvalidArgument, "generator rows have length " + std::to_string(gens_.cols()) +
                                         ", ambient rank is " + std::to_string(n_));
  }
  LocalEchelon e = local_echelon(gens_, p_, n_);
  pivots_ = std::move(e.pivot_columns);
  basis_ = IntMatrix(0, n_);
  for (std::size_t r = 0; r < pivots_.size(); ++r) basis_.append_row(e.rows.row(r));
}

PLattice PLattice::zero(std::uint64_t p, std::size_t n) { return PLattice(p, n, IntMatrix(0, n)); }

PLattice PLattice::full(std::uint64_t p, std::size_t n) { return PLattice(p, n, IntMatrix::identity(n)); }

std::vector<Rational> PLattice::solve(std::span<const Integer> v) const {
  if (v.size() != n_) fail(ErrorCode::InvalidArgument, "vector length does not match ambient rank");
  std::vector<Rational> residual(v.begin(), v.end());
  std::vector<Rational> coeffs(basis_.rows());
  for (std::size_t i = 0; i < basis_.rows(); ++i) {
    const std::size_t c = pivots_[i];
    if (residual[c] == 0) continue;
    coeffs[i] = residual[c] / Rational(basis_(i, c));
    for (std::size_t j = 0; j < n_; ++j) {
      if (basis_(i, j) != 0) residual[j] -= coeffs[i] * basis_(i, j);
    }
  }
  for (const auto& x : residual) {
    if (x != 0) return {};
  }
  return coeffs;
}

std::size_t rank(const PLattice& l) { return l.rank(); }

bool contains(const PLattice& sub, const PLattice& sup) {
  if (sub.ambient_rank() != sup.ambient_rank()) fail(ErrorCode::InvalidArgument, "ambient ranks differ");
  if (sub.prime() != sup.prime()) fail(ErrorCode::InvalidArgument, "primes differ");
  const std::uint64_t p = sup.prime();
  for (std::size_t r = 0; r < sub.basis().rows(); ++r) {
    auto row = sub.basis().row(r);
    auto coeffs = sup.solve(row);
    if (coeffs.empty() && !row_is_zero(row)) return false;
    for (const auto& c : coeffs) {
      if (c != 0 && vp_finite(p, c.get_den()) > 0) return false;
    }
  }
  return true;
}

PAdicVal quotient_length(const PLattice& sub, const PLattice& sup) {
  if (sub.rank() != sup.rank()) {
    fail(ErrorCode::InfiniteLength, "ranks differ (" + std::to_string(sub.rank()) + " vs " +
                                        std::to_string(sup.rank()) + "), quotient has infinite length");
  }
  if (!contains(sub, sup)) fail(ErrorCode::Precondition, "quotient_length: sub is not contained in sup");
  const std::uint64_t p = sup.prime();
  const std::uint64_t gsub = full_row_rank_minor_valuation(sub.basis(), p);
  const std::uint64_t gsup = full_row_rank_minor_valuation(sup.basis(), p);
  if (gsub < gsup) fail(ErrorCode::Internal, "negative quotient length");
  return PAdicVal(gsub - gsup);
}

PLattice kernel(const IntMatrix& a, std::uint64_t p) {
  const std::size_t m = a.rows();
  const std::size_t k = a.cols();
  IntMatrix aug(m, k + m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < k; ++c) aug(r, c) = a(r, c);
    aug(r, k + r) = 1;
  }
  LocalEchelon e = local_echelon(aug, p, k);
  IntMatrix gens(0, m);
  for (std::size_t r = e.pivot_columns.size(); r < m; ++r) gens.append_row(e.rows.row(r).subspan(k));
  return PLattice(p, m, std::move(gens));
}

PLattice saturate(const PLattice& l) {
  // Vectors orthogonal to the right null space of the basis.
  PLattice right_null = kernel(l.basis().transpose(), l.prime());
  return kernel(right_null.basis().transpose(), l.prime());
}

std::uint64_t min_maximal_minor_valuation(const IntMatrix& m, std::uint64_t p) {
  const std::size_t rho = rational_rank(m);
  if (rho == 0) return 0;
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  auto first = [](std::size_t k) {
    std::vector<std::size_t> v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = i;
    return v;
  };
  auto advance = [](std::vector<std::size_t>& v, std::size_t n) {
    const std::size_t k = v.size();
    std::size_t i = k;
    while (i > 0 && v[i - 1] == n - k + i - 1) --i;
    if (i == 0) return false;
    ++v[i - 1];
    for (std::size_t j = i; j < k; ++j) v[j] = v[j - 1] + 1;
    return true;
  };
  IntMatrix sq(rho, rho);
  auto rows = first(rho);
  do {
    auto cols = first(rho);
    do {
      for (std::size_t r = 0; r < rho; ++r)
        for (std::size_t c = 0; c < rho; ++c) sq(r, c) = m(rows[r], cols[c]);
      Integer d = determinant(sq);
      if (d != 0) best = std::min(best, vp_finite(p, d));
    } while (advance(cols, m.cols()));
  } while (advance(rows, m.rows()));
  return best;
}

std::vector<std::uint64_t> smith_valuations(const IntMatrix& input, std::uint64_t p) {
  IntMatrix a = input;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::uint64_t> out;
  Integer q;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // Smallest nonzero entry in the trailing block becomes the pivot.
      std::size_t pr = rows, pc = cols;
      for (std::size_t r = t; r < rows; ++r)
        for (std::size_t c = t; c < cols; ++c)
          if (a(r, c) != 0 && (pr == rows || abs(a(r, c)) < abs(a(pr, pc)))) {
            pr = r;
            pc = c;
          }
      if (pr == rows) return out;
      swap_rows(a, t, pr);
      if (pc != t)
        for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, t), a(r, pc));
      bool clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (a(r, t) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), a(r, t).get_mpz_t(), a(t, t).get_mpz_t());
        for (std::size_t c = t; c < cols; ++c) a(r, c) -= q * a(t, c);
        if (a(r, t) != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (a(t, c) == 0) continue;
        mpz_fdiv_q(q.get_mpz_t(), a(t, c).get_mpz_t(), a(t, t).get_mpz_t());
        for (std::size_t r = t; r < rows; ++r) a(r, c) -= q * a(r, t);
        if (a(t, c) != 0) clean = false;
      }
      if (clean) break;
    }
    out.push_back(vp_finite(p, a(t, t)));
  }
  return out;
}

Integer determinant(const IntMatrix& input) {
  if (input.rows() != input.cols()) fail(ErrorCode::InvalidArgument, "determinant of a non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix a = input;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      swap_rows(a, k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a(k, k) * a(i, j) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix hermite_basis(const IntMatrix& input) {
  IntMatrix a = input;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::size_t cur = 0;
  std::vector<std::size_t> pivots;
  Integer g, s, t, u, v, x, y;
  for (std::size_t c = 0; c < cols && cur < rows; ++c) {
    std::size_t r0 = cur;
    while (r0 < rows && a(r0, c) == 0) ++r0;
    if (r0 == rows) continue;
    swap_rows(a, cur, r0);
    for (std::size_t r = cur + 1; r < rows; ++r) {
      if (a(r, c) == 0) continue;
      // Unimodular 2x2 step: [s t; -v u] with s*a + t*b = g.
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a(cur, c).get_mpz_t(), a(r, c).get_mpz_t());
      mpz_divexact(u.get_mpz_t(), a(cur, c).get_mpz_t(), g.get_mpz_t());
      mpz_divexact(v.get_mpz_t(), a(r, c).get_mpz_t(), g.get_mpz_t());
      for (std::size_t j = c; j < cols; ++j) {
        x = s * a(cur, j) + t * a(r, j);
        y = u * a(r, j) - v * a(cur, j);
        a(cur, j) = x;
        a(r, j) = y;
      }
    }
    if (a(cur, c) < 0)
      for (std::size_t j = c; j < cols; ++j) a(cur, j) = -a(cur, j);
    for (std::size_t r = 0; r < cur; ++r) {
      mpz_fdiv_q(g.get_mpz_t(), a(r, c).get_mpz_t(), a(cur, c).get_mpz_t());
      if (g == 0) continue;
      for (std::size_t j = c; j < cols; ++j) a(r, j) -= g * a(cur, j);
    }
    pivots.push_back(c);
    ++cur;
  }
  IntMatrix out(0, cols);
  for (std::size_t r = 0; r < cur; ++r) out.append_row(a.row(r));
  return out;
}

std::vector<Integer> integer_coordinates(const IntMatrix& basis, std::span<const Integer> v) {
  if (v.size() != basis.cols()) fail(ErrorCode::InvalidArgument, "vector length does not match basis");
  std::vector<Integer> residual(v.begin(), v.end());
  std::vector<Integer> coeffs(basis.rows());
  std::size_t col = 0;
  for (std::size_t i = 0; i < basis.rows(); ++i) {
    while (col < basis.cols() && basis(i, col) == 0) ++col;
    if (col == basis.cols()) fail(ErrorCode::InvalidArgument, "basis has a zero row");
    if (residual[col] != 0) {
      if (!mpz_divisible_p(residual[col].get_mpz_t(), basis(i, col).get_mpz_t())) {
        fail(ErrorCode::Precondition, "vector is not an integral combination of the basis");
      }
      mpz_divexact(coeffs[i].get_mpz_t(), residual[col].get_mpz_t(), basis(i, col).get_mpz_t());
      for (std::size_t j = col; j < basis.cols(); ++j) residual[j] -= coeffs[i] * basis(i, j);
    }
  }
  for (const auto& x : residual) {
    if (x != 0) fail(ErrorCode::Precondition, "vector is outside the span of the basis");
  }
  return coeffs;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) os << ',';
    os << '[';
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << m(r, c).get_str();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace wdl
