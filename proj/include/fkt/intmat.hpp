#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace fkt {

using Int = boost::multiprecision::cpp_int;

/// Dense matrix over Z with arbitrary-precision entries.  Zero-dimensional
/// shapes (0 x k, k x 0) are valid and show up as presentations of free and
/// trivial groups.
class IntMatrix {
public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMatrix identity(std::size_t n);
  static IntMatrix zero(std::size_t rows, std::size_t cols) {
    return IntMatrix(rows, cols);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  bool operator==(const IntMatrix& other) const = default;

  IntMatrix transposed() const;
  IntMatrix operator*(const IntMatrix& rhs) const;
  IntMatrix operator+(const IntMatrix& rhs) const;
  IntMatrix operator-(const IntMatrix& rhs) const;
  IntMatrix operator-() const;

  std::vector<Int> mul(const std::vector<Int>& v) const;

  IntMatrix submatrix(const std::vector<std::size_t>& row_idx,
                      const std::vector<std::size_t>& col_idx) const;
  std::vector<Int> column(std::size_t j) const;
  std::vector<Int> row(std::size_t i) const;
  void set_column(std::size_t j, const std::vector<Int>& v);

  /// Horizontal concatenation [this | rhs]; row counts must agree.
  IntMatrix hstack(const IntMatrix& rhs) const;
  /// Vertical concatenation [this; rhs]; column counts must agree.
  IntMatrix vstack(const IntMatrix& rhs) const;

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  void swap_rows(std::size_t i, std::size_t j);
  void swap_cols(std::size_t i, std::size_t j);

  std::string to_string() const;

private:
  std::size_t rows_, cols_;
  std::vector<Int> data_;
};

IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Int>>& cols);

/// U * A * V = D with U, V unimodular and D diagonal, d1 | d2 | ...,
/// all diagonal entries non-negative, zeros trailing.
struct SmithForm {
  IntMatrix u, d, v;
  std::size_t rank; // number of non-zero diagonal entries
  std::vector<Int> diagonal() const;
};

SmithForm smith_normal_form(const IntMatrix& a);

/// Columns form a basis of the full lattice {x : A x = 0}.  The basis is
/// saturated: every integer kernel vector is an integer combination.
IntMatrix kernel_basis(const IntMatrix& a);

/// Reusable exact solver for A x = b with a fixed A.
class LinearSolver {
public:
  explicit LinearSolver(IntMatrix a);
  std::optional<std::vector<Int>> solve(const std::vector<Int>& b) const;
  /// Solve A X = B column by column; nullopt if any column fails.
  std::optional<IntMatrix> solve_matrix(const IntMatrix& b) const;

private:
  IntMatrix a_;
  SmithForm snf_;
};

std::optional<std::vector<Int>> solve(const IntMatrix& a,
                                      const std::vector<Int>& b);
std::optional<IntMatrix> solve_matrix(const IntMatrix& a, const IntMatrix& b);

/// Determinant via fraction-free (Bareiss) elimination; square input only.
Int determinant(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);

/// True iff every column of sub lies in the column lattice of gens.
bool lattice_contains(const IntMatrix& gens, const IntMatrix& sub);
bool lattices_equal(const IntMatrix& a, const IntMatrix& b);

Int gcd(Int a, Int b);
Int lcm(const Int& a, const Int& b);

} // namespace fkt
