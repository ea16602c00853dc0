#include "fkt/intmat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fkt {

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_)
      throw std::invalid_argument("ragged initializer for IntMatrix");
    for (long long x : r) data_.emplace_back(x);
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product shape mismatch");
  IntMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

IntMatrix IntMatrix::operator+(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix sum shape mismatch");
  IntMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + rhs.data_[i];
  return out;
}

IntMatrix IntMatrix::operator-(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw std::invalid_argument("matrix difference shape mismatch");
  IntMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - rhs.data_[i];
  return out;
}

IntMatrix IntMatrix::operator-() const {
  IntMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
  return out;
}

std::vector<Int> IntMatrix::mul(const std::vector<Int>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
  std::vector<Int> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

IntMatrix IntMatrix::submatrix(const std::vector<std::size_t>& row_idx,
                               const std::vector<std::size_t>& col_idx) const {
  IntMatrix out(row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i)
    for (std::size_t j = 0; j < col_idx.size(); ++j)
      out(i, j) = (*this)(row_idx[i], col_idx[j]);
  return out;
}

std::vector<Int> IntMatrix::column(std::size_t j) const {
  std::vector<Int> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

std::vector<Int> IntMatrix::row(std::size_t i) const {
  std::vector<Int> out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
  return out;
}

void IntMatrix::set_column(std::size_t j, const std::vector<Int>& v) {
  if (v.size() != rows_) throw std::invalid_argument("set_column shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

IntMatrix IntMatrix::hstack(const IntMatrix& rhs) const {
  if (rows_ != rhs.rows_) throw std::invalid_argument("hstack row mismatch");
  IntMatrix out(rows_, cols_ + rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, cols_ + j) = rhs(i, j);
  }
  return out;
}

IntMatrix IntMatrix::vstack(const IntMatrix& rhs) const {
  if (cols_ != rhs.cols_) throw std::invalid_argument("vstack column mismatch");
  IntMatrix out(rows_ + rhs.rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j);
  for (std::size_t i = 0; i < rhs.rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(rows_ + i, j) = rhs(i, j);
  return out;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Int& x) { return x == 0; });
}

void IntMatrix::swap_rows(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void IntMatrix::swap_cols(std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << "[";
    for (std::size_t j = 0; j < cols_; ++j) {
      os << (*this)(i, j);
      if (j + 1 < cols_) os << ",";
    }
    os << "]";
    if (i + 1 < rows_) os << ",";
  }
  os << "]";
  return os.str();
}

IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Int>>& cols) {
  IntMatrix out(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) out.set_column(j, cols[j]);
  return out;
}

Int gcd(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int r = a % b;
    a = b;
    b = r;
  }
  return a;
}

Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  Int g = gcd(a, b);
  Int out = (a / g) * b;
  return out < 0 ? -out : out;
}

namespace {

// Quotient with remainder of minimal absolute value.
Int div_nearest(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  Int twice = 2 * (r < 0 ? -r : r);
  Int babs = b < 0 ? -b : b;
  if (twice > babs) {
    if ((r < 0) == (b < 0)) q += 1; else q -= 1;
  }
  return q;
}

struct SnfState {
  IntMatrix d, u, v;

  void row_sub(std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < d.cols(); ++k) d(dst, k) -= q * d(src, k);
    for (std::size_t k = 0; k < u.cols(); ++k) u(dst, k) -= q * u(src, k);
  }
  void col_sub(std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < d.rows(); ++k) d(k, dst) -= q * d(k, src);
    for (std::size_t k = 0; k < v.rows(); ++k) v(k, dst) -= q * v(k, src);
  }
  void row_add(std::size_t dst, std::size_t src) { row_sub(dst, src, Int(-1)); }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < d.cols(); ++k) d(i, k) = -d(i, k);
    for (std::size_t k = 0; k < u.cols(); ++k) u(i, k) = -u(i, k);
  }
  void swap_rows(std::size_t i, std::size_t j) {
    d.swap_rows(i, j);
    u.swap_rows(i, j);
  }
  void swap_cols(std::size_t i, std::size_t j) {
    d.swap_cols(i, j);
    v.swap_cols(i, j);
  }
};

} // namespace

SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SnfState s{a, IntMatrix::identity(m), IntMatrix::identity(n)};
  const std::size_t steps = std::min(m, n);

  for (std::size_t t = 0; t < steps; ++t) {
    // Pivot: smallest non-zero absolute value in the trailing submatrix.
    bool found = false;
    std::size_t pi = t, pj = t;
    Int best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        const Int& x = s.d(i, j);
        if (x == 0) continue;
        Int ax = x < 0 ? -x : x;
        if (!found || ax < best) {
          found = true;
          best = ax;
          pi = i;
          pj = j;
        }
      }
    if (!found) break;
    s.swap_rows(t, pi);
    s.swap_cols(t, pj);

    for (;;) {
      // Clear column t below the pivot.
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (s.d(i, t) == 0) continue;
        Int q = div_nearest(s.d(i, t), s.d(t, t));
        s.row_sub(i, t, q);
        if (s.d(i, t) != 0) {
          s.swap_rows(t, i); // strictly smaller remainder becomes the pivot
          dirty = true;
        }
      }
      if (dirty) continue;
      // Clear row t right of the pivot.
      for (std::size_t j = t + 1; j < n; ++j) {
        if (s.d(t, j) == 0) continue;
        Int q = div_nearest(s.d(t, j), s.d(t, t));
        s.col_sub(j, t, q);
        if (s.d(t, j) != 0) {
          s.swap_cols(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // Make the pivot divide the rest of the submatrix.
      bool absorbed = false;
      for (std::size_t i = t + 1; i < m && !absorbed; ++i)
        for (std::size_t j = t + 1; j < n && !absorbed; ++j)
          if (s.d(i, j) % s.d(t, t) != 0) {
            s.row_add(t, i);
            absorbed = true;
          }
      if (!absorbed) break;
    }
    if (s.d(t, t) < 0) s.negate_row(t);
  }

  SmithForm out{std::move(s.u), std::move(s.d), std::move(s.v), 0};
  for (std::size_t t = 0; t < steps; ++t)
    if (out.d(t, t) != 0) ++out.rank;
  return out;
}

std::vector<Int> SmithForm::diagonal() const {
  std::vector<Int> out;
  const std::size_t k = std::min(d.rows(), d.cols());
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(d(i, i));
  return out;
}

IntMatrix kernel_basis(const IntMatrix& a) {
  SmithForm f = smith_normal_form(a);
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    bool zero_diag = j >= std::min(a.rows(), a.cols()) || f.d(j, j) == 0;
    if (zero_diag) free_cols.push_back(j);
  }
  IntMatrix out(a.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) out(i, k) = f.v(i, free_cols[k]);
  return out;
}

LinearSolver::LinearSolver(IntMatrix a) : a_(std::move(a)), snf_(smith_normal_form(a_)) {}

std::optional<std::vector<Int>> LinearSolver::solve(const std::vector<Int>& b) const {
  if (b.size() != a_.rows())
    throw std::invalid_argument("solve: right-hand side length mismatch");
  std::vector<Int> c = snf_.u.mul(b);
  const std::size_t m = a_.rows(), n = a_.cols();
  std::vector<Int> y(n);
  const std::size_t k = std::min(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    if (i < k && snf_.d(i, i) != 0) {
      if (c[i] % snf_.d(i, i) != 0) return std::nullopt;
      y[i] = c[i] / snf_.d(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return snf_.v.mul(y);
}

std::optional<IntMatrix> LinearSolver::solve_matrix(const IntMatrix& b) const {
  if (b.rows() != a_.rows())
    throw std::invalid_argument("solve_matrix: row count mismatch");
  IntMatrix x(a_.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto xj = solve(b.column(j));
    if (!xj) return std::nullopt;
    x.set_column(j, *xj);
  }
  return x;
}

std::optional<std::vector<Int>> solve(const IntMatrix& a, const std::vector<Int>& b) {
  return LinearSolver(a).solve(b);
}

std::optional<IntMatrix> solve_matrix(const IntMatrix& a, const IntMatrix& b) {
  return LinearSolver(a).solve_matrix(b);
}

Int determinant(const IntMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix w = a;
  Int prev = 1;
  int sign = 1;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    if (w(t, t) == 0) {
      std::size_t piv = t + 1;
      while (piv < n && w(piv, t) == 0) ++piv;
      if (piv == n) return 0;
      w.swap_rows(t, piv);
      sign = -sign;
    }
    for (std::size_t i = t + 1; i < n; ++i)
      for (std::size_t j = t + 1; j < n; ++j) {
        Int num = w(t, t) * w(i, j) - w(i, t) * w(t, j);
        w(i, j) = num / prev; // exact by Bareiss
      }
    prev = w(t, t);
  }
  return sign > 0 ? w(n - 1, n - 1) : -w(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& a) { return smith_normal_form(a).rank; }

bool lattice_contains(const IntMatrix& gens, const IntMatrix& sub) {
  if (gens.rows() != sub.rows())
    throw std::invalid_argument("lattice_contains: ambient rank mismatch");
  return LinearSolver(gens).solve_matrix(sub).has_value();
}

bool lattices_equal(const IntMatrix& a, const IntMatrix& b) {
  return lattice_contains(a, b) && lattice_contains(b, a);
}

} // namespace fkt
