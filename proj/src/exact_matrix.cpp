#include "bkk/exact_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace bkk {

Matrix::Matrix(FieldPtr field, int rows, int cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, Cyclotomic(field_)) {}

Matrix Matrix::identity(FieldPtr field, int n) { return scalar(std::move(field), n, Cyclotomic(field, Rational(1))); }

Matrix Matrix::scalar(FieldPtr field, int n, const Cyclotomic& c) {
  Matrix m(field, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = c;
  return m;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("bkk: matrix shape mismatch in +");
  Matrix r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("bkk: matrix shape mismatch in -");
  Matrix r = *this;
  for (size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.data_) x = -x;
  return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("bkk: matrix shape mismatch in *");
  Matrix r(field_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Cyclotomic& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Cyclotomic& b = o(k, j);
        if (!b.is_zero()) r(i, j) += a * b;
      }
    }
  }
  return r;
}

Matrix Matrix::operator*(const Cyclotomic& c) const {
  Matrix r = *this;
  for (auto& x : r.data_) x = x * c;
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t i = 0; i < data_.size(); ++i) {
    if (data_[i] != o.data_[i]) return false;
  }
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Matrix Matrix::transpose() const {
  Matrix r(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Matrix Matrix::kron(const Matrix& o) const {
  Matrix r(field_, rows_ * o.rows_, cols_ * o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) {
      const Cyclotomic& a = (*this)(i, j);
      if (a.is_zero()) continue;
      for (int k = 0; k < o.rows_; ++k)
        for (int l = 0; l < o.cols_; ++l) {
          if (!o(k, l).is_zero()) r(i * o.rows_ + k, j * o.cols_ + l) = a * o(k, l);
        }
    }
  return r;
}

Matrix Matrix::column(int c) const { return columns({c}); }

Matrix Matrix::columns(const std::vector<int>& idx) const {
  Matrix r(field_, rows_, static_cast<int>(idx.size()));
  for (int i = 0; i < rows_; ++i)
    for (size_t j = 0; j < idx.size(); ++j) r(i, static_cast<int>(j)) = (*this)(i, idx[j]);
  return r;
}

Matrix Matrix::hstack(const Matrix& o) const {
  if (rows_ != o.rows_) throw std::invalid_argument("bkk: hstack row mismatch");
  Matrix r(field_, rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
    for (int j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
  }
  return r;
}

Matrix Matrix::direct_sum(const Matrix& o) const {
  Matrix r(field_, rows_ + o.rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
  for (int i = 0; i < o.rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) r(rows_ + i, cols_ + j) = o(i, j);
  return r;
}

Matrix Matrix::pow(int k) const {
  Matrix r = identity(field_, rows_);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << "[";
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]\n";
  }
  return os.str();
}

Rref rref(Matrix a) {
  Rref out;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int piv = -1;
    for (int r = row; r < a.rows(); ++r) {
      if (!a(r, col).is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != row) {
      for (int j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    }
    Cyclotomic inv = a(row, col).inverse();
    for (int j = col; j < a.cols(); ++j) {
      if (!a(row, j).is_zero()) a(row, j) = a(row, j) * inv;
    }
    for (int r = 0; r < a.rows(); ++r) {
      if (r == row || a(r, col).is_zero()) continue;
      Cyclotomic f = a(r, col);
      for (int j = col; j < a.cols(); ++j) {
        if (!a(row, j).is_zero()) a(r, j) -= f * a(row, j);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.m = std::move(a);
  return out;
}

int rank(const Matrix& a) { return static_cast<int>(rref(a).pivots.size()); }

Matrix kernel(const Matrix& a) {
  Rref r = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int p : r.pivots) is_pivot[p] = true;
  std::vector<int> free;
  for (int c = 0; c < a.cols(); ++c) {
    if (!is_pivot[c]) free.push_back(c);
  }
  Matrix k(a.field(), a.cols(), static_cast<int>(free.size()));
  for (size_t f = 0; f < free.size(); ++f) {
    k(free[f], static_cast<int>(f)) = Cyclotomic(a.field(), Rational(1));
    for (size_t i = 0; i < r.pivots.size(); ++i) k(r.pivots[i], static_cast<int>(f)) = -r.m(static_cast<int>(i), free[f]);
  }
  return k;
}

Matrix column_basis(const Matrix& a) { return a.columns(rref(a).pivots); }

std::optional<Matrix> inverse(const Matrix& a) {
  if (a.rows() != a.cols()) return std::nullopt;
  const int n = a.rows();
  Rref r = rref(a.hstack(Matrix::identity(a.field(), n)));
  if (static_cast<int>(r.pivots.size()) < n || r.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(a.field(), n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = r.m(i, n + j);
  return inv;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  Rref r = rref(a.hstack(b));
  Matrix x(a.field(), a.cols(), b.cols());
  for (size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] >= a.cols()) return std::nullopt;
    for (int j = 0; j < b.cols(); ++j) x(r.pivots[i], j) = r.m(static_cast<int>(i), a.cols() + j);
  }
  return x;
}

Matrix restrict_to(const Matrix& op, const Matrix& basis) {
  auto r = solve(basis, op * basis);
  if (!r) throw std::logic_error("bkk: subspace is not invariant under the operator");
  return *r;
}

Matrix nilpotent_exp(const Matrix& n) {
  const int d = n.rows();
  Matrix out = Matrix::identity(n.field(), d);
  Matrix term = out;
  for (int k = 1; k <= d; ++k) {
    term = term * n * Cyclotomic(n.field(), Rational(1, k));
    if (term.is_zero()) break;
    out = out + term;
  }
  if (!(n.pow(d)).is_zero()) throw std::logic_error("bkk: exp of a non-nilpotent matrix");
  return out;
}

Matrix unipotent_log(const Matrix& u) {
  const int d = u.rows();
  Matrix n = u - Matrix::identity(u.field(), d);
  if (!n.pow(d).is_zero()) throw std::logic_error("bkk: log of a non-unipotent matrix");
  Matrix out(u.field(), d, d);
  Matrix term = Matrix::identity(u.field(), d);
  for (int k = 1; k <= d; ++k) {
    term = term * n;
    if (term.is_zero()) break;
    out = out + term * Cyclotomic(u.field(), Rational(k % 2 ? 1 : -1, k));
  }
  return out;
}

Subquotient subquotient(const Matrix& sub, const Matrix& inner, FieldPtr field, int ambient) {
  Subquotient q;
  q.inner = inner.cols() ? column_basis(inner) : Matrix(field, ambient, 0);
  Matrix acc = q.inner;
  std::vector<int> chosen;
  int r = rank(acc);
  for (int c = 0; c < sub.cols(); ++c) {
    Matrix trial = acc.hstack(sub.column(c));
    int tr = rank(trial);
    if (tr > r) {
      acc = trial;
      r = tr;
      chosen.push_back(c);
    }
  }
  q.complement = sub.columns(chosen);
  q.full = acc;
  return q;
}

Matrix Subquotient::induce(const Matrix& op) const {
  const int d = dim();
  Matrix out(complement.field(), d, d);
  if (d == 0) return out;
  auto coords = solve(full, op * complement);
  if (!coords) throw std::logic_error("bkk: operator does not preserve the subquotient");
  const int off = inner.cols();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = (*coords)(off + i, j);
  return out;
}

bool Subquotient::acts_trivially(const Matrix& op) const {
  if (dim() == 0) return true;
  return induce(op) == Matrix::identity(complement.field(), dim());
}

}  // namespace bkk
