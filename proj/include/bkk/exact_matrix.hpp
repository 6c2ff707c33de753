#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bkk/cyclotomic.hpp"

namespace bkk {

using FieldPtr = std::shared_ptr<const CyclotomicField>;

/// Dense matrix over a cyclotomic field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldPtr field, int rows, int cols);
  static Matrix identity(FieldPtr field, int n);
  static Matrix scalar(FieldPtr field, int n, const Cyclotomic& c);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const FieldPtr& field() const { return field_; }

  Cyclotomic& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const Cyclotomic& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator*(const Cyclotomic& c) const;
  Matrix operator-() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const;
  Matrix transpose() const;
  Matrix kron(const Matrix& o) const;
  Matrix column(int c) const;
  Matrix columns(const std::vector<int>& idx) const;
  /// [this | o]
  Matrix hstack(const Matrix& o) const;
  /// Block-diagonal sum.
  Matrix direct_sum(const Matrix& o) const;
  Matrix pow(int k) const;
  std::string to_string() const;

 private:
  FieldPtr field_;
  int rows_ = 0, cols_ = 0;
  std::vector<Cyclotomic> data_;
};

struct Rref {
  Matrix m;
  std::vector<int> pivots;  // pivot column per nonzero row
};

Rref rref(Matrix a);
int rank(const Matrix& a);
/// Basis of the null space, as columns.
Matrix kernel(const Matrix& a);
/// A maximal independent subset of the columns.
Matrix column_basis(const Matrix& a);
std::optional<Matrix> inverse(const Matrix& a);
/// Some X with A X = B, if one exists.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);
/// R with op * basis = basis * R; throws if the column span of basis is not op-invariant.
Matrix restrict_to(const Matrix& op, const Matrix& basis);

/// exp(N) for nilpotent N, and log(U) for unipotent U.
Matrix nilpotent_exp(const Matrix& n);
Matrix unipotent_log(const Matrix& u);

/// Quotient span(sub) / span(inner) for inner inside sub: a complement basis and induced operators.
struct Subquotient {
  Matrix inner;       // basis of the smaller space (columns)
  Matrix complement;  // columns completing inner to a basis of sub
  Matrix full;        // [inner | complement]
  int dim() const { return complement.cols(); }
  /// Matrix on the quotient of an operator preserving both spaces.
  Matrix induce(const Matrix& op) const;
  /// Whether (op - 1) maps sub into inner, i.e. op acts trivially on the quotient.
  bool acts_trivially(const Matrix& op) const;
};

Subquotient subquotient(const Matrix& sub, const Matrix& inner, FieldPtr field, int ambient);

}  // namespace bkk
