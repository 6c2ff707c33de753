#pragma once

#include <map>
#include <vector>

#include "bkk/rational.hpp"
#include "bkk/rootdata.hpp"

namespace bkk {

using Monomial = std::vector<int>;  // exponent vector
using Poly = std::map<Monomial, Rational>;

/// Monomials of total degree d in n variables, in descending lexicographic order.
std::vector<Monomial> monomials_of_degree(int n, int d);
int degree(const Monomial& m);
Poly poly_monomial(const Monomial& m, Rational c = Rational(1));
Poly poly_variable(int n, int i);
Poly poly_add(const Poly& a, const Poly& b, Rational scale = Rational(1));
Poly poly_mul(const Poly& a, const Poly& b);
/// Linear substitution x_j -> sum_k a(k, j) x_k, i.e. x_lambda -> x_{A lambda}.
Poly poly_substitute(const Poly& p, const IntMat& a);
/// Average of p over a finite matrix group acting by substitution.
Poly reynolds(const Poly& p, const std::vector<IntMat>& group);

/// Q[x_1..x_n] modulo a homogeneous ideal of finite codimension, with a basis of standard monomials.
class GradedQuotient {
 public:
  GradedQuotient(int n, std::vector<Poly> homogeneous_generators, int max_degree = 24);

  int variables() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  /// Standard monomials, by increasing degree.
  const std::vector<Monomial>& basis() const { return basis_; }
  const std::vector<Poly>& generators() const { return gens_; }
  /// Coordinates of p modulo the ideal in the standard basis.
  std::vector<Rational> reduce(const Poly& p) const;
  /// Matrix (column j = image of basis j) of multiplication by x_i.
  std::vector<std::vector<Rational>> multiplication(int i) const;
  /// Matrix of the substitution automorphism induced by a (the ideal must be stable).
  std::vector<std::vector<Rational>> substitution(const IntMat& a) const;
  /// Full multiplication table: product of basis i and basis j as coordinates.
  std::vector<std::vector<std::vector<Rational>>> multiplication_table() const;

 private:
  struct Piece {
    std::vector<Monomial> monomials;
    std::map<Monomial, int> column;
    std::vector<int> standard_index;  // per monomial: index into basis_ or -1
    // For non-standard monomials: coordinates over basis_ of their normal form.
    std::map<int, std::vector<std::pair<int, Rational>>> rewrite;
  };
  int n_;
  std::vector<Poly> gens_;
  std::vector<Piece> pieces_;
  std::vector<Monomial> basis_;
};

/// Coinvariant algebra Q[x]/<positive-degree invariants of the group>, the group acting by substitution.
GradedQuotient coinvariant_algebra(const std::vector<IntMat>& group, int n);
/// Homogeneous invariants of positive degree up to |group| spanning the generators of the invariant ideal.
std::vector<Poly> positive_invariants(const std::vector<IntMat>& group, int n);

}  // namespace bkk
