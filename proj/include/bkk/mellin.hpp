#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bkk/exact_matrix.hpp"
#include "bkk/polynomial.hpp"
#include "bkk/rootdata.hpp"

namespace bkk {

/// Finite-dimensional module over the lattice group algebra Q(zeta_{q-1})[X_*] with a compatible
/// Weyl action. X[i] is the action of the cocharacter basis vector e_i; omega[k] the action of
/// weyl_elements(rd)[k]. When sign_twisted is set, omega already describes the module of F (x) sign;
/// otherwise the twisted action is sign(w) * omega(w).
struct MellinModule {
  RootDatum rd;
  std::vector<WeylElement> W;
  int q = 0;
  FieldPtr field;
  int dim = 0;
  std::vector<Matrix> X;
  std::vector<Matrix> X_inv;
  std::vector<Matrix> omega;
  bool sign_twisted = false;

  /// Action on the sign-twisted module, the one whose fibers the centrality checks inspect.
  Matrix omega_eff(int w) const;
  /// Action on the module of F itself.
  Matrix omega_untwisted(int w) const;
  /// X_lambda for an arbitrary lattice vector.
  Matrix X_lambda(const IntVec& lambda) const;
  /// Fills X_inv; throws StructuralError if some X[i] is singular.
  void finalize();
};

/// Field used for modules at level q: Q(zeta_{q-1}).
FieldPtr mellin_field(int q);
Matrix to_matrix(FieldPtr field, const std::vector<std::vector<Rational>>& m);

struct RelationReport {
  bool commuting = true;
  bool equivariant = true;   // omega(w) X_lambda omega(w)^{-1} = X_{w lambda}
  bool homomorphism = true;  // omega(a) omega(b) = omega(ab), omega(e) = 1
  bool ok() const { return commuting && equivariant && homomorphism; }
};
RelationReport check_relations(const MellinModule& m);

/// Point of the dual torus: eigenvalue exponents chi.m, X_i acting by zeta_{q-1}^{chi.m[i]} on the
/// generalized eigenspace. lambda = chi.m / (q-1) is a lift to the character space.
struct SupportPoint {
  TorusCharacter chi;
  int multiplicity = 0;
  std::vector<Rational> lambda;
  std::vector<int> stab_affine;      // w with w^{-1} lambda - lambda in the root lattice
  std::vector<int> stab_extended;    // w with w^{-1} lambda - lambda in the character lattice
  std::vector<IntVec> translation;   // per stab_extended element: w^{-1} lambda - lambda
  bool iso_ok = false;  // w -> (w, w^{-1} lambda - lambda) is a homomorphism fixing lambda, and the
                        // stabilizers agree with W_chi and W'_chi from rootdata
};

SupportPoint make_support_point(const RootDatum& rd, const std::vector<WeylElement>& W, const TorusCharacter& chi);

/// Basis (columns) of the simultaneous generalized eigenspace of the X_i at chi; zero columns if empty.
Matrix generalized_eigenspace(const MellinModule& m, const TorusCharacter& chi);
/// Simultaneous generalized eigenvalues with multiplicities, sorted by exponent vector.
std::vector<SupportPoint> support(const MellinModule& m);

/// Koszul complex of commuting nilpotent operators N_1..N_n on a space of dimension d.
/// K_p = space (x) Lambda^p(Q^n), basis index a * C(n,p) + s with subsets in increasing bitmask order.
struct KoszulComplex {
  int n = 0;
  int dim = 0;
  FieldPtr field;
  std::vector<std::vector<unsigned>> subsets;  // per p
  std::vector<Matrix> d;                        // d[p] : K_p -> K_{p-1}; d[0] is K_0 -> 0
  std::vector<Subquotient> H;                   // H[p], p = 0..n
  std::vector<int> dims() const;
  /// op (x) Lambda^p(a) on K_p.
  Matrix lift(int p, const Matrix& op, const IntMat& a) const;
  /// op (x) 1 on K_p.
  Matrix lift_plain(int p, const Matrix& op) const;
};
KoszulComplex koszul_complex(FieldPtr field, int dim, const std::vector<Matrix>& N);
/// Lambda^p of an integer matrix, on subsets in increasing bitmask order.
Matrix exterior_power(FieldPtr field, const IntMat& a, int p);

struct KoszulFibers {
  SupportPoint point;
  Matrix basis;               // generalized eigenspace M_c (columns)
  std::vector<Matrix> N;      // log(c^{-1} X_i) on M_c
  KoszulComplex complex;
  std::vector<int> dims;      // dim H_p, p = 0..n
  /// omega_eff(w) on M_c, for w in the extended stabilizer.
  Matrix local_omega(const MellinModule& m, int w) const;
  /// Stabilizer action on H_p.
  Matrix action(const MellinModule& m, int p, int w) const;
};
KoszulFibers koszul_fibers(const MellinModule& m, const TorusCharacter& point);

enum class CentralityMode { Central, StronglyCentral };
std::string to_string(CentralityMode m);

struct CentralityViolation {
  TorusCharacter point;
  int degree = 0;
  int element = 0;  // index into W
};

struct CentralityReport {
  CentralityMode mode = CentralityMode::Central;
  bool pass = true;
  int points = 0;
  std::vector<CentralityViolation> violations;
  /// Violations in Koszul degrees above 1, recorded for information only.
  int higher_degree_violations = 0;
};
CentralityReport check_centrality(const MellinModule& m, CentralityMode mode);

struct DescentPoint {
  TorusCharacter point;
  int local_dim = 0;
  int invariant_dim = 0;
  int coinvariant_dim = 0;
  bool surjective = false;
  bool injective = false;
  bool invariants_annihilate = false;  // positive-degree stabilizer invariants in N act by 0
  bool cyclic = false;
  /// Annihilator of M_c equals the ideal of translated stabilizer invariants (M_c is the coinvariant algebra).
  bool annihilator_is_invariant_ideal() const { return invariants_annihilate && cyclic && local_dim == coinvariant_dim; }
  bool pass() const { return surjective && injective; }
};

struct DescentReport {
  bool pass = true;
  std::vector<DescentPoint> points;
};
DescentReport check_descent(const MellinModule& m);

/// Induces a module from a subgroup H (indices into W, containing the identity) of modules given by
/// local lattice generators and local Weyl matrices (parallel to H).
MellinModule induce_module(const RootDatum& rd, int q, const std::vector<int>& H, const std::vector<Matrix>& local_X,
                           const std::vector<Matrix>& local_omega, bool sign_twisted);

/// Module A = Q[x]/J at a point c, where X_i acts by zeta^{c_i} exp(x_i) and h in H by eps(h) times
/// substitution, induced up to W. J must be stable under H.
MellinModule quotient_module(const RootDatum& rd, int q, const TorusCharacter& c, const std::vector<int>& H,
                             const GradedQuotient& a, bool sign_character, bool sign_twisted);

/// Module of E_theta (x) sign, realised as the coinvariant algebra of W_chi at chi^{-1} induced from W'_chi.
MellinModule build_E_theta(const RootDatum& rd, const TorusCharacter& chi);

/// Vector-space tensor product with diagonal lattice and Weyl actions (untwisted structures).
MellinModule tensor_product(const MellinModule& a, const MellinModule& b);
/// Direct sum; both modules must share the twist flag.
MellinModule direct_sum(const MellinModule& a, const MellinModule& b);
/// Same module in a new basis: X -> P^{-1} X P, omega -> P^{-1} omega P.
MellinModule change_basis(const MellinModule& m, const Matrix& p);

/// An invertible T with T src_ops[k] = tgt_ops[k] T for all k, searched in the solution space
/// of the linear equations with deterministic pseudo-random combinations.
struct IntertwinerSearch {
  int hom_dim = 0;
  std::optional<Matrix> iso;
};
IntertwinerSearch find_intertwiner(const std::vector<Matrix>& src_ops, const std::vector<Matrix>& tgt_ops, uint64_t seed = 1);
/// Intertwiner of full W x Lambda modules (lattice generators and all Weyl elements).
IntertwinerSearch module_isomorphism(const MellinModule& a, const MellinModule& b, bool use_twisted = true);

struct CollapseDegree {
  int p = 0;
  int source_dim = 0;
  int target_dim = 0;
  int hom_dim = 0;          // W x Lambda-equivariant maps
  int lattice_hom_dim = 0;  // Lambda-equivariant maps only
  bool iso_found = false;
  bool square_ok = false;  // T omega_src(w) = omega_tgt(w) T and T X_src = X_tgt T for every w and X_i
};

struct CollapseReport {
  TorusCharacter chi;
  bool precondition_ok = false;
  std::string precondition_message;
  std::vector<int> v_dims;  // Koszul fiber of F at chi^{-1}
  std::vector<CollapseDegree> degrees;
  bool pass = false;
};
/// Checks F * (E_theta (x) sign) against H^*(T, F (x) L_chi^{-1}) (x) E_theta in the module model.
CollapseReport tensor_and_collapse(const MellinModule& f, const TorusCharacter& chi);

}  // namespace bkk
