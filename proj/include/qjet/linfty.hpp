#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qjet/dgman.hpp"

namespace qjet {

struct BasisVector {
  std::string name;
  int degree = 0;
  Parity parity = Parity::Even;
};

/// Multibracket coefficient tables: strictly increasing argument index tuple
/// -> (target basis index -> coefficient). The arity-k bracket has degree
/// 2-k; values on other argument orders follow by graded antisymmetry.
using BracketTable = std::map<std::vector<int>, std::map<int, Rational>>;

/// Finite-dimensional L-infinity (super)algebra given by a graded basis and
/// bracket tables. The coordinate manifold is V[1]: one coordinate per basis
/// vector, of degree 1 - deg(e) and flipped parity.
class LInftyAlgebra {
public:
  LInftyAlgebra(std::vector<BasisVector> basis, BracketTable table);

  const std::vector<BasisVector>& basis() const { return basis_; }
  const BracketTable& table() const { return table_; }
  const GradedManifold& manifold() const { return manifold_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  int max_arity() const;

  /// Bracket on an arbitrary argument tuple (graded antisymmetry applied);
  /// tuples with repeated indices evaluate to zero in this table model.
  std::map<int, Rational> bracket(std::vector<int> args) const;

private:
  std::vector<BasisVector> basis_;
  BracketTable table_;
  GradedManifold manifold_;
};

/// Antisymmetric structure constants of a Lie algebra: entries on pairs
/// (i, j); both orders may be present and must then be consistent.
struct LieAlgebraData {
  std::vector<std::string> basis;
  std::map<std::pair<int, int>, std::map<int, Rational>> brackets;

  /// Validates antisymmetry and index ranges; returns the table on i<j only.
  std::map<std::pair<int, int>, std::map<int, Rational>> canonical() const;
  /// [e_i, e_j] as coefficients, any index order.
  std::map<int, Rational> bracket(int i, int j) const;
};

/// The derivation on V[1] whose coefficient tables are the brackets of L;
/// check_q on the result is the generalized Jacobi test.
QStructure q_from_brackets(const LInftyAlgebra& l);

/// Extracts the multibracket tables from the homogeneous components of Q.
/// Inverse of q_from_brackets. Q must vanish at the origin and be
/// multilinear in the coordinates (no repeated-coordinate monomials).
LInftyAlgebra brackets_from_q(const QStructure& q);

/// Chevalley-Eilenberg structure on g[1]: Q(xi^k) = -1/2 c^k_ij xi^i xi^j.
QStructure ce_from_lie(const LieAlgebraData& g);

/// Degree-1 element of (ambient algebra) tensor V, by components on the basis.
struct MCElement {
  std::map<int, Element> components;
};

struct CheckOutcome {
  bool ok = true;
  /// Non-vanishing residual per coordinate/basis name.
  std::vector<std::pair<std::string, Element>> residuals;
};

/// Maurer-Cartan test: residual = d alpha + sum_k [alpha,...,alpha]/k!,
/// brackets extended to ambient coefficients with Koszul signs. Returns the
/// full residual; ok iff it vanishes identically.
CheckOutcome mc_check(const MCElement& alpha, const LInftyAlgebra& l, const Derivation& d_ambient);

/// Checks that the generator images define a morphism of differential graded
/// algebras out of the source Q-structure: d_target(phi(x)) = phi(Q x).
CheckOutcome dga_morphism_check(const std::map<int, Element>& images, const QStructure& source,
                                const Derivation& d_target);

}  // namespace qjet
