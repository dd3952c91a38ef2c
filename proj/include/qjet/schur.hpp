#pragma once

#include <string>
#include <vector>

#include "qjet/dgman.hpp"

namespace qjet {

/// Young diagram as weakly decreasing positive row lengths.
struct YoungDiagram {
  std::vector<int> rows;

  void validate() const;
  int squares() const;
  int columns() const { return rows.empty() ? 0 : rows.front(); }
  YoungDiagram transpose() const;
  std::string str() const;
  bool operator==(const YoungDiagram& o) const { return rows == o.rows; }
};

/// Dimension of the Schur functor of shape lambda on an n-dimensional space:
/// semistandard tableau count for an even space, the transposed diagram on
/// an odd space.
long schur_dim(const YoungDiagram& lambda, int n, Parity parity);

/// Sections of the lambda tensor bundle on R^{0|n}: 2^n times the odd Schur
/// dimension of the cotangent fibre.
long tensor_jet_dim(const YoungDiagram& lambda, int n);

/// Filtration subquotients for a 2-column diagram: repeatedly move the
/// lowest square of column 2 to the first row until column 2 has one square.
std::vector<YoungDiagram> composition_series(const YoungDiagram& lambda);

/// Functions on the odd superspace R^{0|n} and their de Rham complex.
GradedManifold odd_superspace_forms(int n);

/// dim Z^k(R^{0|n}) by brute-force kernel computation.
long closed_forms_dim(int k, int n);

/// Character-level verification of the decomposition of polynomial functions
/// on the endomorphism supersemigroup of R^{0|2}: the left-hand side is
/// enumerated monomial by monomial in the 4 even and 4 odd coordinates with
/// their two torus weights (t from pre-, s from post-composition); the
/// right-hand side sums the generic 2-column terms and the form-module
/// quotient with the rank of the total differential subtracted per biweight.
struct Omega2Report {
  int degree = 0;
  bool ok = false;
  long lhs_dimension = 0;  // total count of enumerated monomials in the window
  std::vector<std::string> mismatches;
};
Omega2Report omega2_character_identity(int degree);

}  // namespace qjet
