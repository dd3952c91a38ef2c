#pragma once

#include <string>
#include <vector>

#include "qjet/derivation.hpp"

namespace qjet {

/// Algebra of functions on a product of n copies of R^dim, with slot s
/// (1-based) carrying even degree-0 generators "<prefix><s>_<k>" for
/// k = 1..dim. Used for symbolic identities in several slots at once.
AlgebraPtr slot_algebra(int dim, int nslots, const std::string& prefix = "g");

/// Polynomial group law F on R^dim over exact rationals, with two-sided
/// identity at the origin and symbolically verified associativity. Only
/// nilpotent-type (polynomial) laws are expressible.
class PolyGroupLaw {
public:
  /// components are Elements over slot_algebra(dim, 2): slot 1 is the left
  /// factor, slot 2 the right.
  PolyGroupLaw(int dim, std::vector<Element> components);

  int dim() const { return dim_; }
  const AlgebraPtr& two_slot_algebra() const { return alg2_; }
  const std::vector<Element>& components() const { return f_; }
  /// Largest monomial length appearing in F; bounds all nilpotency loops.
  int degree_bound() const { return degree_bound_; }

  /// F(x, y) for point coordinates given as Elements over a common algebra.
  /// The coordinates must be even; degrees are not constrained.
  std::vector<Element> multiply(const std::vector<Element>& x,
                                const std::vector<Element>& y) const;

  static PolyGroupLaw abelian(int dim);
  /// (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y').
  static PolyGroupLaw heisenberg();
  /// Unitriangular n x n matrices via the strictly-upper-triangular chart.
  static PolyGroupLaw unitriangular(int n);

private:
  int dim_;
  AlgebraPtr alg2_;
  std::vector<Element> f_;
  int degree_bound_ = 1;
};

}  // namespace qjet
