#pragma once

#include <map>

#include "qjet/algebra.hpp"

namespace qjet {

/// Graded derivation of an algebra, given by its values on generators and
/// extended to products by the graded Leibniz rule
///   D(ab) = D(a) b + (-1)^{parity(D) parity(a)} a D(b).
/// Values must be homogeneous of degree deg(gen)+deg(D) and parity
/// parity(gen) xor parity(D), or zero.
class Derivation {
public:
  Derivation(AlgebraPtr alg, int degree, Parity parity, std::map<int, Element> values);
  static Derivation zero(AlgebraPtr alg, int degree, Parity parity);
  /// Skips the homogeneity validation of the values (the Leibniz extension
  /// only needs the declared parity). For diagnostic paths that must apply a
  /// malformed candidate differential and report, rather than throw.
  static Derivation unchecked(AlgebraPtr alg, int degree, Parity parity,
                              std::map<int, Element> values);
  /// The Euler (degree) derivation g -> deg(g) * g.
  static Derivation euler(const AlgebraPtr& alg);

  const AlgebraPtr& algebra() const { return alg_; }
  int degree() const { return degree_; }
  Parity parity() const { return parity_; }

  /// Value on a generator (zero if it was not listed).
  Element value(int gen) const;
  Element operator()(const Element& a) const;

  bool operator==(const Derivation& o) const;

private:
  AlgebraPtr alg_;
  int degree_;
  Parity parity_;
  std::map<int, Element> values_;
};

/// Graded commutator [D1,D2] = D1 D2 - (-1)^{p1 p2} D2 D1, returned as a
/// derivation through its values on generators.
Derivation commutator(const Derivation& d1, const Derivation& d2);

enum class GradingCheck { DegreeAndParity, ParityOnly };

/// Algebra morphism, i.e. the unique multiplicative extension of a
/// generator-wise assignment. Checks that every image is homogeneous of the
/// generator's degree and parity (or parity only, for plain supermanifold maps).
class Morphism {
public:
  Morphism(AlgebraPtr source, AlgebraPtr target, std::map<int, Element> images,
           GradingCheck check = GradingCheck::DegreeAndParity);

  static Morphism identity(const AlgebraPtr& alg);
  /// Maps each source generator to the target generator with the same name.
  static Morphism inclusion(const AlgebraPtr& source, const AlgebraPtr& target);

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const Element& image(int gen) const { return images_.at(gen); }

  Element operator()(const Element& a) const;
  /// Composite mapping first through *this, then through next.
  Morphism then(const Morphism& next) const;

private:
  AlgebraPtr source_;
  AlgebraPtr target_;
  std::map<int, Element> images_;
};

/// The unique algebra endomorphism extending phi, applied to a.
/// phi must preserve degree and parity generator-wise.
Element substitute(const std::map<int, Element>& phi, const Element& a,
                   GradingCheck check = GradingCheck::DegreeAndParity);

}  // namespace qjet
