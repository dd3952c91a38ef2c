#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qjet/derivation.hpp"

namespace qjet {

/// Graded manifold with a single global polynomial coordinate chart. The
/// function algebra is free graded supercommutative on the coordinates plus
/// any adjoined parameter generators (parameters are not coordinates: they
/// are inert under pit, differentials and Q-checks).
///
/// pit() produces the odd tangent bundle: every coordinate x gains a partner
/// d{level}_x with degree+1 and flipped parity. Levels are numbered 1..depth
/// in application order and each level carries its own de Rham differential;
/// distinct level differentials anticommute.
class GradedManifold {
public:
  static GradedManifold make(std::vector<GenSpec> coords);

  const AlgebraPtr& algebra() const { return impl_->alg; }
  int gen_count() const { return impl_->alg->size(); }
  bool is_param(int gen) const { return impl_->info[static_cast<size_t>(gen)].param; }
  int coord_count() const;
  int depth() const { return impl_->depth; }

  /// Odd tangent bundle; repeated calls return the identical manifold.
  GradedManifold pit() const;

  /// Same coordinates with extra (non-coordinate) parameter generators.
  GradedManifold with_parameters(std::vector<GenSpec> params) const;

  /// Index of d{level}_g, or -1 when the level was already applied to g
  /// (or g is a parameter).
  int partner(int gen, int level) const;

  /// The de Rham differential of the given pit level (1..depth).
  Derivation de_rham(int level) const;
  Derivation de_rham() const { return de_rham(impl_->depth); }

  /// Degree derivation x -> deg(x) x over the coordinates (parameters fixed).
  Derivation euler() const;
  /// Fibre degree of one pit level: counts the d{level}_ generators.
  Derivation level_euler(int level) const;

  bool is_dg_manifold() const;
  bool is_non_negatively_graded() const;

  bool same_as(const GradedManifold& o) const { return impl_ == o.impl_; }

private:
  struct GenInfo {
    int base = -1;          // index of the level-0 coordinate this derives from
    std::uint32_t levels = 0;  // bitmask, bit (k-1) = pit level k applied
    bool param = false;
  };
  struct Impl {
    AlgebraPtr alg;
    std::vector<GenInfo> info;
    int depth = 0;
    mutable std::shared_ptr<const Impl> pit_cache;
  };
  explicit GradedManifold(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Derivation Q of degree +1 and odd parity on a graded manifold; Q^2 = 0 is
/// the dg-manifold condition and is checked by check_q, not by construction.
struct QStructure {
  QStructure(GradedManifold manifold_, Derivation q_);
  GradedManifold manifold;
  Derivation q;
};

struct QCheckResult {
  enum class Status { Ok, WrongDegree, WrongParity, SquareNonzero };
  Status status = Status::Ok;
  std::string witness;   // offending coordinate for SquareNonzero
  std::string detail;
  bool ok() const { return status == Status::Ok; }
};

/// Verifies that Q is odd of degree +1 and that Q(Q(x)) = 0 on every
/// coordinate; degree/parity violations are reported distinctly.
QCheckResult check_q(const GradedManifold& x, const Derivation& q);
inline QCheckResult check_q(const QStructure& s) { return check_q(s.manifold, s.q); }

/// Like check_q but starting from raw generator values, so candidates whose
/// values violate the degree-+1/odd grading are reported (with the Q^2
/// witness still computed) instead of failing at construction.
QCheckResult check_q_values(const GradedManifold& x, const std::map<int, Element>& values);

/// Pullback functor of pit on maps: given the pullback of a coordinate map
/// X -> Y (an algebra morphism C(Y) -> C(X)), returns the pullback
/// C(pit Y) -> C(pit X) sending dy to d(pullback(y)).
Morphism pit_map(const GradedManifold& x, const GradedManifold& y, const Morphism& pullback);

/// One endomorphism theta -> a theta + beta of the odd line, acting on the
/// named pit level. beta must be an odd degree -1 element (typically an
/// adjoined parameter generator).
struct SemigroupElement {
  Rational a;
  Element beta;
};

/// The induced algebra endomorphism of functions on pit X:
///   x -> x + (d x) beta,   d x -> a dx
/// on the chosen level (parameters fixed).
Morphism semigroup_act(const GradedManifold& pitx, int level, const SemigroupElement& g);

/// All canonical monomials of the given total degree. Requires every
/// generator to have degree >= 0 and every even generator to have degree > 0
/// (otherwise the slice is infinite).
std::vector<Monomial> monomials_of_degree(const AlgebraPtr& alg, int degree);

/// Basis of the kernel of d on the degree-k monomial slice (closed k-forms
/// when d is a de Rham differential).
std::vector<Element> closed_form_basis(const Derivation& d, int k);

/// B with e = g B + (terms free of g); g must appear with exponent <= 1.
Element strip_left(const Element& e, int gen);
/// B with e = B g + (terms free of g); g must appear with exponent <= 1.
Element strip_right(const Element& e, int gen);
/// The terms of e free of g.
Element drop_gen(const Element& e, int gen);

}  // namespace qjet
