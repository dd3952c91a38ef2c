#pragma once

#include <optional>

#include "qjet/grouplaw.hpp"
#include "qjet/linfty.hpp"

namespace qjet {

/// Brute-force Jacobi oracle over all basis triples; nullopt when the
/// identity holds, otherwise one failing triple with its residual.
struct JacobiWitness {
  int i = 0, j = 0, k = 0;
  std::map<int, Rational> residual;
};
std::optional<JacobiWitness> jacobi_violation(const LieAlgebraData& g);

/// Constructor-time failure of a named structural identity.
class AxiomError : public std::invalid_argument {
public:
  AxiomError(std::string identity_, const std::string& msg)
      : std::invalid_argument(identity_ + ": " + msg), identity(std::move(identity_)) {}
  std::string identity;
};

/// Infinitesimal crossed module: Lie algebras g and h, a map m: h -> g and
/// an action mu of g on h by derivations, subject to the usual equivariance
/// and Peiffer identities (all checked symbolically at construction).
struct CrossedModule {
  LieAlgebraData g;
  LieAlgebraData h;
  /// m[j] = image of the j-th h-basis vector, as coefficients on the g-basis.
  std::vector<std::map<int, Rational>> m;
  /// mu[a][i] = mu(x_a)(h_i) as coefficients on the h-basis.
  std::vector<std::vector<std::map<int, Rational>>> mu;
};

/// Two-term DGLA of a crossed module: h in degree -1, g in degree 0,
/// differential m, brackets from g and mu. Throws AxiomError naming the
/// first violated identity.
LInftyAlgebra crossed_to_dgla(const CrossedModule& cm);

/// Polynomial group n-cocycle phi: G^n -> H with H = R^h_dim additive and a
/// polynomial action mu of G on H (empty mu = trivial action).
struct GroupCocycle {
  PolyGroupLaw law;
  int h_dim = 1;
  int arity = 2;
  /// phi components over slot_algebra(law.dim(), arity).
  std::vector<Element> phi;
  /// mu[i][j] over slot_algebra(law.dim(), 1): (mu(g) h)_i = sum_j mu[i][j](g) h_j.
  std::vector<std::vector<Element>> mu;
};

/// Checks mu(0) = id, mu(g g') = mu(g) mu(g') and the group cocycle identity
/// of phi symbolically; throws AxiomError otherwise.
void validate_cocycle(const GroupCocycle& c);

/// Antisymmetric n-linear map on increasing g-index tuples, valued in
/// h-coefficients. Signed sum over all permutations of the mixed first
/// partials at the identity (no 1/n! normalization).
using MultiTable = std::map<std::vector<int>, std::vector<Rational>>;
MultiTable vanest(const GroupCocycle& c);

/// L-infinity algebra of a cocycle: h in degree 2-n, g in degree 0, bracket
/// from g, mixed bracket from the linearized action, and the Van Est image
/// of phi as the arity-n multibracket.
LInftyAlgebra cocycle_to_linfty(const LieAlgebraData& g, const GroupCocycle& c);

/// Weil algebra of a Lie algebra: generators xi^a (degree 1) and t^a
/// (degree 2), the Cartan differential, contractions and Lie derivatives.
struct WeilAlgebra {
  GradedManifold manifold;
  Derivation d;
  std::vector<Derivation> iota;
  std::vector<Derivation> lie;
};
WeilAlgebra weil(const LieAlgebraData& g, bool validate = true);
/// Names of Cartan-structure relations that fail to hold (empty = all good):
/// d^2, [iota,iota], [L,iota] = iota_[,], [L,L] = L_[,], [L,d] = 0.
std::vector<std::string> weil_cartan_violations(const WeilAlgebra& w, const LieAlgebraData& g);

/// Additive gerbe descent datum on a p-dimensional fibre: polynomial h on
/// three fibre slots with h(x,x,y) = h(x,y,y) = 0 and the additive cocycle
/// identity (checked; throws AxiomError).
struct GerbeTwoForm {
  GradedManifold forms;  // pit of the fibre
  Element omega;         // closed 2-form
};
GerbeTwoForm gerbe_two_form(int p, const Element& h);

/// 1-form extracted from a 2-slot potential a(x,y) with a(x,x) = 0:
/// lambda = sum_i (d/dt) a(x, x + t e_i) dx_i.
Element gerbe_one_form(int p, const Element& a, const GradedManifold& forms);
/// The coboundary (delta a)(x,y,z) = a(y,z) - a(x,z) + a(x,y) over 3 slots.
Element gerbe_coboundary(int p, const Element& a);

/// 1-jet of the presheaf of maps on fibre pairs into R^p: generators
/// x (0), xi, tau (1), t (2) per fibre coordinate with dx = xi, dxi = 0,
/// dtau = t, dt = 0, derived from the diagonal action on two odd slots.
QStructure pair_maps_jet(int p, int jet_order = 1);

/// Basis of the closed k-forms on the odd line (1-dimensional for every k).
struct ClosedFormsJet {
  GradedManifold forms;
  std::vector<Element> basis;
};
ClosedFormsJet closed_forms_jet(int k);

}  // namespace qjet
