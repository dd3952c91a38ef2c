#pragma once

#include "qjet/constructions.hpp"

namespace qjet {

/// Structure constants of a polynomial group law: antisymmetrized bilinear
/// part of F. The output is verified against the Jacobi oracle.
LieAlgebraData lie_from_group_law(const PolyGroupLaw& f);

/// Split an element into slot-monomial buckets: e = sum cofactor * slotmono,
/// where slotmono collects the designated generators (canonical order) and
/// the cofactor the rest, with the Koszul sign of the unshuffle.
std::map<Monomial, Element> split_by_slots(const Element& e, const std::vector<bool>& is_slot);

/// Affine system in designated unknown generators, solved by repeated
/// elimination of bare unknowns. Unassigned unknowns are free; leftover
/// nonzero equations mean the system is inconsistent.
struct SlotSolution {
  bool consistent = true;
  std::string witness;
  std::map<int, Element> assigned;  // fully resolved (may involve free unknowns)
  std::vector<int> free_unknowns;
};
SlotSolution solve_slots(const AlgebraPtr& alg, const std::vector<int>& unknowns,
                         std::vector<Element> equations, bool reverse_preference = false);

struct NerveJetOptions {
  /// Re-runs the horn lifts with the opposite elimination preference; the
  /// resulting Q-structure must be the same.
  bool reverse_splitting = false;
};

/// First jet of the nerve of a polynomial group law, built through the
/// stages H^(0) = point, H^(1), H^(2) by solving the horn-lift and diagonal
/// equations symbolically. Coordinates are named after the Lie basis
/// e1..ed, have degree 1, and carry the differential induced by the odd-line
/// reparametrization action.
QStructure nerve_one_jet(const PolyGroupLaw& f, NerveJetOptions opts = {});

/// Odd parameter algebra Lambda[lam1..lamq] (degree 0).
AlgebraPtr lambda_algebra(int q);

/// Universal solution of the descent-data equations g(th,th) = e,
/// F(g(th1,th2), g(th2,th3)) = g(th1,th3) over q odd parameters: the free
/// coefficient generators parametrize the solution variety exactly.
struct DescentSolution {
  AlgebraPtr alg;                // th1, th2, lambdas, coefficient generators
  int dim = 0;
  int q = 0;
  std::vector<int> lambdas;
  std::vector<int> free_gens;
  std::vector<Element> g;        // universal datum, one component per coordinate
};
DescentSolution solve_descent(const PolyGroupLaw& f, int q);

/// Universal Maurer-Cartan element over the fibre R^{0|1} with q odd
/// parameters for the Lie algebra of F.
struct MCSolution {
  GradedManifold ambient;        // pit of the odd line, with parameters
  int dim = 0;
  int q = 0;
  std::vector<int> lambdas;
  std::vector<int> free_gens;
  std::vector<Element> alpha;    // universal MC element components
};
MCSolution solve_mc(const PolyGroupLaw& f, int q);

/// Exhibits the polynomial bijection between descent data and flat fibrewise
/// connections: the jet of the descent datum along the second argument is a
/// Maurer-Cartan element, the identification of free coefficients is an
/// invertible integer-matrix change, and both universal solutions map onto
/// each other exactly.
struct DescentMCReport {
  int descent_free = 0;
  int mc_free = 0;
  bool forward_flat = false;     // the image of the universal datum is flat
  bool backward_descent = false; // the inverse image satisfies the descent equations
  bool round_trip = false;       // universal solutions match under the identification
  bool ok() const { return descent_free == mc_free && forward_flat && backward_descent && round_trip; }
};
DescentMCReport descent_mc_bijection(const PolyGroupLaw& f, int q);

/// Naturality of the identification under a parameter-algebra morphism
/// Lambda[q_from] -> Lambda[q_to] given by odd images of the lambda
/// generators (over lambda_algebra(q_to)).
bool descent_mc_natural(const PolyGroupLaw& f, int q_from, int q_to,
                        const std::vector<Element>& lambda_images);

}  // namespace qjet
