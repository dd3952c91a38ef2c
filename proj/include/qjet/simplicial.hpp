#pragma once

#include <string>
#include <vector>

namespace qjet {

/// Finite truncated simplicial set: explicit levels 0..m+1 with face and
/// degeneracy maps between adjacent levels, so the truncation condition at
/// level m is checkable. Simplices are integers 0..sizes[n]-1 per level.
struct TruncatedSimplicialSet {
  int m = 0;
  std::vector<int> sizes;                            // levels 0..m+1
  std::vector<std::vector<std::vector<int>>> face;   // face[n][i], n in 1..m+1, 0 <= i <= n
  std::vector<std::vector<std::vector<int>>> degen;  // degen[n][i], n in 0..m, 0 <= i <= n
  std::vector<std::vector<std::string>> labels;      // optional, per level

  int levels() const { return m + 2; }
  int d(int n, int i, int x) const { return face[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(x)]; }
  int s(int n, int i, int x) const { return degen[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(x)]; }
};

/// Checks the simplicial identities on all stored levels; throws
/// std::invalid_argument with the failing identity.
void validate_simplicial(const TruncatedSimplicialSet& x);

/// Nerve of a finite group from its multiplication table (element 0 must be
/// the identity): X_n = G^n, truncated at m = 2. Throws on a non-group table.
TruncatedSimplicialSet nerve_group(const std::vector<std::vector<int>>& table);

/// The standard N-simplex, stored up to level m+1.
TruncatedSimplicialSet simplex_complex(int n_vertices_minus_1, int m);

/// Discrete simplicial set on a finite set of points (m = 0 shape), stored
/// up to the requested truncation.
TruncatedSimplicialSet discrete_complex(int points, int m);

struct PointedFiniteSet {
  int size = 1;
  int basepoint = 0;
};

/// Nerve of the pair groupoid S x S => S: S_n = S^{n+1} (all tuples),
/// with faces omitting and degeneracies repeating an entry.
TruncatedSimplicialSet pair_nerve(const PointedFiniteSet& s, int m);

/// Tuple <-> index coding for pair_nerve levels (lexicographic, leftmost
/// entry most significant).
long pair_index(const PointedFiniteSet& s, const std::vector<int>& tuple);
std::vector<int> pair_tuple(const PointedFiniteSet& s, int level, long index);

/// Membership of a pair-nerve simplex in the filtration step S^(k):
/// image size <= k+1, and the tuple starts at the basepoint when the image
/// size is exactly k+1.
bool in_filtration(const PointedFiniteSet& s, int k, const std::vector<int>& tuple);

/// Horn of shape [n,k]: the faces d_i for i != k (faces[k] = -1).
struct Horn {
  int n = 1;
  int k = 0;
  std::vector<int> faces;
};

/// All compatible horns of shape [n,k] (exhaustive, deterministic order).
std::vector<Horn> horn_set(const TruncatedSimplicialSet& x, int n, int k);
/// All simplices filling the horn.
std::vector<int> horn_fillers(const TruncatedSimplicialSet& x, const Horn& h);

struct KanReport {
  bool ok = true;
  int n = -1;
  int k = -1;
  Horn witness;
  std::string detail;
};

/// Surjectivity of every horn restriction on the stored levels.
KanReport is_kan(const TruncatedSimplicialSet& x);
/// Bijectivity of the horn restrictions at the stored levels >= m.
KanReport is_truncated(const TruncatedSimplicialSet& x, int m);

/// The appendix chain G^(0) <- G^(1) <- ... <- G^(m): G^(k) is realized as
/// the set of maps S^k -> X_k (value on the based tuple (*, s_1..s_k)),
/// built by filling horns in all possible ways, with degenerate tuples
/// forced through the degeneracy maps.
struct GChain {
  /// levels[k] = all elements of G^(k); each element maps the lex index of
  /// (s_1..s_k) to a level-k simplex of X.
  std::vector<std::vector<std::vector<int>>> levels;
};
/// levels runs 0..m by default; one extra stage (m+1, filled through the
/// stored top level) can be requested to test transition bijectivity.
GChain g_chain(const PointedFiniteSet& s, const TruncatedSimplicialSet& x, int m,
               int top_stage = -1);

/// Transition G^(k+1) -> G^(k): restriction along the inclusion of based
/// tuples (append the last entry again and take the last face).
std::vector<int> g_restrict(const PointedFiniteSet& s, const TruncatedSimplicialSet& x, int k,
                            const std::vector<int>& g_k1);

/// A simplicial morphism S_* -> X_* as level-wise assignments on 0..m+1.
using SimplicialMorphism = std::vector<std::vector<int>>;

/// Independent brute-force enumeration of all simplicial morphisms from the
/// pair nerve of S into X (the oracle for g_chain).
std::vector<SimplicialMorphism> hom_enumerate(const PointedFiniteSet& s,
                                              const TruncatedSimplicialSet& x);

/// The G^(k)-style restriction of a full morphism: value on (*, s_1..s_k).
std::vector<int> chain_restriction(const PointedFiniteSet& s, const SimplicialMorphism& phi,
                                   int k);

}  // namespace qjet
