#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "qjet/simplicial.hpp"

using namespace qjet;

namespace {

std::vector<std::vector<int>> cyclic(int n) {
  std::vector<std::vector<int>> t(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[static_cast<size_t>(a)][static_cast<size_t>(b)] = (a + b) % n;
  return t;
}

std::vector<std::vector<int>> klein4() {
  return {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
}

}  // namespace

TEST_CASE("nerve of finite groups") {
  SUBCASE("trivial group: one simplex per level") {
    TruncatedSimplicialSet x = nerve_group(cyclic(1));
    CHECK(x.sizes == std::vector<int>{1, 1, 1, 1});
    CHECK(is_kan(x).ok);
    CHECK(is_truncated(x, 2).ok);
  }
  SUBCASE("Z/2: level sizes 1, 2, 4, 8") {
    TruncatedSimplicialSet x = nerve_group(cyclic(2));
    CHECK(x.sizes == std::vector<int>{1, 2, 4, 8});
  }
  SUBCASE("Z/3 is Kan and 2-truncated") {
    TruncatedSimplicialSet x = nerve_group(cyclic(3));
    CHECK(is_kan(x).ok);
    CHECK(is_truncated(x, 2).ok);
  }
  SUBCASE("non-associative table is rejected") {
    std::vector<std::vector<int>> bad = {{0, 1, 2}, {1, 2, 2}, {2, 0, 1}};
    CHECK_THROWS_AS(nerve_group(bad), std::invalid_argument);
  }
}

TEST_CASE("pair nerve and its filtration") {
  SUBCASE("singleton: all levels singletons") {
    TruncatedSimplicialSet x = pair_nerve({1, 0}, 2);
    CHECK(x.sizes == std::vector<int>{1, 1, 1, 1});
  }
  SUBCASE("level sizes are |S|^{n+1}") {
    TruncatedSimplicialSet x = pair_nerve({2, 0}, 2);
    CHECK(x.sizes == std::vector<int>{2, 4, 8, 16});
    CHECK(is_kan(x).ok);
    CHECK(is_truncated(x, 2).ok);
  }
  SUBCASE("S^(1) edges for |S| = 2: 3 of the 4 maps") {
    PointedFiniteSet s{2, 0};
    int count = 0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (in_filtration(s, 1, {a, b})) ++count;
    CHECK(count == 3);  // (0,0), (0,1), (1,1); (1,0) has full image off basepoint
  }
  SUBCASE("S^(0) is the basepoint-constant subcomplex") {
    // the image-size condition at k = 0 forces f(0) = * on every constant,
    // which is what makes Hom(S^(0), X) = X_0
    PointedFiniteSet s{3, 0};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        CHECK(in_filtration(s, 0, {a, b}) == (a == b && a == s.basepoint));
  }
  SUBCASE("filtration is an increasing chain") {
    PointedFiniteSet s{3, 1};
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c)
            if (in_filtration(s, k, {a, b, c})) CHECK(in_filtration(s, k + 1, {a, b, c}));
  }
}

TEST_CASE("horns and fillers") {
  SUBCASE("trivial group nerve has singleton horn sets") {
    TruncatedSimplicialSet x = nerve_group(cyclic(1));
    for (int n = 1; n <= 3; ++n)
      for (int k = 0; k <= n; ++k) CHECK(horn_set(x, n, k).size() == 1);
  }
  SUBCASE("nerve Z/2 has 4 horns of shape [2,1]") {
    TruncatedSimplicialSet x = nerve_group(cyclic(2));
    CHECK(horn_set(x, 2, 1).size() == 4);
  }
  SUBCASE("the 1-simplex is not Kan, with a witness horn") {
    TruncatedSimplicialSet d1 = simplex_complex(1, 2);
    KanReport r = is_kan(d1);
    CHECK_FALSE(r.ok);
    CHECK(horn_fillers(d1, r.witness).empty());
  }
  SUBCASE("out-of-range horn parameters are rejected") {
    TruncatedSimplicialSet x = nerve_group(cyclic(2));
    CHECK_THROWS_AS(horn_set(x, 7, 0), std::invalid_argument);
    CHECK_THROWS_AS(horn_set(x, 2, 5), std::invalid_argument);
  }
}

TEST_CASE("discrete simplicial sets are Kan and 0-truncated") {
  TruncatedSimplicialSet x = discrete_complex(2, 2);
  CHECK(is_kan(x).ok);
  CHECK(is_truncated(x, 0).ok);
}

TEST_CASE("g_chain counts and transitions") {
  SUBCASE("singleton S threads the vertices through constants") {
    TruncatedSimplicialSet x = nerve_group(cyclic(3));
    GChain c = g_chain({1, 0}, x, 2);
    CHECK(c.levels[0].size() == 1);  // X_0 is a point
    CHECK(c.levels[2].size() == 1);
  }
  SUBCASE("nerve Z/2 with |S| = 2: descent data count 2") {
    TruncatedSimplicialSet x = nerve_group(cyclic(2));
    GChain c = g_chain({2, 0}, x, 2);
    CHECK(c.levels[2].size() == 2);
  }
  SUBCASE("nerve Z/3 with |S| = 3: descent data count 9") {
    TruncatedSimplicialSet x = nerve_group(cyclic(3));
    GChain c = g_chain({3, 0}, x, 2);
    CHECK(c.levels[2].size() == 9);
  }
  SUBCASE("transitions are surjective, and bijective from the truncation level") {
    PointedFiniteSet s{2, 0};
    TruncatedSimplicialSet x = nerve_group(cyclic(4));
    GChain c = g_chain(s, x, 2);
    for (int k = 0; k + 1 < static_cast<int>(c.levels.size()); ++k) {
      std::set<std::vector<int>> images;
      for (const auto& g : c.levels[static_cast<size_t>(k + 1)])
        images.insert(g_restrict(s, x, k, g));
      std::set<std::vector<int>> stage(c.levels[static_cast<size_t>(k)].begin(),
                                       c.levels[static_cast<size_t>(k)].end());
      CHECK(images == stage);  // surjective onto G^(k)
    }
    // k = m: unique horn fillers make the last transition injective as well
    std::set<std::vector<int>> images;
    for (const auto& g : c.levels[2]) images.insert(g_restrict(s, x, 1, g));
    CHECK(images.size() == c.levels[2].size());
  }
  SUBCASE("precondition failures are reported") {
    TruncatedSimplicialSet d1 = simplex_complex(1, 2);
    CHECK_THROWS_AS(g_chain({2, 0}, d1, 2), std::invalid_argument);
  }
}

TEST_CASE("oracle: hom_enumerate agrees with the chain") {
  for (int gsize : {1, 2, 3}) {
    for (int ssize : {1, 2, 3}) {
      CAPTURE(gsize);
      CAPTURE(ssize);
      PointedFiniteSet s{ssize, 0};
      TruncatedSimplicialSet x = nerve_group(cyclic(gsize));
      GChain c = g_chain(s, x, 2);
      auto morphisms = hom_enumerate(s, x);
      CHECK(morphisms.size() == c.levels[2].size());
      // descent data count for group nerves
      long expected = 1;
      for (int i = 1; i < ssize; ++i) expected *= gsize;
      CHECK(static_cast<long>(morphisms.size()) == expected);
      // the chain restriction of the oracle matches G^(k) at every stage
      for (int k = 0; k <= 2; ++k) {
        std::set<std::vector<int>> via_oracle;
        for (const auto& phi : morphisms) via_oracle.insert(chain_restriction(s, phi, k));
        std::set<std::vector<int>> via_chain(c.levels[static_cast<size_t>(k)].begin(),
                                             c.levels[static_cast<size_t>(k)].end());
        CHECK(via_oracle == via_chain);
      }
    }
  }
}

TEST_CASE("0-truncated target: the chain is just the vertices") {
  PointedFiniteSet s{3, 0};
  TruncatedSimplicialSet x = discrete_complex(2, 0);
  GChain c = g_chain(s, x, 0);
  REQUIRE(c.levels.size() == 1);
  CHECK(c.levels[0].size() == 2);
  auto morphisms = hom_enumerate(s, x);
  CHECK(morphisms.size() == 2);  // everything collapses to a point choice
}

TEST_CASE("oracle and chain agree on a 4-point set") {
  PointedFiniteSet s{4, 0};
  TruncatedSimplicialSet x = nerve_group(cyclic(2));
  GChain c = g_chain(s, x, 2);
  auto morphisms = hom_enumerate(s, x);
  CHECK(morphisms.size() == 8);  // |G|^{|S|-1}
  CHECK(c.levels[2].size() == 8);
  std::set<std::vector<int>> via_oracle;
  for (const auto& phi : morphisms) via_oracle.insert(chain_restriction(s, phi, 2));
  std::set<std::vector<int>> via_chain(c.levels[2].begin(), c.levels[2].end());
  CHECK(via_oracle == via_chain);
}

TEST_CASE("oracle count includes at least the constants") {
  TruncatedSimplicialSet x = nerve_group(klein4());
  auto morphisms = hom_enumerate({2, 0}, x);
  CHECK(morphisms.size() >= static_cast<size_t>(x.sizes[0]));
  CHECK(morphisms.size() == 4);  // |G|^{|S|-1}
}

TEST_CASE("naturality of the chain identification in the pointed set") {
  // f: S -> S' basepoint-preserving; restriction of morphisms commutes with
  // the chain identification.
  PointedFiniteSet s{2, 0};
  PointedFiniteSet sp{3, 0};
  std::vector<int> f = {0, 2};  // f(0) = *, f(1) = 2
  TruncatedSimplicialSet x = nerve_group(cyclic(3));
  auto morphisms_sp = hom_enumerate(sp, x);
  auto morphisms_s = hom_enumerate(s, x);
  std::set<SimplicialMorphism> all_s(morphisms_s.begin(), morphisms_s.end());

  for (const auto& phi : morphisms_sp) {
    // pull back phi along f tuple-wise
    SimplicialMorphism pulled(phi.size());
    for (int n = 0; n < static_cast<int>(phi.size()); ++n) {
      long count = 1;
      for (int i = 0; i <= n; ++i) count *= s.size;
      pulled[static_cast<size_t>(n)].resize(static_cast<size_t>(count));
      for (long t = 0; t < count; ++t) {
        std::vector<int> tuple = pair_tuple(s, n + 1, t);
        std::vector<int> mapped;
        for (int v : tuple) mapped.push_back(f[static_cast<size_t>(v)]);
        pulled[static_cast<size_t>(n)][static_cast<size_t>(t)] =
            phi[static_cast<size_t>(n)][static_cast<size_t>(pair_index(sp, mapped))];
      }
    }
    CHECK(all_s.count(pulled) == 1);
    // chain-level naturality: restriction then pull-back = pull-back then restriction
    for (int k = 0; k <= 2; ++k) {
      std::vector<int> lhs = chain_restriction(s, pulled, k);
      std::vector<int> rhs_full = chain_restriction(sp, phi, k);
      long count = 1;
      for (int i = 0; i < k; ++i) count *= s.size;
      std::vector<int> rhs(static_cast<size_t>(count));
      for (long t = 0; t < count; ++t) {
        std::vector<int> tuple = pair_tuple(s, k, t);
        std::vector<int> mapped;
        for (int v : tuple) mapped.push_back(f[static_cast<size_t>(v)]);
        rhs[static_cast<size_t>(t)] = rhs_full[static_cast<size_t>(pair_index(sp, mapped))];
      }
      CHECK(lhs == rhs);
    }
  }
}
