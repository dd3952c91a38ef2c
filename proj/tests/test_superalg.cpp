#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qjet/algebra.hpp"
#include "qjet/derivation.hpp"

using namespace qjet;

namespace {

AlgebraPtr odd_pair() {
  return Algebra::make({{"th1", 0, Parity::Odd}, {"th2", 0, Parity::Odd}});
}

// Small ambient algebra mixing degrees and parities, used by the property tests.
AlgebraPtr mixed() {
  return Algebra::make({{"x", 0, Parity::Even},
                        {"th", 0, Parity::Odd},
                        {"dx", 1, Parity::Odd},
                        {"dth", 1, Parity::Even}});
}

Element random_element(const AlgebraPtr& a, std::mt19937& rng, int max_terms = 3) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> exp(0, 2);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  Element out = Element::zero(a);
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Element mono = Element::scalar(a, Rational(coef(rng)));
    for (int g = 0; g < a->size(); ++g) {
      int e = a->gen(g).parity == Parity::Odd ? exp(rng) % 2 : exp(rng);
      mono = mono * Element::generator(a, g).pow(e);
    }
    out += mono;
  }
  return out;
}

// Random parity-homogeneous element (a single random monomial with coefficient).
Element random_monomial(const AlgebraPtr& a, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> exp(0, 2);
  Element mono = Element::scalar(a, Rational(coef(rng) == 0 ? 1 : coef(rng)));
  for (int g = 0; g < a->size(); ++g) {
    int e = a->gen(g).parity == Parity::Odd ? exp(rng) % 2 : exp(rng);
    mono = mono * Element::generator(a, g).pow(e);
  }
  return mono;
}

}  // namespace

TEST_CASE("odd generator squares to zero") {
  auto a = odd_pair();
  Element th1 = Element::generator(a, "th1");
  CHECK((th1 * th1).is_zero());
}

TEST_CASE("odd generators anticommute") {
  auto a = odd_pair();
  Element th1 = Element::generator(a, "th1");
  Element th2 = Element::generator(a, "th2");
  CHECK(th1 * th2 == -(th2 * th1));
  CHECK_FALSE((th1 * th2).is_zero());
}

TEST_CASE("even degree-1 generator has nonzero square") {
  auto a = Algebra::make({{"th", 0, Parity::Odd}, {"dth", 1, Parity::Even}});
  Element dth = Element::generator(a, "dth");
  Element sq = dth * dth;
  CHECK_FALSE(sq.is_zero());
  CHECK(sq.degree() == 2);
}

TEST_CASE("mismatched algebras are rejected") {
  auto a = odd_pair();
  auto b = odd_pair();
  Element x = Element::generator(a, "th1");
  Element y = Element::generator(b, "th1");
  CHECK_THROWS_AS(x * y, std::invalid_argument);
}

TEST_CASE("de Rham values on generators and graded Leibniz expansion") {
  auto a = Algebra::make({{"th1", 0, Parity::Odd},
                          {"th2", 0, Parity::Odd},
                          {"dth1", 1, Parity::Even},
                          {"dth2", 1, Parity::Even}});
  Derivation d(a, 1, Parity::Odd,
               {{0, Element::generator(a, "dth1")}, {1, Element::generator(a, "dth2")}});
  Element th1 = Element::generator(a, "th1");
  Element th2 = Element::generator(a, "th2");
  Element dth1 = Element::generator(a, "dth1");
  Element dth2 = Element::generator(a, "dth2");

  CHECK(d(th1) == dth1);
  CHECK(d(th1 * th2) == dth1 * th2 - th1 * dth2);
}

TEST_CASE("Euler derivation kills degree-0 generators") {
  auto a = mixed();
  Derivation e = Derivation::euler(a);
  CHECK(e(Element::generator(a, "x")).is_zero());
  CHECK(e(Element::generator(a, "th")).is_zero());
  CHECK(e(Element::generator(a, "dx")) == Element::generator(a, "dx"));
}

TEST_CASE("commutators of Euler and a differential") {
  auto a = mixed();
  Derivation d(a, 1, Parity::Odd,
               {{a->index_of("x"), Element::generator(a, "dx")},
                {a->index_of("th"), Element::generator(a, "dth")}});
  Derivation e = Derivation::euler(a);

  SUBCASE("[E,d] = d") { CHECK(commutator(e, d) == d); }
  SUBCASE("[d,d] = 2 d^2 vanishes for this d") {
    Derivation dd = commutator(d, d);
    for (int g = 0; g < a->size(); ++g) CHECK(dd.value(g).is_zero());
  }
  SUBCASE("[E,E] = 0") {
    Derivation ee = commutator(e, e);
    for (int g = 0; g < a->size(); ++g) CHECK(ee.value(g).is_zero());
  }
}

TEST_CASE("derivation values must be degree and parity consistent") {
  auto a = mixed();
  // x has degree 0; a degree-1 odd derivation must send it to degree 1 odd.
  CHECK_THROWS_AS(Derivation(a, 1, Parity::Odd, {{0, Element::generator(a, "dth")}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Derivation(a, 2, Parity::Odd, {{0, Element::generator(a, "dx")}}),
                  std::invalid_argument);
}

TEST_CASE("substitute: identity and evaluation at the base point") {
  auto a = Algebra::make({{"c", 0, Parity::Even}, {"th", 0, Parity::Odd}, {"e", 0, Parity::Odd}});
  Element c = Element::generator(a, "c");
  Element th = Element::generator(a, "th");
  Element e = Element::generator(a, "e");
  Element v = c + th * e;

  std::map<int, Element> id;
  for (int g = 0; g < a->size(); ++g) id.emplace(g, Element::generator(a, g));
  CHECK(substitute(id, v) == v);

  std::map<int, Element> at0 = id;
  at0.insert_or_assign(a->index_of("th"), Element::zero(a));
  CHECK(substitute(at0, v) == c);
}

TEST_CASE("substitute: odd tangent shift on x^2") {
  auto a = Algebra::make(
      {{"x", 0, Parity::Even}, {"dx", 1, Parity::Odd}, {"beta", -1, Parity::Odd}});
  Element x = Element::generator(a, "x");
  Element dx = Element::generator(a, "dx");
  Element beta = Element::generator(a, "beta");

  std::map<int, Element> phi;
  phi.emplace(0, x + dx * beta);
  phi.emplace(1, dx);
  phi.emplace(2, beta);
  Element img = substitute(phi, x * x);
  CHECK(img == x * x + x * dx * beta * Rational(2));
}

TEST_CASE("substitute rejects degree or parity violations") {
  auto a = mixed();
  std::map<int, Element> bad;
  for (int g = 0; g < a->size(); ++g) bad.emplace(g, Element::generator(a, g));
  bad.insert_or_assign(a->index_of("x"), Element::generator(a, "dx"));
  CHECK_THROWS_AS(substitute(bad, Element::generator(a, "x")), std::invalid_argument);
}

TEST_CASE("property: supercommutativity on parity-homogeneous elements") {
  auto a = mixed();
  std::mt19937 rng(12345);
  for (int i = 0; i < 50; ++i) {
    Element u = random_monomial(a, rng);
    Element v = random_monomial(a, rng);
    auto pu = u.parity();
    auto pv = v.parity();
    if (!pu || !pv) continue;
    Element lhs = u * v;
    Element rhs = v * u;
    if (*pu == Parity::Odd && *pv == Parity::Odd) rhs = -rhs;
    CHECK(lhs == rhs);
  }
}

TEST_CASE("property: degree bookkeeping under multiplication") {
  auto a = mixed();
  std::mt19937 rng(777);
  for (int i = 0; i < 50; ++i) {
    Element u = random_monomial(a, rng);
    Element v = random_monomial(a, rng);
    auto du = u.degree();
    auto dv = v.degree();
    Element p = u * v;
    if (du && dv && !p.is_zero()) CHECK(p.degree() == *du + *dv);
  }
}

TEST_CASE("property: graded Leibniz rule for a random derivation") {
  auto a = mixed();
  std::mt19937 rng(424242);
  // Odd degree-1 derivation with admissible random values.
  std::map<int, Element> vals;
  vals.emplace(a->index_of("x"), Element::generator(a, "dx") * Rational(3));
  vals.emplace(a->index_of("th"), Element::generator(a, "dth") * Rational(-2));
  vals.emplace(a->index_of("dx"),
               Element::generator(a, "dx") * Element::generator(a, "dth") * Rational(0));
  Derivation d(a, 1, Parity::Odd, vals);
  for (int i = 0; i < 60; ++i) {
    Element u = random_monomial(a, rng);
    Element v = random_element(a, rng);
    auto pu = u.parity();
    if (!pu) continue;
    Element lhs = d(u * v);
    Element rhs = d(u) * v;
    Element tail = u * d(v);
    if (*pu == Parity::Odd) tail = -tail;
    CHECK(lhs == rhs + tail);
  }
}

TEST_CASE("property: graded Jacobi identity for derivation commutators") {
  auto a = mixed();
  Derivation d(a, 1, Parity::Odd,
               {{a->index_of("x"), Element::generator(a, "dx")},
                {a->index_of("th"), Element::generator(a, "dth")}});
  Derivation e = Derivation::euler(a);
  Derivation iota(a, -1, Parity::Odd, {{a->index_of("dx"), Element::scalar(a, Rational(1))}});

  // [[A,B],C] = [A,[B,C]] - (-1)^{pA pB} [B,[A,C]]
  auto jacobi = [&](const Derivation& A, const Derivation& B, const Derivation& C) {
    Derivation lhs = commutator(commutator(A, B), C);
    Derivation r1 = commutator(A, commutator(B, C));
    Derivation r2 = commutator(B, commutator(A, C));
    bool flip_sign = A.parity() == Parity::Odd && B.parity() == Parity::Odd;
    for (int g = 0; g < a->size(); ++g) {
      Element rhs = flip_sign ? r1.value(g) + r2.value(g) : r1.value(g) - r2.value(g);
      CHECK(lhs.value(g) == rhs);
    }
  };
  jacobi(d, e, iota);
  jacobi(d, iota, e);
  jacobi(iota, d, d);
  jacobi(e, e, d);
}

TEST_CASE("property: graded Jacobi for random derivation triples") {
  auto a = mixed();
  std::mt19937 rng(31415);
  std::uniform_int_distribution<int> coef(-2, 2);
  std::uniform_int_distribution<int> pick_deg(-1, 1);
  std::uniform_int_distribution<int> pick_par(0, 1);

  // all monomials with small exponents, bucketed by (degree, parity)
  auto slice = [&](int degree, Parity parity) {
    std::vector<Element> out;
    for (int e0 = 0; e0 <= 2; ++e0)
      for (int e1 = 0; e1 <= 1; ++e1)
        for (int e2 = 0; e2 <= 1; ++e2)
          for (int e3 = 0; e3 <= 2; ++e3) {
            Element m = Element::generator(a, 0).pow(e0) * Element::generator(a, 1).pow(e1) *
                        Element::generator(a, 2).pow(e2) * Element::generator(a, 3).pow(e3);
            if (!m.is_zero() && m.degree() == degree && m.parity() == parity) out.push_back(m);
          }
    return out;
  };
  auto random_derivation = [&]() {
    while (true) {
      int deg = pick_deg(rng);
      Parity par = pick_par(rng) ? Parity::Odd : Parity::Even;
      std::map<int, Element> vals;
      bool any = false;
      for (int g = 0; g < a->size(); ++g) {
        const GenSpec& s = a->gen(g);
        Element v = Element::zero(a);
        for (const Element& m : slice(s.degree + deg, s.parity ^ par))
          v += m * Rational(coef(rng));
        if (!v.is_zero()) any = true;
        vals.emplace(g, v);
      }
      if (any) return Derivation(a, deg, par, std::move(vals));
    }
  };

  for (int trial = 0; trial < 20; ++trial) {
    Derivation A = random_derivation();
    Derivation B = random_derivation();
    Derivation C = random_derivation();
    Derivation lhs = commutator(commutator(A, B), C);
    Derivation r1 = commutator(A, commutator(B, C));
    Derivation r2 = commutator(B, commutator(A, C));
    bool flip = A.parity() == Parity::Odd && B.parity() == Parity::Odd;
    for (int g = 0; g < a->size(); ++g) {
      Element rhs = flip ? r1.value(g) + r2.value(g) : r1.value(g) - r2.value(g);
      CHECK(lhs.value(g) == rhs);
    }
  }
}

TEST_CASE("canonical form: renormalizing is a no-op and zero terms vanish") {
  auto a = mixed();
  Element x = Element::generator(a, "x");
  Element th = Element::generator(a, "th");
  Element z = x * th - th * x;  // x even: commute, cancels exactly
  CHECK(z.is_zero());
  CHECK(z.terms().empty());
}
