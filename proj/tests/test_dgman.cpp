#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "qjet/dgman.hpp"

using namespace qjet;

namespace {

GradedManifold line() { return GradedManifold::make({{"x", 0, Parity::Even}}); }

Element gen(const GradedManifold& m, const std::string& n) {
  return Element::generator(m.algebra(), n);
}

}  // namespace

TEST_CASE("pit doubles coordinates with shifted degree and flipped parity") {
  GradedManifold x = line();
  GradedManifold px = x.pit();
  CHECK(px.gen_count() == 2);
  const GenSpec& dx = px.algebra()->gen(px.algebra()->index_of("d1_x"));
  CHECK(dx.degree == 1);
  CHECK(dx.parity == Parity::Odd);

  GradedManifold empty = GradedManifold::make({});
  CHECK(empty.pit().gen_count() == 0);

  GradedManifold ppx = px.pit();
  CHECK(ppx.gen_count() == 4);
  CHECK(ppx.algebra()->find("d2_x") >= 0);
  CHECK(ppx.algebra()->find("d2_d1_x") >= 0);
  CHECK(ppx.algebra()->gen(ppx.algebra()->index_of("d2_d1_x")).degree == 2);
  CHECK(ppx.algebra()->gen(ppx.algebra()->index_of("d2_d1_x")).parity == Parity::Even);
}

TEST_CASE("iterated pit: level differentials anticommute and square to zero") {
  GradedManifold m = GradedManifold::make({{"x", 0, Parity::Even}, {"th", 0, Parity::Odd}});
  GradedManifold pp = m.pit().pit();
  Derivation d1 = pp.de_rham(1);
  Derivation d2 = pp.de_rham(2);
  Derivation c12 = commutator(d1, d2);
  Derivation c11 = commutator(d1, d1);
  Derivation c22 = commutator(d2, d2);
  for (int g = 0; g < pp.gen_count(); ++g) {
    CAPTURE(pp.algebra()->gen(g).name);
    CHECK(c12.value(g).is_zero());
    CHECK(c11.value(g).is_zero());
    CHECK(c22.value(g).is_zero());
  }
}

TEST_CASE("pit_map: identity, chain rule, functoriality") {
  GradedManifold x = line();
  GradedManifold y = GradedManifold::make({{"y", 0, Parity::Even}});
  GradedManifold z = GradedManifold::make({{"z", 0, Parity::Even}});

  SUBCASE("identity map lifts to the identity") {
    Morphism idp = pit_map(x, x, Morphism::identity(x.algebra()));
    GradedManifold px = x.pit();
    for (int g = 0; g < px.gen_count(); ++g)
      CHECK(idp(Element::generator(px.algebra(), g)) == Element::generator(px.algebra(), g));
  }

  SUBCASE("y = x^2 gives dy -> 2 x dx") {
    std::map<int, Element> phi;
    phi.emplace(0, gen(x, "x").pow(2));
    Morphism lifted = pit_map(x, y, Morphism(y.algebra(), x.algebra(), phi));
    GradedManifold px = x.pit();
    GradedManifold py = y.pit();
    Element dy = Element::generator(py.algebra(), "d1_y");
    CHECK(lifted(dy) == gen(px, "x") * gen(px, "d1_x") * Rational(2));
  }

  SUBCASE("composition y = x^2, z = y^3 matches the direct z = x^6 lift") {
    std::map<int, Element> phi;  // pullback of x -> y
    phi.emplace(0, gen(x, "x").pow(2));
    Morphism phi_star(y.algebra(), x.algebra(), phi);
    std::map<int, Element> psi;  // pullback of y -> z
    psi.emplace(0, gen(y, "y").pow(3));
    Morphism psi_star(z.algebra(), y.algebra(), psi);

    Morphism composite_lift = pit_map(y, z, psi_star).then(pit_map(x, y, phi_star));
    std::map<int, Element> direct;
    direct.emplace(0, gen(x, "x").pow(6));
    Morphism direct_lift = pit_map(x, z, Morphism(z.algebra(), x.algebra(), direct));

    GradedManifold pz = z.pit();
    for (int g = 0; g < pz.gen_count(); ++g) {
      Element v = Element::generator(pz.algebra(), g);
      CHECK(composite_lift(v) == direct_lift(v));
    }
  }
}

TEST_CASE("property: pit functoriality on random polynomial maps") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coef(-2, 2);
  auto random_poly = [&](const AlgebraPtr& a, int nvars) {
    Element out = Element::zero(a);
    for (int g = 0; g < nvars; ++g) {
      out += Element::generator(a, g) * Rational(coef(rng));
      out += Element::generator(a, g).pow(2) * Rational(coef(rng));
      if (g + 1 < nvars)
        out += Element::generator(a, g) * Element::generator(a, g + 1) * Rational(coef(rng));
      out += Element::generator(a, g).pow(3) * Rational(coef(rng));
    }
    return out;
  };
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + trial % 3;
    std::vector<GenSpec> gx, gy, gz;
    for (int i = 0; i < n; ++i) {
      gx.push_back({"x" + std::to_string(i), 0, Parity::Even});
      gy.push_back({"y" + std::to_string(i), 0, Parity::Even});
      gz.push_back({"z" + std::to_string(i), 0, Parity::Even});
    }
    GradedManifold X = GradedManifold::make(gx);
    GradedManifold Y = GradedManifold::make(gy);
    GradedManifold Z = GradedManifold::make(gz);
    std::map<int, Element> phi, psi;
    for (int i = 0; i < n; ++i) {
      phi.emplace(i, random_poly(X.algebra(), n));
      psi.emplace(i, random_poly(Y.algebra(), n));
    }
    Morphism phi_star(Y.algebra(), X.algebra(), phi);
    Morphism psi_star(Z.algebra(), Y.algebra(), psi);
    Morphism lhs = pit_map(Y, Z, psi_star).then(pit_map(X, Y, phi_star));
    Morphism rhs = pit_map(X, Z, psi_star.then(phi_star));
    GradedManifold pz = Z.pit();
    for (int g = 0; g < pz.gen_count(); ++g) {
      Element v = Element::generator(pz.algebra(), g);
      CHECK(lhs(v) == rhs(v));
    }
  }
}

TEST_CASE("semigroup action: identity, shift, composition law") {
  GradedManifold x0 = GradedManifold::make({{"x", 0, Parity::Even}, {"w", 0, Parity::Even}});
  GradedManifold px = x0.pit().with_parameters(
      {{"b1", -1, Parity::Odd}, {"b2", -1, Parity::Odd}});
  const AlgebraPtr& a = px.algebra();
  Element b1 = Element::generator(a, "b1");
  Element b2 = Element::generator(a, "b2");

  SUBCASE("(a=1, beta=0) is the identity") {
    Morphism act = semigroup_act(px, 1, {Rational(1), Element::zero(a)});
    for (int g = 0; g < a->size(); ++g)
      CHECK(act(Element::generator(a, g)) == Element::generator(a, g));
  }

  SUBCASE("(a=1, beta) sends x to x + dx beta") {
    Morphism act = semigroup_act(px, 1, {Rational(1), b1});
    CHECK(act(Element::generator(a, "x")) ==
          Element::generator(a, "x") + Element::generator(a, "d1_x") * b1);
    CHECK(act(Element::generator(a, "d1_x")) == Element::generator(a, "d1_x"));
  }

  SUBCASE("action is a right action: pullbacks compose covariantly") {
    // sigma1 = (a1, b1), sigma2 = (a2, b2); sigma1 o sigma2 = (a1 a2, a1 b2 + b1)
    Rational a1(2), a2(3);
    Morphism act1 = semigroup_act(px, 1, {a1, b1});
    Morphism act2 = semigroup_act(px, 1, {a2, b2});
    Morphism composite = act2.then(act1);  // act1 after act2 = pullback of sigma1 o sigma2
    Morphism direct = semigroup_act(px, 1, {a1 * a2, b2 * a1 + b1});
    for (int g = 0; g < a->size(); ++g) {
      Element v = Element::generator(a, g);
      CHECK(composite(v) == direct(v));
    }
  }

  SUBCASE("action is an algebra morphism") {
    Morphism act = semigroup_act(px, 1, {Rational(5), b1});
    Element f = Element::generator(a, "x") * Element::generator(a, "d1_x") +
                Element::generator(a, "w").pow(2);
    Element g = Element::generator(a, "d1_w") + Element::generator(a, "x");
    CHECK(act(f * g) == act(f) * act(g));
  }
}

TEST_CASE("infinitesimal generators of the semigroup are d and the Euler field") {
  GradedManifold x0 =
      GradedManifold::make({{"x", 0, Parity::Even}, {"y", 0, Parity::Even}, {"th", 0, Parity::Odd}});
  GradedManifold px = x0.pit().with_parameters({{"beta", -1, Parity::Odd}});
  const AlgebraPtr& a = px.algebra();
  Element beta = Element::generator(a, "beta");
  Derivation d = px.de_rham(1);

  // beta-direction: act(f) - f = d(f) beta for every generator and a product
  Morphism act = semigroup_act(px, 1, {Rational(1), beta});
  for (int g = 0; g < a->size(); ++g) {
    Element v = Element::generator(a, g);
    CHECK(act(v) - v == d(v) * beta);
  }
  Element f = Element::generator(a, "x") * Element::generator(a, "d1_th");
  CHECK(act(f) - f == d(f) * beta);

  // a-direction at a=2: act(g) - g = E(g) with E the fibre Euler field,
  // which on an ungraded base equals the total degree derivation.
  Morphism scale = semigroup_act(px, 1, {Rational(2), Element::zero(a)});
  Derivation efib = px.level_euler(1);
  CHECK(efib == px.euler());
  for (int g = 0; g < a->size(); ++g) {
    if (px.is_param(g)) continue;
    Element v = Element::generator(a, g);
    CHECK(scale(v) - v == efib(v));
  }

  // [E, d] = d and d^2 = 0
  CHECK(commutator(px.euler(), d) == d);
  Derivation dd = commutator(d, d);
  for (int g = 0; g < a->size(); ++g) CHECK(dd.value(g).is_zero());
}

TEST_CASE("check_q verdicts") {
  GradedManifold x = line();
  GradedManifold px = x.pit();

  SUBCASE("zero Q is ok") {
    CHECK(check_q(px, Derivation::zero(px.algebra(), 1, Parity::Odd)).ok());
  }
  SUBCASE("de Rham differential is a Q-structure") {
    CHECK(check_q(px, px.de_rham(1)).ok());
  }
  SUBCASE("swap differential fails with witness and degree flag") {
    std::map<int, Element> vals;
    vals.emplace(px.algebra()->index_of("x"), Element::generator(px.algebra(), "d1_x"));
    vals.emplace(px.algebra()->index_of("d1_x"), Element::generator(px.algebra(), "x"));
    QCheckResult r = check_q_values(px, vals);
    CHECK_FALSE(r.ok());
    CHECK(r.status == QCheckResult::Status::WrongDegree);
    CHECK(r.witness == "x");  // Q^2(x) = x also detected
  }
  SUBCASE("wrong degree reported distinctly from a failing square") {
    QCheckResult r = check_q(px, Derivation::zero(px.algebra(), 2, Parity::Odd));
    CHECK(r.status == QCheckResult::Status::WrongDegree);
    QCheckResult p = check_q(px, Derivation::zero(px.algebra(), 1, Parity::Even));
    CHECK(p.status == QCheckResult::Status::WrongParity);
  }
}

TEST_CASE("is_dg_manifold") {
  GradedManifold m = line();
  CHECK(m.pit().is_dg_manifold());
  CHECK_FALSE(GradedManifold::make({{"th", 0, Parity::Odd}}).is_dg_manifold());
  // g[1] for an ordinary Lie algebra: odd degree-1 coordinates
  CHECK(GradedManifold::make({{"xi1", 1, Parity::Odd}, {"xi2", 1, Parity::Odd}}).is_dg_manifold());
}

TEST_CASE("slot-wise degree fields on the double odd tangent bundle") {
  GradedManifold pp = GradedManifold::make({{"x", 0, Parity::Even}}).pit().pit();
  Derivation e1 = pp.level_euler(1);
  Derivation e2 = pp.level_euler(2);
  Derivation d1 = pp.de_rham(1);
  Derivation d2 = pp.de_rham(2);
  auto vanishes = [&](const Derivation& d) {
    for (int g = 0; g < pp.gen_count(); ++g)
      if (!d.value(g).is_zero()) return false;
    return true;
  };
  CHECK(vanishes(commutator(e1, e2)));
  CHECK(vanishes(commutator(e1, d2)));
  CHECK(commutator(e2, d2) == d2);
  CHECK(commutator(e1, d1) == d1);
  CHECK(vanishes(commutator(e2, d1)));
}

TEST_CASE("grading predicates") {
  CHECK(GradedManifold::make({{"x", 0, Parity::Even}}).is_non_negatively_graded());
  CHECK_FALSE(GradedManifold::make({{"b", -1, Parity::Odd}}).is_non_negatively_graded());
}

TEST_CASE("Taylor expansion pairing is inverse to evaluation") {
  GradedManifold x = GradedManifold::make(
      {{"u", 0, Parity::Even}, {"v", 0, Parity::Even}, {"th", 0, Parity::Odd}});
  GradedManifold px = x.pit();

  // Parameter manifold Y carries a slot for each coordinate and each velocity.
  std::vector<GenSpec> ygens;
  for (int g = 0; g < x.gen_count(); ++g) {
    const GenSpec& s = x.algebra()->gen(g);
    ygens.push_back({s.name + "0", 0, s.parity});
  }
  for (int g = 0; g < x.gen_count(); ++g) {
    const GenSpec& s = x.algebra()->gen(g);
    ygens.push_back({"xi_" + s.name, 0, flip(s.parity)});
  }
  ygens.push_back({"theta", 0, Parity::Odd});
  AlgebraPtr ya = Algebra::make(ygens);
  Element theta = Element::generator(ya, "theta");

  // Evaluation of the parametrized map x(theta) = x(0) + theta xi.
  std::map<int, Element> ev_images;
  for (int g = 0; g < x.gen_count(); ++g) {
    const GenSpec& s = x.algebra()->gen(g);
    ev_images.emplace(g, Element::generator(ya, s.name + "0") +
                             theta * Element::generator(ya, "xi_" + s.name));
  }
  Morphism ev(x.algebra(), ya, ev_images, GradingCheck::ParityOnly);

  // Pairing with pit coordinates: x -> x0, dx -> xi.
  std::map<int, Element> p_images;
  for (int g = 0; g < px.gen_count(); ++g) {
    const GenSpec& s = px.algebra()->gen(g);
    if (s.name.rfind("d1_", 0) == 0)
      p_images.emplace(g, Element::generator(ya, "xi_" + s.name.substr(3)));
    else
      p_images.emplace(g, Element::generator(ya, s.name + "0"));
  }
  Morphism pairing(px.algebra(), ya, p_images, GradingCheck::ParityOnly);

  Morphism include = Morphism::inclusion(x.algebra(), px.algebra());
  Derivation d = px.de_rham(1);
  int theta_idx = ya->index_of("theta");

  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int trial = 0; trial < 25; ++trial) {
    Element f = Element::scalar(x.algebra(), Rational(coef(rng)));
    Element u = Element::generator(x.algebra(), "u");
    Element v = Element::generator(x.algebra(), "v");
    Element th = Element::generator(x.algebra(), "th");
    f += u.pow(trial % 3) * Rational(coef(rng));
    f += u * v * Rational(coef(rng)) + th * v * Rational(coef(rng));
    f += th * u.pow(2) * Rational(coef(rng));

    Element lhs = ev(f);
    Element expected = pairing(include(f)) + theta * pairing(d(include(f)));
    CHECK(lhs == expected);
    // reading the two Taylor slots back recovers the pit pairing (round trip)
    CHECK(drop_gen(lhs, theta_idx) == pairing(include(f)));
    CHECK(strip_left(lhs, theta_idx) == pairing(d(include(f))));
  }
}
