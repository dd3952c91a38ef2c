#include "qjet/nervejet.hpp"

#include <algorithm>
#include <set>

#include "qjet/linalg.hpp"

namespace qjet {

LieAlgebraData lie_from_group_law(const PolyGroupLaw& f) {
  int d = f.dim();
  LieAlgebraData g;
  for (int i = 1; i <= d; ++i) g.basis.push_back("e" + std::to_string(i));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      std::map<int, Rational> vals;
      for (int k = 0; k < d; ++k) {
        const Element& fk = f.components()[static_cast<size_t>(k)];
        Rational cij = fk.coefficient(Monomial({{i, 1}, {d + j, 1}}));
        Rational cji = fk.coefficient(Monomial({{j, 1}, {d + i, 1}}));
        Rational c = cij - cji;
        if (!c.is_zero()) vals.emplace(k, c);
      }
      if (!vals.empty()) g.brackets.emplace(std::make_pair(i, j), std::move(vals));
    }
  if (auto w = jacobi_violation(g))
    throw std::logic_error("lie_from_group_law: extracted constants violate Jacobi on (" +
                           std::to_string(w->i) + "," + std::to_string(w->j) + "," +
                           std::to_string(w->k) + ")");
  return g;
}

std::map<Monomial, Element> split_by_slots(const Element& e, const std::vector<bool>& is_slot) {
  const AlgebraPtr& alg = e.algebra();
  std::map<Monomial, ElementBuilder> buckets;
  for (const auto& [m, c] : e.terms()) {
    std::vector<std::pair<int, int>> slot_part, rest_part;
    const auto& entries = m.entries();
    // odd non-slot letters after each position, for the unshuffle sign
    std::vector<int> odd_rest_after(entries.size() + 1, 0);
    for (int i = static_cast<int>(entries.size()) - 1; i >= 0; --i) {
      auto [g, ex] = entries[static_cast<size_t>(i)];
      bool rest_odd = !is_slot[static_cast<size_t>(g)] && alg->gen(g).parity == Parity::Odd;
      odd_rest_after[static_cast<size_t>(i)] =
          odd_rest_after[static_cast<size_t>(i + 1)] + (rest_odd ? ex : 0);
    }
    long crossings = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
      auto [g, ex] = entries[i];
      if (is_slot[static_cast<size_t>(g)]) {
        slot_part.emplace_back(g, ex);
        if (alg->gen(g).parity == Parity::Odd)
          crossings += static_cast<long>(ex) * odd_rest_after[i + 1];
      } else {
        rest_part.emplace_back(g, ex);
      }
    }
    Rational coef = (crossings % 2 == 0) ? c : -c;
    Monomial key(std::move(slot_part));
    auto it = buckets.find(key);
    if (it == buckets.end()) it = buckets.emplace(key, ElementBuilder(alg)).first;
    it->second.add(Monomial(std::move(rest_part)), coef);
  }
  std::map<Monomial, Element> out;
  for (auto& [k, b] : buckets) {
    Element v = b.take();
    if (!v.is_zero()) out.emplace(k, std::move(v));
  }
  return out;
}

namespace {

Element substitute_assigned(const AlgebraPtr& alg, const std::map<int, Element>& assigned,
                            const Element& e, int max_passes) {
  Element cur = e;
  for (int pass = 0; pass < max_passes; ++pass) {
    bool uses = false;
    for (const auto& [m, c] : cur.terms())
      for (auto [g, ex] : m.entries())
        if (assigned.count(g)) uses = true;
    if (!uses) return cur;
    std::map<int, Element> images;
    for (int g = 0; g < alg->size(); ++g) {
      auto it = assigned.find(g);
      images.emplace(g, it != assigned.end() ? it->second : Element::generator(alg, g));
    }
    cur = Morphism(alg, alg, std::move(images), GradingCheck::ParityOnly)(cur);
  }
  return cur;
}

}  // namespace

SlotSolution solve_slots(const AlgebraPtr& alg, const std::vector<int>& unknowns,
                         std::vector<Element> equations, bool reverse_preference) {
  std::set<int> unknown_set(unknowns.begin(), unknowns.end());
  SlotSolution sol;
  int max_passes = static_cast<int>(unknowns.size()) + 2;

  bool progress = true;
  while (progress) {
    progress = false;
    for (const Element& eq : equations) {
      Element cur = substitute_assigned(alg, sol.assigned, eq, max_passes);
      if (cur.is_zero()) continue;
      std::map<int, Rational> bare;
      std::set<int> seen_elsewhere;
      for (const auto& [m, c] : cur.terms()) {
        const auto& entries = m.entries();
        if (entries.size() == 1 && entries[0].second == 1 &&
            unknown_set.count(entries[0].first) && !sol.assigned.count(entries[0].first)) {
          bare.emplace(entries[0].first, c);
        } else {
          for (auto [g, ex] : entries)
            if (unknown_set.count(g)) seen_elsewhere.insert(g);
        }
      }
      int pick = -1;
      for (const auto& [u, c] : bare) {
        if (seen_elsewhere.count(u)) continue;
        if (pick < 0 || (reverse_preference ? u > pick : u < pick)) pick = u;
      }
      if (pick < 0) continue;
      Rational c = bare.at(pick);
      Element rest = cur - Element::generator(alg, pick) * c;
      sol.assigned.emplace(pick, rest * (Rational(-1) / c));
      progress = true;
    }
  }
  for (int pass = 0; pass < max_passes; ++pass)
    for (auto& [u, v] : sol.assigned) v = substitute_assigned(alg, sol.assigned, v, 1);
  for (const auto& [u, v] : sol.assigned)
    for (const auto& [m, c] : v.terms())
      for (auto [g, ex] : m.entries())
        if (sol.assigned.count(g))
          throw std::logic_error("solve_slots: assignment resolution did not converge");

  for (const Element& eq : equations) {
    Element cur = substitute_assigned(alg, sol.assigned, eq, max_passes);
    if (!cur.is_zero()) {
      sol.consistent = false;
      sol.witness = cur.str();
      break;
    }
  }
  for (int u : unknowns)
    if (!sol.assigned.count(u)) sol.free_unknowns.push_back(u);
  return sol;
}

namespace {

struct JetWork {
  AlgebraPtr alg;
  int th1 = -1, th2 = -1, beta = -1;
  std::vector<int> coords;
  std::vector<Element> descent;
};

std::string nu_code(const std::vector<int>& nu) {
  std::string s;
  for (int i : nu) s += std::to_string(i + 1);
  return s.empty() ? "0" : s;
}

Morphism renames(const AlgebraPtr& a, const std::map<int, Element>& repl) {
  std::map<int, Element> images;
  for (int g = 0; g < a->size(); ++g) {
    auto it = repl.find(g);
    images.emplace(g, it != repl.end() ? it->second : Element::generator(a, g));
  }
  return Morphism(a, a, std::move(images), GradingCheck::ParityOnly);
}

JetWork solve_nerve_stages(const PolyGroupLaw& f, bool reverse) {
  int d = f.dim();
  std::vector<GenSpec> gens;
  for (int c = 1; c <= d; ++c) gens.push_back({"e" + std::to_string(c), 0, Parity::Odd});
  for (int c = 1; c <= d; ++c) gens.push_back({"a0_" + std::to_string(c), 0, Parity::Even});
  gens.push_back({"th1", 0, Parity::Odd});
  gens.push_back({"th2", 0, Parity::Odd});
  gens.push_back({"beta", 0, Parity::Odd});
  const char* mu_names[4] = {"o", "1", "2", "12"};
  Parity mu_parity[4] = {Parity::Even, Parity::Odd, Parity::Odd, Parity::Even};
  for (int fac = 1; fac <= 2; ++fac)
    for (int c = 1; c <= d; ++c)
      for (int mu = 0; mu < 4; ++mu)
        gens.push_back({"w" + std::to_string(fac) + "_" + std::to_string(c) + "_" + mu_names[mu],
                        0, mu_parity[static_cast<size_t>(mu)]});
  AlgebraPtr alg = Algebra::make(std::move(gens));

  JetWork w;
  w.alg = alg;
  w.th1 = alg->index_of("th1");
  w.th2 = alg->index_of("th2");
  w.beta = alg->index_of("beta");
  for (int c = 1; c <= d; ++c) w.coords.push_back(alg->index_of("e" + std::to_string(c)));

  Element th1 = Element::generator(alg, w.th1);
  Element th2 = Element::generator(alg, w.th2);
  std::vector<bool> theta_slot(static_cast<size_t>(alg->size()), false);
  theta_slot[static_cast<size_t>(w.th1)] = true;
  theta_slot[static_cast<size_t>(w.th2)] = true;

  // stage H^(1): sigma(th1) = a0 + e th1 with sigma(0) = identity
  {
    std::vector<int> unknowns;
    std::vector<Element> equations;
    for (int c = 1; c <= d; ++c) {
      int a0 = alg->index_of("a0_" + std::to_string(c));
      unknowns.push_back(a0);
      Element sigma = Element::generator(alg, a0) +
                      Element::generator(alg, w.coords[static_cast<size_t>(c - 1)]) * th1;
      Element at0 = renames(alg, {{w.th1, Element::zero(alg)}})(sigma);
      for (auto& [slot, cof] : split_by_slots(at0, theta_slot)) equations.push_back(cof);
    }
    SlotSolution s1 = solve_slots(alg, unknowns, equations, reverse);
    if (!s1.consistent || !s1.free_unknowns.empty())
      throw std::logic_error("nerve_one_jet: stage H^(1) did not pin the base slot");
    for (int u : unknowns)
      if (!substitute_assigned(alg, s1.assigned, Element::generator(alg, u), 2).is_zero())
        throw std::logic_error("nerve_one_jet: stage H^(1) base slot is nonzero");
  }

  // stage H^(2): horn faces d_2 sigma = g(th1), d_1 sigma = g(th2) and the
  // diagonal degeneracy sigma(th,th) = (g(th), e)
  std::vector<int> unknowns;
  auto slot_gen = [&](int fac, int c, int mu) {
    return alg->index_of("w" + std::to_string(fac) + "_" + std::to_string(c) + "_" +
                         mu_names[mu]);
  };
  std::vector<Element> sig1, sig2;
  for (int c = 1; c <= d; ++c) {
    for (int fac = 1; fac <= 2; ++fac)
      for (int mu = 0; mu < 4; ++mu) unknowns.push_back(slot_gen(fac, c, mu));
    Element s1 = Element::generator(alg, slot_gen(1, c, 0)) +
                 Element::generator(alg, slot_gen(1, c, 1)) * th1 +
                 Element::generator(alg, slot_gen(1, c, 2)) * th2 +
                 Element::generator(alg, slot_gen(1, c, 3)) * th1 * th2;
    Element s2 = Element::generator(alg, slot_gen(2, c, 0)) +
                 Element::generator(alg, slot_gen(2, c, 1)) * th1 +
                 Element::generator(alg, slot_gen(2, c, 2)) * th2 +
                 Element::generator(alg, slot_gen(2, c, 3)) * th1 * th2;
    sig1.push_back(s1);
    sig2.push_back(s2);
  }
  std::vector<Element> product = f.multiply(sig1, sig2);
  Morphism diag = renames(alg, {{w.th2, th1}});

  std::vector<Element> equations;
  for (int c = 0; c < d; ++c) {
    Element xi = Element::generator(alg, w.coords[static_cast<size_t>(c)]);
    Element face2 = sig1[static_cast<size_t>(c)] - xi * th1;
    Element face1 = product[static_cast<size_t>(c)] - xi * th2;
    Element diag1 = diag(sig1[static_cast<size_t>(c)]) - xi * th1;
    Element diag2 = diag(sig2[static_cast<size_t>(c)]);
    for (const Element& e : {face2, face1, diag1, diag2})
      for (auto& [slot, cof] : split_by_slots(e, theta_slot)) equations.push_back(cof);
  }
  SlotSolution s2sol = solve_slots(alg, unknowns, equations, reverse);
  if (!s2sol.consistent)
    throw std::logic_error("nerve_one_jet: horn-lift system inconsistent: " + s2sol.witness);
  if (!s2sol.free_unknowns.empty())
    throw std::logic_error("nerve_one_jet: unexpected moduli in the group-nerve lift");

  for (int c = 0; c < d; ++c)
    w.descent.push_back(
        substitute_assigned(alg, s2sol.assigned, sig2[static_cast<size_t>(c)], 8));
  return w;
}

}  // namespace

QStructure nerve_one_jet(const PolyGroupLaw& f, NerveJetOptions opts) {
  JetWork w = solve_nerve_stages(f, opts.reverse_splitting);
  const AlgebraPtr& alg = w.alg;
  int d = f.dim();

  Element th1 = Element::generator(alg, w.th1);
  Element th2 = Element::generator(alg, w.th2);
  Element beta = Element::generator(alg, w.beta);
  Morphism shift = renames(alg, {{w.th1, th1 + beta}, {w.th2, th2 + beta}});

  std::vector<bool> theta_slot(static_cast<size_t>(alg->size()), false);
  theta_slot[static_cast<size_t>(w.th1)] = true;
  theta_slot[static_cast<size_t>(w.th2)] = true;

  std::vector<Element> xi_tilde;
  Monomial th1_slot({{w.th1, 1}});
  for (int c = 0; c < d; ++c) {
    Element shifted = shift(w.descent[static_cast<size_t>(c)]);
    auto slots = split_by_slots(shifted, theta_slot);
    auto it = slots.find(th1_slot);
    Element b = it == slots.end() ? Element::zero(alg) : it->second;
    xi_tilde.push_back(-b);
  }
  {
    std::map<int, Element> repl;
    for (int c = 0; c < d; ++c)
      repl.emplace(w.coords[static_cast<size_t>(c)], xi_tilde[static_cast<size_t>(c)]);
    Morphism move = renames(alg, repl);
    for (int c = 0; c < d; ++c)
      if (!(move(w.descent[static_cast<size_t>(c)]) == shift(w.descent[static_cast<size_t>(c)])))
        throw std::logic_error("nerve_one_jet: action does not preserve the solution variety");
  }

  std::vector<GenSpec> jet_gens;
  for (int c = 1; c <= d; ++c) jet_gens.push_back({"e" + std::to_string(c), 1, Parity::Odd});
  GradedManifold jet = GradedManifold::make(std::move(jet_gens));
  std::map<int, Element> qvals;
  for (int c = 0; c < d; ++c) {
    Element delta = xi_tilde[static_cast<size_t>(c)] -
                    Element::generator(alg, w.coords[static_cast<size_t>(c)]);
    Element qc = strip_right(delta, w.beta);
    if (!(delta == qc * beta))
      throw std::logic_error("nerve_one_jet: infinitesimal action is not beta-linear");
    qvals.emplace(c, transport(qc, jet.algebra(), false));
  }
  Derivation q_edge(jet.algebra(), 1, Parity::Odd, std::move(qvals));

  // pass to the canonical chart: coordinates are the first-argument slot of
  // the descent datum (a linear invertible change of the edge coordinates)
  QMatrix chart(d, d);
  {
    Monomial slot1({{w.th1, 1}});
    for (int c = 0; c < d; ++c) {
      auto slots = split_by_slots(w.descent[static_cast<size_t>(c)], theta_slot);
      auto it = slots.find(slot1);
      Element b = it == slots.end() ? Element::zero(alg) : it->second;
      for (const auto& [m, coef] : b.terms()) {
        const auto& entries = m.entries();
        if (entries.size() != 1 || entries[0].second != 1)
          throw std::logic_error("nerve_one_jet: datum slot is not linear in the coordinates");
        int col = -1;
        for (int cc = 0; cc < d; ++cc)
          if (w.coords[static_cast<size_t>(cc)] == entries[0].first) col = cc;
        if (col < 0) throw std::logic_error("nerve_one_jet: datum slot uses a non-coordinate");
        chart.at(c, col) = coef;
      }
    }
  }
  auto chart_inv = inverse(chart);
  if (!chart_inv) throw std::logic_error("nerve_one_jet: datum slot map is singular");
  std::map<int, Element> fwd, bwd;
  for (int c = 0; c < d; ++c) {
    Element f = Element::zero(jet.algebra());
    Element g = Element::zero(jet.algebra());
    for (int cc = 0; cc < d; ++cc) {
      f += Element::generator(jet.algebra(), cc) * chart.at(c, cc);
      g += Element::generator(jet.algebra(), cc) * chart_inv->at(c, cc);
    }
    fwd.emplace(c, f);
    bwd.emplace(c, g);
  }
  Morphism to_edge(jet.algebra(), jet.algebra(), std::move(fwd));
  Morphism to_chart(jet.algebra(), jet.algebra(), std::move(bwd));
  std::map<int, Element> chart_q;
  for (int c = 0; c < d; ++c)
    chart_q.emplace(c, to_chart(q_edge(to_edge(Element::generator(jet.algebra(), c)))));
  return QStructure(jet, Derivation(jet.algebra(), 1, Parity::Odd, std::move(chart_q)));
}

AlgebraPtr lambda_algebra(int q) {
  std::vector<GenSpec> gens;
  for (int i = 1; i <= q; ++i) gens.push_back({"lam" + std::to_string(i), 0, Parity::Odd});
  return Algebra::make(std::move(gens));
}

namespace {

std::vector<std::vector<int>> subsets_of(int q) {
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << q); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < q; ++i)
      if (mask & (1 << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

Element lambda_monomial(const AlgebraPtr& alg, const std::vector<int>& lambdas,
                        const std::vector<int>& nu) {
  Element m = Element::scalar(alg, Rational(1));
  for (int i : nu) m = m * Element::generator(alg, lambdas[static_cast<size_t>(i)]);
  return m;
}

}  // namespace

DescentSolution solve_descent(const PolyGroupLaw& f, int q) {
  int d = f.dim();
  DescentSolution ds;
  ds.dim = d;
  ds.q = q;

  std::vector<GenSpec> gens;
  gens.push_back({"th1", 0, Parity::Odd});
  gens.push_back({"th2", 0, Parity::Odd});
  gens.push_back({"th3", 0, Parity::Odd});
  for (int i = 1; i <= q; ++i) gens.push_back({"lam" + std::to_string(i), 0, Parity::Odd});
  auto nus = subsets_of(q);
  const char* mu_names[4] = {"o", "1", "2", "12"};
  int mu_size[4] = {0, 1, 1, 2};
  for (int c = 1; c <= d; ++c)
    for (int mu = 0; mu < 4; ++mu)
      for (const auto& nu : nus) {
        if ((mu_size[mu] + static_cast<int>(nu.size())) % 2 != 0) continue;
        gens.push_back({"b" + std::to_string(c) + "_" + mu_names[mu] + "_" + nu_code(nu), 0,
                        Parity::Even});
      }
  ds.alg = Algebra::make(std::move(gens));
  const AlgebraPtr& alg = ds.alg;
  for (int i = 1; i <= q; ++i) ds.lambdas.push_back(alg->index_of("lam" + std::to_string(i)));

  int th1 = alg->index_of("th1");
  int th2 = alg->index_of("th2");
  int th3 = alg->index_of("th3");
  Element t1 = Element::generator(alg, th1);
  Element t2 = Element::generator(alg, th2);
  Element t3 = Element::generator(alg, th3);

  std::vector<int> unknowns;
  std::vector<Element> g;
  for (int c = 1; c <= d; ++c) {
    Element comp = Element::zero(alg);
    for (int mu = 0; mu < 4; ++mu) {
      Element theta_part = Element::scalar(alg, Rational(1));
      if (mu == 1) theta_part = t1;
      if (mu == 2) theta_part = t2;
      if (mu == 3) theta_part = t1 * t2;
      for (const auto& nu : nus) {
        if ((mu_size[mu] + static_cast<int>(nu.size())) % 2 != 0) continue;
        int bg = alg->index_of("b" + std::to_string(c) + "_" + mu_names[mu] + "_" + nu_code(nu));
        unknowns.push_back(bg);
        comp += Element::generator(alg, bg) * lambda_monomial(alg, ds.lambdas, nu) * theta_part;
      }
    }
    g.push_back(comp);
  }

  std::vector<bool> slot(static_cast<size_t>(alg->size()), false);
  slot[static_cast<size_t>(th1)] = slot[static_cast<size_t>(th2)] = true;
  slot[static_cast<size_t>(th3)] = true;
  for (int l : ds.lambdas) slot[static_cast<size_t>(l)] = true;

  std::vector<Element> equations;
  Morphism to_diag = renames(alg, {{th2, t1}});
  Morphism g23 = renames(alg, {{th1, t2}, {th2, t3}});
  Morphism g13 = renames(alg, {{th2, t3}});
  std::vector<Element> right, expect;
  for (int c = 0; c < d; ++c) {
    right.push_back(g23(g[static_cast<size_t>(c)]));
    expect.push_back(g13(g[static_cast<size_t>(c)]));
  }
  std::vector<Element> prod = f.multiply(g, right);
  for (int c = 0; c < d; ++c) {
    for (auto& [sl, cof] : split_by_slots(to_diag(g[static_cast<size_t>(c)]), slot))
      equations.push_back(cof);
    for (auto& [sl, cof] :
         split_by_slots(prod[static_cast<size_t>(c)] - expect[static_cast<size_t>(c)], slot))
      equations.push_back(cof);
  }
  SlotSolution sol = solve_slots(alg, unknowns, equations);
  if (!sol.consistent)
    throw std::logic_error("solve_descent: inconsistent system: " + sol.witness);
  ds.free_gens = sol.free_unknowns;
  for (int c = 0; c < d; ++c)
    ds.g.push_back(substitute_assigned(alg, sol.assigned, g[static_cast<size_t>(c)], 8));
  return ds;
}

MCSolution solve_mc(const PolyGroupLaw& f, int q) {
  int d = f.dim();
  LInftyAlgebra l = brackets_from_q(ce_from_lie(lie_from_group_law(f)));

  std::vector<GenSpec> params;
  for (int i = 1; i <= q; ++i) params.push_back({"lam" + std::to_string(i), 0, Parity::Odd});
  auto nus = subsets_of(q);
  for (int a = 1; a <= d; ++a)
    for (const auto& nu : nus) {
      if (nu.size() % 2 == 1)
        params.push_back({"u" + std::to_string(a) + "_" + nu_code(nu), 0, Parity::Even});
      else
        params.push_back({"v" + std::to_string(a) + "_" + nu_code(nu), 0, Parity::Even});
    }
  MCSolution ms{GradedManifold::make({{"fth", 0, Parity::Odd}}).pit().with_parameters(params),
                d, q, {}, {}, {}};
  const AlgebraPtr& alg = ms.ambient.algebra();
  for (int i = 1; i <= q; ++i) ms.lambdas.push_back(alg->index_of("lam" + std::to_string(i)));
  Element th = Element::generator(alg, "fth");
  Element dth = Element::generator(alg, "d1_fth");

  std::vector<int> unknowns;
  MCElement alpha;
  for (int a = 1; a <= d; ++a) {
    Element comp = Element::zero(alg);
    for (const auto& nu : nus) {
      if (nu.size() % 2 == 1) {
        int u = alg->index_of("u" + std::to_string(a) + "_" + nu_code(nu));
        unknowns.push_back(u);
        comp += Element::generator(alg, u) * lambda_monomial(alg, ms.lambdas, nu) * dth;
      } else {
        int v = alg->index_of("v" + std::to_string(a) + "_" + nu_code(nu));
        unknowns.push_back(v);
        comp += Element::generator(alg, v) * lambda_monomial(alg, ms.lambdas, nu) * th * dth;
      }
    }
    alpha.components.emplace(a - 1, comp);
  }
  CheckOutcome res = mc_check(alpha, l, ms.ambient.de_rham(1));

  std::vector<bool> slot(static_cast<size_t>(alg->size()), true);
  for (int u : unknowns) slot[static_cast<size_t>(u)] = false;
  std::vector<Element> equations;
  for (const auto& [name, r] : res.residuals)
    for (auto& [sl, cof] : split_by_slots(r, slot)) equations.push_back(cof);

  SlotSolution sol = solve_slots(alg, unknowns, equations);
  if (!sol.consistent) throw std::logic_error("solve_mc: inconsistent system: " + sol.witness);
  ms.free_gens = sol.free_unknowns;
  for (int a = 0; a < d; ++a)
    ms.alpha.push_back(substitute_assigned(alg, sol.assigned, alpha.components.at(a), 8));
  return ms;
}

namespace {

std::vector<Element> datum_to_connection(const DescentSolution& ds, const Morphism& into,
                                         const Element& dth) {
  const AlgebraPtr& alg = ds.alg;
  std::map<int, Element> dval;
  dval.emplace(alg->index_of("th2"), Element::scalar(alg, Rational(1)));
  Derivation d_th2(alg, 0, Parity::Odd, std::move(dval));
  std::vector<Element> out;
  for (int c = 0; c < ds.dim; ++c) out.push_back(into(d_th2(ds.g[static_cast<size_t>(c)])) * dth);
  return out;
}

}  // namespace

DescentMCReport descent_mc_bijection(const PolyGroupLaw& f, int q) {
  DescentMCReport rep;
  DescentSolution ds = solve_descent(f, q);
  MCSolution ms = solve_mc(f, q);
  rep.descent_free = static_cast<int>(ds.free_gens.size());
  rep.mc_free = static_cast<int>(ms.free_gens.size());

  std::vector<GenSpec> params;
  for (int i = 1; i <= q; ++i) params.push_back({"lam" + std::to_string(i), 0, Parity::Odd});
  for (int g : ds.free_gens) params.push_back(ds.alg->gen(g));
  for (int g : ms.free_gens) params.push_back(ms.ambient.algebra()->gen(g));
  GradedManifold common =
      GradedManifold::make({{"fth", 0, Parity::Odd}}).pit().with_parameters(params);
  const AlgebraPtr& ca = common.algebra();
  Element fth = Element::generator(ca, "fth");
  Element dth = Element::generator(ca, "d1_fth");

  std::map<int, Element> into_map;
  for (int g = 0; g < ds.alg->size(); ++g) {
    const std::string& n = ds.alg->gen(g).name;
    if (n == "th1" || n == "th2")
      into_map.emplace(g, fth);
    else if (n == "th3")
      into_map.emplace(g, Element::zero(ca));
    else if (ca->find(n) >= 0)
      into_map.emplace(g, Element::generator(ca, n));
    else
      into_map.emplace(g, Element::zero(ca));
  }
  Morphism into(ds.alg, ca, std::move(into_map), GradingCheck::ParityOnly);
  std::vector<Element> phi = datum_to_connection(ds, into, dth);

  LInftyAlgebra l = brackets_from_q(ce_from_lie(lie_from_group_law(f)));
  MCElement phi_alpha;
  for (int a = 0; a < ds.dim; ++a) phi_alpha.components.emplace(a, phi[static_cast<size_t>(a)]);
  rep.forward_flat = mc_check(phi_alpha, l, common.de_rham(1)).ok;

  int nfree = rep.descent_free;
  if (nfree != rep.mc_free) return rep;
  if (nfree == 0) {
    rep.round_trip = true;
    rep.backward_descent = true;
    for (int a = 0; a < ds.dim; ++a)
      rep.round_trip = rep.round_trip && phi[static_cast<size_t>(a)].is_zero() &&
                       ms.alpha[static_cast<size_t>(a)].is_zero();
    return rep;
  }

  std::map<int, int> bcol;
  for (int j = 0; j < nfree; ++j)
    bcol.emplace(ca->index_of(ds.alg->gen(ds.free_gens[static_cast<size_t>(j)]).name), j);
  QMatrix mat(nfree, nfree);
  std::vector<bool> slot(static_cast<size_t>(ca->size()), true);
  for (const auto& [g, j] : bcol) slot[static_cast<size_t>(g)] = false;

  auto nu_of_name = [&](const std::string& name) {
    std::vector<int> nu;
    std::string code = name.substr(name.find('_') + 1);
    if (code != "0")
      for (char ch : code) nu.push_back(ch - '1');
    return nu;
  };

  for (int r = 0; r < nfree; ++r) {
    const GenSpec& uspec = ms.ambient.algebra()->gen(ms.free_gens[static_cast<size_t>(r)]);
    int a = std::stoi(uspec.name.substr(1, uspec.name.find('_') - 1));
    std::vector<int> nu = nu_of_name(uspec.name);
    std::vector<std::pair<int, int>> key_entries;
    for (int i : nu) key_entries.emplace_back(ca->index_of("lam" + std::to_string(i + 1)), 1);
    key_entries.emplace_back(ca->index_of("d1_fth"), 1);
    std::sort(key_entries.begin(), key_entries.end());
    auto slots = split_by_slots(phi[static_cast<size_t>(a - 1)], slot);
    auto it = slots.find(Monomial(std::move(key_entries)));
    if (it == slots.end()) return rep;
    for (const auto& [m, c] : it->second.terms()) {
      const auto& entries = m.entries();
      if (entries.size() != 1 || entries[0].second != 1 || !bcol.count(entries[0].first))
        return rep;
      mat.at(r, bcol.at(entries[0].first)) = c;
    }
  }
  if (mat.rank() != nfree) return rep;

  auto maybe_inv = inverse(mat);
  if (!maybe_inv) return rep;
  QMatrix inv = *maybe_inv;

  {
    std::map<int, Element> images;
    const AlgebraPtr& ma = ms.ambient.algebra();
    for (int g = 0; g < ma->size(); ++g) {
      const std::string& n = ma->gen(g).name;
      int r = -1;
      for (int i = 0; i < nfree; ++i)
        if (ms.free_gens[static_cast<size_t>(i)] == g) r = i;
      if (r >= 0) {
        Element val = Element::zero(ca);
        for (const auto& [bg, j] : bcol) val += Element::generator(ca, bg) * mat.at(r, j);
        images.emplace(g, val);
      } else if (ca->find(n) >= 0) {
        images.emplace(g, Element::generator(ca, n));
      } else {
        images.emplace(g, Element::zero(ca));
      }
    }
    Morphism subst(ma, ca, std::move(images), GradingCheck::ParityOnly);
    rep.round_trip = true;
    for (int a = 0; a < ds.dim; ++a)
      rep.round_trip = rep.round_trip &&
                       subst(ms.alpha[static_cast<size_t>(a)]) == phi[static_cast<size_t>(a)];
  }

  {
    std::vector<GenSpec> extra;
    for (int g : ms.free_gens) extra.push_back(ms.ambient.algebra()->gen(g));
    AlgebraPtr ext = ds.alg->extended(extra);
    std::map<int, Element> images;
    for (int g = 0; g < ds.alg->size(); ++g) {
      const std::string& n = ds.alg->gen(g).name;
      int j = -1;
      for (int jj = 0; jj < nfree; ++jj)
        if (ds.free_gens[static_cast<size_t>(jj)] == g) j = jj;
      if (j >= 0) {
        Element val = Element::zero(ext);
        for (int r = 0; r < nfree; ++r) {
          const std::string& un =
              ms.ambient.algebra()->gen(ms.free_gens[static_cast<size_t>(r)]).name;
          val += Element::generator(ext, un) * inv.at(j, r);
        }
        images.emplace(g, val);
      } else {
        images.emplace(g, Element::generator(ext, n));
      }
    }
    Morphism back(ds.alg, ext, std::move(images), GradingCheck::ParityOnly);
    std::vector<Element> gb;
    for (int c = 0; c < ds.dim; ++c) gb.push_back(back(ds.g[static_cast<size_t>(c)]));

    int th1 = ext->index_of("th1");
    int th2 = ext->index_of("th2");
    int th3 = ext->index_of("th3");
    auto ren = [&](const std::map<int, Element>& repl) {
      std::map<int, Element> images2;
      for (int g = 0; g < ext->size(); ++g) {
        auto it2 = repl.find(g);
        images2.emplace(g, it2 != repl.end() ? it2->second : Element::generator(ext, g));
      }
      return Morphism(ext, ext, std::move(images2), GradingCheck::ParityOnly);
    };
    Morphism dg = ren({{th2, Element::generator(ext, th1)}});
    Morphism m23 =
        ren({{th1, Element::generator(ext, th2)}, {th2, Element::generator(ext, th3)}});
    Morphism m13 = ren({{th2, Element::generator(ext, th3)}});
    std::vector<Element> l23, l13;
    for (int c = 0; c < ds.dim; ++c) {
      l23.push_back(m23(gb[static_cast<size_t>(c)]));
      l13.push_back(m13(gb[static_cast<size_t>(c)]));
    }
    std::vector<Element> prod = f.multiply(gb, l23);
    rep.backward_descent = true;
    for (int c = 0; c < ds.dim; ++c)
      rep.backward_descent = rep.backward_descent && dg(gb[static_cast<size_t>(c)]).is_zero() &&
                             prod[static_cast<size_t>(c)] == l13[static_cast<size_t>(c)];
  }
  return rep;
}

bool descent_mc_natural(const PolyGroupLaw& f, int q_from, int q_to,
                        const std::vector<Element>& lambda_images) {
  if (static_cast<int>(lambda_images.size()) != q_from)
    throw std::invalid_argument("descent_mc_natural: one image per source parameter");
  DescentSolution ds = solve_descent(f, q_from);

  std::vector<GenSpec> params;
  for (int i = 1; i <= q_to; ++i) params.push_back({"lam" + std::to_string(i), 0, Parity::Odd});
  for (int g : ds.free_gens) params.push_back(ds.alg->gen(g));
  GradedManifold common =
      GradedManifold::make({{"fth", 0, Parity::Odd}}).pit().with_parameters(params);
  const AlgebraPtr& ca = common.algebra();
  Element fth = Element::generator(ca, "fth");
  Element dth = Element::generator(ca, "d1_fth");

  std::vector<GenSpec> bgens;
  bgens.push_back({"th1", 0, Parity::Odd});
  bgens.push_back({"th2", 0, Parity::Odd});
  bgens.push_back({"th3", 0, Parity::Odd});
  for (int i = 1; i <= q_to; ++i) bgens.push_back({"lam" + std::to_string(i), 0, Parity::Odd});
  for (int g : ds.free_gens) bgens.push_back(ds.alg->gen(g));
  AlgebraPtr big = Algebra::make(bgens);

  std::map<int, Element> hmap;
  for (int g = 0; g < ds.alg->size(); ++g) {
    const std::string& n = ds.alg->gen(g).name;
    if (n.rfind("lam", 0) == 0) {
      int i = std::stoi(n.substr(3));
      hmap.emplace(g, transport(lambda_images[static_cast<size_t>(i - 1)], big));
    } else if (big->find(n) >= 0) {
      hmap.emplace(g, Element::generator(big, n));
    } else {
      hmap.emplace(g, Element::zero(big));
    }
  }
  Morphism h(ds.alg, big, std::move(hmap), GradingCheck::ParityOnly);
  std::vector<Element> moved;
  for (int c = 0; c < ds.dim; ++c) moved.push_back(h(ds.g[static_cast<size_t>(c)]));

  int th1 = big->index_of("th1");
  int th2 = big->index_of("th2");
  int th3 = big->index_of("th3");
  auto ren = [&](const std::map<int, Element>& repl) {
    std::map<int, Element> images2;
    for (int g = 0; g < big->size(); ++g) {
      auto it2 = repl.find(g);
      images2.emplace(g, it2 != repl.end() ? it2->second : Element::generator(big, g));
    }
    return Morphism(big, big, std::move(images2), GradingCheck::ParityOnly);
  };
  Morphism dg = ren({{th2, Element::generator(big, th1)}});
  Morphism m23 = ren({{th1, Element::generator(big, th2)}, {th2, Element::generator(big, th3)}});
  Morphism m13 = ren({{th2, Element::generator(big, th3)}});
  std::vector<Element> l23, l13;
  for (int c = 0; c < ds.dim; ++c) {
    l23.push_back(m23(moved[static_cast<size_t>(c)]));
    l13.push_back(m13(moved[static_cast<size_t>(c)]));
  }
  std::vector<Element> prod = f.multiply(moved, l23);
  for (int c = 0; c < ds.dim; ++c)
    if (!dg(moved[static_cast<size_t>(c)]).is_zero() ||
        !(prod[static_cast<size_t>(c)] == l13[static_cast<size_t>(c)]))
      return false;

  std::map<int, Element> d2map;
  d2map.emplace(th2, Element::scalar(big, Rational(1)));
  Derivation d_th2(big, 0, Parity::Odd, std::move(d2map));
  std::map<int, Element> eval_images;
  for (int g = 0; g < big->size(); ++g) {
    const std::string& n = big->gen(g).name;
    if (n == "th1" || n == "th2")
      eval_images.emplace(g, fth);
    else if (n == "th3")
      eval_images.emplace(g, Element::zero(ca));
    else
      eval_images.emplace(g, Element::generator(ca, n));
  }
  Morphism eval(big, ca, std::move(eval_images), GradingCheck::ParityOnly);
  std::vector<Element> lhs;
  for (int c = 0; c < ds.dim; ++c) lhs.push_back(eval(d_th2(moved[static_cast<size_t>(c)])) * dth);

  std::map<int, Element> into_map;
  for (int g = 0; g < ds.alg->size(); ++g) {
    const std::string& n = ds.alg->gen(g).name;
    if (n == "th1" || n == "th2")
      into_map.emplace(g, fth);
    else if (n == "th3")
      into_map.emplace(g, Element::zero(ca));
    else if (n.rfind("lam", 0) == 0) {
      int i = std::stoi(n.substr(3));
      into_map.emplace(g, transport(lambda_images[static_cast<size_t>(i - 1)], ca));
    } else if (ca->find(n) >= 0)
      into_map.emplace(g, Element::generator(ca, n));
    else
      into_map.emplace(g, Element::zero(ca));
  }
  Morphism into(ds.alg, ca, std::move(into_map), GradingCheck::ParityOnly);
  std::vector<Element> rhs = datum_to_connection(ds, into, dth);

  for (int c = 0; c < ds.dim; ++c)
    if (!(lhs[static_cast<size_t>(c)] == rhs[static_cast<size_t>(c)])) return false;
  return true;
}

}  // namespace qjet
