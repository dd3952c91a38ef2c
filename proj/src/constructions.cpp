#include "qjet/constructions.hpp"

#include <algorithm>

namespace qjet {

namespace {

using Vec = std::map<int, Rational>;

Vec vec_add(const Vec& a, const Vec& b) {
  Vec out = a;
  for (const auto& [k, v] : b) {
    auto [it, inserted] = out.emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) out.erase(it);
    }
  }
  return out;
}

Vec vec_scale(const Vec& a, const Rational& c) {
  Vec out;
  if (c.is_zero()) return out;
  for (const auto& [k, v] : a) out.emplace(k, v * c);
  return out;
}

Vec vec_neg(const Vec& a) { return vec_scale(a, Rational(-1)); }

Vec basis_vec(int i) {
  Vec v;
  v.emplace(i, Rational(1));
  return v;
}

/// Bilinear extension of the bracket table to coefficient vectors.
Vec bracket_vec(const LieAlgebraData& g, const Vec& u, const Vec& v) {
  Vec out;
  for (const auto& [i, ci] : u)
    for (const auto& [j, cj] : v) out = vec_add(out, vec_scale(g.bracket(i, j), ci * cj));
  return out;
}

}  // namespace

std::optional<JacobiWitness> jacobi_violation(const LieAlgebraData& g) {
  int n = static_cast<int>(g.basis.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Vec r = bracket_vec(g, g.bracket(i, j), basis_vec(k));
        r = vec_add(r, bracket_vec(g, g.bracket(j, k), basis_vec(i)));
        r = vec_add(r, bracket_vec(g, g.bracket(k, i), basis_vec(j)));
        if (!r.empty()) return JacobiWitness{i, j, k, r};
      }
    }
  }
  return std::nullopt;
}

LInftyAlgebra crossed_to_dgla(const CrossedModule& cm) {
  int ng = static_cast<int>(cm.g.basis.size());
  int nh = static_cast<int>(cm.h.basis.size());
  if (static_cast<int>(cm.m.size()) != nh)
    throw AxiomError("m_shape", "m must assign an image to every h-basis vector");
  if (static_cast<int>(cm.mu.size()) != ng)
    throw AxiomError("mu_shape", "mu must be given on every g-basis vector");
  for (const auto& row : cm.mu)
    if (static_cast<int>(row.size()) != nh)
      throw AxiomError("mu_shape", "mu(x) must be given on every h-basis vector");

  if (auto w = jacobi_violation(cm.g))
    throw AxiomError("g_jacobi", "Jacobi fails on triple (" + std::to_string(w->i) + "," +
                                     std::to_string(w->j) + "," + std::to_string(w->k) + ")");
  if (auto w = jacobi_violation(cm.h))
    throw AxiomError("h_jacobi", "Jacobi fails on triple (" + std::to_string(w->i) + "," +
                                     std::to_string(w->j) + "," + std::to_string(w->k) + ")");

  auto m_of = [&](const Vec& hvec) {
    Vec out;
    for (const auto& [i, c] : hvec) out = vec_add(out, vec_scale(cm.m[static_cast<size_t>(i)], c));
    return out;
  };
  auto mu_of = [&](int a, const Vec& hvec) {
    Vec out;
    for (const auto& [i, c] : hvec)
      out = vec_add(out, vec_scale(cm.mu[static_cast<size_t>(a)][static_cast<size_t>(i)], c));
    return out;
  };
  auto mu_elem = [&](const Vec& gvec, const Vec& hvec) {
    Vec out;
    for (const auto& [a, c] : gvec) out = vec_add(out, vec_scale(mu_of(a, hvec), c));
    return out;
  };

  for (int i = 0; i < nh; ++i)
    for (int j = i + 1; j < nh; ++j) {
      Vec lhs = m_of(cm.h.bracket(i, j));
      Vec rhs = bracket_vec(cm.g, cm.m[static_cast<size_t>(i)], cm.m[static_cast<size_t>(j)]);
      if (lhs != rhs)
        throw AxiomError("m_not_lie_morphism", "m[h_" + std::to_string(i) + ", h_" +
                                                   std::to_string(j) + "] != [m h, m h']");
    }
  for (int a = 0; a < ng; ++a)
    for (int i = 0; i < nh; ++i)
      for (int j = i + 1; j < nh; ++j) {
        Vec lhs = mu_of(a, cm.h.bracket(i, j));
        Vec rhs = vec_add(bracket_vec(cm.h, mu_of(a, basis_vec(i)), basis_vec(j)),
                          bracket_vec(cm.h, basis_vec(i), mu_of(a, basis_vec(j))));
        if (lhs != rhs)
          throw AxiomError("mu_not_derivation",
                           "mu(x_" + std::to_string(a) + ") is not a derivation on (h_" +
                               std::to_string(i) + ", h_" + std::to_string(j) + ")");
      }
  for (int a = 0; a < ng; ++a)
    for (int b = a + 1; b < ng; ++b)
      for (int i = 0; i < nh; ++i) {
        Vec lhs = mu_elem(cm.g.bracket(a, b), basis_vec(i));
        Vec rhs = vec_add(mu_of(a, mu_of(b, basis_vec(i))),
                          vec_neg(mu_of(b, mu_of(a, basis_vec(i)))));
        if (lhs != rhs)
          throw AxiomError("mu_not_action", "mu([x_" + std::to_string(a) + ", x_" +
                                                std::to_string(b) + "]) disagrees on h_" +
                                                std::to_string(i));
      }
  for (int a = 0; a < ng; ++a)
    for (int i = 0; i < nh; ++i) {
      Vec lhs = m_of(mu_of(a, basis_vec(i)));
      Vec rhs = bracket_vec(cm.g, basis_vec(a), cm.m[static_cast<size_t>(i)]);
      if (lhs != rhs)
        throw AxiomError("equivariance", "m(mu(x_" + std::to_string(a) + ") h_" +
                                             std::to_string(i) + ") != [x, m h]");
    }
  for (int i = 0; i < nh; ++i)
    for (int j = 0; j < nh; ++j) {
      Vec lhs = mu_elem(cm.m[static_cast<size_t>(i)], basis_vec(j));
      Vec rhs = cm.h.bracket(i, j);
      if (lhs != rhs)
        throw AxiomError("peiffer", "mu(m(h_" + std::to_string(i) + ")) h_" + std::to_string(j) +
                                        " != [h, h']");
    }

  std::vector<BasisVector> basis;
  for (const auto& n : cm.h.basis) basis.push_back({n, -1, Parity::Odd});
  for (const auto& n : cm.g.basis) basis.push_back({n, 0, Parity::Even});

  BracketTable table;
  for (int i = 0; i < nh; ++i) {
    std::map<int, Rational> tgt;
    for (const auto& [a, c] : cm.m[static_cast<size_t>(i)]) tgt.emplace(nh + a, c);
    if (!tgt.empty()) table.emplace(std::vector<int>{i}, std::move(tgt));
  }
  for (const auto& [ab, vals] : cm.g.canonical()) {
    std::map<int, Rational> tgt;
    for (const auto& [c, v] : vals) tgt.emplace(nh + c, v);
    table.emplace(std::vector<int>{nh + ab.first, nh + ab.second}, std::move(tgt));
  }
  for (int i = 0; i < nh; ++i)
    for (int a = 0; a < ng; ++a) {
      Vec v = vec_neg(cm.mu[static_cast<size_t>(a)][static_cast<size_t>(i)]);
      if (!v.empty()) table.emplace(std::vector<int>{i, nh + a}, std::move(v));
    }
  return LInftyAlgebra(std::move(basis), std::move(table));
}

namespace {

std::vector<Element> slot_point(const AlgebraPtr& alg, int dim, int slot) {
  std::vector<Element> p;
  for (int k = 0; k < dim; ++k) p.push_back(Element::generator(alg, slot * dim + k));
  return p;
}

std::vector<Element> eval_map(const std::vector<Element>& components, int dim,
                              const std::vector<std::vector<Element>>& points) {
  const AlgebraPtr& src = components[0].algebra();
  const AlgebraPtr& target = points[0][0].algebra();
  std::map<int, Element> images;
  for (size_t s = 0; s < points.size(); ++s)
    for (int k = 0; k < dim; ++k)
      images.emplace(static_cast<int>(s) * dim + k, points[s][static_cast<size_t>(k)]);
  Morphism point(src, target, std::move(images), GradingCheck::ParityOnly);
  std::vector<Element> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(point(c));
  return out;
}

std::vector<std::vector<Element>> eval_mu(const GroupCocycle& c,
                                          const std::vector<Element>& point) {
  std::vector<std::vector<Element>> out;
  for (const auto& row : c.mu) {
    std::vector<Element> r;
    for (const auto& entry : row) r.push_back(eval_map({entry}, c.law.dim(), {point})[0]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

void validate_cocycle(const GroupCocycle& c) {
  int dim = c.law.dim();
  int n = c.arity;
  if (n < 1) throw AxiomError("arity", "cocycle arity must be positive");
  if (static_cast<int>(c.phi.size()) != c.h_dim)
    throw AxiomError("phi_shape", "phi needs one component per h-coordinate");
  const AlgebraPtr& slots = c.phi[0].algebra();
  if (slots->size() != dim * n)
    throw AxiomError("phi_shape", "phi must live over the arity-slot algebra");

  bool trivial_mu = c.mu.empty();
  if (!trivial_mu) {
    if (static_cast<int>(c.mu.size()) != c.h_dim)
      throw AxiomError("mu_shape", "mu must be h_dim x h_dim");
    for (const auto& row : c.mu)
      if (static_cast<int>(row.size()) != c.h_dim)
        throw AxiomError("mu_shape", "mu must be h_dim x h_dim");
    const AlgebraPtr& one = c.mu[0][0].algebra();
    std::vector<Element> origin(static_cast<size_t>(dim), Element::zero(one));
    for (int i = 0; i < c.h_dim; ++i)
      for (int j = 0; j < c.h_dim; ++j) {
        Element at0 =
            eval_map({c.mu[static_cast<size_t>(i)][static_cast<size_t>(j)]}, dim, {origin})[0];
        Element want = i == j ? Element::scalar(one, Rational(1)) : Element::zero(one);
        if (!(at0 == want)) throw AxiomError("mu_identity", "mu(0) != id");
      }
    AlgebraPtr two = slot_algebra(dim, 2);
    auto p1 = slot_point(two, dim, 0);
    auto p2 = slot_point(two, dim, 1);
    auto mu_prod = eval_mu(c, c.law.multiply(p1, p2));
    auto mu1 = eval_mu(c, p1);
    auto mu2 = eval_mu(c, p2);
    for (int i = 0; i < c.h_dim; ++i)
      for (int j = 0; j < c.h_dim; ++j) {
        Element rhs = Element::zero(two);
        for (int k = 0; k < c.h_dim; ++k)
          rhs += mu1[static_cast<size_t>(i)][static_cast<size_t>(k)] *
                 mu2[static_cast<size_t>(k)][static_cast<size_t>(j)];
        if (!(mu_prod[static_cast<size_t>(i)][static_cast<size_t>(j)] == rhs))
          throw AxiomError("mu_not_multiplicative", "mu(g g') != mu(g) mu(g')");
      }
  }

  AlgebraPtr big = slot_algebra(dim, n + 1);
  std::vector<std::vector<Element>> pts;
  for (int s = 0; s <= n; ++s) pts.push_back(slot_point(big, dim, s));

  std::vector<Element> total(static_cast<size_t>(c.h_dim), Element::zero(big));
  {
    std::vector<std::vector<Element>> tail(pts.begin() + 1, pts.end());
    std::vector<Element> phi_tail = eval_map(c.phi, dim, tail);
    if (trivial_mu) {
      for (int i = 0; i < c.h_dim; ++i)
        total[static_cast<size_t>(i)] += phi_tail[static_cast<size_t>(i)];
    } else {
      auto mu1 = eval_mu(c, pts[0]);
      for (int i = 0; i < c.h_dim; ++i)
        for (int j = 0; j < c.h_dim; ++j)
          total[static_cast<size_t>(i)] += mu1[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                                           phi_tail[static_cast<size_t>(j)];
    }
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<std::vector<Element>> args;
    for (int s = 0; s < i - 1; ++s) args.push_back(pts[static_cast<size_t>(s)]);
    args.push_back(c.law.multiply(pts[static_cast<size_t>(i - 1)], pts[static_cast<size_t>(i)]));
    for (int s = i + 1; s <= n; ++s) args.push_back(pts[static_cast<size_t>(s)]);
    std::vector<Element> term = eval_map(c.phi, dim, args);
    Rational sign(i % 2 == 0 ? 1 : -1);
    for (int k = 0; k < c.h_dim; ++k)
      total[static_cast<size_t>(k)] += term[static_cast<size_t>(k)] * sign;
  }
  {
    std::vector<std::vector<Element>> head(pts.begin(), pts.end() - 1);
    std::vector<Element> term = eval_map(c.phi, dim, head);
    Rational sign((n + 1) % 2 == 0 ? 1 : -1);
    for (int k = 0; k < c.h_dim; ++k)
      total[static_cast<size_t>(k)] += term[static_cast<size_t>(k)] * sign;
  }
  for (int k = 0; k < c.h_dim; ++k)
    if (!total[static_cast<size_t>(k)].is_zero())
      throw AxiomError("cocycle_identity",
                       "group cocycle identity fails in h-component " + std::to_string(k));
}

MultiTable vanest(const GroupCocycle& c) {
  validate_cocycle(c);
  int dim = c.law.dim();
  int n = c.arity;

  auto ml = [&](const std::vector<int>& js, int h) {
    std::vector<std::pair<int, int>> entries;
    for (int s = 0; s < n; ++s) entries.emplace_back(s * dim + js[static_cast<size_t>(s)], 1);
    std::sort(entries.begin(), entries.end());
    return c.phi[static_cast<size_t>(h)].coefficient(Monomial(std::move(entries)));
  };

  MultiTable out;
  std::vector<int> tuple;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(tuple.size()) == n) {
      std::vector<Rational> value(static_cast<size_t>(c.h_dim), Rational(0));
      std::vector<int> perm(tuple);
      do {
        int inv = 0;
        for (size_t a = 0; a < perm.size(); ++a)
          for (size_t b = a + 1; b < perm.size(); ++b)
            if (perm[a] > perm[b]) ++inv;
        Rational sign(inv % 2 == 0 ? 1 : -1);
        for (int h = 0; h < c.h_dim; ++h) value[static_cast<size_t>(h)] += ml(perm, h) * sign;
      } while (std::next_permutation(perm.begin(), perm.end()));
      bool nonzero = false;
      for (const auto& v : value) nonzero = nonzero || !v.is_zero();
      if (nonzero) out.emplace(tuple, std::move(value));
      return;
    }
    for (int j = start; j < dim; ++j) {
      tuple.push_back(j);
      self(self, j + 1);
      tuple.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

LInftyAlgebra cocycle_to_linfty(const LieAlgebraData& g, const GroupCocycle& c) {
  if (static_cast<int>(g.basis.size()) != c.law.dim())
    throw std::invalid_argument("cocycle_to_linfty: g must match the group dimension");
  MultiTable ve = vanest(c);
  int ng = c.law.dim();
  int nh = c.h_dim;
  int n = c.arity;
  int hdeg = 2 - n;

  std::vector<BasisVector> basis;
  for (int i = 1; i <= nh; ++i) basis.push_back({"h" + std::to_string(i), hdeg, parity_of(hdeg)});
  for (const auto& nm : g.basis) basis.push_back({nm, 0, Parity::Even});

  auto add_entry = [](BracketTable& table, std::vector<int> key, int target, const Rational& v) {
    if (v.is_zero()) return;
    auto& slot = table[std::move(key)];
    auto [it, inserted] = slot.emplace(target, v);
    if (!inserted) it->second += v;
  };

  BracketTable table;
  for (const auto& [ab, vals] : g.canonical())
    for (const auto& [k, v] : vals)
      add_entry(table, {nh + ab.first, nh + ab.second}, nh + k, v);
  if (!c.mu.empty()) {
    for (int i = 0; i < nh; ++i)
      for (int a = 0; a < ng; ++a)
        for (int j = 0; j < nh; ++j) {
          Rational v = c.mu[static_cast<size_t>(j)][static_cast<size_t>(i)].coefficient(
              Monomial({{a, 1}}));
          add_entry(table, {i, nh + a}, j, -v);
        }
  }
  for (const auto& [tuple, vals] : ve) {
    std::vector<int> key;
    for (int j : tuple) key.push_back(nh + j);
    for (int h = 0; h < nh; ++h) add_entry(table, key, h, vals[static_cast<size_t>(h)]);
  }
  for (auto it = table.begin(); it != table.end();) {
    for (auto vit = it->second.begin(); vit != it->second.end();)
      vit = vit->second.is_zero() ? it->second.erase(vit) : std::next(vit);
    it = it->second.empty() ? table.erase(it) : std::next(it);
  }
  return LInftyAlgebra(std::move(basis), std::move(table));
}

WeilAlgebra weil(const LieAlgebraData& g, bool validate) {
  if (validate) {
    if (auto w = jacobi_violation(g))
      throw AxiomError("jacobi", "Jacobi fails on triple (" + std::to_string(w->i) + "," +
                                     std::to_string(w->j) + "," + std::to_string(w->k) + ")");
  }
  int n = static_cast<int>(g.basis.size());
  std::vector<GenSpec> gens;
  for (const auto& nm : g.basis) gens.push_back({"xi_" + nm, 1, Parity::Odd});
  for (const auto& nm : g.basis) gens.push_back({"t_" + nm, 2, Parity::Even});
  GradedManifold m = GradedManifold::make(std::move(gens));
  const AlgebraPtr& alg = m.algebra();
  auto xi = [&](int a) { return Element::generator(alg, a); };
  auto tt = [&](int a) { return Element::generator(alg, n + a); };

  auto canon = g.canonical();
  std::map<int, Element> dvals;
  for (int a = 0; a < n; ++a) {
    Element v = tt(a);  // d xi^a = t^a - 1/2 c^a_{bc} xi^b xi^c
    for (const auto& [bc, vals] : canon) {
      auto it = vals.find(a);
      if (it != vals.end()) v += xi(bc.first) * xi(bc.second) * (-it->second);
    }
    dvals.emplace(a, std::move(v));
    Element w = Element::zero(alg);  // d t^a = -c^a_{bc} xi^b t^c
    for (int b = 0; b < n; ++b)
      for (int cdx = 0; cdx < n; ++cdx) {
        auto br = g.bracket(b, cdx);
        auto it = br.find(a);
        if (it != br.end()) w += xi(b) * tt(cdx) * (-it->second);
      }
    if (!w.is_zero()) dvals.emplace(n + a, std::move(w));
  }
  Derivation d(alg, 1, Parity::Odd, std::move(dvals));

  WeilAlgebra w{std::move(m), d, {}, {}};
  for (int a = 0; a < n; ++a) {
    std::map<int, Element> iv;
    iv.emplace(a, Element::scalar(alg, Rational(1)));
    w.iota.emplace_back(alg, -1, Parity::Odd, std::move(iv));
  }
  for (int a = 0; a < n; ++a) w.lie.push_back(commutator(w.d, w.iota[static_cast<size_t>(a)]));
  return w;
}

std::vector<std::string> weil_cartan_violations(const WeilAlgebra& w, const LieAlgebraData& g) {
  std::vector<std::string> bad;
  int n = static_cast<int>(g.basis.size());
  const AlgebraPtr& alg = w.manifold.algebra();
  auto is_zero_derivation = [&](const Derivation& d) {
    for (int i = 0; i < alg->size(); ++i)
      if (!d.value(i).is_zero()) return false;
    return true;
  };
  auto lie_combination = [&](const std::map<int, Rational>& br, int degree, Parity parity,
                             const std::vector<Derivation>& family) {
    std::map<int, Element> vals;
    for (int i = 0; i < alg->size(); ++i) {
      Element v = Element::zero(alg);
      for (const auto& [c, coef] : br) v += family[static_cast<size_t>(c)].value(i) * coef;
      if (!v.is_zero()) vals.emplace(i, v);
    }
    return Derivation(alg, degree, parity, std::move(vals));
  };

  if (!check_q(w.manifold, w.d).ok()) bad.push_back("d_squared");

  bool iota_ok = true;
  for (int a = 0; a < n && iota_ok; ++a)
    for (int b = a; b < n && iota_ok; ++b)
      iota_ok = is_zero_derivation(
          commutator(w.iota[static_cast<size_t>(a)], w.iota[static_cast<size_t>(b)]));
  if (!iota_ok) bad.push_back("iota_iota");

  bool li_ok = true;
  for (int a = 0; a < n && li_ok; ++a)
    for (int b = 0; b < n && li_ok; ++b) {
      Derivation lhs = commutator(w.lie[static_cast<size_t>(a)], w.iota[static_cast<size_t>(b)]);
      Derivation rhs = lie_combination(g.bracket(a, b), -1, Parity::Odd, w.iota);
      li_ok = lhs == rhs;
    }
  if (!li_ok) bad.push_back("lie_iota");

  bool ll_ok = true;
  for (int a = 0; a < n && ll_ok; ++a)
    for (int b = 0; b < n && ll_ok; ++b) {
      Derivation lhs = commutator(w.lie[static_cast<size_t>(a)], w.lie[static_cast<size_t>(b)]);
      Derivation rhs = lie_combination(g.bracket(a, b), 0, Parity::Even, w.lie);
      ll_ok = lhs == rhs;
    }
  if (!ll_ok) bad.push_back("lie_lie");

  bool ld_ok = true;
  for (int a = 0; a < n && ld_ok; ++a)
    ld_ok = is_zero_derivation(commutator(w.lie[static_cast<size_t>(a)], w.d));
  if (!ld_ok) bad.push_back("lie_d");

  return bad;
}

GerbeTwoForm gerbe_two_form(int p, const Element& h) {
  const AlgebraPtr& slots3 = h.algebra();
  if (slots3->size() != 3 * p)
    throw std::invalid_argument("gerbe_two_form: h must live over three fibre slots");

  auto sub3 = [&](int s1, int s2, int s3, const AlgebraPtr& target) {
    std::map<int, Element> images;
    for (int k = 0; k < p; ++k) {
      images.emplace(k, Element::generator(target, s1 * p + k));
      images.emplace(p + k, Element::generator(target, s2 * p + k));
      images.emplace(2 * p + k, Element::generator(target, s3 * p + k));
    }
    return Morphism(slots3, target, std::move(images))(h);
  };
  AlgebraPtr two = slot_algebra(p, 2, "f");
  if (!sub3(0, 0, 1, two).is_zero()) throw AxiomError("gerbe_normalization", "h(x,x,y) != 0");
  if (!sub3(0, 1, 1, two).is_zero()) throw AxiomError("gerbe_normalization", "h(x,y,y) != 0");

  AlgebraPtr four = slot_algebra(p, 4, "f");
  Element cocycle =
      sub3(0, 1, 2, four) + sub3(0, 2, 3, four) - sub3(0, 1, 3, four) - sub3(1, 2, 3, four);
  if (!cocycle.is_zero()) throw AxiomError("gerbe_cocycle", "additive cocycle identity fails");

  std::vector<GenSpec> fg;
  for (int k = 1; k <= p; ++k) fg.push_back({"x" + std::to_string(k), 0, Parity::Even});
  GradedManifold forms = GradedManifold::make(std::move(fg)).pit();

  std::vector<GenSpec> stg;
  for (int k = 1; k <= p; ++k) stg.push_back({"x" + std::to_string(k), 0, Parity::Even});
  stg.push_back({"s", 0, Parity::Even});
  stg.push_back({"t", 0, Parity::Even});
  AlgebraPtr ast = Algebra::make(std::move(stg));
  Element s = Element::generator(ast, "s");
  Element t = Element::generator(ast, "t");
  int sidx = ast->index_of("s");
  int tidx = ast->index_of("t");

  // mixed first derivative of h(x, x + s e_i, x + t e_j) at s = t = 0
  auto mixed = [&](int i, int j) {
    std::map<int, Element> images;
    for (int k = 0; k < p; ++k) {
      Element xk = Element::generator(ast, k);
      images.emplace(k, xk);
      images.emplace(p + k, k == i ? xk + s : xk);
      images.emplace(2 * p + k, k == j ? xk + t : xk);
    }
    Element val = Morphism(slots3, ast, std::move(images))(h);
    ElementBuilder out(ast);
    for (const auto& [m, c] : val.terms()) {
      if (m.exponent_of(sidx) == 1 && m.exponent_of(tidx) == 1) {
        std::vector<std::pair<int, int>> rest;
        for (auto [g, e] : m.entries())
          if (g != sidx && g != tidx) rest.emplace_back(g, e);
        out.add(Monomial(std::move(rest)), c);
      }
    }
    return out.take();
  };

  ElementBuilder omega(forms.algebra());
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      Element a_ij = mixed(i, j) - mixed(j, i);
      if (a_ij.is_zero()) continue;
      Element coeff = transport(a_ij, forms.algebra());
      Element dxi = Element::generator(forms.algebra(), "d1_x" + std::to_string(i + 1));
      Element dxj = Element::generator(forms.algebra(), "d1_x" + std::to_string(j + 1));
      omega.add(coeff * dxi * dxj);
    }
  GerbeTwoForm out{forms, omega.take()};
  if (!forms.de_rham(1)(out.omega).is_zero())
    throw std::logic_error("gerbe_two_form: output failed the closedness check");
  return out;
}

Element gerbe_one_form(int p, const Element& a, const GradedManifold& forms) {
  const AlgebraPtr& slots2 = a.algebra();
  if (slots2->size() != 2 * p)
    throw std::invalid_argument("gerbe_one_form: a must live over two fibre slots");
  std::vector<GenSpec> stg;
  for (int k = 1; k <= p; ++k) stg.push_back({"x" + std::to_string(k), 0, Parity::Even});
  stg.push_back({"t", 0, Parity::Even});
  AlgebraPtr ast = Algebra::make(std::move(stg));
  Element t = Element::generator(ast, "t");
  int tidx = ast->index_of("t");

  ElementBuilder lambda(forms.algebra());
  for (int i = 0; i < p; ++i) {
    std::map<int, Element> images;
    for (int k = 0; k < p; ++k) {
      Element xk = Element::generator(ast, k);
      images.emplace(k, xk);
      images.emplace(p + k, k == i ? xk + t : xk);
    }
    Element val = Morphism(slots2, ast, std::move(images))(a);
    ElementBuilder li(ast);
    for (const auto& [m, c] : val.terms()) {
      if (m.exponent_of(tidx) == 1) {
        std::vector<std::pair<int, int>> rest;
        for (auto [g, e] : m.entries())
          if (g != tidx) rest.emplace_back(g, e);
        li.add(Monomial(std::move(rest)), c);
      }
    }
    Element coeff = transport(li.take(), forms.algebra());
    lambda.add(coeff * Element::generator(forms.algebra(), "d1_x" + std::to_string(i + 1)));
  }
  return lambda.take();
}

Element gerbe_coboundary(int p, const Element& a) {
  const AlgebraPtr& slots2 = a.algebra();
  if (slots2->size() != 2 * p)
    throw std::invalid_argument("gerbe_coboundary: a must live over two fibre slots");
  AlgebraPtr three = slot_algebra(p, 3, "f");
  auto sub2 = [&](int s1, int s2) {
    std::map<int, Element> images;
    for (int k = 0; k < p; ++k) {
      images.emplace(k, Element::generator(three, s1 * p + k));
      images.emplace(p + k, Element::generator(three, s2 * p + k));
    }
    return Morphism(slots2, three, std::move(images))(a);
  };
  return sub2(1, 2) - sub2(0, 2) + sub2(0, 1);
}

QStructure pair_maps_jet(int p, int jet_order) {
  if (jet_order != 1)
    throw std::invalid_argument("pair_maps_jet: only first-order jets are supported");
  if (p < 1) throw std::invalid_argument("pair_maps_jet: fibre dimension must be positive");

  auto name = [&](const char* stem, int k) {
    return p == 1 ? std::string(stem) : std::string(stem) + std::to_string(k);
  };
  std::vector<GenSpec> final_gens;
  for (int k = 1; k <= p; ++k) {
    final_gens.push_back({name("x", k), 0, Parity::Even});
    final_gens.push_back({name("xi", k), 1, Parity::Odd});
    final_gens.push_back({name("tau", k), 1, Parity::Odd});
    final_gens.push_back({name("t", k), 2, Parity::Even});
  }
  std::vector<GenSpec> big = final_gens;
  big.push_back({"th1_", -1, Parity::Odd});
  big.push_back({"th2_", -1, Parity::Odd});
  big.push_back({"beta_", -1, Parity::Odd});
  AlgebraPtr ba = Algebra::make(big);
  AlgebraPtr fa = Algebra::make(final_gens);
  int th1 = ba->index_of("th1_");
  int th2 = ba->index_of("th2_");
  int beta = ba->index_of("beta_");

  std::map<int, Element> shift;
  for (int g = 0; g < ba->size(); ++g) shift.emplace(g, Element::generator(ba, g));
  shift.insert_or_assign(th1, Element::generator(ba, th1) + Element::generator(ba, beta));
  shift.insert_or_assign(th2, Element::generator(ba, th2) + Element::generator(ba, beta));
  Morphism act(ba, ba, std::move(shift));

  auto slot = [&](const Element& e, bool want1, bool want2) {
    ElementBuilder out(ba);
    for (const auto& [m, c] : e.terms()) {
      bool has1 = m.exponent_of(th1) == 1;
      bool has2 = m.exponent_of(th2) == 1;
      if (has1 == want1 && has2 == want2) out.add(m, c);
    }
    Element kept = out.take();
    if (want2) kept = strip_right(kept, th2);
    if (want1) kept = strip_right(kept, th1);
    return kept;
  };

  std::map<int, Element> raw_q;
  for (int k = 1; k <= p; ++k) {
    Element x = Element::generator(ba, name("x", k));
    Element xi = Element::generator(ba, name("xi", k));
    Element tau = Element::generator(ba, name("tau", k));
    Element tk = Element::generator(ba, name("t", k));
    Element th1e = Element::generator(ba, th1);
    Element th2e = Element::generator(ba, th2);
    Element f = x + xi * th1e + tau * th2e + tk * th1e * th2e;
    Element g = act(f);
    raw_q.emplace(ba->index_of(name("x", k)), strip_right(slot(g, false, false) - x, beta));
    raw_q.emplace(ba->index_of(name("xi", k)), strip_right(slot(g, true, false) - xi, beta));
    raw_q.emplace(ba->index_of(name("tau", k)), strip_right(slot(g, false, true) - tau, beta));
    raw_q.emplace(ba->index_of(name("t", k)), strip_right(slot(g, true, true) - tk, beta));
  }

  // canonical change xi' = xi + tau straightens the differential
  std::map<int, Element> to_big, to_final;
  for (int g = 0; g < fa->size(); ++g) {
    const std::string& nm = fa->gen(g).name;
    int bg = ba->index_of(nm);
    if (nm.rfind("xi", 0) == 0) {
      std::string tau_name = "tau" + nm.substr(2);
      to_big.emplace(g, Element::generator(ba, nm) + Element::generator(ba, tau_name));
      to_final.emplace(bg, Element::generator(fa, nm) - Element::generator(fa, tau_name));
    } else {
      to_big.emplace(g, Element::generator(ba, nm));
      to_final.emplace(bg, Element::generator(fa, nm));
    }
  }
  to_final.emplace(th1, Element::zero(fa));
  to_final.emplace(th2, Element::zero(fa));
  to_final.emplace(beta, Element::zero(fa));
  Morphism up(fa, ba, std::move(to_big));
  Morphism down(ba, fa, std::move(to_final), GradingCheck::ParityOnly);

  Derivation raw = Derivation::unchecked(ba, 1, Parity::Odd, std::move(raw_q));
  std::map<int, Element> qvals;
  for (int g = 0; g < fa->size(); ++g)
    qvals.emplace(g, down(raw(up(Element::generator(fa, g)))));

  GradedManifold m = GradedManifold::make(final_gens);
  std::map<int, Element> moved;
  for (auto& [g, v] : qvals) moved.emplace(g, transport(v, m.algebra()));
  return QStructure(m, Derivation(m.algebra(), 1, Parity::Odd, std::move(moved)));
}

ClosedFormsJet closed_forms_jet(int k) {
  if (k < 0) throw std::invalid_argument("closed_forms_jet: k must be nonnegative");
  GradedManifold forms = GradedManifold::make({{"th", 0, Parity::Odd}}).pit();
  return ClosedFormsJet{forms, closed_form_basis(forms.de_rham(1), k)};
}

}  // namespace qjet
