#include "qjet/dgman.hpp"

#include <bit>

#include "qjet/linalg.hpp"
#include <stdexcept>

namespace qjet {

GradedManifold GradedManifold::make(std::vector<GenSpec> coords) {
  auto impl = std::make_shared<Impl>();
  impl->alg = Algebra::make(coords);
  impl->info.resize(coords.size());
  for (size_t i = 0; i < coords.size(); ++i) impl->info[i] = GenInfo{static_cast<int>(i), 0, false};
  impl->depth = 0;
  return GradedManifold(std::move(impl));
}

int GradedManifold::coord_count() const {
  int n = 0;
  for (const auto& gi : impl_->info)
    if (!gi.param) ++n;
  return n;
}

GradedManifold GradedManifold::pit() const {
  if (impl_->pit_cache) return GradedManifold(impl_->pit_cache);
  auto child = std::make_shared<Impl>();
  child->depth = impl_->depth + 1;
  std::vector<GenSpec> gens = impl_->alg->gens();
  child->info = impl_->info;
  std::string prefix = "d" + std::to_string(child->depth) + "_";
  for (int g = 0; g < impl_->alg->size(); ++g) {
    const GenInfo& gi = impl_->info[static_cast<size_t>(g)];
    if (gi.param) continue;
    const GenSpec& spec = impl_->alg->gen(g);
    gens.push_back(GenSpec{prefix + spec.name, spec.degree + 1, flip(spec.parity)});
    child->info.push_back(
        GenInfo{gi.base, gi.levels | (1u << (child->depth - 1)), false});
  }
  child->alg = Algebra::make(std::move(gens));
  impl_->pit_cache = child;
  return GradedManifold(std::move(child));
}

GradedManifold GradedManifold::with_parameters(std::vector<GenSpec> params) const {
  auto child = std::make_shared<Impl>();
  child->depth = impl_->depth;
  child->info = impl_->info;
  for (size_t i = 0; i < params.size(); ++i) child->info.push_back(GenInfo{-1, 0, true});
  child->alg = impl_->alg->extended(std::move(params));
  return GradedManifold(std::move(child));
}

int GradedManifold::partner(int gen, int level) const {
  if (level < 1 || level > impl_->depth) throw std::invalid_argument("partner: bad level");
  const GenInfo& gi = impl_->info.at(static_cast<size_t>(gen));
  if (gi.param) return -1;
  std::uint32_t bit = 1u << (level - 1);
  if (gi.levels & bit) return -1;
  std::uint32_t want = gi.levels | bit;
  for (size_t j = 0; j < impl_->info.size(); ++j) {
    const GenInfo& gj = impl_->info[j];
    if (!gj.param && gj.base == gi.base && gj.levels == want) return static_cast<int>(j);
  }
  return -1;
}

Derivation GradedManifold::de_rham(int level) const {
  if (level < 1 || level > impl_->depth) throw std::invalid_argument("de_rham: bad level");
  std::map<int, Element> vals;
  for (int g = 0; g < gen_count(); ++g) {
    int p = partner(g, level);
    if (p < 0) continue;
    // anticommuting level differentials: sign counts levels above this one
    std::uint32_t above = impl_->info[static_cast<size_t>(g)].levels >> level;
    int sign = (std::popcount(above) % 2 == 0) ? 1 : -1;
    vals.emplace(g, Element::generator(impl_->alg, p) * Rational(sign));
  }
  return Derivation(impl_->alg, 1, Parity::Odd, std::move(vals));
}

Derivation GradedManifold::euler() const {
  std::map<int, Element> vals;
  for (int g = 0; g < gen_count(); ++g) {
    if (is_param(g)) continue;
    int d = impl_->alg->gen(g).degree;
    if (d != 0) vals.emplace(g, Element::generator(impl_->alg, g) * Rational(d));
  }
  return Derivation(impl_->alg, 0, Parity::Even, std::move(vals));
}

Derivation GradedManifold::level_euler(int level) const {
  if (level < 1 || level > impl_->depth) throw std::invalid_argument("level_euler: bad level");
  std::uint32_t bit = 1u << (level - 1);
  std::map<int, Element> vals;
  for (int g = 0; g < gen_count(); ++g) {
    const GenInfo& gi = impl_->info[static_cast<size_t>(g)];
    if (!gi.param && (gi.levels & bit)) vals.emplace(g, Element::generator(impl_->alg, g));
  }
  return Derivation(impl_->alg, 0, Parity::Even, std::move(vals));
}

bool GradedManifold::is_dg_manifold() const {
  for (int g = 0; g < gen_count(); ++g) {
    if (is_param(g)) continue;
    const GenSpec& s = impl_->alg->gen(g);
    if (s.parity != parity_of(s.degree)) return false;
  }
  return true;
}

bool GradedManifold::is_non_negatively_graded() const {
  for (int g = 0; g < gen_count(); ++g)
    if (!is_param(g) && impl_->alg->gen(g).degree < 0) return false;
  return true;
}

QStructure::QStructure(GradedManifold manifold_, Derivation q_)
    : manifold(std::move(manifold_)), q(std::move(q_)) {
  if (q.algebra() != manifold.algebra())
    throw std::invalid_argument("QStructure: derivation over a different algebra");
  if (q.degree() != 1) throw std::invalid_argument("QStructure: Q must have degree +1");
  if (q.parity() != Parity::Odd) throw std::invalid_argument("QStructure: Q must be odd");
}

QCheckResult check_q(const GradedManifold& x, const Derivation& q) {
  QCheckResult r;
  if (q.degree() != 1) {
    r.status = QCheckResult::Status::WrongDegree;
    r.detail = "Q has degree " + std::to_string(q.degree()) + ", expected +1";
    return r;
  }
  if (q.parity() != Parity::Odd) {
    r.status = QCheckResult::Status::WrongParity;
    r.detail = "Q must be odd";
    return r;
  }
  for (int g = 0; g < x.gen_count(); ++g) {
    if (x.is_param(g)) continue;
    Element qq = q(q(Element::generator(x.algebra(), g)));
    if (!qq.is_zero()) {
      r.status = QCheckResult::Status::SquareNonzero;
      r.witness = x.algebra()->gen(g).name;
      r.detail = "Q^2(" + r.witness + ") = " + qq.str();
      return r;
    }
  }
  return r;
}

QCheckResult check_q_values(const GradedManifold& x, const std::map<int, Element>& values) {
  std::string grading_problem;
  for (const auto& [g, v] : values) {
    if (v.is_zero()) continue;
    const GenSpec& spec = x.algebra()->gen(g);
    if (!v.is_homogeneous(spec.degree + 1))
      grading_problem += "Q(" + spec.name + ") is not of degree " +
                         std::to_string(spec.degree + 1) + "; ";
    else if (!v.has_parity(flip(spec.parity)))
      grading_problem += "Q(" + spec.name + ") has wrong parity; ";
  }
  Derivation q = Derivation::unchecked(x.algebra(), 1, Parity::Odd, values);
  QCheckResult square;
  for (int g = 0; g < x.gen_count(); ++g) {
    if (x.is_param(g)) continue;
    Element qq = q(q(Element::generator(x.algebra(), g)));
    if (!qq.is_zero()) {
      square.status = QCheckResult::Status::SquareNonzero;
      square.witness = x.algebra()->gen(g).name;
      square.detail = "Q^2(" + square.witness + ") = " + qq.str();
      break;
    }
  }
  if (!grading_problem.empty()) {
    QCheckResult r;
    r.status = QCheckResult::Status::WrongDegree;
    r.witness = square.witness;
    r.detail = grading_problem + square.detail;
    return r;
  }
  return square;
}

Morphism pit_map(const GradedManifold& x, const GradedManifold& y, const Morphism& pullback) {
  if (pullback.source() != y.algebra() || pullback.target() != x.algebra())
    throw std::invalid_argument("pit_map: pullback must map C(Y) -> C(X)");
  GradedManifold px = x.pit();
  GradedManifold py = y.pit();
  Morphism include = Morphism::inclusion(x.algebra(), px.algebra());
  Derivation dx = px.de_rham(px.depth());

  std::map<int, Element> images;
  for (int g = 0; g < y.algebra()->size(); ++g) {
    Element img = include(pullback(Element::generator(y.algebra(), g)));
    images.emplace(g, img);
    int p = py.partner(g, py.depth());
    if (p >= 0) images.emplace(p, dx(img));
  }
  return Morphism(py.algebra(), px.algebra(), std::move(images));
}

Morphism semigroup_act(const GradedManifold& pitx, int level, const SemigroupElement& g) {
  if (level < 1 || level > pitx.depth())
    throw std::invalid_argument("semigroup_act: bad level");
  if (!g.beta.is_zero() && !(g.beta.has_parity(Parity::Odd) && g.beta.is_homogeneous(-1)))
    throw std::invalid_argument("semigroup_act: beta must be odd of degree -1");
  if (!g.beta.is_zero() && g.beta.algebra() != pitx.algebra())
    throw std::invalid_argument("semigroup_act: beta over a different algebra");
  const AlgebraPtr& alg = pitx.algebra();
  Derivation d = pitx.de_rham(level);
  Derivation le = pitx.level_euler(level);
  std::map<int, Element> images;
  for (int gi = 0; gi < pitx.gen_count(); ++gi) {
    Element self = Element::generator(alg, gi);
    if (pitx.is_param(gi)) {
      images.emplace(gi, self);
    } else if (!le(self).is_zero()) {
      images.emplace(gi, self * g.a);  // dx -> a dx
    } else {
      images.emplace(gi, g.beta.is_zero() ? self : self + d(self) * g.beta);  // x -> x + dx beta
    }
  }
  return Morphism(alg, alg, std::move(images));
}

std::vector<Monomial> monomials_of_degree(const AlgebraPtr& alg, int degree) {
  for (int g = 0; g < alg->size(); ++g) {
    const GenSpec& s = alg->gen(g);
    if (s.degree < 0 || (s.degree == 0 && s.parity == Parity::Even))
      throw std::invalid_argument("monomials_of_degree: slice is infinite (generator '" + s.name +
                                  "')");
  }
  std::vector<Monomial> out;
  std::vector<std::pair<int, int>> current;
  auto rec = [&](auto&& self, int g, int budget) -> void {
    if (g == alg->size()) {
      if (budget == 0) out.emplace_back(current);
      return;
    }
    const GenSpec& s = alg->gen(g);
    int max_exp = s.parity == Parity::Odd ? 1 : (s.degree > 0 ? budget / s.degree : 0);
    for (int e = 0; e <= max_exp; ++e) {
      int cost = e * s.degree;
      if (cost > budget) break;
      if (e > 0) current.emplace_back(g, e);
      self(self, g + 1, budget - cost);
      if (e > 0) current.pop_back();
    }
  };
  rec(rec, 0, degree);
  return out;
}

std::vector<Element> closed_form_basis(const Derivation& d, int k) {
  const AlgebraPtr& alg = d.algebra();
  std::vector<Monomial> dom = monomials_of_degree(alg, k);
  std::vector<Monomial> cod = monomials_of_degree(alg, k + d.degree());
  std::map<Monomial, int> cod_index;
  for (size_t i = 0; i < cod.size(); ++i) cod_index.emplace(cod[i], static_cast<int>(i));
  QMatrix mat(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
  for (size_t c = 0; c < dom.size(); ++c) {
    Element img = d(Element::monomial(alg, dom[c], Rational(1)));
    for (const auto& [m, v] : img.terms()) mat.at(cod_index.at(m), static_cast<int>(c)) = v;
  }
  std::vector<Element> basis;
  for (const auto& v : mat.kernel_basis()) {
    ElementBuilder b(alg);
    for (size_t c = 0; c < dom.size(); ++c) b.add(dom[c], v[c]);
    basis.push_back(b.take());
  }
  return basis;
}

namespace {

Element strip_impl(const Element& e, int gen, bool left) {
  const AlgebraPtr& alg = e.algebra();
  ElementBuilder out(alg);
  for (const auto& [m, c] : e.terms()) {
    const auto& entries = m.entries();
    bool found = false;
    std::vector<std::pair<int, int>> rest;
    int odd_before = 0, odd_after = 0;
    for (auto [gi, ex] : entries) {
      if (gi == gen) {
        if (ex != 1) throw std::invalid_argument("strip: generator exponent > 1");
        found = true;
        continue;
      }
      bool odd = alg->gen(gi).parity == Parity::Odd;
      if (odd) (found ? odd_after : odd_before) += ex;
      rest.emplace_back(gi, ex);
    }
    if (!found) continue;
    int crossings = left ? odd_before : odd_after;
    Rational coef = (crossings % 2 == 0) ? c : -c;
    out.add(Monomial(std::move(rest)), coef);
  }
  return out.take();
}

}  // namespace

Element strip_left(const Element& e, int gen) { return strip_impl(e, gen, true); }
Element strip_right(const Element& e, int gen) { return strip_impl(e, gen, false); }

Element drop_gen(const Element& e, int gen) {
  ElementBuilder out(e.algebra());
  for (const auto& [m, c] : e.terms())
    if (m.exponent_of(gen) == 0) out.add(m, c);
  return out.take();
}

}  // namespace qjet
