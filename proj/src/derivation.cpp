#include "qjet/derivation.hpp"

#include <stdexcept>

namespace qjet {

Derivation::Derivation(AlgebraPtr alg, int degree, Parity parity, std::map<int, Element> values)
    : alg_(std::move(alg)), degree_(degree), parity_(parity), values_(std::move(values)) {
  for (auto it = values_.begin(); it != values_.end();) {
    auto [g, v] = *it;
    if (g < 0 || g >= alg_->size())
      throw std::invalid_argument("Derivation: generator index out of range");
    if (v.algebra() != alg_)
      throw std::invalid_argument("Derivation: value over a different algebra");
    if (v.is_zero()) {
      it = values_.erase(it);
      continue;
    }
    const GenSpec& spec = alg_->gen(g);
    if (!v.is_homogeneous(spec.degree + degree_))
      throw std::invalid_argument("Derivation: value on '" + spec.name +
                                  "' not homogeneous of degree " +
                                  std::to_string(spec.degree + degree_));
    if (!v.has_parity(spec.parity ^ parity_))
      throw std::invalid_argument("Derivation: value on '" + spec.name + "' has wrong parity");
    ++it;
  }
}

Derivation Derivation::zero(AlgebraPtr alg, int degree, Parity parity) {
  return Derivation(std::move(alg), degree, parity, {});
}

Derivation Derivation::unchecked(AlgebraPtr alg, int degree, Parity parity,
                                 std::map<int, Element> values) {
  Derivation d(alg, degree, parity, {});
  for (auto& [g, v] : values) {
    if (v.algebra() != alg)
      throw std::invalid_argument("Derivation::unchecked: value over a different algebra");
    if (!v.is_zero()) d.values_.emplace(g, std::move(v));
  }
  return d;
}

Derivation Derivation::euler(const AlgebraPtr& alg) {
  std::map<int, Element> vals;
  for (int g = 0; g < alg->size(); ++g)
    vals.emplace(g, Element::generator(alg, g) * Rational(alg->gen(g).degree));
  return Derivation(alg, 0, Parity::Even, std::move(vals));
}

Element Derivation::value(int gen) const {
  auto it = values_.find(gen);
  return it == values_.end() ? Element::zero(alg_) : it->second;
}

Element Derivation::operator()(const Element& a) const {
  if (a.algebra() != alg_)
    throw std::invalid_argument("Derivation: argument over a different algebra");
  ElementBuilder out(alg_);
  for (const auto& [mono, coef] : a.terms()) {
    const auto& entries = mono.entries();
    int prefix_odd = 0;  // number of odd letters before the slot being hit
    for (size_t i = 0; i < entries.size(); ++i) {
      auto [g, e] = entries[i];
      const GenSpec& spec = alg_->gen(g);
      auto vit = values_.find(g);
      if (vit != values_.end()) {
        // prefix * g^{e-1} stays canonical because the slot order is kept
        std::vector<std::pair<int, int>> pre(entries.begin(), entries.begin() + i);
        if (e > 1) pre.emplace_back(g, e - 1);
        std::vector<std::pair<int, int>> suf(entries.begin() + i + 1, entries.end());
        Element term = Element::monomial(alg_, Monomial(std::move(pre)), Rational(1));
        term = term * vit->second;
        term = term * Element::monomial(alg_, Monomial(std::move(suf)), Rational(1));
        Rational c = coef * Rational(e);
        if (parity_ == Parity::Odd && prefix_odd % 2 != 0) c = -c;
        out.add_scaled(term, c);
      }
      if (spec.parity == Parity::Odd) prefix_odd += e;
    }
  }
  return out.take();
}

bool Derivation::operator==(const Derivation& o) const {
  if (alg_ != o.alg_ || degree_ != o.degree_ || parity_ != o.parity_) return false;
  for (int g = 0; g < alg_->size(); ++g)
    if (!(value(g) == o.value(g))) return false;
  return true;
}

Derivation commutator(const Derivation& d1, const Derivation& d2) {
  if (d1.algebra() != d2.algebra())
    throw std::invalid_argument("commutator: derivations over different algebras");
  const AlgebraPtr& alg = d1.algebra();
  bool both_odd = d1.parity() == Parity::Odd && d2.parity() == Parity::Odd;
  std::map<int, Element> vals;
  for (int g = 0; g < alg->size(); ++g) {
    Element v = d1(d2.value(g));
    Element w = d2(d1.value(g));
    vals.emplace(g, both_odd ? v + w : v - w);
  }
  return Derivation(alg, d1.degree() + d2.degree(), d1.parity() ^ d2.parity(), std::move(vals));
}

Morphism::Morphism(AlgebraPtr source, AlgebraPtr target, std::map<int, Element> images,
                   GradingCheck check)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  for (int g = 0; g < source_->size(); ++g) {
    auto it = images_.find(g);
    if (it == images_.end())
      throw std::invalid_argument("Morphism: no image for generator '" + source_->gen(g).name + "'");
    const Element& v = it->second;
    if (v.algebra() != target_)
      throw std::invalid_argument("Morphism: image over a different algebra");
    const GenSpec& spec = source_->gen(g);
    if (!v.has_parity(spec.parity))
      throw std::invalid_argument("Morphism: image of '" + spec.name + "' violates parity");
    if (check == GradingCheck::DegreeAndParity && !v.is_homogeneous(spec.degree))
      throw std::invalid_argument("Morphism: image of '" + spec.name + "' violates degree");
  }
}

Morphism Morphism::identity(const AlgebraPtr& alg) {
  std::map<int, Element> images;
  for (int g = 0; g < alg->size(); ++g) images.emplace(g, Element::generator(alg, g));
  return Morphism(alg, alg, std::move(images));
}

Morphism Morphism::inclusion(const AlgebraPtr& source, const AlgebraPtr& target) {
  std::map<int, Element> images;
  for (int g = 0; g < source->size(); ++g)
    images.emplace(g, Element::generator(target, target->index_of(source->gen(g).name)));
  return Morphism(source, target, std::move(images));
}

Element Morphism::operator()(const Element& a) const {
  if (a.algebra() != source_)
    throw std::invalid_argument("Morphism: argument over a different algebra");
  ElementBuilder out(target_);
  for (const auto& [mono, coef] : a.terms()) {
    Element term = Element::scalar(target_, Rational(1));
    for (auto [g, e] : mono.entries()) term = term * images_.at(g).pow(e);
    out.add_scaled(term, coef);
  }
  return out.take();
}

Morphism Morphism::then(const Morphism& next) const {
  if (target_ != next.source_) throw std::invalid_argument("Morphism::then: algebra mismatch");
  std::map<int, Element> images;
  for (const auto& [g, v] : images_) images.emplace(g, next(v));
  return Morphism(source_, next.target_, std::move(images), GradingCheck::ParityOnly);
}

Element substitute(const std::map<int, Element>& phi, const Element& a, GradingCheck check) {
  if (phi.empty()) {
    if (a.terms().empty() || a.terms().begin()->first.is_unit()) return a;
    throw std::invalid_argument("substitute: empty map for nonconstant element");
  }
  const AlgebraPtr& target = phi.begin()->second.algebra();
  Morphism m(a.algebra(), target, phi, check);
  return m(a);
}

}  // namespace qjet
