#include "qjet/grouplaw.hpp"

#include <stdexcept>

namespace qjet {

AlgebraPtr slot_algebra(int dim, int nslots, const std::string& prefix) {
  std::vector<GenSpec> gens;
  for (int s = 1; s <= nslots; ++s)
    for (int k = 1; k <= dim; ++k)
      gens.push_back({prefix + std::to_string(s) + "_" + std::to_string(k), 0, Parity::Even});
  return Algebra::make(std::move(gens));
}

PolyGroupLaw::PolyGroupLaw(int dim, std::vector<Element> components)
    : dim_(dim), alg2_(nullptr), f_(std::move(components)) {
  if (dim_ <= 0) throw std::invalid_argument("PolyGroupLaw: dimension must be positive");
  if (static_cast<int>(f_.size()) != dim_)
    throw std::invalid_argument("PolyGroupLaw: wrong number of components");
  alg2_ = f_[0].algebra();
  if (alg2_->size() != 2 * dim_)
    throw std::invalid_argument("PolyGroupLaw: components must live over the two-slot algebra");
  for (const auto& c : f_) {
    if (c.algebra() != alg2_)
      throw std::invalid_argument("PolyGroupLaw: components over different algebras");
    for (const auto& [m, k] : c.terms()) degree_bound_ = std::max(degree_bound_, m.length());
  }

  // identity at the origin, both sides
  std::vector<Element> x, y, zero;
  for (int k = 0; k < dim_; ++k) {
    x.push_back(Element::generator(alg2_, k));
    y.push_back(Element::generator(alg2_, dim_ + k));
    zero.push_back(Element::zero(alg2_));
  }
  std::vector<Element> right = multiply(x, zero);
  std::vector<Element> left = multiply(zero, y);
  for (int k = 0; k < dim_; ++k) {
    if (!(right[static_cast<size_t>(k)] == x[static_cast<size_t>(k)]))
      throw std::invalid_argument("PolyGroupLaw: F(x,0) != x in component " + std::to_string(k));
    if (!(left[static_cast<size_t>(k)] == y[static_cast<size_t>(k)]))
      throw std::invalid_argument("PolyGroupLaw: F(0,y) != y in component " + std::to_string(k));
  }

  // associativity over three symbolic slots
  AlgebraPtr alg3 = slot_algebra(dim_, 3);
  std::vector<Element> a, b, c;
  for (int k = 0; k < dim_; ++k) {
    a.push_back(Element::generator(alg3, k));
    b.push_back(Element::generator(alg3, dim_ + k));
    c.push_back(Element::generator(alg3, 2 * dim_ + k));
  }
  std::vector<Element> lhs = multiply(multiply(a, b), c);
  std::vector<Element> rhs = multiply(a, multiply(b, c));
  for (int k = 0; k < dim_; ++k)
    if (!(lhs[static_cast<size_t>(k)] == rhs[static_cast<size_t>(k)]))
      throw std::invalid_argument("PolyGroupLaw: associativity fails in component " +
                                  std::to_string(k));
}

std::vector<Element> PolyGroupLaw::multiply(const std::vector<Element>& x,
                                            const std::vector<Element>& y) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
    throw std::invalid_argument("PolyGroupLaw::multiply: wrong point dimension");
  const AlgebraPtr& target = x[0].algebra();
  std::map<int, Element> images;
  for (int k = 0; k < dim_; ++k) {
    images.emplace(k, x[static_cast<size_t>(k)]);
    images.emplace(dim_ + k, y[static_cast<size_t>(k)]);
  }
  Morphism point(alg2_, target, std::move(images), GradingCheck::ParityOnly);
  std::vector<Element> out;
  out.reserve(static_cast<size_t>(dim_));
  for (const auto& c : f_) out.push_back(point(c));
  return out;
}

PolyGroupLaw PolyGroupLaw::abelian(int dim) {
  AlgebraPtr a = slot_algebra(dim, 2);
  std::vector<Element> f;
  for (int k = 0; k < dim; ++k)
    f.push_back(Element::generator(a, k) + Element::generator(a, dim + k));
  return PolyGroupLaw(dim, std::move(f));
}

PolyGroupLaw PolyGroupLaw::heisenberg() {
  AlgebraPtr a = slot_algebra(3, 2);
  auto x = [&](int k) { return Element::generator(a, k); };
  auto y = [&](int k) { return Element::generator(a, 3 + k); };
  std::vector<Element> f = {x(0) + y(0), x(1) + y(1), x(2) + y(2) + x(0) * y(1)};
  return PolyGroupLaw(3, std::move(f));
}

PolyGroupLaw PolyGroupLaw::unitriangular(int n) {
  if (n < 2) throw std::invalid_argument("unitriangular: n must be at least 2");
  int dim = n * (n - 1) / 2;
  std::vector<std::vector<int>> idx(static_cast<size_t>(n),
                                    std::vector<int>(static_cast<size_t>(n), -1));
  int next = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) idx[static_cast<size_t>(i)][static_cast<size_t>(j)] = next++;
  AlgebraPtr a = slot_algebra(dim, 2);
  std::vector<Element> f;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int k = idx[static_cast<size_t>(i)][static_cast<size_t>(j)];
      Element v = Element::generator(a, k) + Element::generator(a, dim + k);
      for (int m = i + 1; m < j; ++m) {
        int xm = idx[static_cast<size_t>(i)][static_cast<size_t>(m)];
        int ym = idx[static_cast<size_t>(m)][static_cast<size_t>(j)];
        v += Element::generator(a, xm) * Element::generator(a, dim + ym);
      }
      f.push_back(v);
    }
  }
  return PolyGroupLaw(dim, std::move(f));
}

}  // namespace qjet
