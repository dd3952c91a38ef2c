#include "qjet/algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qjet {

AlgebraPtr Algebra::make(std::vector<GenSpec> gens) {
  auto a = std::shared_ptr<Algebra>(new Algebra());
  a->gens_ = std::move(gens);
  for (int i = 0; i < static_cast<int>(a->gens_.size()); ++i) {
    const auto& g = a->gens_[static_cast<size_t>(i)];
    if (g.name.empty()) throw std::invalid_argument("Algebra: empty generator name");
    if (!a->index_.emplace(g.name, i).second)
      throw std::invalid_argument("Algebra: duplicate generator '" + g.name + "'");
  }
  return a;
}

int Algebra::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

int Algebra::index_of(const std::string& name) const {
  int i = find(name);
  if (i < 0) throw std::invalid_argument("Algebra: no generator '" + name + "'");
  return i;
}

AlgebraPtr Algebra::extended(std::vector<GenSpec> extra) const {
  std::vector<GenSpec> all = gens_;
  for (auto& g : extra) all.push_back(std::move(g));
  return make(std::move(all));
}

bool Algebra::parity_matches_degree() const {
  for (const auto& g : gens_)
    if (g.parity != parity_of(g.degree)) return false;
  return true;
}

int Monomial::degree(const Algebra& a) const {
  int d = 0;
  for (auto [g, e] : entries_) d += a.gen(g).degree * e;
  return d;
}

Parity Monomial::parity(const Algebra& a) const {
  int p = 0;
  for (auto [g, e] : entries_)
    if (a.gen(g).parity == Parity::Odd) p += e;
  return parity_of(p);
}

int Monomial::length() const {
  int n = 0;
  for (auto [g, e] : entries_) n += e;
  return n;
}

int Monomial::exponent_of(int gen) const {
  for (auto [g, e] : entries_)
    if (g == gen) return e;
  return 0;
}

std::string Monomial::str(const Algebra& a) const {
  if (entries_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (auto [g, e] : entries_) {
    if (!first) os << "*";
    first = false;
    os << a.gen(g).name;
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

std::optional<std::pair<int, Monomial>> monomial_mul(const Algebra& a, const Monomial& x,
                                                     const Monomial& y) {
  const auto& xs = x.entries();
  const auto& ys = y.entries();
  std::vector<std::pair<int, int>> merged;
  merged.reserve(xs.size() + ys.size());

  // Count odd letters of x still to the right of each odd letter of y as the
  // merge consumes entries; each such pair contributes one Koszul transposition.
  int odd_x_remaining = 0;
  for (auto [g, e] : xs)
    if (a.gen(g).parity == Parity::Odd) odd_x_remaining += e;

  size_t i = 0, j = 0;
  long crossings = 0;
  while (i < xs.size() || j < ys.size()) {
    bool take_x = j >= ys.size() || (i < xs.size() && xs[i].first < ys[j].first);
    bool both = i < xs.size() && j < ys.size() && xs[i].first == ys[j].first;
    if (both) {
      const GenSpec& g = a.gen(xs[i].first);
      if (g.parity == Parity::Odd) return std::nullopt;  // odd generator squares to zero
      merged.emplace_back(xs[i].first, xs[i].second + ys[j].second);
      ++i, ++j;
    } else if (take_x) {
      if (a.gen(xs[i].first).parity == Parity::Odd) odd_x_remaining -= xs[i].second;
      merged.push_back(xs[i]);
      ++i;
    } else {
      if (a.gen(ys[j].first).parity == Parity::Odd) crossings += odd_x_remaining * ys[j].second;
      merged.push_back(ys[j]);
      ++j;
    }
  }
  int sign = (crossings % 2 == 0) ? 1 : -1;
  return std::make_pair(sign, Monomial(std::move(merged)));
}

void require_same_algebra(const Element& a, const Element& b, const char* where) {
  if (a.algebra() != b.algebra())
    throw std::invalid_argument(std::string(where) + ": elements over different algebras");
}

Element Element::scalar(AlgebraPtr alg, const Rational& c) {
  Element e(std::move(alg));
  e.add_term(Monomial(), c);
  return e;
}

Element Element::generator(const AlgebraPtr& alg, int index) {
  if (index < 0 || index >= alg->size())
    throw std::invalid_argument("Element::generator: index out of range");
  Element e(alg);
  e.add_term(Monomial({{index, 1}}), Rational(1));
  return e;
}

Element Element::generator(const AlgebraPtr& alg, const std::string& name) {
  return generator(alg, alg->index_of(name));
}

Element Element::monomial(AlgebraPtr alg, const Monomial& m, const Rational& c) {
  Element e(std::move(alg));
  e.add_term(m, c);
  return e;
}

void Element::add_term(const Monomial& m, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool Element::operator==(const Element& o) const {
  require_same_algebra(*this, o, "Element::==");
  return terms_ == o.terms_;
}

Element Element::operator-() const {
  Element r(alg_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Element Element::operator+(const Element& o) const {
  require_same_algebra(*this, o, "Element::+");
  Element r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

Element Element::operator-(const Element& o) const { return *this + (-o); }

Element Element::operator*(const Element& o) const {
  require_same_algebra(*this, o, "Element::*");
  Element r(alg_);
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      auto prod = monomial_mul(*alg_, m1, m2);
      if (!prod) continue;
      Rational c = c1 * c2;
      if (prod->first < 0) c = -c;
      r.add_term(prod->second, c);
    }
  }
  return r;
}

Element Element::operator*(const Rational& c) const {
  Element r(alg_);
  if (c.is_zero()) return r;
  for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
  return r;
}

Element Element::pow(int k) const {
  if (k < 0) throw std::invalid_argument("Element::pow: negative exponent");
  Element r = scalar(alg_, Rational(1));
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::optional<int> Element::degree() const {
  if (terms_.empty()) return std::nullopt;
  int d = terms_.begin()->first.degree(*alg_);
  for (const auto& [m, c] : terms_)
    if (m.degree(*alg_) != d) return std::nullopt;
  return d;
}

std::optional<Parity> Element::parity() const {
  if (terms_.empty()) return std::nullopt;
  Parity p = terms_.begin()->first.parity(*alg_);
  for (const auto& [m, c] : terms_)
    if (m.parity(*alg_) != p) return std::nullopt;
  return p;
}

bool Element::is_homogeneous(int deg) const {
  for (const auto& [m, c] : terms_)
    if (m.degree(*alg_) != deg) return false;
  return true;
}

bool Element::has_parity(Parity p) const {
  for (const auto& [m, c] : terms_)
    if (m.parity(*alg_) != p) return false;
  return true;
}

Element Element::component(int deg) const {
  Element r(alg_);
  for (const auto& [m, c] : terms_)
    if (m.degree(*alg_) == deg) r.terms_.emplace(m, c);
  return r;
}

Rational Element::constant_term() const { return coefficient(Monomial()); }

Rational Element::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::string Element::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string cs = c.str();
    bool neg = !cs.empty() && cs[0] == '-';
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    std::string abs = neg ? cs.substr(1) : cs;
    if (m.is_unit()) {
      os << abs;
    } else if (abs == "1") {
      os << m.str(*alg_);
    } else {
      os << abs << "*" << m.str(*alg_);
    }
  }
  return os.str();
}

Element transport(const Element& e, const AlgebraPtr& target, bool check_degree) {
  const Algebra& src = *e.algebra();
  std::map<int, int> remap;
  ElementBuilder out(target);
  for (const auto& [m, c] : e.terms()) {
    for (auto [g, ex] : m.entries()) {
      if (remap.count(g)) continue;
      const GenSpec& s = src.gen(g);
      int t = target->find(s.name);
      if (t < 0) throw std::invalid_argument("transport: no generator '" + s.name + "'");
      const GenSpec& ts = target->gen(t);
      if (ts.parity != s.parity || (check_degree && ts.degree != s.degree))
        throw std::invalid_argument("transport: generator '" + s.name + "' differs in grading");
      remap.emplace(g, t);
    }
    // the target generator order may differ; rebuilding through
    // multiplication keeps the Koszul signs right
    Element term = Element::scalar(target, c);
    for (auto [g, ex] : m.entries())
      term = term * Element::generator(target, remap.at(g)).pow(ex);
    out.add(term);
  }
  return out.take();
}

void ElementBuilder::add(const Element& e) {
  for (const auto& [m, c] : e.terms()) out_.add_term(m, c);
}

void ElementBuilder::add_scaled(const Element& e, const Rational& c) {
  if (c.is_zero()) return;
  for (const auto& [m, k] : e.terms()) out_.add_term(m, k * c);
}

}  // namespace qjet
