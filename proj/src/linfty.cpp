#include "qjet/linfty.hpp"

#include <algorithm>
#include <stdexcept>

namespace qjet {

namespace {

GradedManifold shifted_manifold(const std::vector<BasisVector>& basis) {
  std::vector<GenSpec> coords;
  coords.reserve(basis.size());
  for (const auto& b : basis) coords.push_back({b.name, 1 - b.degree, flip(b.parity)});
  return GradedManifold::make(coords);
}

int parity_bit(Parity p) { return p == Parity::Odd ? 1 : 0; }

/// Koszul sign of the tensor extension: moving basis vectors of the i-th slot
/// past the ambient coefficients of later slots. p(alpha^b) = 1 - p(e_b).
int tensor_sign(const std::vector<BasisVector>& basis, const std::vector<int>& args) {
  int s = 0;
  for (size_t i = 0; i + 1 < args.size(); ++i)
    for (size_t j = i + 1; j < args.size(); ++j)
      s += parity_bit(basis[static_cast<size_t>(args[i])].parity) *
           (1 - parity_bit(basis[static_cast<size_t>(args[j])].parity));
  return s % 2 == 0 ? 1 : -1;
}

/// Constant part of [[...[Q, i_{a1}], ...], i_{ak}] on each coordinate:
/// the raw multibracket extraction before the decalage sign.
std::map<int, Rational> raw_extract(const GradedManifold& m, const Derivation& q,
                                    const std::vector<int>& args) {
  const AlgebraPtr& alg = m.algebra();
  Derivation n = q;
  for (int a : args) {
    std::map<int, Element> vals;
    vals.emplace(a, Element::scalar(alg, Rational(1)));
    const GenSpec& spec = alg->gen(a);
    Derivation iota(alg, -spec.degree, spec.parity, std::move(vals));
    n = commutator(n, iota);
  }
  std::map<int, Rational> out;
  for (int c = 0; c < alg->size(); ++c) {
    Rational k = n.value(c).constant_term();
    if (!k.is_zero()) out.emplace(c, k);
  }
  return out;
}

/// Raw extraction sign on a strictly increasing tuple, computed by running
/// the extraction on a dummy derivation carrying the tuple's monomial.
int kappa_sign(const GradedManifold& m, const std::vector<int>& args, int target) {
  const AlgebraPtr& alg = m.algebra();
  std::vector<std::pair<int, int>> entries;
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0 && args[i] == args[i - 1])
      throw std::invalid_argument("kappa_sign: repeated index");
    entries.emplace_back(args[i], 1);
  }
  std::map<int, Element> vals;
  vals.emplace(target, Element::monomial(alg, Monomial(std::move(entries)), Rational(1)));
  Derivation dummy = Derivation::unchecked(alg, 1, Parity::Odd, std::move(vals));
  auto got = raw_extract(m, dummy, args);
  auto it = got.find(target);
  if (it == got.end()) throw std::logic_error("kappa_sign: extraction vanished");
  Rational k = it->second;
  if (!(k.is_one() || (-k).is_one())) throw std::logic_error("kappa_sign: non-unit extraction");
  return k.is_one() ? 1 : -1;
}

}  // namespace

LInftyAlgebra::LInftyAlgebra(std::vector<BasisVector> basis, BracketTable table)
    : basis_(std::move(basis)), table_(std::move(table)), manifold_(shifted_manifold(basis_)) {
  int n = dim();
  for (const auto& b : basis_)
    if (b.degree > 0)
      throw std::invalid_argument(
          "LInftyAlgebra: basis must be non-positively graded (got '" + b.name + "')");
  for (auto it = table_.begin(); it != table_.end();) {
    const auto& args = it->first;
    if (args.empty()) throw std::invalid_argument("LInftyAlgebra: empty argument tuple");
    for (size_t i = 0; i < args.size(); ++i) {
      if (args[i] < 0 || args[i] >= n)
        throw std::invalid_argument("LInftyAlgebra: argument index out of range");
      if (i > 0 && args[i] <= args[i - 1])
        throw std::invalid_argument("LInftyAlgebra: tuples must be strictly increasing");
    }
    int k = static_cast<int>(args.size());
    int deg_args = 0, par_args = 0;
    for (int a : args) {
      deg_args += basis_[static_cast<size_t>(a)].degree;
      par_args += parity_bit(basis_[static_cast<size_t>(a)].parity);
    }
    for (auto vit = it->second.begin(); vit != it->second.end();) {
      if (vit->second.is_zero()) {
        vit = it->second.erase(vit);
        continue;
      }
      int c = vit->first;
      if (c < 0 || c >= n) throw std::invalid_argument("LInftyAlgebra: target index out of range");
      const BasisVector& tgt = basis_[static_cast<size_t>(c)];
      if (tgt.degree != deg_args + 2 - k)
        throw std::invalid_argument("LInftyAlgebra: degree-inconsistent table on target '" +
                                    tgt.name + "'");
      if ((parity_bit(tgt.parity) - par_args - k) % 2 != 0)
        throw std::invalid_argument("LInftyAlgebra: parity-inconsistent table on target '" +
                                    tgt.name + "'");
      ++vit;
    }
    if (it->second.empty()) {
      it = table_.erase(it);
    } else {
      ++it;
    }
  }
}

int LInftyAlgebra::max_arity() const {
  int k = 0;
  for (const auto& [args, vals] : table_) k = std::max(k, static_cast<int>(args.size()));
  return k;
}

std::map<int, Rational> LInftyAlgebra::bracket(std::vector<int> args) const {
  // insertion sort, tracking the graded antisymmetry sign
  int sign = 1;
  for (size_t i = 1; i < args.size(); ++i) {
    for (size_t j = i; j > 0 && args[j] < args[j - 1]; --j) {
      int pu = parity_bit(basis_[static_cast<size_t>(args[j - 1])].parity);
      int pv = parity_bit(basis_[static_cast<size_t>(args[j])].parity);
      sign *= (pu * pv) % 2 == 0 ? -1 : 1;  // swap sign -(-1)^{pu pv}
      std::swap(args[j], args[j - 1]);
    }
  }
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == args[i + 1]) return {};
  auto it = table_.find(args);
  if (it == table_.end()) return {};
  std::map<int, Rational> out;
  for (const auto& [c, v] : it->second) out.emplace(c, sign > 0 ? v : -v);
  return out;
}

QStructure q_from_brackets(const LInftyAlgebra& l) {
  const GradedManifold& m = l.manifold();
  const AlgebraPtr& alg = m.algebra();
  std::map<int, ElementBuilder> builders;
  for (const auto& [args, vals] : l.table()) {
    std::vector<std::pair<int, int>> entries;
    for (int a : args) entries.emplace_back(a, 1);
    Monomial mono{std::move(entries)};
    int ts = tensor_sign(l.basis(), args);
    for (const auto& [c, b] : vals) {
      // coefficient relation C = -epsilon * B (the raw extraction sign cancels)
      Rational coeff = (ts > 0) ? -b : b;
      auto it = builders.find(c);
      if (it == builders.end()) it = builders.emplace(c, ElementBuilder(alg)).first;
      it->second.add(mono, coeff);
    }
  }
  std::map<int, Element> qvals;
  for (auto& [c, b] : builders) qvals.emplace(c, b.take());
  return QStructure(m, Derivation(alg, 1, Parity::Odd, std::move(qvals)));
}

LInftyAlgebra brackets_from_q(const QStructure& q) {
  const GradedManifold& m = q.manifold;
  const AlgebraPtr& alg = m.algebra();
  int n = alg->size();
  std::vector<BasisVector> basis;
  for (int g = 0; g < n; ++g) {
    const GenSpec& s = alg->gen(g);
    if (s.degree < 1)
      throw std::invalid_argument(
          "brackets_from_q: coordinates must be positively graded; '" + s.name +
          "' has degree " + std::to_string(s.degree));
    basis.push_back({s.name, 1 - s.degree, flip(s.parity)});
  }
  int max_arity = 0;
  for (int g = 0; g < n; ++g) {
    Element value = q.q.value(g);
    for (const auto& [mono, c] : value.terms()) {
      if (mono.is_unit())
        throw std::invalid_argument("brackets_from_q: Q does not vanish at the origin");
      for (auto [gi, e] : mono.entries())
        if (e > 1)
          throw std::invalid_argument(
              "brackets_from_q: Q has a repeated-coordinate monomial; not multilinear");
      max_arity = std::max(max_arity, mono.length());
    }
  }
  BracketTable table;
  std::vector<int> tuple;
  // enumerate strictly increasing tuples of each arity
  auto rec = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      auto raw = raw_extract(m, q.q, tuple);
      if (raw.empty()) return;
      int ts = tensor_sign(basis, tuple);
      std::map<int, Rational> vals;
      for (const auto& [c, v] : raw) {
        int kappa = kappa_sign(m, tuple, c);
        // B = sigma * raw with sigma = -epsilon * kappa
        Rational b = v * Rational(kappa) * Rational(ts > 0 ? -1 : 1);
        vals.emplace(c, b);
      }
      table.emplace(tuple, std::move(vals));
      return;
    }
    for (int a = start; a < n; ++a) {
      tuple.push_back(a);
      self(self, a + 1, remaining - 1);
      tuple.pop_back();
    }
  };
  for (int k = 1; k <= max_arity; ++k) rec(rec, 0, k);
  return LInftyAlgebra(std::move(basis), std::move(table));
}

std::map<std::pair<int, int>, std::map<int, Rational>> LieAlgebraData::canonical() const {
  int n = static_cast<int>(basis.size());
  std::map<std::pair<int, int>, std::map<int, Rational>> out;
  for (const auto& [ij, vals] : brackets) {
    auto [i, j] = ij;
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw std::invalid_argument("LieAlgebraData: index out of range");
    for (const auto& [k, v] : vals) {
      if (k < 0 || k >= n) throw std::invalid_argument("LieAlgebraData: target out of range");
      if (v.is_zero()) continue;
      if (i == j)
        throw std::invalid_argument("LieAlgebraData: [e_i,e_i] must vanish (antisymmetry)");
      auto key = i < j ? ij : std::make_pair(j, i);
      Rational val = i < j ? v : -v;
      auto [it, inserted] = out[key].emplace(k, val);
      if (!inserted && !(it->second == val))
        throw std::invalid_argument("LieAlgebraData: brackets not antisymmetric");
    }
  }
  return out;
}

std::map<int, Rational> LieAlgebraData::bracket(int i, int j) const {
  auto canon = canonical();
  if (i == j) return {};
  auto it = canon.find(i < j ? std::make_pair(i, j) : std::make_pair(j, i));
  if (it == canon.end()) return {};
  std::map<int, Rational> out = it->second;
  if (i > j)
    for (auto& [k, v] : out) v = -v;
  return out;
}

QStructure ce_from_lie(const LieAlgebraData& g) {
  auto canon = g.canonical();
  std::vector<BasisVector> basis;
  for (const auto& name : g.basis) basis.push_back({name, 0, Parity::Even});
  BracketTable table;
  for (const auto& [ij, vals] : canon) table.emplace(std::vector<int>{ij.first, ij.second}, vals);
  return q_from_brackets(LInftyAlgebra(std::move(basis), std::move(table)));
}

CheckOutcome mc_check(const MCElement& alpha, const LInftyAlgebra& l,
                      const Derivation& d_ambient) {
  const AlgebraPtr& amb = d_ambient.algebra();
  int n = l.dim();
  std::vector<Element> comp(static_cast<size_t>(n), Element::zero(amb));
  for (const auto& [b, v] : alpha.components) {
    if (b < 0 || b >= n) throw std::invalid_argument("mc_check: component index out of range");
    if (v.algebra() != amb)
      throw std::invalid_argument("mc_check: component over a different algebra");
    comp[static_cast<size_t>(b)] = v;
  }
  for (int b = 0; b < n; ++b) {
    const Element& v = comp[static_cast<size_t>(b)];
    if (v.is_zero()) continue;
    const BasisVector& e = l.basis()[static_cast<size_t>(b)];
    if (!v.is_homogeneous(1 - e.degree) || !v.has_parity(flip(e.parity)))
      throw std::invalid_argument("mc_check: alpha is not homogeneous of total degree 1 on '" +
                                  e.name + "'");
  }

  std::vector<Element> residual;
  residual.reserve(static_cast<size_t>(n));
  for (int c = 0; c < n; ++c) residual.push_back(d_ambient(comp[static_cast<size_t>(c)]));

  int top = l.max_arity();
  std::vector<int> tuple;
  auto rec = [&](auto&& self, int k) -> void {
    if (static_cast<int>(tuple.size()) == k) {
      auto br = l.bracket(tuple);
      if (br.empty()) return;
      Element prod = Element::scalar(amb, Rational(1));
      for (int b : tuple) prod = prod * comp[static_cast<size_t>(b)];
      if (prod.is_zero()) return;
      int ts = tensor_sign(l.basis(), tuple);
      Rational scale = Rational(ts) / Rational::factorial(k);
      for (const auto& [c, v] : br)
        residual[static_cast<size_t>(c)] += prod * (v * scale);
      return;
    }
    for (int b = 0; b < n; ++b) {
      tuple.push_back(b);
      self(self, k);
      tuple.pop_back();
    }
  };
  for (int k = 1; k <= top; ++k) rec(rec, k);

  CheckOutcome out;
  for (int c = 0; c < n; ++c) {
    if (!residual[static_cast<size_t>(c)].is_zero()) {
      out.ok = false;
      out.residuals.emplace_back(l.basis()[static_cast<size_t>(c)].name,
                                 residual[static_cast<size_t>(c)]);
    }
  }
  return out;
}

CheckOutcome dga_morphism_check(const std::map<int, Element>& images, const QStructure& source,
                                const Derivation& d_target) {
  Morphism phi(source.manifold.algebra(), d_target.algebra(), images);
  CheckOutcome out;
  for (int g = 0; g < source.manifold.gen_count(); ++g) {
    Element x = Element::generator(source.manifold.algebra(), g);
    Element res = d_target(phi(x)) - phi(source.q(x));
    if (!res.is_zero()) {
      out.ok = false;
      out.residuals.emplace_back(source.manifold.algebra()->gen(g).name, res);
    }
  }
  return out;
}

}  // namespace qjet
