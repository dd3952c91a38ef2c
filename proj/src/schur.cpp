#include "qjet/schur.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qjet/linalg.hpp"

namespace qjet {

void YoungDiagram::validate() const {
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] <= 0) throw std::invalid_argument("YoungDiagram: rows must be positive");
    if (i > 0 && rows[i] > rows[i - 1])
      throw std::invalid_argument("YoungDiagram: rows must be weakly decreasing");
  }
}

int YoungDiagram::squares() const {
  int n = 0;
  for (int r : rows) n += r;
  return n;
}

YoungDiagram YoungDiagram::transpose() const {
  validate();
  YoungDiagram t;
  for (int c = 1; c <= columns(); ++c) {
    int h = 0;
    for (int r : rows)
      if (r >= c) ++h;
    t.rows.push_back(h);
  }
  return t;
}

std::string YoungDiagram::str() const {
  std::string s = "[";
  for (size_t i = 0; i < rows.size(); ++i) s += (i ? "," : "") + std::to_string(rows[i]);
  return s + "]";
}

namespace {

/// Count semistandard tableaux: rows weakly increase, columns strictly
/// increase, entries in 1..n. Cell-by-cell backtracking.
long count_ssyt(const YoungDiagram& lambda, int n) {
  if (lambda.rows.empty()) return 1;
  if (n <= 0) return 0;
  std::vector<std::vector<int>> fill(lambda.rows.size());
  for (size_t r = 0; r < lambda.rows.size(); ++r)
    fill[r].assign(static_cast<size_t>(lambda.rows[r]), 0);
  long count = 0;
  auto rec = [&](auto&& self, size_t r, size_t c) -> void {
    if (r == fill.size()) {
      ++count;
      return;
    }
    size_t nr = r, nc = c + 1;
    if (nc == fill[r].size()) {
      nr = r + 1;
      nc = 0;
    }
    int lo = 1;
    if (c > 0) lo = std::max(lo, fill[r][c - 1]);
    if (r > 0) lo = std::max(lo, fill[r - 1][c] + 1);
    for (int v = lo; v <= n; ++v) {
      fill[r][c] = v;
      self(self, nr, nc);
    }
    fill[r][c] = 0;
  };
  rec(rec, 0, 0);
  return count;
}

}  // namespace

long schur_dim(const YoungDiagram& lambda, int n, Parity parity) {
  lambda.validate();
  if (n < 0) throw std::invalid_argument("schur_dim: n must be nonnegative");
  if (parity == Parity::Odd) return count_ssyt(lambda.transpose(), n);
  return count_ssyt(lambda, n);
}

long tensor_jet_dim(const YoungDiagram& lambda, int n) {
  long dim = schur_dim(lambda, n, Parity::Odd);
  for (int i = 0; i < n; ++i) dim *= 2;
  return dim;
}

std::vector<YoungDiagram> composition_series(const YoungDiagram& lambda) {
  lambda.validate();
  if (lambda.columns() != 2)
    throw std::invalid_argument("composition_series: diagram must have exactly 2 columns");
  std::vector<YoungDiagram> out;
  YoungDiagram cur = lambda;
  out.push_back(cur);
  while (true) {
    int lowest = -1;  // lowest row still reaching column 2
    for (size_t r = 0; r < cur.rows.size(); ++r)
      if (cur.rows[r] >= 2) lowest = static_cast<int>(r);
    int height = 0;
    for (int r : cur.rows)
      if (r >= 2) ++height;
    if (height <= 1) break;
    cur.rows[static_cast<size_t>(lowest)] -= 1;
    cur.rows[0] += 1;
    cur.validate();
    out.push_back(cur);
  }
  return out;
}

GradedManifold odd_superspace_forms(int n) {
  std::vector<GenSpec> gens;
  for (int i = 1; i <= n; ++i) gens.push_back({"th" + std::to_string(i), 0, Parity::Odd});
  return GradedManifold::make(std::move(gens)).pit();
}

long closed_forms_dim(int k, int n) {
  if (k < 0 || n < 0) throw std::invalid_argument("closed_forms_dim: negative arguments");
  GradedManifold forms = odd_superspace_forms(n);
  return static_cast<long>(closed_form_basis(forms.de_rham(1), k).size());
}

namespace {

/// Biweight in the two torus factors: exponents of (t1, t2, s1, s2).
using Weight = std::array<int, 4>;
using Series = std::map<Weight, long>;

void add_series(Series& into, const Weight& w, long count) {
  auto [it, inserted] = into.emplace(w, count);
  if (!inserted) {
    it->second += count;
    if (it->second == 0) into.erase(it);
  }
}

/// Truncated product of two single-torus characters (left factor in t, right
/// in s), clipped to the comparison window.
void add_product(Series& into, const std::map<std::array<int, 2>, long>& tchar,
                 const std::map<std::array<int, 2>, long>& schar, int s_cap, int t_cap) {
  for (const auto& [tw, tc] : tchar) {
    if (tw[0] + tw[1] > t_cap) continue;
    for (const auto& [sw, sc] : schar) {
      if (sw[0] + sw[1] > s_cap) continue;
      add_series(into, {tw[0], tw[1], sw[0], sw[1]}, tc * sc);
    }
  }
}

/// (1 + x1)(1 + x2) * s_{(p,q)}(x1, x2) as a one-torus character.
std::map<std::array<int, 2>, long> schur2_with_functions(int p, int q) {
  std::map<std::array<int, 2>, long> s;
  // s_{(p,q)}(x1,x2) = (x1 x2)^q h_{p-q}(x1, x2)
  for (int a = 0; a <= p - q; ++a) s[{q + a, q + (p - q - a)}] += 1;
  std::map<std::array<int, 2>, long> out;
  for (const auto& [w, c] : s)
    for (int e1 = 0; e1 <= 1; ++e1)
      for (int e2 = 0; e2 <= 1; ++e2) out[{w[0] + e1, w[1] + e2}] += c;
  return out;
}

struct FormBasis {
  std::vector<Monomial> monomials;          // per form degree
  std::vector<std::array<int, 2>> weights;  // torus weight of each monomial
};

}  // namespace

Omega2Report omega2_character_identity(int degree) {
  if (degree < 1) throw std::invalid_argument("omega2_character_identity: degree must be >= 1");
  Omega2Report rep;
  rep.degree = degree;
  const int s_cap = degree;
  const int t_cap = 2 * degree;

  // ---- left side: monomials in the endomorphism coordinates -------------
  // a_{ij} even with weight t_j s_i; beta_i odd with weight s_i;
  // gamma_i odd with weight t1 t2 s_i
  Series lhs;
  {
    struct Coord {
      bool odd;
      Weight w;
    };
    std::vector<Coord> coords = {
        {false, {1, 0, 1, 0}}, {false, {0, 1, 1, 0}},  // a_11, a_12
        {false, {1, 0, 0, 1}}, {false, {0, 1, 0, 1}},  // a_21, a_22
        {true, {0, 0, 1, 0}},  {true, {0, 0, 0, 1}},   // beta_1, beta_2
        {true, {1, 1, 1, 0}},  {true, {1, 1, 0, 1}},   // gamma_1, gamma_2
    };
    std::vector<int> exps(coords.size(), 0);
    auto rec = [&](auto&& self, size_t i, int total) -> void {
      if (i == coords.size()) {
        Weight w = {0, 0, 0, 0};
        for (size_t j = 0; j < coords.size(); ++j)
          for (int k = 0; k < 4; ++k) w[static_cast<size_t>(k)] += exps[j] * coords[j].w[static_cast<size_t>(k)];
        if (w[0] + w[1] > t_cap || w[2] + w[3] > s_cap) return;
        add_series(lhs, w, 1);
        ++rep.lhs_dimension;
        return;
      }
      int max_e = coords[i].odd ? 1 : degree - total;
      for (int e = 0; e <= max_e && total + e <= degree; ++e) {
        exps[i] = e;
        self(self, i + 1, total + e);
      }
      exps[i] = 0;
    };
    rec(rec, 0, 0);
  }

  // ---- right side: generic 2-column terms --------------------------------
  Series rhs;
  for (int a = 1; 2 * a <= degree; ++a) {
    for (int b = 0; 2 * a + b <= degree; ++b) {
      // lambda = [2^a, 1^b], transpose (a+b, a)
      auto ch = schur2_with_functions(a + b, a);
      add_product(rhs, ch, ch, s_cap, t_cap);
    }
  }

  // ---- right side: form-module quotient ----------------------------------
  GradedManifold forms = odd_superspace_forms(2);
  const AlgebraPtr& alg = forms.algebra();
  Derivation d = forms.de_rham(1);
  int th1 = alg->index_of("th1"), th2 = alg->index_of("th2");
  int dth1 = alg->index_of("d1_th1"), dth2 = alg->index_of("d1_th2");
  auto weight_of = [&](const Monomial& m) {
    std::array<int, 2> w = {0, 0};
    w[0] = m.exponent_of(th1) + m.exponent_of(dth1);
    w[1] = m.exponent_of(th2) + m.exponent_of(dth2);
    return w;
  };

  int k_max = degree + 1;
  std::vector<FormBasis> omega(static_cast<size_t>(k_max + 2));
  std::vector<std::map<Monomial, int>> index(static_cast<size_t>(k_max + 2));
  for (int k = 0; k <= k_max + 1; ++k) {
    omega[static_cast<size_t>(k)].monomials = monomials_of_degree(alg, k);
    for (size_t i = 0; i < omega[static_cast<size_t>(k)].monomials.size(); ++i) {
      omega[static_cast<size_t>(k)].weights.push_back(
          weight_of(omega[static_cast<size_t>(k)].monomials[i]));
      index[static_cast<size_t>(k)].emplace(omega[static_cast<size_t>(k)].monomials[i],
                                            static_cast<int>(i));
    }
  }

  // numerator: sum_k ch_t(Omega^k) ch_s(Omega^k)
  for (int k = 0; k <= k_max; ++k) {
    std::map<std::array<int, 2>, long> ch;
    for (const auto& w : omega[static_cast<size_t>(k)].weights) ch[w] += 1;
    add_product(rhs, ch, ch, s_cap, t_cap);
  }

  // denominator: rank of (l, w) -> d*l (x) w + l (x) dw per biweight
  std::map<Weight, long> denominator_rank;
  {
    // group sources by biweight
    std::map<Weight, std::vector<std::tuple<int, int, int>>> sources;  // (k, l-index, w-index)
    for (int k = 1; k <= k_max; ++k) {
      const FormBasis& lk = omega[static_cast<size_t>(k)];
      const FormBasis& wk = omega[static_cast<size_t>(k - 1)];
      for (size_t li = 0; li < lk.monomials.size(); ++li) {
        if (lk.weights[li][0] + lk.weights[li][1] > t_cap) continue;
        for (size_t wi = 0; wi < wk.monomials.size(); ++wi) {
          if (wk.weights[wi][0] + wk.weights[wi][1] > s_cap) continue;
          Weight bw = {lk.weights[li][0], lk.weights[li][1], wk.weights[wi][0],
                       wk.weights[wi][1]};
          sources[bw].emplace_back(k, static_cast<int>(li), static_cast<int>(wi));
        }
      }
    }
    for (const auto& [bw, srcs] : sources) {
      // target space: blocks (j, l', w') with l' in Omega^j of t-weight,
      // w' in Omega^j of s-weight; enumerate lazily
      std::map<std::tuple<int, int, int>, int> target_index;
      auto target_of = [&](int j, int lp, int wp) {
        auto key = std::make_tuple(j, lp, wp);
        auto it = target_index.find(key);
        if (it == target_index.end())
          it = target_index.emplace(key, static_cast<int>(target_index.size())).first;
        return it->second;
      };
      std::vector<std::map<int, Rational>> cols;
      for (const auto& [k, li, wi] : srcs) {
        std::map<int, Rational> col;
        // l (x) dw lands in block k
        Element dw = d(Element::monomial(
            alg, omega[static_cast<size_t>(k - 1)].monomials[static_cast<size_t>(wi)],
            Rational(1)));
        for (const auto& [m, c] : dw.terms()) {
          int wp = index[static_cast<size_t>(k)].at(m);
          col[target_of(k, li, wp)] += c;
        }
        // d*l (x) w lands in block k-1: <d* l, x> = <l, d x>
        const Monomial& lmono = omega[static_cast<size_t>(k)].monomials[static_cast<size_t>(li)];
        for (size_t xp = 0; xp < omega[static_cast<size_t>(k - 1)].monomials.size(); ++xp) {
          Element dx = d(Element::monomial(
              alg, omega[static_cast<size_t>(k - 1)].monomials[xp], Rational(1)));
          Rational pairing = dx.coefficient(lmono);
          if (!pairing.is_zero()) col[target_of(k - 1, static_cast<int>(xp), wi)] += pairing;
        }
        cols.push_back(std::move(col));
      }
      QMatrix mat(static_cast<int>(target_index.size()), static_cast<int>(cols.size()));
      for (size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, v] : cols[c]) mat.at(r, static_cast<int>(c)) = v;
      long rank = mat.rank();
      if (rank > 0) denominator_rank.emplace(bw, rank);
    }
  }
  for (const auto& [bw, rank] : denominator_rank) add_series(rhs, bw, -rank);

  // ---- compare ------------------------------------------------------------
  rep.ok = true;
  std::map<Weight, std::pair<long, long>> merged;
  for (const auto& [w, c] : lhs) merged[w].first = c;
  for (const auto& [w, c] : rhs)
    if (w[0] + w[1] <= t_cap && w[2] + w[3] <= s_cap) merged[w].second = c;
  for (const auto& [w, pair] : merged) {
    if (pair.first != pair.second) {
      rep.ok = false;
      std::ostringstream os;
      os << "t=(" << w[0] << "," << w[1] << ") s=(" << w[2] << "," << w[3]
         << "): lhs=" << pair.first << " rhs=" << pair.second;
      rep.mismatches.push_back(os.str());
    }
  }
  return rep;
}

}  // namespace qjet
