#include "qjet/simplicial.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace qjet {

namespace {

long ipow(int base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void fail(const std::string& what) { throw std::invalid_argument("simplicial: " + what); }

}  // namespace

void validate_simplicial(const TruncatedSimplicialSet& x) {
  if (x.m < 0) fail("negative truncation level");
  if (static_cast<int>(x.sizes.size()) != x.levels()) fail("levels 0..m+1 must be stored");
  if (static_cast<int>(x.face.size()) != x.levels()) fail("face table shape");
  if (static_cast<int>(x.degen.size()) != x.levels() - 1) fail("degeneracy table shape");
  for (int n = 1; n <= x.m + 1; ++n) {
    if (static_cast<int>(x.face[static_cast<size_t>(n)].size()) != n + 1)
      fail("level " + std::to_string(n) + " needs n+1 faces");
    for (int i = 0; i <= n; ++i) {
      const auto& f = x.face[static_cast<size_t>(n)][static_cast<size_t>(i)];
      if (static_cast<int>(f.size()) != x.sizes[static_cast<size_t>(n)]) fail("face map size");
      for (int v : f)
        if (v < 0 || v >= x.sizes[static_cast<size_t>(n - 1)]) fail("face out of range");
    }
  }
  for (int n = 0; n <= x.m; ++n) {
    if (static_cast<int>(x.degen[static_cast<size_t>(n)].size()) != n + 1)
      fail("level " + std::to_string(n) + " needs n+1 degeneracies");
    for (int i = 0; i <= n; ++i) {
      const auto& s = x.degen[static_cast<size_t>(n)][static_cast<size_t>(i)];
      if (static_cast<int>(s.size()) != x.sizes[static_cast<size_t>(n)]) fail("degeneracy size");
      for (int v : s)
        if (v < 0 || v >= x.sizes[static_cast<size_t>(n + 1)]) fail("degeneracy out of range");
    }
  }

  for (int n = 2; n <= x.m + 1; ++n)
    for (int j = 1; j <= n; ++j)
      for (int i = 0; i < j; ++i)
        for (int v = 0; v < x.sizes[static_cast<size_t>(n)]; ++v)
          if (x.d(n - 1, i, x.d(n, j, v)) != x.d(n - 1, j - 1, x.d(n, i, v)))
            fail("face identity d_i d_j at level " + std::to_string(n));
  for (int n = 0; n + 1 <= x.m; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= j; ++i)
        for (int v = 0; v < x.sizes[static_cast<size_t>(n)]; ++v)
          if (x.s(n + 1, i, x.s(n, j, v)) != x.s(n + 1, j + 1, x.s(n, i, v)))
            fail("degeneracy identity s_i s_j at level " + std::to_string(n));
  for (int n = 0; n <= x.m; ++n)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n + 1; ++i)
        for (int v = 0; v < x.sizes[static_cast<size_t>(n)]; ++v) {
          int lhs = x.d(n + 1, i, x.s(n, j, v));
          int rhs = -1;
          if (i == j || i == j + 1)
            rhs = v;
          else if (i < j && n >= 1)
            rhs = x.s(n - 1, j - 1, x.d(n, i, v));
          else if (i > j + 1 && n >= 1)
            rhs = x.s(n - 1, j, x.d(n, i - 1, v));
          if (rhs >= 0 && lhs != rhs)
            fail("mixed identity d_i s_j at level " + std::to_string(n));
        }
}

TruncatedSimplicialSet nerve_group(const std::vector<std::vector<int>>& table) {
  int k = static_cast<int>(table.size());
  if (k == 0) fail("empty group table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != k) fail("group table must be square");
    for (int v : row)
      if (v < 0 || v >= k) fail("group table entry out of range");
  }
  auto mul = [&](int a, int b) { return table[static_cast<size_t>(a)][static_cast<size_t>(b)]; };
  for (int g = 0; g < k; ++g)
    if (mul(0, g) != g || mul(g, 0) != g) fail("element 0 must be the identity");
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) fail("group table is not associative");
  for (int a = 0; a < k; ++a) {
    bool has_inverse = false;
    for (int b = 0; b < k; ++b) has_inverse = has_inverse || (mul(a, b) == 0 && mul(b, a) == 0);
    if (!has_inverse) fail("group table has no inverse for an element");
  }

  TruncatedSimplicialSet x;
  x.m = 2;
  x.sizes = {1, k, k * k, k * k * k};
  x.face.resize(4);
  x.degen.resize(3);
  x.labels.resize(4);

  auto tuple_of = [&](int n, long idx) {
    std::vector<int> t(static_cast<size_t>(n));
    for (int i = n - 1; i >= 0; --i) {
      t[static_cast<size_t>(i)] = static_cast<int>(idx % k);
      idx /= k;
    }
    return t;
  };
  auto index_of = [&](const std::vector<int>& t) {
    long idx = 0;
    for (int v : t) idx = idx * k + v;
    return idx;
  };

  for (int n = 1; n <= 3; ++n) {
    x.face[static_cast<size_t>(n)].assign(static_cast<size_t>(n + 1),
                                          std::vector<int>(static_cast<size_t>(ipow(k, n)), 0));
    for (long v = 0; v < ipow(k, n); ++v) {
      std::vector<int> t = tuple_of(n, v);
      for (int i = 0; i <= n; ++i) {
        std::vector<int> ft;
        if (i == 0) {
          ft.assign(t.begin() + 1, t.end());
        } else if (i == n) {
          ft.assign(t.begin(), t.end() - 1);
        } else {
          ft = t;
          ft[static_cast<size_t>(i - 1)] =
              mul(t[static_cast<size_t>(i - 1)], t[static_cast<size_t>(i)]);
          ft.erase(ft.begin() + i);
        }
        x.face[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(v)] =
            static_cast<int>(index_of(ft));
      }
    }
  }
  for (int n = 0; n <= 2; ++n) {
    x.degen[static_cast<size_t>(n)].assign(static_cast<size_t>(n + 1),
                                           std::vector<int>(static_cast<size_t>(ipow(k, n)), 0));
    for (long v = 0; v < ipow(k, n); ++v) {
      std::vector<int> t = tuple_of(n, v);
      for (int i = 0; i <= n; ++i) {
        std::vector<int> st = t;
        st.insert(st.begin() + i, 0);
        x.degen[static_cast<size_t>(n)][static_cast<size_t>(i)][static_cast<size_t>(v)] =
            static_cast<int>(index_of(st));
      }
    }
  }
  for (int n = 0; n <= 3; ++n) {
    for (long v = 0; v < ipow(k, n); ++v) {
      std::string l = "(";
      std::vector<int> t = tuple_of(n, v);
      for (size_t i = 0; i < t.size(); ++i) l += (i ? "," : "") + std::to_string(t[i]);
      x.labels[static_cast<size_t>(n)].push_back(l + ")");
    }
  }
  validate_simplicial(x);
  return x;
}

namespace {

/// Builder for complexes whose n-simplices are integer tuples with faces
/// omitting and degeneracies repeating an entry.
TruncatedSimplicialSet tuple_complex(int m,
                                     const std::vector<std::vector<std::vector<int>>>& tuples) {
  TruncatedSimplicialSet x;
  x.m = m;
  x.face.resize(static_cast<size_t>(m + 2));
  x.degen.resize(static_cast<size_t>(m + 1));
  x.labels.resize(static_cast<size_t>(m + 2));
  std::vector<std::map<std::vector<int>, int>> index(static_cast<size_t>(m + 2));
  for (int n = 0; n <= m + 1; ++n) {
    x.sizes.push_back(static_cast<int>(tuples[static_cast<size_t>(n)].size()));
    for (size_t i = 0; i < tuples[static_cast<size_t>(n)].size(); ++i) {
      index[static_cast<size_t>(n)].emplace(tuples[static_cast<size_t>(n)][i],
                                            static_cast<int>(i));
      std::string l = "(";
      for (size_t j = 0; j < tuples[static_cast<size_t>(n)][i].size(); ++j)
        l += (j ? "," : "") + std::to_string(tuples[static_cast<size_t>(n)][i][j]);
      x.labels[static_cast<size_t>(n)].push_back(l + ")");
    }
  }
  for (int n = 1; n <= m + 1; ++n) {
    x.face[static_cast<size_t>(n)].assign(
        static_cast<size_t>(n + 1),
        std::vector<int>(tuples[static_cast<size_t>(n)].size(), 0));
    for (size_t v = 0; v < tuples[static_cast<size_t>(n)].size(); ++v)
      for (int i = 0; i <= n; ++i) {
        std::vector<int> t = tuples[static_cast<size_t>(n)][v];
        t.erase(t.begin() + i);
        x.face[static_cast<size_t>(n)][static_cast<size_t>(i)][v] =
            index[static_cast<size_t>(n - 1)].at(t);
      }
  }
  for (int n = 0; n <= m; ++n) {
    x.degen[static_cast<size_t>(n)].assign(
        static_cast<size_t>(n + 1),
        std::vector<int>(tuples[static_cast<size_t>(n)].size(), 0));
    for (size_t v = 0; v < tuples[static_cast<size_t>(n)].size(); ++v)
      for (int i = 0; i <= n; ++i) {
        std::vector<int> t = tuples[static_cast<size_t>(n)][v];
        t.insert(t.begin() + i, t[static_cast<size_t>(i)]);
        x.degen[static_cast<size_t>(n)][static_cast<size_t>(i)][v] =
            index[static_cast<size_t>(n + 1)].at(t);
      }
  }
  validate_simplicial(x);
  return x;
}

}  // namespace

TruncatedSimplicialSet simplex_complex(int top_vertex, int m) {
  if (top_vertex < 0) fail("simplex needs at least one vertex");
  std::vector<std::vector<std::vector<int>>> tuples(static_cast<size_t>(m + 2));
  for (int n = 0; n <= m + 1; ++n) {
    std::vector<int> t(static_cast<size_t>(n + 1), 0);
    while (true) {
      tuples[static_cast<size_t>(n)].push_back(t);
      int i = n;
      while (i >= 0 && t[static_cast<size_t>(i)] == top_vertex) --i;
      if (i < 0) break;
      ++t[static_cast<size_t>(i)];
      for (int j = i + 1; j <= n; ++j) t[static_cast<size_t>(j)] = t[static_cast<size_t>(i)];
    }
  }
  return tuple_complex(m, tuples);
}

TruncatedSimplicialSet discrete_complex(int points, int m) {
  if (points <= 0) fail("discrete complex needs points");
  std::vector<std::vector<std::vector<int>>> tuples(static_cast<size_t>(m + 2));
  for (int n = 0; n <= m + 1; ++n)
    for (int p = 0; p < points; ++p)
      tuples[static_cast<size_t>(n)].push_back(std::vector<int>(static_cast<size_t>(n + 1), p));
  return tuple_complex(m, tuples);
}

TruncatedSimplicialSet pair_nerve(const PointedFiniteSet& s, int m) {
  if (s.size <= 0 || s.basepoint < 0 || s.basepoint >= s.size) fail("bad pointed set");
  std::vector<std::vector<std::vector<int>>> tuples(static_cast<size_t>(m + 2));
  for (int n = 0; n <= m + 1; ++n) {
    std::vector<int> t(static_cast<size_t>(n + 1), 0);
    while (true) {
      tuples[static_cast<size_t>(n)].push_back(t);
      int i = n;
      while (i >= 0 && t[static_cast<size_t>(i)] == s.size - 1) {
        t[static_cast<size_t>(i)] = 0;
        --i;
      }
      if (i < 0) break;
      ++t[static_cast<size_t>(i)];
    }
  }
  return tuple_complex(m, tuples);
}

long pair_index(const PointedFiniteSet& s, const std::vector<int>& tuple) {
  long idx = 0;
  for (int v : tuple) {
    if (v < 0 || v >= s.size) fail("tuple entry out of range");
    idx = idx * s.size + v;
  }
  return idx;
}

std::vector<int> pair_tuple(const PointedFiniteSet& s, int entries, long index) {
  std::vector<int> t(static_cast<size_t>(entries));
  for (int i = entries - 1; i >= 0; --i) {
    t[static_cast<size_t>(i)] = static_cast<int>(index % s.size);
    index /= s.size;
  }
  return t;
}

bool in_filtration(const PointedFiniteSet& s, int k, const std::vector<int>& tuple) {
  std::set<int> image(tuple.begin(), tuple.end());
  int sz = static_cast<int>(image.size());
  if (sz > k + 1) return false;
  if (sz == k + 1 && tuple.front() != s.basepoint) return false;
  return true;
}

std::vector<Horn> horn_set(const TruncatedSimplicialSet& x, int n, int k) {
  if (n < 1 || n > x.m + 1) fail("horn level out of stored range");
  if (k < 0 || k > n) fail("horn index out of range");
  std::vector<Horn> out;
  Horn h;
  h.n = n;
  h.k = k;
  h.faces.assign(static_cast<size_t>(n + 1), -1);
  auto compatible_so_far = [&](int j) {
    if (n - 1 < 1) return true;
    for (int i = 0; i < j; ++i) {
      if (i == k || h.faces[static_cast<size_t>(i)] < 0) continue;
      if (x.d(n - 1, i, h.faces[static_cast<size_t>(j)]) !=
          x.d(n - 1, j - 1, h.faces[static_cast<size_t>(i)]))
        return false;
    }
    return true;
  };
  auto rec = [&](auto&& self, int j) -> void {
    if (j > n) {
      out.push_back(h);
      return;
    }
    if (j == k) {
      self(self, j + 1);
      return;
    }
    for (int v = 0; v < x.sizes[static_cast<size_t>(n - 1)]; ++v) {
      h.faces[static_cast<size_t>(j)] = v;
      if (compatible_so_far(j)) self(self, j + 1);
    }
    h.faces[static_cast<size_t>(j)] = -1;
  };
  rec(rec, 0);
  return out;
}

std::vector<int> horn_fillers(const TruncatedSimplicialSet& x, const Horn& h) {
  std::vector<int> out;
  for (int v = 0; v < x.sizes[static_cast<size_t>(h.n)]; ++v) {
    bool ok = true;
    for (int i = 0; i <= h.n && ok; ++i) {
      if (i == h.k) continue;
      ok = x.d(h.n, i, v) == h.faces[static_cast<size_t>(i)];
    }
    if (ok) out.push_back(v);
  }
  return out;
}

KanReport is_kan(const TruncatedSimplicialSet& x) {
  for (int n = 1; n <= x.m + 1; ++n)
    for (int k = 0; k <= n; ++k)
      for (const Horn& h : horn_set(x, n, k))
        if (horn_fillers(x, h).empty()) {
          KanReport r;
          r.ok = false;
          r.n = n;
          r.k = k;
          r.witness = h;
          r.detail = "horn [" + std::to_string(n) + "," + std::to_string(k) + "] has no filler";
          return r;
        }
  return {};
}

KanReport is_truncated(const TruncatedSimplicialSet& x, int m) {
  if (m > x.m) fail("is_truncated: levels above the stored truncation are unavailable");
  for (int n = std::max(m, 1); n <= x.m + 1; ++n)
    for (int k = 0; k <= n; ++k)
      for (const Horn& h : horn_set(x, n, k)) {
        size_t fillers = horn_fillers(x, h).size();
        if (fillers != 1) {
          KanReport r;
          r.ok = false;
          r.n = n;
          r.k = k;
          r.witness = h;
          r.detail = "horn [" + std::to_string(n) + "," + std::to_string(k) + "] has " +
                     std::to_string(fillers) + " fillers";
          return r;
        }
      }
  return {};
}

namespace {

/// Forced value on a degenerate based tuple (*, s_1..s_len): locate the first
/// repeated consecutive pair (reading s_0 = *) and lift the previous-stage
/// value through the matching degeneracy.
int forced_degenerate_value(const PointedFiniteSet& s, const TruncatedSimplicialSet& x,
                            const std::vector<int>& prev, const std::vector<int>& tuple) {
  int len = static_cast<int>(tuple.size());
  int prev_entry = s.basepoint;
  for (int i = 0; i < len; ++i) {
    if (tuple[static_cast<size_t>(i)] == prev_entry) {
      std::vector<int> reduced = tuple;
      reduced.erase(reduced.begin() + i);
      long idx = pair_index(s, reduced);
      return x.s(len - 1, i, prev[static_cast<size_t>(idx)]);
    }
    prev_entry = tuple[static_cast<size_t>(i)];
  }
  return -1;
}

}  // namespace

GChain g_chain(const PointedFiniteSet& s, const TruncatedSimplicialSet& x, int m,
               int top_stage) {
  if (m != x.m) fail("g_chain: truncation level must match the stored complex");
  if (top_stage < 0) top_stage = m;
  if (top_stage > m + 1) fail("g_chain: stages beyond m+1 are not stored");
  {
    KanReport kan = is_kan(x);
    if (!kan.ok) fail("g_chain precondition: " + kan.detail);
    KanReport tr = is_truncated(x, m);
    if (!tr.ok) fail("g_chain precondition: " + tr.detail);
  }
  GChain chain;
  chain.levels.emplace_back();
  for (int v = 0; v < x.sizes[0]; ++v) chain.levels[0].push_back({v});

  for (int k = 0; k < top_stage; ++k) {
    std::vector<std::vector<int>> next;
    long count = ipow(s.size, k + 1);
    for (const std::vector<int>& g : chain.levels[static_cast<size_t>(k)]) {
      std::vector<std::vector<int>> options(static_cast<size_t>(count));
      for (long t = 0; t < count; ++t) {
        std::vector<int> tuple = pair_tuple(s, k + 1, t);
        int forced = forced_degenerate_value(s, x, g, tuple);
        if (forced >= 0) {
          options[static_cast<size_t>(t)] = {forced};
          continue;
        }
        Horn h;
        h.n = k + 1;
        h.k = 0;
        h.faces.assign(static_cast<size_t>(k + 2), -1);
        for (int i = 1; i <= k + 1; ++i) {
          std::vector<int> omitted = tuple;
          omitted.erase(omitted.begin() + (i - 1));
          h.faces[static_cast<size_t>(i)] = g[static_cast<size_t>(pair_index(s, omitted))];
        }
        options[static_cast<size_t>(t)] = horn_fillers(x, h);
        if (options[static_cast<size_t>(t)].empty())
          fail("g_chain: horn over a stage element has no filler (broken preconditions)");
      }
      std::vector<int> pick(static_cast<size_t>(count), 0);
      while (true) {
        std::vector<int> tilde(static_cast<size_t>(count));
        for (long t = 0; t < count; ++t)
          tilde[static_cast<size_t>(t)] =
              options[static_cast<size_t>(t)][static_cast<size_t>(pick[static_cast<size_t>(t)])];
        next.push_back(std::move(tilde));
        long t = count - 1;
        while (t >= 0 && pick[static_cast<size_t>(t)] + 1 ==
                             static_cast<int>(options[static_cast<size_t>(t)].size())) {
          pick[static_cast<size_t>(t)] = 0;
          --t;
        }
        if (t < 0) break;
        ++pick[static_cast<size_t>(t)];
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    chain.levels.push_back(std::move(next));
  }
  return chain;
}

std::vector<int> g_restrict(const PointedFiniteSet& s, const TruncatedSimplicialSet& x, int k,
                            const std::vector<int>& g_k1) {
  long count = ipow(s.size, k);
  std::vector<int> out(static_cast<size_t>(count));
  for (long t = 0; t < count; ++t) {
    std::vector<int> tuple = pair_tuple(s, k, t);
    int last = k >= 1 ? tuple.back() : s.basepoint;
    std::vector<int> extended = tuple;
    extended.push_back(last);
    out[static_cast<size_t>(t)] =
        x.d(k + 1, k + 1, g_k1[static_cast<size_t>(pair_index(s, extended))]);
  }
  return out;
}

std::vector<SimplicialMorphism> hom_enumerate(const PointedFiniteSet& s,
                                              const TruncatedSimplicialSet& x) {
  TruncatedSimplicialSet sn = pair_nerve(s, x.m);
  // degeneracy preimages: forced[n][v] = (i, w) with s_i(w) = v, or (-1,-1)
  std::vector<std::vector<std::pair<int, int>>> forced(static_cast<size_t>(x.m + 2));
  for (int n = 0; n <= x.m + 1; ++n)
    forced[static_cast<size_t>(n)].assign(static_cast<size_t>(sn.sizes[static_cast<size_t>(n)]),
                                          {-1, -1});
  for (int n = 0; n <= x.m; ++n)
    for (int i = 0; i <= n; ++i)
      for (int w = 0; w < sn.sizes[static_cast<size_t>(n)]; ++w) {
        auto& slot = forced[static_cast<size_t>(n + 1)][static_cast<size_t>(sn.s(n, i, w))];
        if (slot.first < 0) slot = {i, w};
      }

  std::vector<SimplicialMorphism> out;
  SimplicialMorphism phi(static_cast<size_t>(x.m + 2));
  for (int n = 0; n <= x.m + 1; ++n)
    phi[static_cast<size_t>(n)].assign(static_cast<size_t>(sn.sizes[static_cast<size_t>(n)]), -1);

  auto rec = [&](auto&& self, int n, int v) -> void {
    if (n > x.m + 1) {
      out.push_back(phi);
      return;
    }
    if (v == sn.sizes[static_cast<size_t>(n)]) {
      self(self, n + 1, 0);
      return;
    }
    std::vector<int> candidates;
    auto f = forced[static_cast<size_t>(n)][static_cast<size_t>(v)];
    if (f.first >= 0) {
      candidates = {x.s(n - 1, f.first, phi[static_cast<size_t>(n - 1)][static_cast<size_t>(f.second)])};
      // a forced candidate must still satisfy the face constraints
      for (int i = 0; i <= n; ++i)
        if (x.d(n, i, candidates[0]) !=
            phi[static_cast<size_t>(n - 1)][static_cast<size_t>(sn.d(n, i, v))]) {
          candidates.clear();
          break;
        }
    } else {
      for (int c = 0; c < x.sizes[static_cast<size_t>(n)]; ++c) {
        bool ok = true;
        if (n >= 1)
          for (int i = 0; i <= n && ok; ++i)
            ok = x.d(n, i, c) == phi[static_cast<size_t>(n - 1)][static_cast<size_t>(sn.d(n, i, v))];
        if (ok) candidates.push_back(c);
      }
    }
    for (int c : candidates) {
      phi[static_cast<size_t>(n)][static_cast<size_t>(v)] = c;
      self(self, n, v + 1);
    }
    phi[static_cast<size_t>(n)][static_cast<size_t>(v)] = -1;
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> chain_restriction(const PointedFiniteSet& s, const SimplicialMorphism& phi,
                                   int k) {
  long count = ipow(s.size, k);
  std::vector<int> out(static_cast<size_t>(count));
  for (long t = 0; t < count; ++t) {
    std::vector<int> tuple = pair_tuple(s, k, t);
    std::vector<int> based;
    based.push_back(s.basepoint);
    for (int v : tuple) based.push_back(v);
    out[static_cast<size_t>(t)] =
        phi[static_cast<size_t>(k)][static_cast<size_t>(pair_index(s, based))];
  }
  return out;
}

}  // namespace qjet
