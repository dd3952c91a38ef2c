#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qjet/rational.hpp"

namespace qjet {

enum class Parity : unsigned char { Even = 0, Odd = 1 };

inline Parity flip(Parity p) { return p == Parity::Even ? Parity::Odd : Parity::Even; }
inline Parity parity_of(int n) { return (n % 2 == 0) ? Parity::Even : Parity::Odd; }
inline Parity operator^(Parity a, Parity b) {
  return static_cast<int>(a) == static_cast<int>(b) ? Parity::Even : Parity::Odd;
}

/// A generator of a free graded supercommutative algebra. Degree (Z-grading)
/// and parity (Z/2, controls commutation signs) are independent data.
struct GenSpec {
  std::string name;
  int degree = 0;
  Parity parity = Parity::Even;
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

/// Immutable generator context. Elements and derivations hold a pointer to
/// their algebra; two elements interoperate only if they share one.
class Algebra {
public:
  static AlgebraPtr make(std::vector<GenSpec> gens);

  int size() const { return static_cast<int>(gens_.size()); }
  const GenSpec& gen(int i) const { return gens_.at(static_cast<size_t>(i)); }
  const std::vector<GenSpec>& gens() const { return gens_; }

  /// Index of a named generator, or -1.
  int find(const std::string& name) const;
  /// Index of a named generator; throws if absent.
  int index_of(const std::string& name) const;

  /// New algebra with the given extra generators appended (indices of the
  /// existing generators are preserved).
  AlgebraPtr extended(std::vector<GenSpec> extra) const;

  /// True iff parity == degree mod 2 for every generator.
  bool parity_matches_degree() const;

private:
  Algebra() = default;
  std::vector<GenSpec> gens_;
  std::map<std::string, int> index_;
};

/// Canonical monomial: (generator index, exponent) pairs, strictly increasing
/// in the index, exponents >= 1, odd generators with exponent exactly 1.
/// The empty monomial is the unit.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(std::vector<std::pair<int, int>> entries) : entries_(std::move(entries)) {}

  const std::vector<std::pair<int, int>>& entries() const { return entries_; }
  bool is_unit() const { return entries_.empty(); }
  int degree(const Algebra& a) const;
  Parity parity(const Algebra& a) const;
  /// Total number of letters (sum of exponents).
  int length() const;
  int exponent_of(int gen) const;

  bool operator==(const Monomial& o) const { return entries_ == o.entries_; }
  bool operator<(const Monomial& o) const { return entries_ < o.entries_; }

  std::string str(const Algebra& a) const;

private:
  std::vector<std::pair<int, int>> entries_;
};

/// Finite Rational-linear combination of canonical monomials. The universal
/// value type of the library: immutable, exact, canonical (no zero terms).
class Element {
public:
  explicit Element(AlgebraPtr alg) : alg_(std::move(alg)) {}

  static Element zero(AlgebraPtr alg) { return Element(std::move(alg)); }
  static Element scalar(AlgebraPtr alg, const Rational& c);
  static Element generator(const AlgebraPtr& alg, int index);
  static Element generator(const AlgebraPtr& alg, const std::string& name);
  static Element monomial(AlgebraPtr alg, const Monomial& m, const Rational& c);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  Element operator-() const;
  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator*(const Element& o) const;
  Element operator*(const Rational& c) const;
  Element& operator+=(const Element& o) { return *this = *this + o; }

  Element pow(int k) const;

  /// Degree of a homogeneous nonzero element; nullopt if zero or mixed.
  std::optional<int> degree() const;
  /// Parity of a parity-homogeneous nonzero element; nullopt if zero or mixed.
  std::optional<Parity> parity() const;
  bool is_homogeneous(int deg) const;
  bool has_parity(Parity p) const;

  /// The degree-k homogeneous component.
  Element component(int deg) const;
  Rational constant_term() const;
  Rational coefficient(const Monomial& m) const;

  std::string str() const;

private:
  void add_term(const Monomial& m, const Rational& c);
  AlgebraPtr alg_;
  std::map<Monomial, Rational> terms_;
  friend class ElementBuilder;
};

/// Accumulator used by hot loops; collapses to a canonical Element.
class ElementBuilder {
public:
  explicit ElementBuilder(AlgebraPtr alg) : out_(std::move(alg)) {}
  void add(const Monomial& m, const Rational& c) { out_.add_term(m, c); }
  void add(const Element& e);
  void add_scaled(const Element& e, const Rational& c);
  Element take() { return std::move(out_); }

private:
  Element out_;
};

/// Product of two canonical monomials: {Koszul sign, merged monomial},
/// or nullopt when an odd generator repeats (then the product is zero).
std::optional<std::pair<int, Monomial>> monomial_mul(const Algebra& a, const Monomial& x,
                                                     const Monomial& y);

void require_same_algebra(const Element& a, const Element& b, const char* where);

/// Re-expresses e over target, matching generators by name (parities must
/// agree; degrees too unless check_degree is off); throws if a generator in
/// use is missing there.
Element transport(const Element& e, const AlgebraPtr& target, bool check_degree = true);

}  // namespace qjet
