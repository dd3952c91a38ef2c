#include "qjet/rational.hpp"

namespace qjet {

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  v_.canonicalize();
}

Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("Rational::parse: empty string");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
      throw std::invalid_argument("Rational::parse: bad character in '" + s + "'");
  }
  mpq_class v;
  if (v.set_str(s, 10) != 0)
    throw std::invalid_argument("Rational::parse: cannot parse '" + s + "'");
  if (mpz_sgn(v.get_den().get_mpz_t()) == 0)
    throw std::invalid_argument("Rational::parse: zero denominator in '" + s + "'");
  v.canonicalize();
  return Rational(v);
}

Rational Rational::factorial(int n) {
  if (n < 0) throw std::invalid_argument("Rational::factorial: negative");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(mpq_class(f));
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
  return Rational(mpq_class(v_ / o.v_));
}

long Rational::to_long() const {
  if (v_.get_den() != 1) throw std::invalid_argument("Rational::to_long: not an integer");
  if (!v_.get_num().fits_slong_p()) throw std::invalid_argument("Rational::to_long: overflow");
  return v_.get_num().get_si();
}

}  // namespace qjet
