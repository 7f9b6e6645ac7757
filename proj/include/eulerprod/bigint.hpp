// bigint.hpp
//
// Exact arbitrary-precision integer/rational carrier used by every symbolic
// kernel. Backed by boost::multiprecision (header-only cpp_int backend);
// cpp_rational keeps values in lowest terms with the sign on the numerator,
// which is exactly the canonical form the serializers rely on.

#ifndef EULERPROD_BIGINT_HPP
#define EULERPROD_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace eulerprod {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Raised on malformed user input (bad expressions, bad flags, bad configs).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a numeric self-check fails (zero-table count mismatch,
// integrality violation, unreachable accuracy).
class certification_error : public std::runtime_error {
 public:
  explicit certification_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline BigInt binomial(const BigInt& n, long k) {
  if (k < 0) return 0;
  BigInt r = 1;
  for (long i = 0; i < k; ++i) {
    r *= n - i;
    r /= i + 1;  // exact: product of i+1 consecutive integers
  }
  return r;
}

// Canonical "p/q" form, denominator always present.
inline std::string rat_to_string(const BigRat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline BigRat rat_from_string(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return BigRat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw validation_error("rational with zero denominator: " + s);
    return BigRat(num, den);
  } catch (const std::exception&) {
    throw validation_error("malformed rational: " + s);
  }
}

inline double rat_to_double(const BigRat& r) { return static_cast<double>(r); }

}  // namespace eulerprod

#endif  // EULERPROD_BIGINT_HPP
