#ifndef HILB_RATIONAL_HPP
#define HILB_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "hilb/error.hpp"

namespace hilb {

using Integer = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_int_backend<>,
    boost::multiprecision::et_off>;

/// Arbitrary-precision rational, always stored reduced with positive
/// denominator. All core arithmetic in this library is exact; doubles appear
/// only in the float oracle.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

/// Formats as "p" for integers and "p/q" otherwise (the wire format).
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p" or "p/q". Rejects empty strings and zero denominators.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) fail(errc::parse_error, "empty rational literal");
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(Integer(s));
    Integer num(s.substr(0, slash));
    Integer den(s.substr(slash + 1));
    if (den == 0) fail(errc::parse_error, "zero denominator in '" + s + "'");
    Rational r(num, den);
    return r;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(errc::parse_error, "bad rational literal '" + s + "'");
  }
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace hilb

#endif
