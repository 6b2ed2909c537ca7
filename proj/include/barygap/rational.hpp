#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>

namespace barygap {

using Rational = boost::multiprecision::mpq_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace barygap
